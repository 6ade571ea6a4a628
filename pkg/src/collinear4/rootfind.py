"""Safeguarded bracketed scalar root finding.

Bisection/secant hybrid: a secant step is taken when it lands strictly inside
the current bracket, with a forced bisection after every two consecutive
secant steps so the bracket provably halves at least every third iteration.
Used by the turning-point quartic solver and the shooting loop, both of which
need a recorded evaluation trace and a combined |f|-or-width stopping rule.
"""

from __future__ import annotations

from typing import Callable, List, Optional, Tuple

from .errors import NoConvergence, NoSignChange


def bracketed_root(
    f: Callable[[float], float],
    a: float,
    b: float,
    fa: Optional[float] = None,
    fb: Optional[float] = None,
    xtol: float = 1e-12,
    ftol: float = 0.0,
    max_iter: int = 200,
    trace: Optional[List[Tuple[float, float]]] = None,
) -> Tuple[float, float]:
    """Find x in [a, b] with f(x) = 0, given a sign change over the bracket.

    Stops when |f| <= ftol or the bracket width falls to xtol, returning the
    iterate with the smallest |f| seen. Every evaluation (x, f(x)) is
    appended to `trace` when one is supplied.

    Raises NoSignChange if f(a) and f(b) have the same (nonzero) sign and
    NoConvergence if max_iter iterations pass without meeting a tolerance.
    """
    if fa is None:
        fa = f(a)
        if trace is not None:
            trace.append((a, fa))
    if fb is None:
        fb = f(b)
        if trace is not None:
            trace.append((b, fb))
    if fa == 0.0:
        return a, fa
    if fb == 0.0:
        return b, fb
    if (fa > 0.0) == (fb > 0.0):
        raise NoSignChange(f"f({a}) = {fa} and f({b}) = {fb} do not bracket a root")

    best_x, best_f = (a, fa) if abs(fa) < abs(fb) else (b, fb)
    x_prev, f_prev = a, fa
    x_cur, f_cur = b, fb
    secant_streak = 0
    for _ in range(max_iter):
        if abs(best_f) <= ftol or (b - a) <= xtol:
            return best_x, best_f
        x_next = None
        if secant_streak < 2 and f_cur != f_prev:
            candidate = x_cur - f_cur * (x_cur - x_prev) / (f_cur - f_prev)
            if a < candidate < b:
                x_next = candidate
                secant_streak += 1
        if x_next is None:
            x_next = 0.5 * (a + b)
            secant_streak = 0
        f_next = f(x_next)
        if trace is not None:
            trace.append((x_next, f_next))
        if abs(f_next) < abs(best_f):
            best_x, best_f = x_next, f_next
        if f_next == 0.0:
            return x_next, f_next
        if (f_next > 0.0) == (fa > 0.0):
            a, fa = x_next, f_next
        else:
            b, fb = x_next, f_next
        x_prev, f_prev = x_cur, f_cur
        x_cur, f_cur = x_next, f_next
    raise NoConvergence(
        f"no root to tolerance after {max_iter} iterations; "
        f"bracket [{a}, {b}], best |f| = {abs(best_f)}"
    )


def expand_upward(
    f: Callable[[float], float],
    x0: float,
    factor: float,
    limit: float,
    target_sign: float,
    trace: Optional[List[Tuple[float, float]]] = None,
) -> Tuple[float, float]:
    """Grow x geometrically from x0 until f(x) has the requested sign.

    Returns the first (x, f(x)) whose sign matches target_sign (zero counts
    as a hit); raises NoSignChange if x exceeds `limit` first.
    """
    x = x0
    while x <= limit:
        fx = f(x)
        if trace is not None:
            trace.append((x, fx))
        if fx == 0.0 or (fx > 0.0) == (target_sign > 0.0):
            return x, fx
        x *= factor
    raise NoSignChange(f"no sign change found up to {limit}")
