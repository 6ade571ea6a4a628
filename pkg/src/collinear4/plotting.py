"""Figure rendering for trajectories and sweep catalogs.

Figures are written next to the delimited outputs they illustrate; all
rendering uses the non-interactive Agg backend so the CLI works headless.
matplotlib is imported lazily so `--no-plot` runs never pay for it.
"""

from __future__ import annotations

from pathlib import Path
from typing import List, Mapping, Sequence, Union

from .integrator import Trajectory
from .model import CollisionKind

_DPI = 150


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def plot_trajectory(traj: Trajectory, m: float, path: Union[str, Path]) -> Path:
    """Three-panel figure: Q(s), P(s), and Cartesian positions x(t).

    Collision events are marked with vertical lines (solid for SBC,
    dotted for BC).
    """
    plt = _pyplot()
    path = Path(path)
    s = [st.s for st in traj.samples]
    t = [st.t for st in traj.samples]

    fig, (ax_q, ax_p, ax_x) = plt.subplots(3, 1, figsize=(8.0, 9.0), sharex=False)
    ax_q.plot(s, [st.Q1 for st in traj.samples], label="Q1")
    ax_q.plot(s, [st.Q2 for st in traj.samples], label="Q2")
    ax_q.set_ylabel("Q")
    ax_p.plot(s, [st.P1 for st in traj.samples], label="P1")
    ax_p.plot(s, [st.P2 for st in traj.samples], label="P2")
    ax_p.set_ylabel("P")
    ax_p.set_xlabel("s")
    for ax in (ax_q, ax_p):
        for ev in traj.events:
            style = "-" if ev.kind is CollisionKind.SBC else ":"
            ax.axvline(ev.s, color="gray", linestyle=style, linewidth=0.8)
        ax.legend(loc="upper right", fontsize="small")
        ax.grid(True, alpha=0.3)

    ax_x.plot(t, [st.Q1 * st.Q1 + 0.5 * st.Q2 * st.Q2 for st in traj.samples], label="x1")
    ax_x.plot(t, [0.5 * st.Q2 * st.Q2 for st in traj.samples], label="x2")
    ax_x.set_xlabel("t")
    ax_x.set_ylabel("x")
    ax_x.legend(loc="upper right", fontsize="small")
    ax_x.grid(True, alpha=0.3)

    fig.suptitle(f"m = {m:g}")
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return path


def plot_catalog(records: Sequence[Mapping], path: Union[str, Path]) -> Path:
    """R* and physical period against the mass ratio, from ok records."""
    plt = _pyplot()
    path = Path(path)
    ok = [r for r in records if r.get("status") == "ok"]
    ms: List[float] = [r["m"] for r in ok]

    fig, (ax_r, ax_t) = plt.subplots(2, 1, figsize=(7.0, 7.0), sharex=True)
    ax_r.plot(ms, [r["R_star"] for r in ok], "o-")
    ax_r.set_ylabel("R*")
    ax_t.plot(ms, [r["period_t"] for r in ok], "s-")
    ax_t.set_ylabel("period (t)")
    ax_t.set_xlabel("m")
    for ax in (ax_r, ax_t):
        ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return path
