"""Command-line interface.

Subcommands: ``simulate`` (one trajectory to CSV), ``find-orbit`` (solve the
shooting problem and write the full-period orbit), ``sweep`` (orbit family
over a mass-ratio grid, line-delimited catalog), ``bounds`` (monotonicity
threshold report), and ``verify`` (invariant suite over an orbit).

Report paths render matplotlib figures next to the delimited outputs;
``--no-plot`` disables that. Exit codes: 0 success, 1 arguments or I/O,
2 integration failure, 3 bracketing/convergence failure, 4 verification
failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Dict, List, NoReturn, Optional, Sequence

from . import __version__
from .bounds import a0_analytic_bound, numeric_a0, solve_turning_quartic
from .dynamics import bc_initial_state, gamma, sbc_p1_magnitude
from .errors import (
    BracketFailure,
    CheckpointMismatch,
    IntegrationError,
    NoConvergence,
    NoSafeArc,
    TotalCollapse,
)
from .integrator import IntegratorConfig, StopCondition, Trajectory, integrate
from .model import CollisionKind, validate_mass_ratio
from .shooting import PeriodicOrbit, ShootingResult, build_period, find_periodic_R
from .trajfile import (
    format_float,
    max_spacing,
    read_trajectory_csv,
    write_series,
    write_trajectory_csv,
)
from .verify import VerificationReport, build_report

EXIT_OK = 0
EXIT_ARGS = 1
EXIT_INTEGRATION = 2
EXIT_BRACKET = 3
EXIT_VERIFY = 4

# Resolution used when verify re-integrates a freshly solved orbit: the
# central-difference sum check needs spacing well under the default max_step.
_VERIFY_MAX_STEP = 1e-4
# Sample spacing the sum-identity threshold is calibrated to; thresholds for
# coarser files scale with (spacing / reference)**2 (second-order differences)
# times an allowance for the third-derivative magnitude on orbit-scale arcs,
# which exceeds the dense-grid calibration by roughly two orders.
_SUM_REF_SPACING = 1e-3
_SUM_ALLOWANCE = 100.0

_STOP_CHOICES = ("sbc", "bc", "horizon")


@dataclass(frozen=True)
class RunConfig:
    """Validated per-run settings shared by the subcommands."""

    m: float = 1.0
    R: Optional[float] = None
    rel_tol: float = 1e-10
    abs_tol: float = 1e-10
    max_step: float = 0.25
    event_tol: float = 1e-12
    horizon: float = 50.0
    as_json: bool = False
    no_plot: bool = False
    plot_data: Optional[Path] = None

    @classmethod
    def from_args(cls, ns: argparse.Namespace) -> "RunConfig":
        return cls(
            m=validate_mass_ratio(getattr(ns, "m", 1.0)),
            R=getattr(ns, "r", None),
            rel_tol=ns.rel_tol,
            abs_tol=ns.abs_tol,
            max_step=ns.max_step,
            event_tol=ns.event_tol,
            horizon=ns.horizon,
            as_json=getattr(ns, "json", False),
            no_plot=getattr(ns, "no_plot", False),
            plot_data=Path(ns.plot_data) if getattr(ns, "plot_data", None) else None,
        )

    def integrator(self) -> IntegratorConfig:
        return IntegratorConfig(
            rel_tol=self.rel_tol,
            abs_tol=self.abs_tol,
            initial_step=min(1e-3, 0.5 * self.max_step),
            max_step=self.max_step,
            s_horizon=self.horizon,
            event_tol_s=self.event_tol,
        )


class _ArgumentParser(argparse.ArgumentParser):
    """argparse exits with code 2 on bad arguments; this surface uses 1."""

    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        self.exit(EXIT_ARGS, f"{self.prog}: error: {message}\n")


def _emit(payload: Dict, lines: List[str], as_json: bool) -> None:
    if as_json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        for line in lines:
            print(line)


def _render_trajectory(traj: Trajectory, m: float, path: Path, no_plot: bool) -> Optional[str]:
    if no_plot:
        return None
    from .plotting import plot_trajectory

    return str(plot_trajectory(traj, m, path))


def _event_records(traj: Trajectory) -> List[Dict]:
    return [
        {"kind": ev.kind.name, "s": ev.s, "t": ev.state.t} for ev in traj.events
    ]


def cmd_simulate(ns: argparse.Namespace) -> int:
    cfg = RunConfig.from_args(ns)
    icfg = cfg.integrator()
    state = bc_initial_state(ns.r, cfg.m)
    if ns.stop == "sbc":
        stop = StopCondition.first(CollisionKind.SBC)
    elif ns.stop == "bc":
        stop = StopCondition.first(CollisionKind.BC)
    else:
        stop = StopCondition.horizon()
    traj = integrate(state, cfg.m, icfg, stop)

    out = Path(ns.out)
    write_trajectory_csv(out, traj, cfg.m)
    series = [str(p) for p in write_series(cfg.plot_data, traj)] if cfg.plot_data else []
    figure = _render_trajectory(traj, cfg.m, out.with_suffix(".png"), cfg.no_plot)

    events = _event_records(traj)
    first_sbc_ev = next((e for e in events if e["kind"] == "SBC"), None)
    max_gamma = max(abs(gamma(st, cfg.m, E=traj.energy)) for st in traj.samples)
    payload = {
        "command": "simulate",
        "m": cfg.m,
        "R": ns.r,
        "stop": ns.stop,
        "samples": len(traj.samples),
        "s_end": traj.end.s,
        "t_end": traj.end.t,
        "s1": first_sbc_ev["s"] if first_sbc_ev else None,
        "t1": first_sbc_ev["t"] if first_sbc_ev else None,
        "max_abs_gamma": max_gamma,
        "events": events,
        "csv": str(out),
        "figure": figure,
        "series": series,
    }
    lines = [
        f"simulate: m = {format_float(cfg.m)}, R = {format_float(ns.r)}, stop = {ns.stop}",
        f"  samples = {len(traj.samples)}, events = {len(events)}",
        f"  s_end = {format_float(traj.end.s)}, t_end = {format_float(traj.end.t)}",
    ]
    if first_sbc_ev:
        lines.append(
            f"  s1 = {format_float(first_sbc_ev['s'])}, t1 = {format_float(first_sbc_ev['t'])}"
        )
    lines.append(f"  max |gamma| = {format_float(max_gamma)}")
    lines.append(f"  wrote {out}")
    for p in series:
        lines.append(f"  wrote {p}")
    if figure:
        lines.append(f"  wrote {figure}")
    _emit(payload, lines, cfg.as_json)
    return EXIT_OK


def _orbit_payload(res: ShootingResult, orbit: PeriodicOrbit) -> Dict:
    return {
        "m": res.m,
        "R_star": res.R_star,
        "s1": res.s1,
        "t1": res.t1,
        "period_s": orbit.period_s,
        "period_t": orbit.period_t,
        "residual": res.residual,
        "sbc_p1": res.sbc_state.P1,
        "sbc_p1_abs": abs(res.sbc_state.P1),
        "sbc_p1_theory": sbc_p1_magnitude(res.m),
        "checkpoint_devs": list(orbit.checkpoint_deviations),
        "bracket_evals": len(res.bracket_trace),
    }


def cmd_find_orbit(ns: argparse.Namespace) -> int:
    cfg = RunConfig.from_args(ns)
    icfg = cfg.integrator()
    bracket = None
    if (ns.r_lo is None) != (ns.r_hi is None):
        raise ValueError("--r-lo and --r-hi must be given together")
    if ns.r_lo is not None:
        bracket = (ns.r_lo, ns.r_hi)
    res = find_periodic_R(cfg.m, icfg, r_tol=ns.r_tol, bracket=bracket)
    orbit = build_period(res, icfg)

    out_dir = Path(ns.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = write_trajectory_csv(out_dir / "orbit.csv", orbit.samples, cfg.m)
    payload = _orbit_payload(res, orbit)
    payload["command"] = "find-orbit"
    payload["csv"] = str(csv_path)
    json_path = out_dir / "orbit.json"
    json_path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    payload["json"] = str(json_path)
    series = [str(p) for p in write_series(cfg.plot_data, orbit.samples)] if cfg.plot_data else []
    payload["series"] = series
    figure = _render_trajectory(orbit.samples, cfg.m, out_dir / "orbit.png", cfg.no_plot)
    payload["figure"] = figure

    lines = [
        f"find-orbit: m = {format_float(cfg.m)}",
        f"  R* = {format_float(res.R_star)}  (residual P2(s1) = {format_float(res.residual)})",
        f"  s1 = {format_float(res.s1)}, t1 = {format_float(res.t1)}",
        f"  period: s = {format_float(orbit.period_s)}, t = {format_float(orbit.period_t)}",
        f"  |P1| at SBC = {format_float(abs(res.sbc_state.P1))}"
        f"  (theory {format_float(sbc_p1_magnitude(cfg.m))})",
        "  checkpoint deviations: "
        + ", ".join(format_float(d) for d in orbit.checkpoint_deviations),
        f"  wrote {csv_path}",
        f"  wrote {json_path}",
    ]
    for p in series:
        lines.append(f"  wrote {p}")
    if figure:
        lines.append(f"  wrote {figure}")
    _emit(payload, lines, cfg.as_json)
    return EXIT_OK


def _sweep_record(m: float, icfg: IntegratorConfig, r_tol: float) -> Dict:
    try:
        res = find_periodic_R(m, icfg, r_tol=r_tol)
        orbit = build_period(res, icfg)
        record = {"m": m, "status": "ok"}
        record.update(_orbit_payload(res, orbit))
        del record["checkpoint_devs"], record["bracket_evals"], record["sbc_p1"]
        record["a_root"] = solve_turning_quartic(m)
        record["a0_bound"] = a0_analytic_bound(m)
        return record
    except Exception as exc:  # per-m failures are recorded, not fatal
        return {"m": m, "status": "error", "error": f"{type(exc).__name__}: {exc}"}


def cmd_sweep(ns: argparse.Namespace) -> int:
    cfg = RunConfig.from_args(ns)
    icfg = cfg.integrator()
    grid: List[float] = []
    for part in ns.m_grid.split(","):
        part = part.strip()
        if part:
            grid.append(validate_mass_ratio(float(part)))
    if not grid:
        raise ValueError("--m-grid must contain at least one mass ratio")

    with ThreadPoolExecutor(max_workers=max(1, ns.jobs)) as pool:
        records = list(pool.map(lambda m: _sweep_record(m, icfg, ns.r_tol), grid))

    out = Path(ns.out)
    with out.open("w", newline="") as fh:
        for record in records:
            fh.write(json.dumps(record, sort_keys=True) + "\n")
    figure = None
    if not cfg.no_plot:
        from .plotting import plot_catalog

        figure = str(plot_catalog(records, out.with_suffix(".png")))

    n_ok = sum(1 for r in records if r["status"] == "ok")
    payload = {
        "command": "sweep",
        "grid": grid,
        "ok": n_ok,
        "failed": len(records) - n_ok,
        "catalog": str(out),
        "figure": figure,
        "records": records,
    }
    lines = [f"sweep: {len(grid)} mass ratios, {n_ok} ok, {len(records) - n_ok} failed"]
    for r in records:
        if r["status"] == "ok":
            lines.append(
                f"  m = {format_float(r['m'])}: R* = {format_float(r['R_star'])}, "
                f"period t = {format_float(r['period_t'])}"
            )
        else:
            lines.append(f"  m = {format_float(r['m'])}: FAILED ({r['error']})")
    lines.append(f"  wrote {out}")
    if figure:
        lines.append(f"  wrote {figure}")
    _emit(payload, lines, cfg.as_json)
    return EXIT_OK


def cmd_bounds(ns: argparse.Namespace) -> int:
    cfg = RunConfig.from_args(ns)
    a_root = solve_turning_quartic(cfg.m)
    bound = a0_analytic_bound(cfg.m)
    numeric = numeric_a0(cfg.m, cfg.integrator()) if ns.numeric else None
    payload = {
        "command": "bounds",
        "m": cfg.m,
        "a_root": a_root,
        "a0_analytic_bound": bound,
        "numeric_a0": numeric,
    }
    lines = [
        f"bounds: m = {format_float(cfg.m)}",
        f"  quartic root a = {format_float(a_root)}",
        f"  analytic monotonicity bound A0 >= {format_float(bound)}",
    ]
    if numeric is not None:
        lines.append(f"  numeric threshold A0 ~= {format_float(numeric)}")
    _emit(payload, lines, cfg.as_json)
    return EXIT_OK


def cmd_verify(ns: argparse.Namespace) -> int:
    cfg = RunConfig.from_args(ns)
    icfg = cfg.integrator()
    sum_threshold = ns.threshold_sum
    if ns.orbit_file:
        traj = read_trajectory_csv(ns.orbit_file, cfg.m)
        spacing = max_spacing(traj.samples)
        scale = max(1.0, _SUM_ALLOWANCE * (spacing / _SUM_REF_SPACING) ** 2)
        sum_threshold = ns.threshold_sum * scale
        source = str(ns.orbit_file)
    else:
        res = find_periodic_R(cfg.m, icfg, r_tol=ns.r_tol)
        dense = replace(icfg, max_step=min(icfg.max_step, _VERIFY_MAX_STEP))
        traj = integrate(
            bc_initial_state(res.R_star, cfg.m),
            cfg.m,
            dense,
            StopCondition.at_s(4.0 * res.s1),
        )
        source = f"freshly solved orbit (R* = {format_float(res.R_star)})"

    report = build_report(
        traj,
        cfg.m,
        icfg,
        gamma_threshold=ns.threshold_gamma,
        energy_threshold=ns.threshold_energy,
        sum_threshold=sum_threshold,
        crossval_threshold=ns.threshold_crossval,
    )
    payload = report.to_dict()
    payload["command"] = "verify"
    payload["m"] = cfg.m
    payload["source"] = source
    lines = [f"verify: m = {format_float(cfg.m)}, source = {source}"]
    for c in report.checks:
        status = "pass" if c.passed else "FAIL"
        lines.append(
            f"  [{status}] {c.name}: measured = {format_float(c.measured)}, "
            f"threshold = {format_float(c.threshold)}"
        )
    lines.append("  all checks passed" if report.passed else "  VERIFICATION FAILED")
    _emit(payload, lines, cfg.as_json)
    return EXIT_OK if report.passed else EXIT_VERIFY


def _add_integrator_options(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("integrator options")
    group.add_argument("--rel-tol", type=float, default=1e-10, help="relative step tolerance (default 1e-10)")
    group.add_argument("--abs-tol", type=float, default=1e-10, help="absolute step tolerance (default 1e-10)")
    group.add_argument("--max-step", type=float, default=0.25, help="max fictitious-time step (default 0.25)")
    group.add_argument("--event-tol", type=float, default=1e-12, help="event localization tolerance in s (default 1e-12)")
    group.add_argument("--horizon", type=float, default=50.0, help="fictitious-time horizon (default 50)")


def _add_output_options(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("output options")
    group.add_argument("--json", action="store_true", help="machine-readable summary on stdout")
    group.add_argument("--no-plot", action="store_true", help="skip figure rendering")
    group.add_argument("--plot-data", metavar="DIR", default=None, help="also write two-column (s, value) series per state variable into DIR")


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog="collinear4",
        description="Regularized simulator and periodic-orbit solver for the symmetric collinear four-body problem.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="subcommand", parser_class=_ArgumentParser)

    p = sub.add_parser("simulate", help="integrate one trajectory from a binary-collision start")
    p.add_argument("--m", type=float, default=1.0, help="mass ratio (default 1)")
    p.add_argument("--r", type=float, required=True, help="initial outer parameter R = Q1(0)")
    p.add_argument("--stop", choices=_STOP_CHOICES, default="sbc", help="stop at first SBC, first BC, or the horizon (default sbc)")
    p.add_argument("--out", default="trajectory.csv", help="trajectory CSV path (default trajectory.csv)")
    _add_integrator_options(p)
    _add_output_options(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("find-orbit", help="solve the shooting problem for the periodic orbit")
    p.add_argument("--m", type=float, default=1.0, help="mass ratio (default 1)")
    p.add_argument("--r-lo", type=float, default=None, help="manual bracket lower end")
    p.add_argument("--r-hi", type=float, default=None, help="manual bracket upper end")
    p.add_argument("--r-tol", type=float, default=1e-9, help="residual tolerance (default 1e-9)")
    p.add_argument("--out-dir", default=".", help="directory for orbit.csv / orbit.json / orbit.png")
    _add_integrator_options(p)
    _add_output_options(p)
    p.set_defaults(func=cmd_find_orbit)

    p = sub.add_parser("sweep", help="solve the orbit family over a mass-ratio grid")
    p.add_argument("--m-grid", required=True, help="comma-separated mass ratios, e.g. 0.5,1,2")
    p.add_argument("--jobs", type=int, default=1, help="worker threads (default 1)")
    p.add_argument("--r-tol", type=float, default=1e-9, help="residual tolerance (default 1e-9)")
    p.add_argument("--out", default="catalog.jsonl", help="line-delimited catalog path (default catalog.jsonl)")
    _add_integrator_options(p)
    _add_output_options(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("bounds", help="monotonicity threshold report")
    p.add_argument("--m", type=float, default=1.0, help="mass ratio (default 1)")
    p.add_argument("--numeric", action="store_true", help="also bisect the numeric threshold")
    _add_integrator_options(p)
    _add_output_options(p)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("verify", help="run the invariant suite over an orbit")
    p.add_argument("--m", type=float, default=1.0, help="mass ratio (default 1)")
    p.add_argument("--orbit-file", default=None, help="previously written trajectory CSV; omit to solve fresh")
    p.add_argument("--r-tol", type=float, default=1e-9, help="residual tolerance for the fresh solve (default 1e-9)")
    p.add_argument("--threshold-gamma", type=float, default=1e-8, help="max |Gamma| (default 1e-8)")
    p.add_argument("--threshold-energy", type=float, default=1e-7, help="max |H - E| away from collisions (default 1e-7)")
    p.add_argument("--threshold-sum", type=float, default=1e-5, help="sum-identity derivative deviation at reference spacing 1e-3 (default 1e-5)")
    p.add_argument("--threshold-crossval", type=float, default=1e-6, help="max Newtonian cross-validation deviation (default 1e-6)")
    _add_integrator_options(p)
    _add_output_options(p)
    p.set_defaults(func=cmd_verify)

    parser.set_defaults(func=None)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    if ns.func is None:
        parser.print_help(sys.stderr)
        return EXIT_ARGS
    try:
        return ns.func(ns)
    except (BracketFailure, NoConvergence, CheckpointMismatch) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BRACKET
    except (IntegrationError, TotalCollapse) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTEGRATION
    except NoSafeArc as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ARGS


if __name__ == "__main__":
    sys.exit(main())
