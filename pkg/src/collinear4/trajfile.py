"""Reading and writing trajectory files and per-variable plot series.

The trajectory format is CSV with a fixed header. Numeric fields are
written with 17 significant digits so a re-parse recovers the exact
doubles; the velocity fields are left empty on collision rows, where the
Cartesian velocities are undefined.
"""

from __future__ import annotations

import csv
from pathlib import Path
from typing import List, Sequence, Tuple, Union

from .dynamics import ENERGY, gamma
from .integrator import Trajectory
from .model import COLLISION_TOL, RegularizedState

CSV_HEADER = ("s", "t", "Q1", "Q2", "P1", "P2", "x1", "x2", "v1", "v2", "gamma")

_SERIES_VARIABLES = ("Q1", "Q2", "P1", "P2")


def format_float(x: float) -> str:
    """Full round-trip decimal form (17 significant digits)."""
    return "%.17g" % x


def trajectory_row(st: RegularizedState, m: float, energy: float = ENERGY) -> Tuple[str, ...]:
    """One CSV row for a sample; v-fields empty at collisions."""
    x1 = st.Q1 * st.Q1 + 0.5 * st.Q2 * st.Q2
    x2 = 0.5 * st.Q2 * st.Q2
    collision = min(abs(st.Q1), abs(st.Q2)) <= COLLISION_TOL
    if collision:
        v1_s = v2_s = ""
    else:
        p1 = st.P1 / (2.0 * st.Q1)
        p2 = st.P2 / (2.0 * st.Q2)
        v1_s = format_float(0.5 * p1)
        v2_s = format_float((2.0 * p2 - p1) / (2.0 * m))
    return (
        format_float(st.s),
        format_float(st.t),
        format_float(st.Q1),
        format_float(st.Q2),
        format_float(st.P1),
        format_float(st.P2),
        format_float(x1),
        format_float(x2),
        v1_s,
        v2_s,
        format_float(gamma(st, m, E=energy)),
    )


def write_trajectory_csv(path: Union[str, Path], traj: Trajectory, m: float) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for st in traj.samples:
            writer.writerow(trajectory_row(st, m, traj.energy))
    return path


def read_trajectory_csv(
    path: Union[str, Path], m: float, energy: float = ENERGY
) -> Trajectory:
    """Parse a trajectory CSV back into an event-free Trajectory.

    The stored (Q, P) columns fully determine the state; derived columns
    (x, v, gamma) are ignored on read. The mass ratio is not stored in the
    file and must be supplied.
    """
    path = Path(path)
    samples: List[RegularizedState] = []
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        header = tuple(next(reader, ()))
        if header != CSV_HEADER:
            raise ValueError(
                f"{path}: unexpected trajectory header {header!r}; "
                f"expected {CSV_HEADER!r}"
            )
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(CSV_HEADER):
                raise ValueError(f"{path}:{lineno}: expected {len(CSV_HEADER)} fields")
            s, t, q1, q2, p1, p2 = (float(v) for v in row[:6])
            samples.append(RegularizedState(Q1=q1, Q2=q2, P1=p1, P2=p2, t=t, s=s))
    if not samples:
        raise ValueError(f"{path}: no samples")
    return Trajectory(samples=tuple(samples), events=(), m=m, energy=energy)


def write_series(directory: Union[str, Path], traj: Trajectory) -> List[Path]:
    """Two-column (s, value) CSV per state variable, for external plotting."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written: List[Path] = []
    for name in _SERIES_VARIABLES:
        path = directory / f"{name}.csv"
        with path.open("w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(("s", "value"))
            for st in traj.samples:
                writer.writerow((format_float(st.s), format_float(getattr(st, name))))
        written.append(path)
    return written


def max_spacing(samples: Sequence[RegularizedState]) -> float:
    """Largest s-gap between consecutive samples (0 for < 2 samples)."""
    if len(samples) < 2:
        return 0.0
    return max(b.s - a.s for a, b in zip(samples, samples[1:]))
