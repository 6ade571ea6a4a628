"""Trajectory CSV round trip and the plot-series export."""

from __future__ import annotations

import pytest

from collinear4 import (
    CollisionKind,
    StopCondition,
    bc_initial_state,
    integrate,
    read_trajectory_csv,
    write_trajectory_csv,
)
from collinear4.trajfile import CSV_HEADER, max_spacing, write_series


@pytest.fixture(scope="module")
def arc(default_cfg):
    start = bc_initial_state(2.295, 1.0)
    return integrate(start, 1.0, default_cfg, StopCondition.first(CollisionKind.SBC))


def test_round_trip_is_exact(tmp_path, arc):
    path = write_trajectory_csv(tmp_path / "arc.csv", arc, 1.0)
    back = read_trajectory_csv(path, 1.0)
    assert len(back.samples) == len(arc.samples)
    for a, b in zip(arc.samples, back.samples):
        assert a.astuple() == b.astuple()
        assert a.s == b.s


def test_header_and_collision_rows(tmp_path, arc):
    path = write_trajectory_csv(tmp_path / "arc.csv", arc, 1.0)
    lines = path.read_text().splitlines()
    assert lines[0] == ",".join(CSV_HEADER)
    first = lines[1].split(",")
    # the start is a binary collision (Q2 = 0): velocity fields stay empty
    assert (first[8], first[9]) == ("", "")
    # a mid-arc row carries all eleven fields
    mid = lines[len(lines) // 2].split(",")
    assert len(mid) == 11
    assert all(field for field in mid)


def test_rejects_foreign_header(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("a,b,c\n1,2,3\n")
    with pytest.raises(ValueError):
        read_trajectory_csv(path, 1.0)


def test_rejects_empty_file(tmp_path):
    path = tmp_path / "empty.csv"
    path.write_text(",".join(CSV_HEADER) + "\n")
    with pytest.raises(ValueError):
        read_trajectory_csv(path, 1.0)


def test_series_export(tmp_path, arc):
    written = write_series(tmp_path / "series", arc)
    assert sorted(p.name for p in written) == ["P1.csv", "P2.csv", "Q1.csv", "Q2.csv"]
    q1_lines = (tmp_path / "series" / "Q1.csv").read_text().splitlines()
    assert q1_lines[0] == "s,value"
    assert len(q1_lines) == 1 + len(arc.samples)
    assert float(q1_lines[1].split(",")[1]) == arc.samples[0].Q1


def test_max_spacing(arc):
    gap = max_spacing(arc.samples)
    assert gap > 0.0
    assert max_spacing(arc.samples[:1]) == 0.0
