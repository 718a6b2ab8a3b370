import csv
import io
import math

import numpy as np
import pytest

import islandap


def test_grid_spacing():
    assert islandap.grid_spacing(1.0, 0.5, 64, 32) == (1.0 / 64, 0.5 / 32)
    with pytest.raises(islandap.IslandapError):
        islandap.grid_spacing(1.0, 0.5, 0, 32)


def test_circle_trace_closes_on_start():
    line = islandap.trace(islandap.example1(), 1e-6, 32, 32, (-0.25, 0.0))
    assert line["closed"]
    assert line["length"] == pytest.approx(math.pi / 2, abs=1e-4)
    pts = line["points"]
    assert pts.shape[1] == 2
    assert tuple(pts[0]) == (-0.25, 0.0)
    assert tuple(pts[-1]) == (-0.25, 0.0)


def test_open_trace():
    line = islandap.trace(islandap.example1(), 1e-6, 16, 16, (0.45, 0.45))
    assert not line["closed"]


def test_solve_shapes_and_accuracy():
    out = islandap.solve(islandap.example1(0.5, 0.85, math.pi / 4), 1e-9, 16, 16)
    assert out["u"].shape == (33, 33)
    assert out["x"][0, 0] == -0.5 and out["y"][0, 0] == -0.5
    assert out["constraint_rows"] > 0
    assert np.max(np.abs(out["u"] - out["exact"])) == pytest.approx(out["linf"])
    assert out["linf"] < 1e-2
    assert out["backward_error"] < 1e-12


def test_baseline_and_bad_arguments():
    out = islandap.solve(islandap.example1(), 1e-2, 8, 8, scheme="baseline")
    assert out["constraint_rows"] == 0
    with pytest.raises(islandap.IslandapError):
        islandap.solve(islandap.example1(), 1e-2, 8, 8, scheme="upwind")
    with pytest.raises(islandap.IslandapError):
        islandap.example1(gamma1=-1.0)


def test_convergence_csv():
    text = islandap.convergence_csv(islandap.example1(), [1e-3, 1e-9], [(8, 8), (16, 16)])
    rows = list(csv.DictReader(io.StringIO(text)))
    assert len(rows) == 4
    assert rows[0]["eoc_linf"] == ""
    assert float(rows[1]["eoc_linf"]) > 1.5
    assert rows[3]["eps"] == "1e-09"


def test_example2_solve():
    out = islandap.solve(islandap.example2(0.1), 1e-6, 16, 8)
    assert out["u"].shape == (17, 33)
    assert out["linf"] < 0.1
