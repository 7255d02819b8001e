import math
from pathlib import Path

import numpy as np
import pytest

import flowmesher

DATA = Path(__file__).resolve().parents[2] / "data"


def test_regular_tet_quality():
    t = np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], dtype=float)
    assert flowmesher.tet_quality(t) == pytest.approx(1.0, abs=1e-12)


def test_controller():
    assert flowmesher.update_target_count(100, 0.10) == 105
    assert flowmesher.update_target_count(100, 0.90) == 125
    assert flowmesher.update_target_count(100, 0.02) == 100


def test_kernel_support():
    assert flowmesher.kernel(2.0, 1 / 6) == 0.0
    assert flowmesher.kernel(1.0, 1 / 6) == pytest.approx(1 / 6)


def test_delaunay_square():
    tri = flowmesher.delaunay(np.array([[0, 0], [1, 0], [1, 1], [0, 1]], dtype=float))
    assert tri.shape == (2, 3)


def test_rectangle_mesh(tmp_path):
    r = flowmesher.mesh(DATA / "rectangle.obj", h=10, output=tmp_path)
    n = len(r["nodes"])
    assert 63 <= n <= 85
    assert abs(r["e_avg"]) <= 0.02
    assert r["elements"].shape[1] == 3
    assert r["elements"].max() < n
    assert (tmp_path / "mesh.obj").exists()
    assert r["angles"].min() >= 25


def test_lshape_fixed_node_is_exact():
    r = flowmesher.mesh(DATA / "lshape.obj", h=10, fixed=[(10, -10, 0)], seed=3)
    assert any((row == [10, -10, 0]).all() for row in r["nodes"])


def test_same_seed_same_mesh():
    a = flowmesher.mesh(DATA / "rectangle.obj", h=10, seed=5)
    b = flowmesher.mesh(DATA / "rectangle.obj", h=10, seed=5)
    assert np.array_equal(a["nodes"], b["nodes"])
    assert np.array_equal(a["elements"], b["elements"])


def test_errors():
    with pytest.raises(FileNotFoundError):
        flowmesher.mesh(DATA / "missing.obj", h=10)
    with pytest.raises(flowmesher.Error):
        flowmesher.mesh(DATA / "rectangle.obj")  # no size field
    with pytest.raises(ValueError):
        flowmesher.tet_quality(np.zeros((3, 3)))
