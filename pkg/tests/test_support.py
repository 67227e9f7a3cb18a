import json
import math
import re

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from starqc.errors import ContractViolation, UnsupportedDimensionError
from starqc.func_zoo import make_abs, make_quadratic
from starqc.reports import CheckReport, atomic_write_text, dumps, slack
from starqc.sampling import BOUNDARY_EVERY, SamplePlan
from starqc.svg import radial_profile, sublevel_svg


# --- sampling


@given(seed=st.integers(0, 2**63 - 1), n=st.integers(1, 300), extra=st.integers(0, 300))
def test_stream_prefix_stable(seed, n, extra):
    box = ((-2.0, -1.0), (3.0, 1.0))
    a = SamplePlan(seed, n, box).points()
    b = SamplePlan(seed, n + extra, box).points()
    assert np.array_equal(a, b[:n])


@given(seed=st.integers(0, 1000))
def test_stream_inside_box_with_face_points(seed):
    lo, hi = np.array([-2.0, -1.0, 0.0]), np.array([3.0, 1.0, 4.0])
    P = SamplePlan(seed, 200, (tuple(lo), tuple(hi))).points()
    assert np.all(P >= lo) and np.all(P <= hi)
    near = P[BOUNDARY_EVERY - 1 :: BOUNDARY_EVERY]
    gap = np.minimum(near - lo, hi - near) / (hi - lo)
    assert np.all(gap.min(axis=1) <= 0.02 + 1e-12)


def test_lambda_grid():
    lam = SamplePlan(n_lambdas=3).lambdas()
    assert lam.tolist() == [0.0, 0.25, 0.5, 0.75, 1.0]
    assert SamplePlan(n_lambdas=3).lambdas(interior_only=True).tolist() == [0.25, 0.5, 0.75]


def test_plan_contracts():
    with pytest.raises(ContractViolation):
        SamplePlan(n_points=0)
    with pytest.raises(ContractViolation):
        SamplePlan(box=((1.0,), (0.0,)))


# --- reports


def test_slack():
    assert slack(0.0) == 1e-9
    assert slack(-1e3) == pytest.approx(1e-9 * 1001)


def test_report_json_roundtrip():
    rep = CheckReport("x", False, -np.float64(0.5), 3, {"y": np.array([1.0, 2.0])}, 7, extra={"g": math.inf})
    d = json.loads(rep.to_json())
    assert d["witness"]["y"] == [1.0, 2.0]
    assert d["extra"]["g"] is None
    assert rep.violation == 0.5


def test_dumps_stable():
    a = dumps({"b": np.float64(0.1), "a": [np.int64(1), np.bool_(True)]})
    assert a == dumps({"a": [1, True], "b": 0.1})


def test_atomic_write(tmp_path):
    p = tmp_path / "sub" / "f.txt"
    atomic_write_text(p, "one\n")
    atomic_write_text(p, "two\n")
    assert p.read_text() == "two\n"
    assert [q.name for q in p.parent.iterdir()] == ["f.txt"]


# --- svg


def test_quadratic_circle():
    _, r = radial_profile(make_quadratic(2, 2), 1.0)
    assert np.max(np.abs(r - 1.0)) <= 1e-9


def test_clover_four_lobes(clover):
    for delta in (2.0, 5.0):
        _, r = radial_profile(clover, delta)
        peaks = (r > np.roll(r, 1)) & (r > np.roll(r, -1))
        assert int(peaks.sum()) == 4


def test_example312_paths_closed(ex312):
    svg = sublevel_svg(ex312, [2.0, 5.0])
    polys = re.findall(r'points="([^"]+)"', svg)
    assert len(polys) == 2
    for text in polys:
        P = np.array([[float(v) for v in xy.split(",")] for xy in text.split()])
        # one radius per angle: polar angles strictly increase around the loop
        th = np.unwrap(np.arctan2(P[:, 1], P[:, 0]))
        assert np.all(np.diff(th) > 0)


def test_plot_rejects_dimension():
    with pytest.raises(UnsupportedDimensionError):
        sublevel_svg(make_abs(), [1.0])


def test_svg_deterministic(clover):
    assert sublevel_svg(clover, [2.0]) == sublevel_svg(clover, [2.0])
