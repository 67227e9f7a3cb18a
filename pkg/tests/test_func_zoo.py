import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from starqc.errors import ConstructionError, ContractViolation, DegenerateRayError, DomainError, UsageError
from starqc.func_zoo import (
    axis_restriction,
    eval,
    fd_grad,
    grad,
    make_abs,
    make_g1,
    make_quadratic,
    make_radial_product,
    make_twobasin,
    p_pseudonorm,
    resolve_function,
    restrict_to_ray,
    smooth_gradients,
)

E = math.e
# Frozen from an independent mpmath evaluation of the clover constants
CLOVER_ALPHA = 3.718281828459045
CLOVER_BETA = 2.655307228609009
CLOVER_P = 0.6730574240
CLOVER_M = 0.5049605797


def test_eval_quadratic_values():
    assert eval(make_quadratic(2, 1), [3.0]) == 9.0
    assert eval(make_quadratic(2, 2), [0.0, 0.0]) == 0.0
    assert eval(make_quadratic(4, 2), [1.0, 1.0]) == 4.0


def test_eval_dimension_mismatch():
    with pytest.raises(ContractViolation):
        eval(make_quadratic(2, 2), [1.0])


def test_quadratic_rejects_nonpositive_gamma():
    with pytest.raises(ContractViolation):
        make_quadratic(0.0, 1)


def test_quadratic_claims():
    f = make_quadratic(3, 2)
    assert f.modulus_claim == 3 and f.lipschitz_claim == 3
    assert f.min_value == 0.0 and np.all(f.minimizer == 0)


def test_grad_quadratic():
    assert np.allclose(grad(make_quadratic(2, 1), [3.0]), [6.0])
    assert np.allclose(grad(make_quadratic(2, 2), [1.0, 1.0]), [2.0, 2.0])


def test_clover_fd_step_consistency(clover):
    g6 = grad(clover, [0.5, 0.2], fd_step=1e-6)
    g5 = grad(clover, [0.5, 0.2], fd_step=1e-5)
    assert np.all(np.isfinite(g6))
    assert np.linalg.norm(g6 - g5) <= 1e-3 * np.linalg.norm(g5)


def test_fd_grad_matches_analytic(rng):
    f = make_quadratic(3, 3)
    X = rng.uniform(-2, 2, (20, 3))
    assert np.allclose(fd_grad(f, X), 3 * X, atol=1e-6)


def test_g1_values():
    g1 = make_g1()
    assert g1(0.0) == 0.0
    assert abs(g1(1.0) - E) <= 1e-9
    assert abs(g1(1.5) - E * (1 + (E - 1) * 0.5)) <= 1e-9
    assert abs(g1(1.5) - 5.0536) <= 1e-3


def test_g1_domain():
    with pytest.raises(DomainError):
        make_g1()(-0.1)


@pytest.mark.parametrize("n", range(1, 7))
def test_g1_continuity(n):
    g1 = make_g1()
    eps = 1e-8
    assert abs(g1(n - eps) - g1(n + eps)) < 1e-5 * max(1.0, math.exp(n))


def test_g1_nondecreasing():
    x = np.linspace(0, 7, 20001)
    assert np.all(np.diff(make_g1()(x)) >= 0)


def test_clover_constants(clover):
    md = clover.metadata
    assert abs(md["alpha"] - CLOVER_ALPHA) <= 1e-9
    assert abs(md["beta"] - CLOVER_BETA) <= 1e-9
    assert abs(md["p"] - CLOVER_P) <= 1e-6
    assert abs(md["m"] - CLOVER_M) <= 1e-6
    assert abs(2 * md["m"] - 1.010) <= 0.01


def test_clover_m_is_min_ratio(clover):
    th = 2 * np.pi * np.arange(100_000) / 100_000
    U = np.column_stack([np.cos(th), np.sin(th)])
    ratio = 1.0 / p_pseudonorm(U, clover.metadata["p"])
    assert abs(ratio.min() - clover.metadata["m"]) <= 1e-8


def test_clover_values(clover):
    assert clover([0.0, 0.0]) == 0.0
    assert abs(clover([1.0, 0.0]) - (1 + E)) <= 1e-4


def test_clover_positive_away_from_origin(clover, rng):
    X = rng.uniform(-3, 3, (5000, 2))
    X = X[np.linalg.norm(X, axis=1) > 0]
    assert np.all(clover.value(X) > 0)


def test_radial_product_examples():
    sq = lambda t: np.asarray(t) ** 2  # noqa: E731
    one = lambda U: np.ones(np.asarray(U).shape[:-1])  # noqa: E731
    assert abs(make_radial_product(sq, one, 2)([1.0, 1.0]) - 2.0) <= 1e-12
    two = lambda U: 2 * np.ones(np.asarray(U).shape[:-1])  # noqa: E731
    assert make_radial_product(sq, two, 2)([1.0, 0.0]) == 2.0


def test_radial_product_rejects_small_g():
    sq = lambda t: np.asarray(t) ** 2  # noqa: E731
    half = lambda U: 0.5 + np.abs(np.asarray(U)[..., 0])  # noqa: E731
    with pytest.raises(ConstructionError) as exc:
        make_radial_product(sq, half, 2)
    assert exc.value.witness is not None


def test_example312_basics(ex312):
    assert ex312([0.0, 0.0]) == 0.0
    fr = ex312.metadata["radial"]
    assert fr(1.0) == 1.0
    assert fr(2.0) == 2.0
    g = ex312.metadata["angular"]
    assert abs(ex312([2.0, 0.0]) - 2 * float(g(np.array([1.0, 0.0])))) <= 1e-12


@pytest.mark.parametrize("seed", range(6))
def test_example312_g_at_least_one(seed):
    f = resolve_function(f"example312:0.3:2:{seed}")
    th = 2 * np.pi * np.arange(10_000) / 10_000
    gv = f.metadata["angular"](np.column_stack([np.cos(th), np.sin(th)]))
    assert gv.min() >= 1.0 - 1e-9
    assert (f.metadata["g_shift"] > 0) == (f.metadata["g_min_raw"] < 1)


def test_example312_determinism():
    a = resolve_function("example312:0.3:2:7")
    b = resolve_function("example312:0.3:2:7")
    for key in "abcd":
        assert a.metadata[key] == b.metadata[key]
    assert a.metadata_json() == b.metadata_json()


def test_restrict_to_ray_quadratic(quad22):
    hy = restrict_to_ray(quad22, [0.0, 0.0], [3.0, 4.0])
    assert hy(5.0) == 25.0
    t = np.linspace(0, 5, 11)
    assert np.allclose(hy(t), t**2)


def test_restrict_to_ray_clover_closed_form(clover):
    y = np.array([1.0, 1.0])
    hy = restrict_to_ray(clover, [0.0, 0.0], y)
    t = np.linspace(0, math.sqrt(2), 100)
    coef = np.linalg.norm(y) / p_pseudonorm(y, clover.metadata["p"])
    h = t * t + make_g1()(t)
    assert np.max(np.abs(hy(t) - coef * h)) <= 1e-9
    assert restrict_to_ray(clover, [0.0, 0.0], [2.0, 0.0])(2.0) == clover([2.0, 0.0])


def test_restrict_to_ray_degenerate(clover):
    with pytest.raises(DegenerateRayError):
        restrict_to_ray(clover, [0.0, 0.0], [0.0, 0.0])


@pytest.mark.parametrize("fid", ["quadratic:2:2", "clover", "example312:0.3:2:0", "twobasin"])
@given(y=st.tuples(st.floats(-3, 3), st.floats(-3, 3)))
def test_ray_endpoints_match(fid, y):
    f = resolve_function(fid)
    y = np.array(y)
    if np.linalg.norm(y) == 0:
        return
    hy = restrict_to_ray(f, f.minimizer, y)
    assert abs(hy(np.linalg.norm(y)) - f(y)) <= 1e-12 * (1 + abs(f(y)))
    assert hy(0.0) == f(f.minimizer)


def test_smooth_filter_skips_kink():
    # the 10x step straddles the kink at 0, the default step does not
    f = make_abs()
    _, smooth = smooth_gradients(f, np.array([[5e-6], [1.0], [-2.0]]))
    assert list(smooth) == [False, True, True]


def test_axis_restriction(clover):
    fa = axis_restriction(clover, 0)
    assert fa.dim == 1
    assert fa([1.5]) == clover([1.5, 0.0])


def test_registry():
    assert resolve_function("quadratic:2:1").name == "quadratic:2:1"
    assert resolve_function("clover_axis").dim == 1
    assert resolve_function("twobasin").name == make_twobasin().name
    for bad in ("nope", "quadratic:x:1", "example312:0.3:2"):
        with pytest.raises(UsageError):
            resolve_function(bad)


def test_metadata_json_is_serializable(ex312):
    import json

    md = json.loads(ex312.metadata_json())
    assert md["metadata"]["seed"] == 0
    assert "radial" not in md["metadata"]
