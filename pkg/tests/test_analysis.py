import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from starqc.analysis import (
    check_along_rays,
    check_epigraph_star_shaped,
    check_first_order,
    check_nondecreasing_rays,
    check_pl,
    check_quadratic_growth,
    check_star_quasiconvex,
    check_stronger_property,
    check_sublevel_star_shaped,
    check_supercoercive,
    estimate_lipschitz_grad,
    estimate_modulus,
    find_quasar_violation,
    find_quasiconvexity_violation,
    modulus_profile,
)
from starqc.errors import ContractViolation, InsufficientSmoothSamplesError, PreconditionError
from starqc.func_zoo import (
    ObjectiveFunction,
    axis_restriction,
    make_abs,
    make_constant,
    make_quadratic,
    make_twobasin,
    resolve_function,
)
from starqc.sampling import SamplePlan, plan_for

SMOOTH = ["quadratic:2:1", "quadratic:3:2", "clover"]
CERTIFIED = SMOOTH + ["example312:0.3:2:0", "example312:0.3:2:1"]


def box_plan(dim, half, n=2000, seed=0):
    return SamplePlan(seed=seed, n_points=n, box=((-half,) * dim, (half,) * dim))


# --- check_star_quasiconvex


def test_star_qc_quadratic(quad21):
    plan = plan_for(quad21)
    rep = check_star_quasiconvex(quad21, 2.0, plan)
    assert rep.passed and rep.worst_residual >= 0
    assert not check_star_quasiconvex(quad21, 5.0, plan).passed


def test_star_qc_endpoints_exact(ex312):
    # lambda in {0, 1} leaves R = 0 exactly, so gamma = 0 has worst residual 0
    rep = check_star_quasiconvex(ex312, 0.0, plan_for(ex312, n_points=500))
    assert rep.worst_residual == 0.0


def test_star_qc_clover_at_2m(clover):
    assert check_star_quasiconvex(clover, 2 * clover.metadata["m"], plan_for(clover)).passed


def test_star_qc_negative_gamma(quad21):
    with pytest.raises(ContractViolation):
        check_star_quasiconvex(quad21, -1.0, plan_for(quad21))


def test_star_qc_needs_minimizer():
    f = ObjectiveFunction(dim=1, value_oracle=lambda X: X[..., 0] ** 2, eval_box=(np.array([-1.0]), np.array([1.0])))
    with pytest.raises(PreconditionError):
        check_star_quasiconvex(f, 0.0, plan_for(f))


def test_star_qc_twobasin_fails():
    f = make_twobasin()
    rep = check_star_quasiconvex(f, 0.0, plan_for(f))
    assert not rep.passed
    assert np.linalg.norm(np.asarray(rep.witness["y"]) - [3.0, 0.0]) < 1.5


# --- estimate_modulus


def test_estimate_quadratic():
    # sharp modulus of (g/2)x^2 under the defining inequality is 2g
    f = make_quadratic(2, 1)
    assert estimate_modulus(f, box_plan(1, 5.0)) == pytest.approx(4.0, abs=0.05)
    f = make_quadratic(4, 2)
    assert estimate_modulus(f, plan_for(f)) == pytest.approx(8.0, abs=0.1)


def test_estimate_clover_above_claim(clover):
    g = estimate_modulus(clover, plan_for(clover))
    assert g >= 2 * clover.metadata["m"] - 0.05


def test_estimate_example312_near_kink_value(ex312):
    # radial factor modulus is 2 alpha T^(alpha - 2) = 0.22383 at the kink T = 1.78582
    # (dense 1-D grid oracle); the angular factor scales it by g_min
    g = estimate_modulus(ex312, plan_for(ex312, n_points=10_000))
    true = 0.22383 * ex312.metadata["g_min_raw"]
    assert true <= g <= 1.06 * true


@given(seed=st.integers(0, 5), n=st.integers(50, 400), extra=st.integers(1, 400))
def test_estimate_antitone_in_sample_size(seed, n, extra):
    f = resolve_function(CERTIFIED[seed % len(CERTIFIED)])
    small = estimate_modulus(f, plan_for(f, seed, n))
    large = estimate_modulus(f, plan_for(f, seed, n + extra))
    assert large <= small


@given(fid=st.sampled_from(CERTIFIED), seed=st.integers(0, 2**32))
def test_checks_deterministic(fid, seed):
    f = resolve_function(fid)
    plan = plan_for(f, seed, 200)
    assert estimate_modulus(f, plan) == estimate_modulus(f, plan)
    a = check_star_quasiconvex(f, 0.5, plan).to_json()
    b = check_star_quasiconvex(f, 0.5, plan).to_json()
    assert a == b


# --- sublevel / rays


def test_sublevel_examples(quad22, clover):
    assert check_sublevel_star_shaped(quad22, [0.5, 1, 2], plan_for(quad22)).passed
    assert check_sublevel_star_shaped(clover, [2, 5], plan_for(clover)).passed
    f = make_twobasin()
    rep = check_sublevel_star_shaped(f, [0.6, 1.0, 2.0], plan_for(f))
    assert not rep.passed
    assert rep.witness["y"][0] > 1.5


def test_along_rays_examples(quad21, clover, ex312):
    assert check_along_rays(quad21, 2.0, None, plan_for(quad21)).passed
    assert check_along_rays(clover, 2 * clover.metadata["m"], None, plan_for(clover)).passed
    plan = plan_for(ex312)
    assert check_along_rays(ex312, estimate_modulus(ex312, plan), None, plan).passed


def test_nondecreasing_rays(quad22, clover):
    assert check_nondecreasing_rays(quad22).passed
    assert check_nondecreasing_rays(clover).passed
    rep = check_nondecreasing_rays(make_twobasin())
    assert not rep.passed


# --- stronger property, growth, first order


def test_stronger_arithmetic_oracle(quad21):
    # h(0.5) = 0.25 <= 1 - 0.5 * 0.75 = 0.625
    y, t, g = 1.0, 0.5, 2.0
    assert quad21(np.array([1.0]) * y) - (g / 4) * (1 - t * t) * y * y - quad21([t * y]) == pytest.approx(0.375)
    assert check_stronger_property(quad21, g, plan_for(quad21)).passed


def test_stronger_clover(clover):
    assert check_stronger_property(clover, 2 * clover.metadata["m"], plan_for(clover)).passed


def test_growth_examples(quad21, clover):
    rep = check_quadratic_growth(quad21, 2.0, plan_for(quad21))
    assert rep.passed and rep.worst_residual >= 0
    assert check_quadratic_growth(clover, 2 * clover.metadata["m"], plan_for(clover)).passed


def test_first_order_examples(quad21):
    plan = plan_for(quad21)
    assert check_first_order(quad21, 2.0, plan).passed
    assert not check_first_order(quad21, 5.0, plan).passed


def test_first_order_all_nonsmooth():
    f = ObjectiveFunction(
        dim=1,
        value_oracle=lambda X: np.abs(X[..., 0]) + 1e-4 * np.sin(1e9 * X[..., 0]),
        minimizer=np.zeros(1),
        min_value=0.0,
        eval_box=(np.array([-1.0]), np.array([1.0])),
    )
    with pytest.raises(InsufficientSmoothSamplesError):
        check_first_order(f, 0.0, plan_for(f, n_points=8))


# --- PL and Lipschitz


def test_pl_examples(quad21):
    plan = plan_for(quad21)
    rep = check_pl(quad21, plan)
    assert rep.passed and rep.extra["mu"] == 1.0
    assert not check_pl(quad21, plan, mu=10.0).passed


def test_pl_needs_lipschitz_when_estimation_off(clover):
    with pytest.raises(PreconditionError):
        check_pl(clover, plan_for(clover), estimate=False)


def test_lipschitz_estimates():
    f = make_quadratic(2, 1)
    assert estimate_lipschitz_grad(f, plan_for(f)) == pytest.approx(2.0, abs=0.01)
    f = make_quadratic(4, 2)
    assert estimate_lipschitz_grad(f, plan_for(f)) == pytest.approx(4.0, abs=0.02)
    f = make_constant(2)
    assert estimate_lipschitz_grad(f, box_plan(2, 3.0)) == 0.0


# --- supercoercivity


def test_supercoercive_quadratic(quad22):
    rep = check_supercoercive(quad22, [10.0, 20.0, 50.0])
    assert rep.passed and rep.extra["ratios"][-1] == pytest.approx(1.0)


def test_supercoercive_abs_vacuous():
    rep = check_supercoercive(make_abs(), [10.0, 20.0, 50.0])
    assert rep.passed
    assert any("modulus ~ 0" in n for n in rep.notes)
    assert rep.extra["ratios"][-1] == pytest.approx(1 / 50)


def test_supercoercive_example312(ex312):
    g = estimate_modulus(ex312, plan_for(ex312))
    rep = check_supercoercive(ex312, [10.0, 20.0, 50.0], gamma=g)
    assert rep.passed and rep.extra["ratios"][-1] >= g / 4


def test_supercoercive_radii_contract(quad22):
    with pytest.raises(ContractViolation):
        check_supercoercive(quad22, [5.0, 1.0])


# --- epigraph


def test_epigraph(quad22, clover):
    assert check_epigraph_star_shaped(quad22, plan_for(quad22)).passed
    assert not check_epigraph_star_shaped(clover, plan_for(clover)).passed


# --- witness searches


def test_quasiconvexity_witness(quad22, clover, ex312):
    assert find_quasiconvexity_violation(quad22, plan_for(quad22)).passed
    rep = find_quasiconvexity_violation(clover, plan_for(clover))
    assert not rep.passed and rep.witness["violation"] > 0.01
    w = rep.witness
    assert clover(w["mid"]) > max(clover(w["x"]), clover(w["y"]))
    assert not find_quasiconvexity_violation(ex312, plan_for(ex312)).passed


def test_quasar_examples(quad22, clover):
    assert find_quasar_violation(quad22, [1.0], plan_for(quad22)).passed
    assert find_quasar_violation(quad22, [0.5], plan_for(quad22)).passed
    fa = axis_restriction(clover, 0)
    rep = find_quasar_violation(fa, plan=plan_for(fa))
    assert not rep.passed
    assert all(v["violated"] for v in rep.extra["per_beta"].values())


def test_quasar_beta_range(quad22):
    with pytest.raises(ContractViolation):
        find_quasar_violation(quad22, [1.5], plan_for(quad22))


# --- equivalences on shared streams


@given(fid=st.sampled_from(CERTIFIED + ["twobasin"]), seed=st.integers(0, 1000))
def test_sublevel_consistency_at_zero(fid, seed):
    f = resolve_function(fid)
    plan = plan_for(f, seed, 300)
    a = check_star_quasiconvex(f, 0.0, plan).passed
    b = check_sublevel_star_shaped(f, None, plan).passed
    assert a == b


@given(fid=st.sampled_from(CERTIFIED), seed=st.integers(0, 1000), scale=st.floats(0.0, 3.0))
def test_rays_implied_by_definition(fid, seed, scale):
    f = resolve_function(fid)
    plan = plan_for(f, seed, 300)
    gamma = scale * estimate_modulus(f, plan)
    if check_star_quasiconvex(f, gamma, plan).passed:
        assert check_along_rays(f, gamma, None, plan).passed


@given(fid=st.sampled_from(CERTIFIED), seed=st.integers(0, 1000), scale=st.floats(0.0, 1.0))
def test_implication_chain(fid, seed, scale):
    # the chain is a limiting argument, so on finite samples it is asserted up to the estimate
    f = resolve_function(fid)
    plan = plan_for(f, seed, 300)
    gamma = scale * estimate_modulus(f, plan)
    assert check_star_quasiconvex(f, gamma, plan).passed
    assert check_stronger_property(f, gamma, plan).passed
    assert check_quadratic_growth(f, gamma, plan).passed


@given(fid=st.sampled_from(SMOOTH), seed=st.integers(0, 1000))
def test_first_order_consistency_at_estimate(fid, seed):
    f = resolve_function(fid)
    plan = plan_for(f, seed, 300)
    g = estimate_modulus(f, plan)
    assert check_star_quasiconvex(f, g, plan).passed
    assert check_first_order(f, g, plan).passed
    # well above the estimate both reject
    assert not check_star_quasiconvex(f, 2 * g + 1, plan).passed
    assert not check_first_order(f, 2 * g + 1, plan).passed


@given(fid=st.sampled_from(SMOOTH), seed=st.integers(0, 1000))
def test_pl_from_modulus_and_lipschitz(fid, seed):
    f = resolve_function(fid)
    if f.name == "clover":
        return  # gradient unbounded near the axes, no finite L
    plan = plan_for(f, seed, 300)
    g = estimate_modulus(f, plan)
    L = estimate_lipschitz_grad(f, plan)
    assert check_pl(f, plan, gamma=g, lipschitz=L).passed


def test_profile_keys(ex312):
    prof = modulus_profile(ex312, plan_for(ex312, n_points=500))
    assert set(prof) == {"star_quasiconvex", "stronger_property", "along_rays", "quadratic_growth", "first_order"}
    assert all(v > 0 for v in prof.values())
