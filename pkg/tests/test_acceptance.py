"""Acceptance gate: criteria 1-10 at their stated tolerances and time budgets.

Each criterion function returns (passed, detail, artifacts); artifacts are the
CSV/JSON texts a run produces, compared byte for byte by criterion 10.
"""

import time

import numpy as np
import pytest

from starqc.analysis import (
    characterization_suite,
    check_pl,
    check_quadratic_growth,
    check_star_quasiconvex,
    estimate_modulus,
    find_quasar_violation,
    find_quasiconvexity_violation,
)
from starqc.func_zoo import axis_restriction, make_clover, make_example312, make_quadratic
from starqc.prox import check_fixed_point, check_prox_inequality, sample_in_set
from starqc.reports import dumps
from starqc.sampling import SamplePlan, plan_for
from starqc.sets import ball, clover_set, whole_space
from starqc.solvers import SolverConfig, heavy_ball, nesterov, ppa, verify_linear_rate

SEED = 0
N_STREAM = 10_000


def criterion_1():
    worst_step, worst_rate, arts = 0.0, 0.0, {}
    for gamma in (1.0, 2.0, 4.0):
        f = make_quadratic(gamma, 1)
        for beta in (0.5, 1.0, 2.0):
            tr = ppa(f, None, [3.0], SolverConfig("ppa", beta=beta, max_iter=30))
            x = tr.iterates[:, 0]
            worst_step = max(worst_step, float(np.max(np.abs(x[1:] - x[:-1] / (1 + beta * gamma)))))
            rep = verify_linear_rate(tr, "dist", 1 / (1 + beta * gamma))
            worst_rate = max(worst_rate, abs(rep.empirical_rate - 1 / (1 + beta * gamma)))
            arts[f"c1_{gamma:g}_{beta:g}.csv"] = tr.to_csv()
    ok = worst_step <= 1e-12 and worst_rate <= 1e-10
    return ok, f"max step error {worst_step:.2e}, max rate error {worst_rate:.2e}", arts, 1.0


def criterion_2():
    f = make_example312(0.3, 2, SEED)
    K = clover_set(10.0)
    g = estimate_modulus(f, plan_for(f, SEED, N_STREAM))
    starts = sample_in_set(K, 20, np.random.default_rng([SEED, 2]))
    n_iter, n_bad, margin, arts = 0, 0, np.inf, {}
    for i, x0 in enumerate(starts):
        tr = ppa(f, K, x0, SolverConfig("ppa", beta=1.0, max_iter=100))
        d2 = tr.dist_to_min**2
        r = d2[:-1] / (1 + g) - d2[1:]
        n_iter += len(r)
        n_bad += int(np.sum(r < -1e-7))
        if len(r):
            margin = min(margin, float(r.min()))
        arts[f"c2_{i}.csv"] = tr.to_csv()
    ok = n_bad == 0 and n_iter > 0
    return ok, f"gamma_hat={g:.6f}, {n_iter} iterations, {n_bad} violations, min margin {margin:.3g}", arts, 60.0


def criterion_3():
    viol = chain = 0
    arts = {}
    configs = [(d, a) for d in (1, 2) for a in (0.0, 0.2, 0.4, 0.6, 0.7)]
    for d, a in configs:
        f = make_quadratic(2, d)
        beta = 0.8 * (1 - 2 * a * a) / 2
        x0 = np.linspace(3.0, -2.0, d)
        tr = heavy_ball(f, x0, SolverConfig("heavy_ball", beta=beta, alpha=a, max_iter=400))
        rep = verify_linear_rate(tr, "energy", tr.metadata["rate"])
        viol += rep.per_iter_violations
        chain += rep.extra["chain_violations"]
        arts[f"c3_{d}_{a:g}.csv"] = tr.to_csv()
    ok = viol == 0 and chain == 0 and len(configs) == 10
    return ok, f"{len(configs)} configurations, {viol} energy violations, {chain} chained-bound violations", arts, 5.0


def criterion_4():
    f = make_quadratic(2, 1)
    cfg = SolverConfig("nesterov", beta=0.2, eta=1.5, epsilon=0.1, alpha="auto", max_iter=400)
    tr = nesterov(f, [4.0], cfg)
    rep = verify_linear_rate(tr, "energy", tr.metadata["rate"])
    n = rep.extra["chain_violations"]
    return n == 0, f"{len(tr)} iterates, {n} violations of the bound", {"c4.csv": tr.to_csv()}, 5.0


def criterion_5():
    funcs = [make_quadratic(2, 2), make_clover()] + [make_example312(0.3, 2, s) for s in (0, 1, 2)]
    lines, arts, ok = [], {}, True
    for f in funcs:
        plan = plan_for(f, SEED, N_STREAM)
        g = estimate_modulus(f, plan)
        at = characterization_suite(f, g, plan)
        above = characterization_suite(f, 2 * g + 1, plan)
        all_pass = all(r.passed for r in at)
        still_pass = [r.check_id for r in above if r.passed]
        ok &= all_pass and not still_pass
        lines.append(
            f"{f.name}: gamma_hat={g:.4f} all-pass={all_pass} passing-at-2g+1={still_pass or 'none'}"
        )
        arts[f"c5_{f.name}.json"] = dumps({"gamma_hat": g, "at": [r.to_dict() for r in at],
                                           "above": [r.to_dict() for r in above]})
    return ok, "; ".join(lines), arts, 120.0


def criterion_6():
    f = make_clover()
    m = f.metadata["m"]
    plan = plan_for(f, SEED, N_STREAM)
    sq = check_star_quasiconvex(f, 2 * m, plan)
    qc = find_quasiconvexity_violation(f, plan)
    fa = axis_restriction(f, 0)
    qs = find_quasar_violation(fa, plan=SamplePlan(SEED, 2000, ((-10.0,), (10.0,))))
    every_beta = all(v["violated"] for v in qs.extra["per_beta"].values())
    ok = abs(m - 0.505) <= 0.01 and sq.passed and qc.violation > 1e-3 and every_beta
    detail = f"m={m:.6f}, star-qc at 2m: {sq.passed}, quasiconvexity violation {qc.violation:.4g}, quasar violated for every beta: {every_beta}"
    arts = {"c6.json": dumps([sq.to_dict(), qc.to_dict(), qs.to_dict()])}
    return ok, detail, arts, 60.0


def criterion_7():
    f = make_quadratic(2, 1)
    plan = SamplePlan(SEED, N_STREAM, ((-10.0,), (10.0,)))
    pl = check_pl(f, plan)
    qg = check_quadratic_growth(f, 2.0, plan)
    ok = pl.passed and qg.passed and pl.extra["mu"] == 1.0 and pl.n_samples >= N_STREAM
    detail = f"mu={pl.extra['mu']}, PL worst {pl.worst_residual:.3g}, growth worst {qg.worst_residual:.3g} over {qg.n_samples} samples"
    return ok, detail, {"c7.json": dumps([pl.to_dict(), qg.to_dict()])}, 1.0


def _pairs():
    ex = make_example312(0.3, 2, SEED)
    return [
        ("quadratic/whole", make_quadratic(2, 1), whole_space(1)),
        ("quadratic/ball", make_quadratic(2, 2), ball([0.0, 0.0], 1.0)),
        ("example312/clover", ex, clover_set(10.0)),
    ]


def criterion_8():
    parts, arts, ok = [], {}, True
    for name, f, K in _pairs():
        g = estimate_modulus(f, plan_for(f, SEED, N_STREAM))
        rep = check_fixed_point(f, K, 1.0, tol=1e-6, n_starts=1000, seed=SEED, gamma=g)
        ok &= rep.passed
        parts.append(f"{name}: {rep.extra['n_located']} located, max dist {rep.extra['max_dist_to_minimizer']:.1e}, "
                     f"{rep.extra['n_spurious']} spurious")
        arts[f"c8_{name.replace('/', '_')}.json"] = dumps(rep.to_dict())
    return ok, "; ".join(parts), arts, 60.0


def criterion_9():
    parts, arts, ok = [], {}, True
    for name, f, K in _pairs():
        plan = plan_for(f, SEED, N_STREAM)
        rep = check_prox_inequality(f, K, 1.0, plan, n_z=50, slack=1e-7)
        ok &= rep.passed and rep.n_samples == 50
        parts.append(f"{name}: worst {rep.worst_residual:.3g} over {rep.n_samples} z")
        arts[f"c9_{name.replace('/', '_')}.json"] = dumps(rep.to_dict())
    return ok, "; ".join(parts), arts, None


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9]
_FIRST_RUN: dict[int, dict] = {}


def _run(k):
    t0 = time.perf_counter()
    ok, detail, arts, budget = CRITERIA[k - 1]()
    dt = time.perf_counter() - t0
    in_time = budget is None or dt < budget
    return ok and in_time, f"{detail} [{dt:.2f}s" + (f" / {budget:g}s]" if budget else "]"), arts


def _log(log, k, ok, detail):
    line = f"criterion {k}: {'PASS' if ok else 'FAIL'} {detail}"
    log.append(line)
    print(line)


@pytest.mark.parametrize("k", range(1, 10))
def test_criterion(k, acceptance_log):
    ok, detail, arts = _run(k)
    _FIRST_RUN[k] = arts
    _log(acceptance_log, k, ok, detail)
    assert ok, detail


def test_criterion_10_reproducible(acceptance_log, tmp_path):
    n_files = n_diff = 0
    for k in range(1, 10):
        if k not in _FIRST_RUN:
            _FIRST_RUN[k] = _run(k)[2]
        second = _run(k)[2]
        for name, text in _FIRST_RUN[k].items():
            a, b = tmp_path / f"a_{name}", tmp_path / f"b_{name}"
            a.write_text(text)
            b.write_text(second.get(name, ""))
            n_files += 1
            n_diff += a.read_bytes() != b.read_bytes()
    ok = n_diff == 0 and n_files > 0
    _log(acceptance_log, 10, ok, f"{n_files} CSV/JSON artifacts, {n_diff} differ between runs")
    assert ok
