"""Sampled certification and falsification of star quasiconvexity and its consequences.

Each modulus-dependent check has a residual of the form ``A - gamma * B`` with
``B >= 0`` on its sample set, so besides pass/fail it also reports the largest
modulus the samples support (``extra['implied_modulus'] = min A/B``).
"""

from __future__ import annotations

import numpy as np

from .errors import (
    ContractViolation,
    InsufficientSmoothSamplesError,
    PreconditionError,
)
from .func_zoo import ObjectiveFunction, smooth_gradients, unit_directions
from .reports import CheckReport
from .sampling import SamplePlan

Array = np.ndarray

REL_SLACK = 1e-9
RAY_T1_FRACTIONS = (0.0, 0.25, 0.5, 0.75)
REFINE_STEPS = 50
SMALL_LAMBDA = 1e-6
DEFAULT_BETA_GRID = tuple(np.round(np.arange(1, 11) / 10.0, 10))


def _anchor(f: ObjectiveFunction) -> tuple[Array, float]:
    if f.minimizer is None:
        raise PreconditionError(f"{f.name}: this check needs a known minimizer")
    xbar = np.asarray(f.minimizer, dtype=float)
    hbar = f.min_value if f.min_value is not None else f(xbar)
    return xbar, float(hbar)


def _stream(f: ObjectiveFunction, plan: SamplePlan) -> Array:
    if plan.dim != f.dim:
        raise ContractViolation(f"plan box has dim {plan.dim}, function has dim {f.dim}")
    return plan.points()


def _slack(scale) -> Array:
    return REL_SLACK * (1.0 + np.abs(scale))


def _implied(A: Array, B: Array) -> float:
    mask = B > 0
    if not np.any(mask):
        return float("inf")
    return float(max(0.0, np.min(A[mask] / B[mask])))


def _gamma_report(check_id, A, B, gamma, scale, plan, describe) -> CheckReport:
    """Reduce residuals A - gamma B (any shape) to a report; ``describe(idx)`` builds the witness."""
    R = A - gamma * B
    margin = R + _slack(scale)
    flat = int(np.argmin(R))
    idx = np.unravel_index(flat, R.shape)
    passed = bool(np.all(margin >= 0))
    worst = float(R[idx])
    witness = None if passed else describe(idx)
    return CheckReport(
        check_id,
        passed,
        worst,
        int(R.size),
        witness,
        plan.seed,
        extra={"gamma": float(gamma), "implied_modulus": _implied(A, B)},
    )


# ------------------------------------------------------ residual term builders


def _segment_terms(f, plan, lam=None):
    """Residual pieces on the shared (y, lambda) grid."""
    xbar, _ = _anchor(f)
    Y = _stream(f, plan)
    if lam is None:
        lam = plan.lambdas()
    Z = lam[None, :, None] * xbar + (1.0 - lam)[None, :, None] * Y[:, None, :]
    hY = f.value(Y)
    hZ = f.value(Z)
    D2 = np.sum((Y - xbar) ** 2, axis=-1)
    keep = np.isfinite(hY)
    return Y[keep], lam, hY[keep], hZ[keep], D2[keep]


def _def_terms(f, plan, lam=None):
    Y, lam, hY, hZ, D2 = _segment_terms(f, plan, lam)
    A = hY[:, None] - hZ
    B = 0.5 * (lam * (1.0 - lam))[None, :] * D2[:, None]
    return Y, lam, hY, A, B


def _stronger_terms(f, plan):
    # z = xbar + t (y - xbar) with t = 1 - lambda, so t runs over (0, 1]
    Y, lam, hY, hZ, D2 = _segment_terms(f, plan)
    lam = lam[:-1]
    hZ = hZ[:, :-1]
    t = 1.0 - lam
    A = hY[:, None] - hZ
    B = 0.25 * (1.0 - t * t)[None, :] * D2[:, None]
    return Y, t, hY, A, B


def _ray_terms(f, plan, n_dirs=None):
    xbar, _ = _anchor(f)
    Y = _stream(f, plan)
    D = Y - xbar
    T = np.linalg.norm(D, axis=-1)
    keep = T > 0
    D, T = D[keep], T[keep]
    if n_dirs is not None:
        D, T = D[:n_dirs], T[:n_dirs]
    U = D / T[:, None]
    a = np.asarray(RAY_T1_FRACTIONS)
    lam = plan.lambdas()
    t1 = a[None, :] * T[:, None]
    t2 = T[:, None] * np.ones_like(a)[None, :]
    s = lam[None, None, :] * t2[..., None] + (1.0 - lam)[None, None, :] * t1[..., None]
    h1 = f.value(xbar + t1[..., None] * U[:, None, :])
    h2 = f.value(xbar + T[:, None] * U)
    hs = f.value(xbar + s[..., None] * U[:, None, None, :])
    top = np.maximum(h1, h2[:, None])
    A = top[..., None] - hs
    B = 0.5 * (lam * (1.0 - lam))[None, None, :] * ((t2 - t1) ** 2)[..., None]
    return U, T, a, lam, top, A, B


def _growth_terms(f, plan):
    xbar, hbar = _anchor(f)
    Y = _stream(f, plan)
    hY = f.value(Y)
    D2 = np.sum((Y - xbar) ** 2, axis=-1)
    keep = np.isfinite(hY)
    return Y[keep], hY[keep], hY[keep] - hbar, 0.25 * D2[keep]


def _first_order_terms(f, plan):
    xbar, _ = _anchor(f)
    Y = _stream(f, plan)
    G, ok = smooth_gradients(f, Y)
    if not np.any(ok):
        raise InsufficientSmoothSamplesError(f"{f.name}: no smooth sample points")
    Y, G = Y[ok], G[ok]
    A = np.sum(G * (Y - xbar), axis=-1)
    B = 0.5 * np.sum((Y - xbar) ** 2, axis=-1)
    return Y, G, A, B, int(np.count_nonzero(~ok))


# ------------------------------------------------------------------- checks


def check_star_quasiconvex(f: ObjectiveFunction, gamma: float, plan: SamplePlan) -> CheckReport:
    """h(l xbar + (1-l) y) <= h(y) - l(1-l)(gamma/2)||y - xbar||^2 on the sample grid."""
    if gamma < 0:
        raise ContractViolation("gamma must be nonnegative")
    Y, lam, hY, A, B = _def_terms(f, plan)
    return _gamma_report(
        "star_quasiconvex",
        A,
        B,
        gamma,
        hY[:, None],
        plan,
        lambda i: {"y": Y[i[0]], "lambda": lam[i[1]], "residual": (A - gamma * B)[i]},
    )


def estimate_modulus(f: ObjectiveFunction, plan: SamplePlan) -> float:
    """Largest gamma consistent with the sampled segments towards the minimizer.

    Takes the infimum of the defining ratio 2(h(y) - h(z)) / (l(1-l)||y-xbar||^2)
    and of the equivalent ratio 4(h(y) - h(z)) / ((1-t^2)||y-xbar||^2) on the
    same (y, z) pairs; the second has far less finite-grid bias.  A one-sided
    step lambda = ``SMALL_LAMBDA`` adds the first-order limit, which is where
    kinked functions attain their modulus; at smooth samples the first-order
    ratio 2<grad h(y), y - xbar>/||y - xbar||^2 joins the infimum.  Being an
    infimum over a finite sample, the result can only overestimate the true
    modulus, and it never increases when samples are added.
    """
    lam = np.concatenate([[SMALL_LAMBDA], plan.lambdas(interior_only=True)])
    _, _, _, A, B = _def_terms(f, plan, lam)
    g_def = _implied(A, B)
    _, _, _, A2, B2 = _stronger_terms(f, plan)
    g_str = _implied(A2, B2)
    try:
        _, _, A3, B3, _ = _first_order_terms(f, plan)
        g_fo = _implied(A3, B3)
    except InsufficientSmoothSamplesError:
        g_fo = float("inf")
    return min(g_def, g_str, g_fo)


def check_sublevel_star_shaped(f: ObjectiveFunction, deltas, plan: SamplePlan) -> CheckReport:
    """Segments from the minimizer to sampled points of S_delta stay in S_delta.

    ``deltas=None`` uses the tightest level through each sample, delta = h(y).
    """
    Y, lam, hY, hZ, _ = _segment_terms(f, plan)
    if deltas is None:
        levels = hY
        R = levels[:, None] - hZ
        scale = levels[:, None] * np.ones_like(hZ)
        describe = lambda i: {"delta": levels[i[0]], "y": Y[i[0]], "lambda": lam[i[1]]}  # noqa: E731
    else:
        levels = np.asarray(deltas, dtype=float)
        inside = hY[None, :] <= levels[:, None]
        R = np.where(inside[..., None], levels[:, None, None] - hZ[None], np.inf)
        scale = levels[:, None, None] * np.ones_like(R)
        describe = lambda i: {"delta": levels[i[0]], "y": Y[i[1]], "lambda": lam[i[2]]}  # noqa: E731
    finite = np.isfinite(R)
    if not np.any(finite):
        return CheckReport("sublevel_star_shaped", True, 0.0, 0, None, plan.seed, ["no samples inside any sublevel set"])
    flat = int(np.argmin(np.where(finite, R, np.inf)))
    idx = np.unravel_index(flat, R.shape)
    passed = bool(np.all(~finite | (R + _slack(scale) >= 0)))
    witness = None
    if not passed:
        witness = describe(idx)
        witness["residual"] = R[idx]
    return CheckReport(
        "sublevel_star_shaped", passed, float(R[idx]), int(np.count_nonzero(finite)), witness, plan.seed
    )


def check_along_rays(
    f: ObjectiveFunction, gamma: float, n_dirs: int | None, plan: SamplePlan
) -> CheckReport:
    """Strong quasiconvexity (max form) of every sampled ray restriction, same modulus.

    Pairs are t1 = a T, t2 = T with T = ||y - xbar|| and a in ``RAY_T1_FRACTIONS``;
    a = 0 reproduces exactly the segments of :func:`check_star_quasiconvex`.
    """
    U, T, a, lam, top, A, B = _ray_terms(f, plan, n_dirs)
    return _gamma_report(
        "along_rays",
        A,
        B,
        gamma,
        top[..., None],
        plan,
        lambda i: {
            "direction": U[i[0]],
            "t1": a[i[1]] * T[i[0]],
            "t2": T[i[0]],
            "lambda": lam[i[2]],
            "residual": (A - gamma * B)[i],
        },
    )


def check_nondecreasing_rays(
    f: ObjectiveFunction, n_dirs: int = 64, n_t: int = 200, t_max: float | None = None, seed: int = 0
) -> CheckReport:
    """h(xbar + t1 u) <= h(xbar + t2 u) for t1 < t2 on a grid of each sampled ray."""
    xbar, _ = _anchor(f)
    if t_max is None:
        if f.eval_box is not None:
            lo, hi = f.eval_box
            t_max = 0.5 * float(np.linalg.norm(np.asarray(hi) - np.asarray(lo)))
        else:
            t_max = 3.0
    if f.dim == 2:
        rot = np.random.default_rng(seed).uniform(0, 2 * np.pi / n_dirs)
        th = rot + 2 * np.pi * np.arange(n_dirs) / n_dirs
        U = np.column_stack([np.cos(th), np.sin(th)])
    else:
        U = unit_directions(n_dirs, f.dim, seed)
    ts = np.linspace(0.0, t_max, n_t)
    H = f.value(xbar + ts[None, :, None] * U[:, None, :])
    running = np.maximum.accumulate(H, axis=1)
    R = H[:, 1:] - running[:, :-1]
    scale = running[:, :-1]
    i, j = np.unravel_index(int(np.argmin(R)), R.shape)
    passed = bool(np.all(R + _slack(scale) >= 0))
    witness = None
    if not passed:
        j_peak = int(np.argmax(H[i, : j + 1]))
        witness = {"direction": U[i], "t_low": ts[j + 1], "t_high_value_at": ts[j_peak], "residual": R[i, j]}
    return CheckReport("nondecreasing_rays", passed, float(R[i, j]), int(H.size), witness, seed)


def check_stronger_property(f: ObjectiveFunction, gamma: float, plan: SamplePlan) -> CheckReport:
    """h(xbar + t(y - xbar)) <= h(y) - (gamma/4)(1 - t^2)||y - xbar||^2, t in (0, 1]."""
    Y, t, hY, A, B = _stronger_terms(f, plan)
    return _gamma_report(
        "stronger_property",
        A,
        B,
        gamma,
        hY[:, None],
        plan,
        lambda i: {"y": Y[i[0]], "t": t[i[1]], "residual": (A - gamma * B)[i]},
    )


def check_quadratic_growth(f: ObjectiveFunction, gamma: float, plan: SamplePlan) -> CheckReport:
    """h(xbar) + (gamma/4)||y - xbar||^2 <= h(y)."""
    Y, hY, A, B = _growth_terms(f, plan)
    return _gamma_report(
        "quadratic_growth", A, B, gamma, hY, plan, lambda i: {"y": Y[i[0]], "residual": (A - gamma * B)[i]}
    )


def check_first_order(f: ObjectiveFunction, gamma: float, plan: SamplePlan) -> CheckReport:
    """<grad h(y), y - xbar> >= (gamma/2)||y - xbar||^2 at the smooth sample points."""
    Y, G, A, B, n_skipped = _first_order_terms(f, plan)
    rep = _gamma_report(
        "first_order",
        A,
        B,
        gamma,
        np.abs(A) + gamma * B,
        plan,
        lambda i: {"y": Y[i[0]], "grad": G[i[0]], "residual": (A - gamma * B)[i]},
    )
    rep.extra["n_nonsmooth_skipped"] = n_skipped
    return rep


def estimate_lipschitz_grad(f: ObjectiveFunction, plan: SamplePlan) -> float:
    """max ||grad h(x) - grad h(y)|| / ||x - y|| over consecutive and nearby sample pairs.

    A sampled maximum, so a lower bound on the true constant.
    """
    Y = _stream(f, plan)
    rng = plan.rng(7)
    V = rng.standard_normal(Y.shape)
    V /= np.linalg.norm(V, axis=1, keepdims=True)
    near = Y + 1e-3 * V
    G, ok = smooth_gradients(f, Y)
    Gn, okn = smooth_gradients(f, near)
    ratios = []
    pair_ok = ok[:-1] & ok[1:]
    if np.any(pair_ok):
        num = np.linalg.norm(G[1:] - G[:-1], axis=1)
        den = np.linalg.norm(Y[1:] - Y[:-1], axis=1)
        sel = pair_ok & (den > 0)
        ratios.append(num[sel] / den[sel])
    sel = ok & okn
    if np.any(sel):
        ratios.append(np.linalg.norm(Gn[sel] - G[sel], axis=1) / 1e-3)
    if not ratios or sum(r.size for r in ratios) == 0:
        raise InsufficientSmoothSamplesError(f"{f.name}: no smooth sample pairs")
    return float(max(r.max() for r in ratios if r.size))


def check_pl(
    f: ObjectiveFunction,
    plan: SamplePlan,
    gamma: float | None = None,
    lipschitz: float | None = None,
    mu: float | None = None,
    estimate: bool = True,
) -> CheckReport:
    """||grad h(x)||^2 >= mu (h(x) - h(xbar)) with mu = gamma^2 / (2L) unless given."""
    xbar, hbar = _anchor(f)
    if mu is None:
        if gamma is None:
            gamma = f.modulus_claim if f.modulus_claim is not None else estimate_modulus(f, plan)
        if lipschitz is None:
            lipschitz = f.lipschitz_claim
        if lipschitz is None:
            if not estimate:
                raise PreconditionError("no Lipschitz constant claimed and estimation disabled")
            lipschitz = estimate_lipschitz_grad(f, plan)
        mu = gamma**2 / (2.0 * lipschitz)
    Y = _stream(f, plan)
    G, ok = smooth_gradients(f, Y)
    if not np.any(ok):
        raise InsufficientSmoothSamplesError(f"{f.name}: no smooth sample points")
    Y, G = Y[ok], G[ok]
    A = np.sum(G * G, axis=-1)
    B = f.value(Y) - hbar
    rep = _gamma_report(
        "pl", A, B, mu, A + mu * np.abs(B), plan, lambda i: {"x": Y[i[0]], "residual": (A - mu * B)[i]}
    )
    rep.extra.update({"mu": float(mu), "gamma": gamma, "lipschitz": lipschitz})
    rep.extra["implied_mu"] = rep.extra.pop("implied_modulus")
    return rep


def check_supercoercive(
    f: ObjectiveFunction,
    radii,
    n_dirs: int = 64,
    gamma: float | None = None,
    plan: SamplePlan | None = None,
) -> CheckReport:
    """min_u h(xbar + R u)/R^2 at the largest R against gamma/4.

    Without ``gamma`` the modulus is estimated on a box of half-width max(radii),
    so for functions with vanishing modulus the test passes vacuously; that case
    is flagged in ``notes``.
    """
    xbar, _ = _anchor(f)
    radii = np.asarray(radii, dtype=float)
    if radii.ndim != 1 or np.any(np.diff(radii) <= 0) or np.any(radii <= 0):
        raise ContractViolation("radii must be positive and increasing")
    if gamma is None:
        if plan is None:
            R = float(radii[-1])
            plan = SamplePlan(seed=0, n_points=2000, box=((-R,) * f.dim, (R,) * f.dim))
        gamma = estimate_modulus(f, plan)
    U = unit_directions(n_dirs, f.dim)
    H = f.value(xbar + radii[:, None, None] * U[None, :, :])
    ratios = np.min(H, axis=1) / radii**2
    last = float(ratios[-1])
    R = last - gamma / 4.0
    passed = bool(R >= -REL_SLACK * (1.0 + abs(last)))
    notes = []
    if len(ratios) > 1 and np.all(np.diff(ratios) < 0) and ratios[-1] < 0.5 * ratios[0]:
        notes.append("modulus ~ 0: h(x)/||x||^2 decays with the radius")
    witness = None if passed else {"radius": radii[-1], "ratio": last, "gamma": gamma}
    return CheckReport(
        "supercoercive",
        passed,
        R,
        int(H.size),
        witness,
        None if plan is None else plan.seed,
        notes,
        {"ratios": ratios.tolist(), "gamma": float(gamma)},
    )


def check_epigraph_star_shaped(f: ObjectiveFunction, plan: SamplePlan) -> CheckReport:
    """Segments from (xbar, h(xbar)) to epigraph points stay in the epigraph."""
    xbar, hbar = _anchor(f)
    Y, lam, hY, hZ, _ = _segment_terms(f, plan)
    offsets = np.array([0.0, 0.1, 1.0])
    S = hY[:, None] + offsets[None, :] * (1.0 + np.abs(hY))[:, None]
    R = lam[None, None, :] * hbar + (1.0 - lam)[None, None, :] * S[..., None] - hZ[:, None, :]
    scale = S[..., None] * np.ones_like(R)
    idx = np.unravel_index(int(np.argmin(R)), R.shape)
    passed = bool(np.all(R + _slack(scale) >= 0))
    witness = None
    if not passed:
        witness = {"y": Y[idx[0]], "s": S[idx[0], idx[1]], "lambda": lam[idx[2]], "residual": R[idx]}
    return CheckReport("epigraph_star_shaped", passed, float(R[idx]), int(R.size), witness, plan.seed)


# ------------------------------------------------------------ witness search


def _coordinate_descent(obj, x0: Array, step: Array, n_steps: int = REFINE_STEPS, lower=None, upper=None):
    """Greedy +-step coordinate moves on ``obj`` (minimised); steps halve when stuck."""
    x = np.array(x0, dtype=float)
    best = obj(x)
    step = np.array(step, dtype=float)
    for _ in range(n_steps):
        improved = False
        for i in range(x.size):
            for sgn in (1.0, -1.0):
                cand = x.copy()
                cand[i] += sgn * step[i]
                if lower is not None:
                    cand = np.maximum(cand, lower)
                if upper is not None:
                    cand = np.minimum(cand, upper)
                v = obj(cand)
                if v < best:
                    x, best, improved = cand, v, True
                    break
        if not improved:
            step *= 0.5
    return x, best


def find_quasiconvexity_violation(f: ObjectiveFunction, plan: SamplePlan) -> CheckReport:
    """Search x, y, l with h(l y + (1-l) x) > max(h(x), h(y)).

    ``passed=False`` means a witness was found; ``-worst_residual`` is the
    size of the largest violation after refinement.
    """
    X = _stream(f, plan)
    perm = plan.rng(3).permutation(len(X))
    A, Bp = X, X[perm]
    lam = plan.lambdas(interior_only=True)
    M = lam[None, :, None] * Bp[:, None, :] + (1.0 - lam)[None, :, None] * A[:, None, :]
    top = np.maximum(f.value(A), f.value(Bp))
    R = top[:, None] - f.value(M)
    i, j = np.unravel_index(int(np.argmin(R)), R.shape)
    d = f.dim

    def residual(v):
        x, y, l = v[:d], v[d : 2 * d], v[2 * d]
        return float(max(f(x), f(y)) - f(l * y + (1.0 - l) * x))

    lo, hi = plan.box
    width = np.asarray(hi) - np.asarray(lo)
    v0 = np.concatenate([A[i], Bp[i], [lam[j]]])
    step = np.concatenate([0.05 * width, 0.05 * width, [0.05]])
    lower = np.concatenate([np.full(2 * d, -np.inf), [0.0]])
    upper = np.concatenate([np.full(2 * d, np.inf), [1.0]])
    v, best = _coordinate_descent(residual, v0, step, lower=lower, upper=upper)
    best = min(best, float(R[i, j]))
    if best > float(R[i, j]):
        v = v0
    passed = bool(best >= -_slack(max(abs(f(v[:d])), abs(f(v[d : 2 * d])))))
    witness = None
    if not passed:
        x, y, l = v[:d], v[d : 2 * d], v[2 * d]
        witness = {"x": x, "y": y, "lambda": l, "mid": l * y + (1 - l) * x, "violation": -best}
    return CheckReport("quasiconvexity_violation", passed, best, int(R.size), witness, plan.seed)


def find_quasar_violation(
    f: ObjectiveFunction, beta_grid=DEFAULT_BETA_GRID, plan: SamplePlan | None = None
) -> CheckReport:
    """For each beta search y with h(xbar) < h(y) + (1/beta)<grad h(y), xbar - y>.

    ``passed=False`` means every beta in the grid has a violating y, i.e. the
    function is quasar-convex for none of them.
    """
    if plan is None:
        raise ContractViolation("a SamplePlan is required")
    xbar, hbar = _anchor(f)
    Y, G, _, _, _ = _first_order_terms(f, plan)
    hY = f.value(Y)
    per_beta = {}
    worst_by_beta = []
    lo, hi = plan.box
    step = 0.02 * (np.asarray(hi) - np.asarray(lo))
    for beta in beta_grid:
        if not 0 < beta <= 1:
            raise ContractViolation("beta values must lie in (0, 1]")
        R = hbar - hY - np.sum(G * (xbar - Y), axis=-1) / beta
        i = int(np.argmin(R))

        def residual(y, beta=beta):
            g, smooth = smooth_gradients(f, y[None, :])
            if not smooth[0]:
                return float("inf")
            g = g[0]
            return float(hbar - f(y) - np.dot(g, xbar - y) / beta)

        y_best, r_best = _coordinate_descent(residual, Y[i], step)
        if r_best > R[i]:
            y_best, r_best = Y[i], float(R[i])
        violated = r_best < -_slack(hY[i])
        per_beta[repr(float(beta))] = {"violated": bool(violated), "y": y_best, "residual": r_best}
        worst_by_beta.append(r_best)
    all_violated = all(v["violated"] for v in per_beta.values())
    # least-violated beta decides the headline number
    headline = float(max(worst_by_beta))
    return CheckReport(
        "quasar_violation",
        not all_violated,
        headline,
        int(len(Y) * len(beta_grid)),
        per_beta if all_violated else None,
        plan.seed,
        extra={"per_beta": per_beta},
    )


# ------------------------------------------------------------ suite helpers


def modulus_profile(f: ObjectiveFunction, plan: SamplePlan, first_order: bool = True) -> dict[str, float]:
    """Largest modulus supported by each characterization on the shared stream."""
    _, _, _, A, B = _def_terms(f, plan)
    out = {"star_quasiconvex": _implied(A, B)}
    _, _, _, A, B = _stronger_terms(f, plan)
    out["stronger_property"] = _implied(A, B)
    *_, A, B = _ray_terms(f, plan)
    out["along_rays"] = _implied(A, B)
    _, _, A, B = _growth_terms(f, plan)
    out["quadratic_growth"] = _implied(A, B)
    if first_order:
        _, _, A, B, _ = _first_order_terms(f, plan)
        out["first_order"] = _implied(A, B)
    return out


def characterization_suite(
    f: ObjectiveFunction, gamma: float, plan: SamplePlan, first_order: bool = True
) -> list[CheckReport]:
    """The equivalent characterizations of strong star quasiconvexity at one modulus.

    The sublevel check has no modulus and is evaluated at gamma = 0 semantics.
    """
    reports = [
        check_star_quasiconvex(f, gamma, plan),
        check_sublevel_star_shaped(f, None, plan),
        check_along_rays(f, gamma, None, plan),
        check_stronger_property(f, gamma, plan),
        check_quadratic_growth(f, gamma, plan),
    ]
    if first_order:
        reports.append(check_first_order(f, gamma, plan))
    return reports
