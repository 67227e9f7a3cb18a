"""Proximity operator on star-shaped sets and checks of its fixed-point structure."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .analysis import estimate_modulus
from .errors import ContractViolation, PreconditionError
from .func_zoo import ObjectiveFunction
from .reports import CheckReport, to_jsonable
from .sampling import SamplePlan, plan_for
from .sets import StarShapedSet

Array = np.ndarray

N_ANGLES = 720
N_RADII = 64
N_RAYS = 8  # rays per z refined by golden section
N_POLISH = 3  # candidates per z refined by pattern search
GOLDEN_ITERS = 48
STEP_TOL = 1e-10
CHUNK = 64
TIE_TOL = 1e-8
_INVPHI = (np.sqrt(5.0) - 1.0) / 2.0


@dataclass
class ProxResult:
    point: Array
    objective: float
    method: str
    n_evals: int
    converged: bool = True
    metadata: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return to_jsonable(
            {
                "point": self.point,
                "objective": self.objective,
                "method": self.method,
                "n_evals": self.n_evals,
                "converged": self.converged,
                "metadata": self.metadata,
            }
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def prox_objective(f: ObjectiveFunction, beta: float, z, Y) -> Array:
    Y = np.asarray(Y, dtype=float)
    return f.value(Y) + np.sum((Y - z) ** 2, axis=-1) / (2.0 * beta)


# --------------------------------------------------------------- primitives


def _golden(phi, lo: Array, hi: Array, iters: int = GOLDEN_ITERS) -> tuple[Array, Array]:
    """Elementwise golden-section minimisation of ``phi`` on [lo, hi]."""
    a, b = lo.astype(float).copy(), hi.astype(float).copy()
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = phi(c), phi(d)
    for _ in range(iters):
        left = fc < fd
        b = np.where(left, d, b)
        a = np.where(left, a, c)
        c_new = np.where(left, b - _INVPHI * (b - a), d)
        d_new = np.where(left, c, a + _INVPHI * (b - a))
        fn = phi(np.where(left, c_new, d_new))
        fc, fd = np.where(left, fn, fd), np.where(left, fc, fn)
        c, d = c_new, d_new
    take_c = fc <= fd
    return np.where(take_c, c, d), np.where(take_c, fc, fd)


def _directions(dim: int) -> Array:
    D = np.vstack([np.eye(dim), -np.eye(dim)])
    if dim == 2:
        s = np.sqrt(0.5)
        D = np.vstack([D, [[s, s], [-s, s], [s, -s], [-s, -s]]])
    return D


def _pattern_search(obj, X: Array, F: Array, step: Array, max_iter: int) -> tuple[Array, Array, Array, int]:
    """Compass search on each row of X; steps halve when no neighbour improves.

    ``obj(C, rows)`` evaluates candidates C of shape (len(rows), k, dim).
    Returns points, values, a converged mask (step < STEP_TOL) and eval count.
    """
    D = _directions(X.shape[1])
    X, F, step = X.copy(), F.copy(), step.astype(float).copy()
    n_evals = 0
    for _ in range(max_iter):
        rows = np.flatnonzero(step >= STEP_TOL)
        if rows.size == 0:
            break
        C = X[rows, None, :] + step[rows, None, None] * D[None]
        FC = obj(C, rows)
        n_evals += FC.size
        j = np.argmin(FC, axis=1)
        fb = FC[np.arange(rows.size), j]
        better = fb < F[rows]
        mv = rows[better]
        X[mv] = C[better, j[better]]
        F[mv] = fb[better]
        step[rows[~better]] *= 0.5
    return X, F, step < STEP_TOL, n_evals


def _penalized(f, K, beta, Zrows):
    def obj(C, rows):
        val = f.value(C) + np.sum((C - Zrows[rows, None, :]) ** 2, axis=-1) / (2.0 * beta)
        return np.where(K.members(C), val, np.inf)

    return obj


def sample_in_set(K: StarShapedSet, n: int, rng: np.random.Generator, box=None) -> Array:
    """Uniform draws from K by rejection inside its bounding ball (or ``box``)."""
    d = K.dim
    if K.is_whole_space or K.bounding_radius is None:
        if box is None:
            raise PreconditionError(f"{K.name}: sampling needs a box or a bounding radius")
        lo, hi = (np.asarray(b, dtype=float) for b in box)
        draw = lambda m: lo + rng.random((m, d)) * (hi - lo)  # noqa: E731
    else:
        R = K.bounding_radius

        def draw(m):
            V = rng.standard_normal((m, d))
            V /= np.linalg.norm(V, axis=1, keepdims=True)
            return K.center + (R * rng.random(m) ** (1.0 / d))[:, None] * V

    out = []
    have = 0
    for _ in range(1000):
        P = draw(max(2 * (n - have), 16))
        P = P[K.members(P)]
        out.append(P)
        have += len(P)
        if have >= n:
            return np.vstack(out)[:n]
    raise PreconditionError(f"{K.name}: rejection sampling found too few members")


# ------------------------------------------------------------ closed form


def _closed_form_gamma(f: ObjectiveFunction, K: StarShapedSet) -> float | None:
    if f.kind != "quadratic" or f.minimizer is None:
        return None
    if K.is_whole_space:
        return float(f.metadata["gamma"])
    if K.kind == "ball" and np.allclose(K.center, f.minimizer, rtol=0, atol=1e-12):
        return float(f.metadata["gamma"])
    return None


def _closed_form(f, K, beta, Z, gamma) -> list[ProxResult]:
    xbar = np.asarray(f.minimizer, dtype=float)
    Y = xbar + (Z - xbar) / (1.0 + beta * gamma)
    if not K.is_whole_space:
        rho = K.metadata["radius"]
        n = np.linalg.norm(Y - xbar, axis=1)
        scale = np.where(n > rho, rho / np.where(n > 0, n, 1.0), 1.0)
        Y = xbar + (Y - xbar) * scale[:, None]
    obj = prox_objective(f, beta, Z, Y)
    return [ProxResult(Y[i], float(obj[i]), "closed_form", 1) for i in range(len(Z))]


# ------------------------------------------------------------ radial scan

_GRID_CACHE: dict[tuple[int, int], tuple] = {}


def _grid(f: ObjectiveFunction, K: StarShapedSet):
    key = (id(f), id(K))
    hit = _GRID_CACHE.get(key)
    if hit is not None and hit[0] is f and hit[1] is K:
        return hit[2:]
    th = 2.0 * np.pi * np.arange(N_ANGLES) / N_ANGLES
    U = np.column_stack([np.cos(th), np.sin(th)])
    R = K.radial(U)
    S = R[:, None] * (np.arange(N_RADII) / (N_RADII - 1))[None, :]
    P = K.center + S[..., None] * U[:, None, :]
    H = f.value(P)
    if len(_GRID_CACHE) >= 8:
        _GRID_CACHE.pop(next(iter(_GRID_CACHE)))
    _GRID_CACHE[key] = (f, K, U, R, P, H)
    return U, R, P, H


def _radial_scan(f, K, beta, Z, budget) -> list[ProxResult]:
    U, R, P, H = _grid(f, K)
    c = K.center
    z_in = K.members(Z)
    hz = np.where(z_in, f.value(Z), np.inf)
    out: list[ProxResult] = []
    for start in range(0, len(Z), CHUNK):
        Zc = Z[start : start + CHUNK]
        m = len(Zc)
        rows = np.arange(m)[:, None]
        obj = H[None] + np.sum((P[None] - Zc[:, None, None, :]) ** 2, axis=-1) / (2.0 * beta)
        jbest = np.argmin(obj, axis=2)
        ray_val = np.take_along_axis(obj, jbest[..., None], axis=2)[..., 0]
        a = np.argsort(ray_val, axis=1, kind="stable")[:, :N_RAYS]
        j = jbest[rows, a]
        ds = R[a] / (N_RADII - 1)
        Ua = U[a]
        lo = np.maximum(0.0, (j - 1) * ds)
        hi = np.minimum(R[a], (j + 1) * ds)

        def phi(s):
            Y = c + s[..., None] * Ua
            return f.value(Y) + np.sum((Y - Zc[:, None, :]) ** 2, axis=-1) / (2.0 * beta)

        s, val = _golden(phi, lo, hi)
        grid_s, grid_val = j * ds, ray_val[rows, a]
        worse = grid_val < val
        s, val = np.where(worse, grid_s, s), np.where(worse, grid_val, val)
        n_evals = obj[0].size * m + (2 + GOLDEN_ITERS) * s.size

        sel = np.argsort(val, axis=1, kind="stable")[:, :N_POLISH]
        X = (c + s[rows, sel][..., None] * Ua[rows, sel]).reshape(-1, 2)
        F = val[rows, sel].reshape(-1)
        Zr = np.repeat(Zc, N_POLISH, axis=0)
        step = 2.0 * ds[rows, sel].reshape(-1)
        max_iter = max(30, budget // (8 * N_POLISH))
        X, F, conv, ne = _pattern_search(_penalized(f, K, beta, Zr), X, F, step, max_iter)
        n_evals += ne

        # polish along the segment to the center: the structural direction
        D = X - c
        sx = np.linalg.norm(D, axis=1)
        Ux = np.where(sx[:, None] > 0, D / np.where(sx > 0, sx, 1.0)[:, None], 1.0 / np.sqrt(2.0))
        Rx = K.radial(Ux)
        w = 1e-3 * (1.0 + sx)

        def phi_seg(t):
            Y = c + t[:, None] * Ux
            return f.value(Y) + np.sum((Y - Zr) ** 2, axis=-1) / (2.0 * beta)

        t_new, f_new = _golden(phi_seg, np.maximum(0.0, sx - w), np.minimum(Rx, sx + w))
        n_evals += (2 + GOLDEN_ITERS) * len(sx)
        gain = f_new < F
        X[gain] = c + t_new[gain, None] * Ux[gain]
        F[gain] = f_new[gain]

        # slide along the boundary: compass moves cannot follow a curved boundary
        D = X - c
        sx = np.linalg.norm(D, axis=1)
        th = np.arctan2(D[:, 1], D[:, 0])
        on_b = (sx > 0) & (sx >= K.radial(D / np.where(sx > 0, sx, 1.0)[:, None]) * (1.0 - 1e-9))
        if np.any(on_b):
            Zb = Zr[on_b]

            def boundary_point(a):
                Ub = np.column_stack([np.cos(a), np.sin(a)])
                return c + K.radial(Ub)[:, None] * Ub

            def phi_b(a):
                Y = boundary_point(a)
                return f.value(Y) + np.sum((Y - Zb) ** 2, axis=-1) / (2.0 * beta)

            dth = 2.0 * (2.0 * np.pi / N_ANGLES)
            a_new, f_b = _golden(phi_b, th[on_b] - dth, th[on_b] + dth)
            n_evals += (2 + GOLDEN_ITERS) * int(on_b.sum())
            gain = f_b < F[on_b]
            idx = np.flatnonzero(on_b)[gain]
            X[idx] = boundary_point(a_new[gain])
            F[idx] = f_b[gain]

        X = X.reshape(m, N_POLISH, 2)
        F = F.reshape(m, N_POLISH)
        conv = conv.reshape(m, N_POLISH)
        obj_c = prox_objective(f, beta, Zc, np.broadcast_to(c, Zc.shape))
        for i in range(m):
            cand_pts = [*X[i], Zc[i], c]
            cand_val = np.array([*F[i], hz[start + i], obj_c[i]])
            k = int(np.argmin(cand_val))
            near = [
                q
                for q in range(len(cand_val))
                if cand_val[q] <= cand_val[k] + TIE_TOL
                and np.linalg.norm(cand_pts[q] - cand_pts[k]) > 1e-6
            ]
            meta = {"near_ties": len(near)} if near else {}
            out.append(
                ProxResult(
                    np.array(cand_pts[k], dtype=float),
                    float(cand_val[k]),
                    "radial_scan",
                    int(n_evals // m),
                    bool(conv[i, k]) if k < N_POLISH else True,
                    meta,
                )
            )
    return out


# -------------------------------------------------------------- multistart


def _multistart(f, K, beta, z, budget, seed) -> ProxResult:
    rng = np.random.default_rng(seed)
    n_starts = max(20, budget // 500)
    hz = f(z) if K.members(z) else np.inf
    if K.is_whole_space:
        hmin = f.min_value
        if hmin is None:
            hmin = float(np.min(f.value(z + rng.standard_normal((256, f.dim)))))
        r0 = float(np.sqrt(max(2.0 * beta * (f(z) - hmin), 0.0))) or 1e-3
        V = rng.standard_normal((n_starts, f.dim))
        V /= np.linalg.norm(V, axis=1, keepdims=True)
        starts = z + (r0 * rng.random(n_starts) ** (1.0 / f.dim))[:, None] * V
        scale = r0
    else:
        starts = sample_in_set(K, n_starts, rng)
        scale = K.bounding_radius
    starts = np.vstack([starts, K.center[None, :]] + ([z[None, :]] if np.isfinite(hz) else []))
    Zr = np.broadcast_to(z, starts.shape)
    F = np.where(K.members(starts), prox_objective(f, beta, z, starts), np.inf)
    step = np.full(len(starts), 0.1 * scale)
    max_iter = max(30, budget // (2 * f.dim * len(starts)))
    X, F, conv, ne = _pattern_search(_penalized(f, K, beta, Zr), starts, F, step, max_iter)
    k = int(np.argmin(F))
    near = int(np.sum((F <= F[k] + TIE_TOL) & (np.linalg.norm(X - X[k], axis=1) > 1e-6)))
    meta = {"near_ties": near} if near else {}
    return ProxResult(X[k], float(F[k]), "multistart", int(ne + len(starts)), bool(conv[k]), meta)


# ------------------------------------------------------------------ public


def _check_args(f, K, beta, budget):
    if not beta > 0:
        raise ContractViolation("beta must be positive")
    if K.dim != f.dim:
        raise ContractViolation(f"set dim {K.dim} does not match function dim {f.dim}")
    if budget < 100:
        raise ContractViolation("budget must be at least 100")


def prox_batch(
    f: ObjectiveFunction, K: StarShapedSet, beta: float, Z, budget: int = 20000, seed: int = 0
) -> list[ProxResult]:
    """Prox_{beta h}(K, z) for each row of Z."""
    _check_args(f, K, beta, budget)
    Z = np.atleast_2d(np.asarray(Z, dtype=float))
    if Z.shape[1] != f.dim:
        raise ContractViolation(f"points must have dim {f.dim}")
    gamma = _closed_form_gamma(f, K)
    if gamma is not None:
        return _closed_form(f, K, beta, Z, gamma)
    if f.dim == 2 and K.radial_oracle is not None and not K.is_whole_space:
        return _radial_scan(f, K, beta, Z, budget)
    return [_multistart(f, K, beta, z, budget, seed) for z in Z]


def prox(
    f: ObjectiveFunction, K: StarShapedSet, beta: float, z, budget: int = 20000, seed: int = 0
) -> ProxResult:
    """argmin over y in K of h(y) + ||y - z||^2 / (2 beta).

    Closed form for registered quadratics over the whole space or a ball
    centred at the minimizer; an angle-by-radius scan with local refinement
    for planar sets with a radial boundary; multistart local search otherwise.
    The returned objective never exceeds the objective at z (when z is in K)
    or at K.center.
    """
    z = np.asarray(z, dtype=float)
    if z.shape != (f.dim,):
        raise ContractViolation(f"z must have shape ({f.dim},)")
    return prox_batch(f, K, beta, z[None, :], budget, seed)[0]


# ------------------------------------------------------------------ checks


def _start_box(f: ObjectiveFunction):
    if f.eval_box is not None:
        return f.eval_box
    return (-3.0 * np.ones(f.dim), 3.0 * np.ones(f.dim))


def check_fixed_point(
    f: ObjectiveFunction,
    K: StarShapedSet,
    beta: float,
    tol: float = 1e-6,
    n_starts: int = 1000,
    seed: int = 0,
    gamma: float | None = None,
    plan: SamplePlan | None = None,
    max_steps: int = 200,
    budget: int = 20000,
) -> CheckReport:
    """The minimizer is a fixed point of the prox map and no other fixed point is found.

    Fixed points are located by iterating the prox map from ``n_starts``
    points of K until a step is below tol/100.
    """
    if f.minimizer is None:
        raise PreconditionError("a known minimizer is required")
    xbar = np.asarray(f.minimizer, dtype=float)
    plan = plan or plan_for(f, seed)
    notes: list[str] = []

    p0 = prox(f, K, beta, xbar, budget)
    d0 = float(np.linalg.norm(p0.point - xbar))

    rng = np.random.default_rng([seed, 11])
    X = sample_in_set(K, n_starts, rng, _start_box(f))
    first = prox_batch(f, K, beta, X, budget)
    moved = np.array([np.linalg.norm(r.point - x) for r, x in zip(first, X)])
    far = np.linalg.norm(X - xbar, axis=1) > tol
    spurious = far & (moved <= 1e-2 * tol)

    cur = np.array([r.point for r in first])
    settled = moved <= 1e-2 * tol
    non_conv = sum(not r.converged for r in first)
    for _ in range(max_steps):
        act = np.flatnonzero(~settled)
        if act.size == 0:
            break
        res = prox_batch(f, K, beta, cur[act], budget)
        nxt = np.array([r.point for r in res])
        non_conv += sum(not r.converged for r in res)
        step = np.linalg.norm(nxt - cur[act], axis=1)
        cur[act] = nxt
        settled[act[step <= 1e-2 * tol]] = True
    located = cur[settled]
    dist = np.linalg.norm(located - xbar, axis=1) if len(located) else np.zeros(0)
    if not np.all(settled):
        notes.append(f"inconclusive: {int(np.sum(~settled))} starts did not settle in {max_steps} steps")
    if non_conv:
        notes.append(f"{non_conv} prox calls flagged non-converged")

    g = gamma if gamma is not None else estimate_modulus(f, plan)
    Y = plan.points()
    Y = Y[K.members(Y)]
    qg = f.value(Y) - f(xbar) - 0.25 * g * np.sum((Y - xbar) ** 2, axis=1)
    qg_min = float(np.min(qg)) if len(qg) else 0.0
    qg_ok = qg_min >= -1e-9 * (1.0 + abs(f(xbar)))

    worst = min(tol - d0, tol - (float(dist.max()) if dist.size else 0.0))
    passed = bool(worst >= 0 and not spurious.any() and qg_ok and settled.any())
    witness = None
    if not passed:
        witness = {"prox_at_minimizer": p0.point, "qg_min_residual": qg_min}
        if dist.size and dist.max() > tol:
            witness["fixed_point"] = located[int(np.argmax(dist))]
        if spurious.any():
            witness["spurious_start"] = X[int(np.argmax(spurious))]
    return CheckReport(
        "fixed_point",
        passed,
        worst,
        n_starts,
        witness,
        seed,
        notes,
        {
            "gamma": float(g),
            "n_located": int(len(located)),
            "max_dist_to_minimizer": float(dist.max()) if dist.size else 0.0,
            "prox_at_minimizer_dist": d0,
            "n_spurious": int(spurious.sum()),
            "qg_min_residual": qg_min,
        },
    )


def check_prox_inequality(
    f: ObjectiveFunction,
    K: StarShapedSet,
    beta: float,
    plan: SamplePlan,
    gamma: float | None = None,
    n_z: int = 50,
    slack: float = 1e-7,
    budget: int = 20000,
) -> CheckReport:
    """(1/beta)<x* - z, xbar - x*> >= (gamma/2)||x* - xbar||^2 for sampled z in K."""
    if f.minimizer is None:
        raise PreconditionError("a known minimizer is required")
    xbar = np.asarray(f.minimizer, dtype=float)
    g = gamma if gamma is not None else estimate_modulus(f, plan)
    Z = plan.points()
    Z = Z[K.members(Z)][:n_z]
    if len(Z) < n_z:
        Z = np.vstack([Z, sample_in_set(K, n_z - len(Z), plan.rng(5), plan.box)])
    res = prox_batch(f, K, beta, Z, budget)
    ok = np.array([r.converged for r in res])
    Xs = np.array([r.point for r in res])
    R = np.sum((Xs - Z) * (xbar - Xs), axis=1) / beta - 0.5 * g * np.sum((Xs - xbar) ** 2, axis=1)
    R_used = np.where(ok, R, np.inf)
    i = int(np.argmin(R_used))
    passed = bool(np.all(R_used >= -slack))
    expand = np.linalg.norm(Xs - xbar, axis=1) - np.linalg.norm(Z - xbar, axis=1)
    notes = [f"{int(np.sum(~ok))} samples excluded: prox non-converged"] if not ok.all() else []
    witness = None if passed else {"z": Z[i], "prox": Xs[i], "residual": R[i]}
    return CheckReport(
        "prox_inequality",
        passed,
        float(R_used[i]),
        int(ok.sum()),
        witness,
        plan.seed,
        notes,
        {
            "gamma": float(g),
            "n_excluded": int(np.sum(~ok)),
            "max_distance_growth": float(expand.max()),
            "prox_decrease_violations": int(
                np.sum([r.objective > f(z) + 1e-12 * (1 + abs(f(z))) for r, z in zip(res, Z)])
            ),
        },
    )
