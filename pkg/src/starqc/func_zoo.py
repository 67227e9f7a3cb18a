"""Objective functions: the quadratic family, the 4-leaf clover, radial products.

Every value oracle is vectorised over leading axes: it takes an array of shape
``(..., dim)`` and returns an array of shape ``(...)``.  Scalar helpers
(:func:`eval`, :func:`grad`) sit on top of that.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import (
    ConstructionError,
    ContractViolation,
    DegenerateRayError,
    DomainError,
    NonfiniteStencilError,
    UsageError,
)

Array = np.ndarray
VectorOracle = Callable[[Array], Array]

E = math.e
G1_TABLE_END = 8.0
GRAD_CONSISTENCY_RTOL = 1e-2


@dataclass(frozen=True, eq=False)
class ObjectiveFunction:
    dim: int
    value_oracle: VectorOracle
    grad_oracle: VectorOracle | None = None
    minimizer: Array | None = None
    min_value: float | None = None
    modulus_claim: float | None = None
    lipschitz_claim: float | None = None
    eval_box: tuple[Array, Array] | None = None
    name: str = "anonymous"
    kind: str = "generic"
    metadata: dict[str, Any] = field(default_factory=dict)

    def value(self, X) -> Array:
        X = np.asarray(X, dtype=float)
        if X.shape[-1:] != (self.dim,):
            raise ContractViolation(
                f"{self.name}: expected trailing dimension {self.dim}, got shape {X.shape}"
            )
        return np.asarray(self.value_oracle(X), dtype=float)

    def __call__(self, x) -> float:
        return eval(self, x)

    @property
    def has_minimizer(self) -> bool:
        return self.minimizer is not None

    def metadata_json(self) -> str:
        payload = {
            "name": self.name,
            "kind": self.kind,
            "dim": self.dim,
            "minimizer": None if self.minimizer is None else self.minimizer.tolist(),
            "min_value": self.min_value,
            "modulus_claim": self.modulus_claim,
            "lipschitz_claim": self.lipschitz_claim,
            "metadata": json_safe_metadata(self),
        }
        return json.dumps(payload, sort_keys=True)


@dataclass(frozen=True, eq=False)
class ScalarFunction:
    value_oracle: Callable[[Array], Array]
    domain_lo: float = -math.inf
    domain_hi: float = math.inf

    def __post_init__(self):
        if not self.domain_lo <= self.domain_hi:
            raise ContractViolation("domain_lo must not exceed domain_hi")

    def __call__(self, t):
        t_arr = np.asarray(t, dtype=float)
        if np.any(t_arr < self.domain_lo) or np.any(t_arr > self.domain_hi):
            raise DomainError(
                f"argument outside [{self.domain_lo}, {self.domain_hi}]"
            )
        out = np.asarray(self.value_oracle(t_arr), dtype=float)
        return float(out) if out.ndim == 0 else out


def eval(f: ObjectiveFunction, x) -> float:  # noqa: A001 - mirrors the operation name
    """Value of ``f`` at a single point; ``+inf`` marks points outside dom f."""
    x = np.asarray(x, dtype=float)
    if x.shape != (f.dim,):
        raise ContractViolation(f"{f.name}: point of shape {x.shape}, expected ({f.dim},)")
    return float(f.value(x))


def default_fd_step(X: Array) -> Array:
    return 1e-6 * (1.0 + np.linalg.norm(X, axis=-1))


def fd_grad(f: ObjectiveFunction, X, step=None) -> Array:
    """Central differences, batched over leading axes of ``X``."""
    X = np.asarray(X, dtype=float)
    h = default_fd_step(X) if step is None else np.broadcast_to(
        np.asarray(step, dtype=float), X.shape[:-1]
    )
    G = np.empty_like(X)
    for i in range(f.dim):
        shift = np.zeros_like(X)
        shift[..., i] = h
        fp = f.value(X + shift)
        fm = f.value(X - shift)
        if not (np.all(np.isfinite(fp)) and np.all(np.isfinite(fm))):
            raise NonfiniteStencilError(f"{f.name}: stencil left dom f along axis {i}")
        G[..., i] = (fp - fm) / (2.0 * h)
    return G


def grad(f: ObjectiveFunction, x, fd_step: float | None = None) -> Array:
    """Analytic gradient when ``f`` has one, central differences otherwise."""
    x = np.asarray(x, dtype=float)
    if x.shape[-1:] != (f.dim,):
        raise ContractViolation(f"{f.name}: point of shape {x.shape}, expected (..., {f.dim})")
    if fd_step is not None and fd_step <= 0:
        raise ContractViolation("fd_step must be positive")
    if f.grad_oracle is not None:
        return np.asarray(f.grad_oracle(x), dtype=float)
    return fd_grad(f, x, fd_step)


def smooth_gradients(f: ObjectiveFunction, X) -> tuple[Array, Array]:
    """Gradients at ``X`` plus a mask of points where ``f`` looks differentiable.

    With an analytic gradient every point is accepted.  Otherwise the default
    step and ten times it must agree to ``GRAD_CONSISTENCY_RTOL``.
    """
    X = np.asarray(X, dtype=float)
    if f.grad_oracle is not None:
        G = np.asarray(f.grad_oracle(X), dtype=float)
        return G, np.all(np.isfinite(G), axis=-1)
    h = default_fd_step(X)
    G1 = fd_grad(f, X, h)
    G2 = fd_grad(f, X, 10.0 * h)
    gap = np.linalg.norm(G1 - G2, axis=-1)
    scale = np.linalg.norm(G1, axis=-1) + 1e-6
    ok = np.isfinite(gap) & (gap <= GRAD_CONSISTENCY_RTOL * scale)
    return G1, ok


# ---------------------------------------------------------------- quadratic


def make_quadratic(gamma: float, dim: int) -> ObjectiveFunction:
    """h(x) = (gamma/2)||x||^2, the canonical strongly convex member."""
    if not gamma > 0:
        raise ContractViolation("gamma must be positive")
    if dim < 1:
        raise ContractViolation("dim must be a positive integer")
    gamma = float(gamma)
    return ObjectiveFunction(
        dim=dim,
        value_oracle=lambda X: 0.5 * gamma * np.sum(X * X, axis=-1),
        grad_oracle=lambda X: gamma * np.asarray(X, dtype=float),
        minimizer=np.zeros(dim),
        min_value=0.0,
        modulus_claim=gamma,
        lipschitz_claim=gamma,
        eval_box=(np.full(dim, -10.0), np.full(dim, 10.0)),
        name=f"quadratic:{_fmt(gamma)}:{dim}",
        kind="quadratic",
        metadata={"gamma": gamma},
    )


# ------------------------------------------------------------------ clover


def _g1_array(x: Array) -> Array:
    n = np.floor(x)
    s = x - n
    low = 3.0 * E * x**2 - 2.0 * E * x**3
    with np.errstate(over="ignore"):
        high = np.exp(n) * (1.0 + (E - 1.0) * (3.0 * s**2 - 2.0 * s**3))
    return np.where(x < 1.0, low, high)


def make_g1() -> ScalarFunction:
    """Smooth staircase g1 on [0, inf): cubic blend between e^n and e^(n+1).

    Tabulation stops nowhere in practice; the ``floor`` formula is exact for
    every integer piece, ``G1_TABLE_END`` only documents the tested range.
    """
    return ScalarFunction(_g1_array, 0.0, math.inf)


def _clover_h(t: Array) -> Array:
    """Even one-dimensional h(t) = t^2 + g1(|t|)."""
    a = np.abs(t)
    return a * a + _g1_array(a)


def p_pseudonorm(X: Array, p: float) -> Array:
    return np.sum(np.abs(X) ** p, axis=-1) ** (1.0 / p)


def make_clover() -> ObjectiveFunction:
    """The 4-leaf clover phi(x) = (||x|| / ||x||_p) h(||x||) on R^2."""
    alpha = float(_clover_h(np.array(1.0)))
    beta = float(_clover_h(np.array(1.0 / math.sqrt(2.0))))
    p = math.log(2.0) / math.log(2.0 * alpha / beta)
    # min over the unit circle of ||u||/||u||_p, attained on the diagonals
    m = 2.0 ** (0.5 - 1.0 / p)

    def value(X):
        X = np.asarray(X, dtype=float)
        r = np.linalg.norm(X, axis=-1)
        rp = p_pseudonorm(X, p)
        safe = np.where(r > 0, rp, 1.0)
        return np.where(r > 0, r / safe * _clover_h(r), 0.0)

    return ObjectiveFunction(
        dim=2,
        value_oracle=value,
        minimizer=np.zeros(2),
        min_value=0.0,
        modulus_claim=2.0 * m,
        eval_box=(np.full(2, -3.0), np.full(2, 3.0)),
        name="clover",
        kind="clover",
        metadata={"alpha": alpha, "beta": beta, "p": p, "m": m},
    )


# ---------------------------------------------------------- radial product


def unit_directions(n: int, dim: int, seed: int = 0) -> Array:
    """``n`` unit vectors: equispaced angles in 2-D, Gaussian draws otherwise."""
    if dim == 1:
        return np.array([[1.0], [-1.0]] * ((n + 1) // 2))[:n]
    if dim == 2:
        th = 2.0 * np.pi * (np.arange(n) + 0.5) / n
        return np.column_stack([np.cos(th), np.sin(th)])
    rng = np.random.default_rng(seed)
    U = rng.standard_normal((n, dim))
    return U / np.linalg.norm(U, axis=1, keepdims=True)


def make_radial_product(
    f: ScalarFunction | Callable[[Array], Array],
    g_angular: Callable[[Array], Array],
    dim: int,
    n_validate: int = 10_000,
    name: str = "radial_product",
    metadata: dict | None = None,
) -> ObjectiveFunction:
    """h(x) = f(||x||) g(x/||x||) with h(0) = 0.

    ``f`` must vanish at 0 and be minimised there; ``g_angular`` must be at
    least 1 on every sampled direction, otherwise construction is refused.
    """
    ts = np.linspace(-10.0, 10.0, 2001)
    fv = np.asarray(f(np.abs(ts)), dtype=float)
    f0 = float(np.asarray(f(np.array(0.0))))
    if abs(f0) > 1e-12 or np.min(fv) < f0 - 1e-12:
        raise ConstructionError("radial profile must satisfy f(0)=0 = min f", witness=f0)
    U = unit_directions(n_validate, dim)
    gv = np.asarray(g_angular(U), dtype=float)
    j = int(np.argmin(gv))
    if gv[j] < 1.0:
        raise ConstructionError(
            f"angular factor dips below 1 (g={gv[j]:.6g})", witness=U[j].tolist()
        )

    def value(X):
        X = np.asarray(X, dtype=float)
        r = np.linalg.norm(X, axis=-1)
        safe = np.where(r > 0, r, 1.0)[..., None]
        out = np.asarray(f(r), dtype=float) * np.asarray(g_angular(X / safe), dtype=float)
        return np.where(r > 0, out, 0.0)

    return ObjectiveFunction(
        dim=dim,
        value_oracle=value,
        minimizer=np.zeros(dim),
        min_value=0.0,
        eval_box=(np.full(dim, -3.0), np.full(dim, 3.0)),
        name=name,
        kind="radial_product",
        metadata=dict(metadata or {}),
    )


def _angular_min(g, n: int = 10_000) -> tuple[float, float]:
    """Minimum of g over the unit circle: dense grid, then Brent around the best cells."""
    th = 2.0 * np.pi * np.arange(n) / n
    vals = g(np.column_stack([np.cos(th), np.sin(th)]))
    best = float(vals.min())
    best_th = float(th[int(np.argmin(vals))])
    dth = 2.0 * np.pi / n
    for j in np.argsort(vals)[:8]:
        res = minimize_scalar(
            lambda a: float(g(np.array([[math.cos(a), math.sin(a)]]))[0]),
            bounds=(th[j] - dth, th[j] + dth),
            method="bounded",
            options={"xatol": 1e-12},
        )
        if res.fun < best:
            best, best_th = float(res.fun), float(res.x)
    return best, best_th


def make_example312(alpha: float, k: int, seed: int, n_terms: int = 10) -> ObjectiveFunction:
    """Nonsmooth radial product max(|t|^alpha, t^2 - k) * g(u) with random trig g.

    Coefficients a, c ~ U[0, 20] and b, d ~ U[-25, 25] are drawn from ``seed``.
    When the drawn g dips below 1 it is shifted up by ``1 - min g``; the shift
    is stored in ``metadata['g_shift']``.
    """
    if not 0.0 < alpha < 1.0:
        raise ContractViolation("alpha must lie in (0, 1)")
    if k < 1:
        raise ContractViolation("k must be a positive integer")
    rng = np.random.default_rng(seed)
    a = rng.uniform(0.0, 20.0, n_terms)
    b = rng.uniform(-25.0, 25.0, n_terms)
    c = rng.uniform(0.0, 20.0, n_terms)
    d = rng.uniform(-25.0, 25.0, n_terms)

    def g_raw(U):
        U = np.asarray(U, dtype=float)
        u1 = U[..., 0:1]
        u2 = U[..., 1:2]
        terms = a * np.sin(b * u1) ** 2 + c * np.cos(d * u2) ** 2
        return terms.sum(axis=-1) / (4.0 * n_terms)

    gmin, gmin_angle = _angular_min(g_raw)
    shift = 1.0 - gmin if gmin < 1.0 else 0.0

    def g(U):
        return g_raw(U) + shift

    def f_radial(t):
        t = np.abs(np.asarray(t, dtype=float))
        return np.maximum(t**alpha, t * t - k)

    meta = {
        "alpha": float(alpha),
        "k": int(k),
        "seed": int(seed),
        "a": a.tolist(),
        "b": b.tolist(),
        "c": c.tolist(),
        "d": d.tolist(),
        "g_min_raw": gmin,
        "g_min_angle": gmin_angle,
        "g_shift": shift,
    }
    h = make_radial_product(
        f_radial, g, 2, name=f"example312:{_fmt(alpha)}:{k}:{seed}", metadata=meta
    )
    object.__setattr__(h, "kind", "example312")
    object.__setattr__(h, "metadata", dict(h.metadata, radial=f_radial, angular=g))
    return h


# -------------------------------------------------------- non-examples etc.


def make_twobasin() -> ObjectiveFunction:
    """min(||x||^2, ||x - (3,0)||^2 + 0.5) with the declared minimizer at the origin."""
    c = np.array([3.0, 0.0])

    def value(X):
        X = np.asarray(X, dtype=float)
        return np.minimum(np.sum(X * X, axis=-1), np.sum((X - c) ** 2, axis=-1) + 0.5)

    return ObjectiveFunction(
        dim=2,
        value_oracle=value,
        minimizer=np.zeros(2),
        min_value=0.0,
        eval_box=(np.array([-2.0, -3.0]), np.array([5.0, 3.0])),
        name="twobasin",
        kind="twobasin",
    )


def make_abs() -> ObjectiveFunction:
    """|x| on R: coercive but not 2-supercoercive."""
    return ObjectiveFunction(
        dim=1,
        value_oracle=lambda X: np.abs(np.asarray(X, dtype=float)[..., 0]),
        minimizer=np.zeros(1),
        min_value=0.0,
        eval_box=(np.array([-10.0]), np.array([10.0])),
        name="abs",
        kind="abs",
    )


def make_constant(dim: int, c: float = 0.0) -> ObjectiveFunction:
    return ObjectiveFunction(
        dim=dim,
        value_oracle=lambda X: np.full(np.asarray(X).shape[:-1], float(c)),
        grad_oracle=lambda X: np.zeros_like(np.asarray(X, dtype=float)),
        minimizer=np.zeros(dim),
        min_value=float(c),
        name=f"constant:{_fmt(c)}:{dim}",
        kind="constant",
    )


def axis_restriction(f: ObjectiveFunction, axis: int = 0) -> ObjectiveFunction:
    """One-dimensional function s -> f(s e_axis)."""
    if not 0 <= axis < f.dim:
        raise ContractViolation("axis out of range")

    def lift(S):
        S = np.asarray(S, dtype=float)
        X = np.zeros(S.shape[:-1] + (f.dim,))
        X[..., axis] = S[..., 0]
        return X

    grad_oracle = None
    if f.grad_oracle is not None:
        grad_oracle = lambda S: f.grad_oracle(lift(S))[..., axis : axis + 1]  # noqa: E731
    xbar = None if f.minimizer is None else f.minimizer[axis : axis + 1].copy()
    lo = np.array([-10.0])
    hi = np.array([10.0])
    return ObjectiveFunction(
        dim=1,
        value_oracle=lambda S: f.value(lift(S)),
        grad_oracle=grad_oracle,
        minimizer=xbar,
        min_value=f.min_value,
        eval_box=(lo, hi),
        name=f"{f.name}@axis{axis}",
        kind=f"{f.kind}_axis",
    )


def restrict_to_ray(f: ObjectiveFunction, xbar, y) -> ScalarFunction:
    """t -> f(xbar + t (y - xbar)/||y - xbar||) on [0, ||y - xbar||]."""
    xbar = np.asarray(xbar, dtype=float)
    y = np.asarray(y, dtype=float)
    d = y - xbar
    length = float(np.linalg.norm(d))
    if length == 0.0:
        raise DegenerateRayError("y coincides with the base point")
    u = d / length

    def value(t):
        t = np.asarray(t, dtype=float)
        pts = xbar + t[..., None] * u
        # keep the far endpoint bit-identical to direct evaluation
        pts = np.where((t == length)[..., None], y, pts)
        return f.value(pts)

    return ScalarFunction(value, 0.0, length)


# ---------------------------------------------------------------- registry


def _fmt(v: float) -> str:
    return repr(float(v)).rstrip("0").rstrip(".") if float(v) != int(v) else str(int(v))


def resolve_function(fid: str) -> ObjectiveFunction:
    """Build a function from its registry id.

    Ids: ``quadratic:<gamma>:<dim>``, ``clover``, ``clover_axis``,
    ``example312:<alpha>:<k>:<seed>``, ``twobasin``, ``abs``.
    """
    parts = fid.split(":")
    try:
        if parts[0] == "quadratic" and len(parts) == 3:
            return make_quadratic(float(parts[1]), int(parts[2]))
        if fid == "clover":
            return make_clover()
        if fid == "clover_axis":
            return axis_restriction(make_clover(), 0)
        if parts[0] == "example312" and len(parts) == 4:
            return make_example312(float(parts[1]), int(parts[2]), int(parts[3]))
        if fid == "twobasin":
            return make_twobasin()
        if fid == "abs":
            return make_abs()
    except ValueError as exc:
        raise UsageError(f"malformed function id {fid!r}: {exc}") from exc
    raise UsageError(f"unknown function id {fid!r}")


def json_safe_metadata(f: ObjectiveFunction) -> dict:
    """Metadata with callables dropped, ready for ``json.dumps``."""
    return {k: v for k, v in f.metadata.items() if not callable(v)}
