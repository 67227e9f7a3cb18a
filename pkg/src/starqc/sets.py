"""Closed star-shaped sets: membership oracles, radial boundaries, certification."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Callable

import numpy as np

from .errors import ContractViolation, PreconditionError, TMaxTooSmallError, UsageError
from .func_zoo import ObjectiveFunction, make_clover, unit_directions
from .reports import CheckReport

Array = np.ndarray

# closed sets: points this close (relative) to the radial boundary are members
MEMBER_RTOL = 1e-12
DEFAULT_T_MAX = 10.0
DEFAULT_BISECT_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class StarShapedSet:
    dim: int
    member_oracle: Callable[[Array], Array]
    center: Array
    radial_oracle: Callable[[Array], Array] | None = None
    bounding_radius: float | None = None
    name: str = "set"
    kind: str = "generic"
    metadata: dict[str, Any] = field(default_factory=dict)

    def members(self, X) -> Array:
        X = np.asarray(X, dtype=float)
        if X.shape[-1:] != (self.dim,):
            raise ContractViolation(f"{self.name}: expected trailing dim {self.dim}")
        return np.asarray(self.member_oracle(X), dtype=bool)

    def radial(self, U) -> Array:
        if self.radial_oracle is None:
            raise PreconditionError(f"{self.name} has no radial oracle")
        return np.asarray(self.radial_oracle(np.asarray(U, dtype=float)), dtype=float)

    @property
    def is_whole_space(self) -> bool:
        return self.kind == "whole"


@dataclass(frozen=True)
class SegmentReport:
    contained: bool
    samples: int
    witness_t: float | None = None


def contains(K: StarShapedSet, x) -> bool:
    x = np.asarray(x, dtype=float)
    if x.shape != (K.dim,):
        raise ContractViolation(f"{K.name}: point of shape {x.shape}, expected ({K.dim},)")
    return bool(K.members(x))


def _radial_member(center: Array, radial: Callable[[Array], Array]):
    def member(X):
        D = np.asarray(X, dtype=float) - center
        n = np.linalg.norm(D, axis=-1)
        U = np.where((n > 0)[..., None], D / np.where(n > 0, n, 1.0)[..., None], 0.0)
        # the center needs no radius; give it a valid direction
        U[..., 0] = np.where(n > 0, U[..., 0], 1.0)
        r = radial(U)
        return (n == 0) | (n <= r * (1.0 + MEMBER_RTOL) + MEMBER_RTOL)

    return member


def _vectorize_radial(r: Callable, dim: int) -> Callable[[Array], Array]:
    """Accept either a batched r(U) or a per-vector r(u)."""

    def batched(U):
        U = np.asarray(U, dtype=float)
        flat = U.reshape(-1, dim)
        try:
            out = np.asarray(r(flat), dtype=float)
            if out.shape != (flat.shape[0],):
                raise ValueError
        except (ValueError, TypeError, IndexError):
            out = np.array([float(r(u)) for u in flat])
        return out.reshape(U.shape[:-1])

    return batched


# ------------------------------------------------------------- constructors


def whole_space(dim: int) -> StarShapedSet:
    return StarShapedSet(
        dim=dim,
        member_oracle=lambda X: np.ones(np.asarray(X).shape[:-1], dtype=bool),
        center=np.zeros(dim),
        radial_oracle=lambda U: np.full(np.asarray(U).shape[:-1], math.inf),
        name="whole",
        kind="whole",
    )


def ball(center, radius: float) -> StarShapedSet:
    center = np.asarray(center, dtype=float)
    if not radius > 0:
        raise ContractViolation("radius must be positive")
    radius = float(radius)
    radial = lambda U: np.full(np.asarray(U).shape[:-1], radius)  # noqa: E731
    return StarShapedSet(
        dim=center.size,
        member_oracle=_radial_member(center, radial),
        center=center,
        radial_oracle=radial,
        bounding_radius=radius,
        name=f"ball:{radius:g}",
        kind="ball",
        metadata={"radius": radius},
    )


def annulus(r_in: float, r_out: float, declared_center) -> StarShapedSet:
    """{r_in <= ||x|| <= r_out}: star-shaped at none of its points."""
    c = np.asarray(declared_center, dtype=float)

    def member(X):
        n = np.linalg.norm(np.asarray(X, dtype=float), axis=-1)
        return (n >= r_in) & (n <= r_out)

    return StarShapedSet(
        dim=c.size,
        member_oracle=member,
        center=c,
        bounding_radius=float(r_out + np.linalg.norm(c)),
        name=f"annulus:{r_in:g}:{r_out:g}",
        kind="annulus",
    )


def make_radial_set(r: Callable, center, dim: int, name: str = "radial") -> StarShapedSet:
    """{center + t u : 0 <= t <= r(u)} for a positive, continuous r."""
    center = np.asarray(center, dtype=float)
    if center.shape != (dim,):
        raise ContractViolation("center has the wrong dimension")
    radial = _vectorize_radial(r, dim)
    probe = radial(unit_directions(256, dim))
    if np.any(probe <= 0):
        raise ContractViolation("radial function must be positive")
    bound = float(np.max(probe)) if np.all(np.isfinite(probe)) else None
    return StarShapedSet(
        dim=dim,
        member_oracle=_radial_member(center, radial),
        center=center,
        radial_oracle=radial,
        bounding_radius=bound,
        name=name,
        kind="radial",
    )


def petal_set(amplitude: float = 0.5) -> StarShapedSet:
    """r(u) = 1 + amplitude |sin(2 angle(u))|, a clover-like radial set."""

    def r(U):
        th = np.arctan2(U[..., 1], U[..., 0])
        return 1.0 + amplitude * np.abs(np.sin(2.0 * th))

    K = make_radial_set(r, np.zeros(2), 2, name=f"petal:{amplitude:g}")
    return K


def sublevel_radial(
    f: ObjectiveFunction,
    delta: float,
    t_max: float = DEFAULT_T_MAX,
    tol: float = DEFAULT_BISECT_TOL,
) -> StarShapedSet:
    """S_delta(f) as a radial set around the minimizer, boundary found by bisection.

    Valid when f is nondecreasing along rays from its minimizer, which is the
    case for every star quasiconvex function.
    """
    if f.minimizer is None:
        raise PreconditionError("sublevel_radial needs f.minimizer")
    xbar = np.asarray(f.minimizer, dtype=float)
    if f(xbar) > delta:
        raise PreconditionError("minimum value exceeds delta: empty sublevel set")

    def radial(U):
        U = np.asarray(U, dtype=float)
        if U.size == 0:
            return np.zeros(U.shape[:-1])
        far = f.value(xbar + t_max * U)
        if np.any(far <= delta):
            j = int(np.flatnonzero(np.ravel(far <= delta))[0])
            raise TMaxTooSmallError(
                f"f(xbar + t_max u) <= delta for u={U.reshape(-1, f.dim)[j].tolist()}"
            )
        lo = np.zeros(U.shape[:-1])
        hi = np.full(U.shape[:-1], float(t_max))
        while np.max(hi - lo) > tol:
            mid = 0.5 * (lo + hi)
            ok = f.value(xbar + mid[..., None] * U) <= delta
            lo = np.where(ok, mid, lo)
            hi = np.where(ok, hi, mid)
        return lo

    return StarShapedSet(
        dim=f.dim,
        member_oracle=_radial_member(xbar, radial),
        center=xbar,
        radial_oracle=radial,
        bounding_radius=float(t_max),
        name=f"sublevel[{f.name}]:{delta:g}",
        kind="sublevel",
        metadata={"delta": float(delta), "function": f.name, "tol": tol},
    )


# ----------------------------------------------------- tabulated (2-D only)


def tabulated_set(center, angles, radii, name: str = "tabulated") -> StarShapedSet:
    """Radial set with r linearly interpolated in angle (periodic)."""
    center = np.asarray(center, dtype=float)
    angles = np.asarray(angles, dtype=float)
    radii = np.asarray(radii, dtype=float)
    if center.shape != (2,) or angles.shape != radii.shape or angles.ndim != 1:
        raise ContractViolation("tabulated sets are 2-D with matching angle/radius arrays")
    if np.any(radii <= 0) or np.any(np.diff(angles) <= 0):
        raise ContractViolation("radii must be positive and angles increasing")

    def radial(U):
        U = np.asarray(U, dtype=float)
        th = np.mod(np.arctan2(U[..., 1], U[..., 0]), 2.0 * np.pi)
        return np.interp(th, angles, radii, period=2.0 * np.pi)

    return StarShapedSet(
        dim=2,
        member_oracle=_radial_member(center, radial),
        center=center,
        radial_oracle=radial,
        bounding_radius=float(radii.max()),
        name=name,
        kind="tabulated",
        metadata={"angles": angles, "radii": radii},
    )


def tabulate(K: StarShapedSet, n_angles: int = 720, name: str | None = None) -> StarShapedSet:
    if K.dim != 2:
        raise ContractViolation("only 2-D sets can be tabulated")
    th = 2.0 * np.pi * np.arange(n_angles) / n_angles
    radii = K.radial(np.column_stack([np.cos(th), np.sin(th)]))
    return tabulated_set(K.center, th, radii, name=name or f"tab[{K.name}]")


def set_to_json(K: StarShapedSet) -> str:
    if K.kind != "tabulated":
        raise ContractViolation("only tabulated radial sets serialize")
    return json.dumps(
        {
            "center": K.center.tolist(),
            "angles": K.metadata["angles"].tolist(),
            "radii": K.metadata["radii"].tolist(),
        }
    )


def set_from_json(text: str, name: str = "tabulated") -> StarShapedSet:
    d = json.loads(text)
    return tabulated_set(d["center"], d["angles"], d["radii"], name=name)


# ------------------------------------------------------------ verification


def segment_contained(K: StarShapedSet, a, b, m: int) -> SegmentReport:
    """Sample a + (j/m)(b - a), j = 0..m, and report the first point outside K."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if m < 2:
        raise ContractViolation("m must be at least 2")
    if not (contains(K, a) and contains(K, b)):
        raise PreconditionError("segment endpoints must lie in K")
    ts = np.arange(m + 1) / m
    inside = K.members(a + ts[:, None] * (b - a))
    if np.all(inside):
        return SegmentReport(True, m + 1)
    return SegmentReport(False, m + 1, float(ts[int(np.argmin(inside))]))


def far_points(K: StarShapedSet, U: Array, m: int = 256) -> Array:
    """Farthest member of K along each direction from the center.

    Uses the radial oracle when there is one; otherwise scans the ray up to
    the bounding radius.
    """
    c = K.center
    if K.radial_oracle is not None:
        r = K.radial(U)
        cap = K.bounding_radius if K.bounding_radius is not None else DEFAULT_T_MAX
        r = np.where(np.isfinite(r), r, cap)
        return c + r[:, None] * U
    if K.bounding_radius is None:
        raise PreconditionError("oracle-only sets need a bounding radius")
    ts = np.linspace(0.0, K.bounding_radius, 4 * m + 1)
    P = c + ts[None, :, None] * U[:, None, :]
    inside = K.members(P)
    last = np.array([np.flatnonzero(row)[-1] for row in inside])
    return P[np.arange(len(U)), last]


def certify_star_center(
    K: StarShapedSet, n_dirs: int = 64, m: int = 256, seed: int = 0
) -> CheckReport:
    """Check every segment from K.center to a far point of K stays in K."""
    if n_dirs < 1:
        raise ContractViolation("n_dirs must be positive")
    if not contains(K, K.center):
        return CheckReport("star_center", False, -1.0, 0, {"reason": "center not in K"}, seed)
    if K.dim == 2:
        rot = np.random.default_rng(seed).uniform(0, 2 * np.pi / n_dirs)
        th = rot + 2.0 * np.pi * np.arange(n_dirs) / n_dirs
        U = np.column_stack([np.cos(th), np.sin(th)])
    else:
        U = unit_directions(n_dirs, K.dim, seed)
    B = far_points(K, U, m)
    for u, b in zip(U, B):
        if np.allclose(b, K.center):
            continue
        rep = segment_contained(K, K.center, b, m)
        if not rep.contained:
            witness = {"direction": u.tolist(), "far_point": b.tolist(), "t": rep.witness_t}
            return CheckReport("star_center", False, -1.0, n_dirs * (m + 1), witness, seed)
    return CheckReport("star_center", True, 0.0, n_dirs * (m + 1), None, seed)


# ----------------------------------------------------------------- registry


@lru_cache(maxsize=16)
def clover_set(delta: float = 10.0, n_angles: int = 720) -> StarShapedSet:
    """Tabulated sublevel set {phi <= delta} of the clover function."""
    return tabulate(
        sublevel_radial(make_clover(), delta), n_angles, name=f"clover:{delta:g}"
    )


def resolve_set(sid: str, dim: int = 2) -> StarShapedSet:
    """Ids: ``whole``, ``ball:<r>``, ``clover:<delta>``, ``petal:<amp>``,
    ``annulus:<rin>:<rout>``."""
    parts = sid.split(":")
    try:
        if sid == "whole":
            return whole_space(dim)
        if parts[0] == "ball" and len(parts) == 2:
            return ball(np.zeros(dim), float(parts[1]))
        if parts[0] == "clover":
            return clover_set(float(parts[1]) if len(parts) > 1 else 10.0)
        if parts[0] == "petal":
            return petal_set(float(parts[1]) if len(parts) > 1 else 0.5)
        if parts[0] == "annulus" and len(parts) == 3:
            return annulus(float(parts[1]), float(parts[2]), np.array([0.5 * (float(parts[1]) + float(parts[2])), 0.0]))
    except ValueError as exc:
        raise UsageError(f"malformed set id {sid!r}: {exc}") from exc
    raise UsageError(f"unknown set id {sid!r}")
