"""Deterministic sample streams for the property checkers."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import qmc

from .errors import ContractViolation

BOUNDARY_EVERY = 10
MAX_INSET = 0.02


@dataclass(frozen=True)
class SamplePlan:
    seed: int = 0
    n_points: int = 2000
    box: tuple[tuple[float, ...], tuple[float, ...]] = ((-3.0,), (3.0,))
    n_lambdas: int = 16

    def __post_init__(self):
        if self.n_points < 1 or self.n_lambdas < 1:
            raise ContractViolation("n_points and n_lambdas must be positive")
        lo, hi = self.box
        if len(lo) != len(hi) or any(a > b for a, b in zip(lo, hi)):
            raise ContractViolation("malformed box")

    @property
    def dim(self) -> int:
        return len(self.box[0])

    def points(self) -> np.ndarray:
        """Scrambled Halton points in the box; every 10th point is pushed onto a face.

        The stream is prefix-stable: a plan with more points extends, never
        changes, the points of a smaller plan with the same seed.
        """
        lo = np.asarray(self.box[0], dtype=float)
        hi = np.asarray(self.box[1], dtype=float)
        d = self.dim
        sampler = qmc.Halton(d=d, scramble=True, seed=np.random.default_rng(self.seed))
        P = lo + sampler.random(self.n_points) * (hi - lo)
        # one row of uniforms per point keeps the face choice independent of n_points
        u = np.random.default_rng([self.seed, 1]).random((self.n_points, 3))
        idx = np.arange(BOUNDARY_EVERY - 1, self.n_points, BOUNDARY_EVERY)
        if idx.size:
            axis = np.minimum((u[idx, 0] * d).astype(int), d - 1)
            width = hi[axis] - lo[axis]
            inset = MAX_INSET * u[idx, 2] * width
            P[idx, axis] = np.where(u[idx, 1] < 0.5, lo[axis] + inset, hi[axis] - inset)
        return P

    def lambdas(self, interior_only: bool = False) -> np.ndarray:
        """Equispaced interior weights j/(n+1), plus the anchors 0 and 1."""
        inner = np.arange(1, self.n_lambdas + 1) / (self.n_lambdas + 1)
        if interior_only:
            return inner
        return np.concatenate([[0.0], inner, [1.0]])

    def rng(self, stream: int = 0) -> np.random.Generator:
        return np.random.default_rng([self.seed, 100 + stream])


def plan_for(f, seed: int = 0, n_points: int = 2000, n_lambdas: int = 16) -> SamplePlan:
    """A plan over ``f.eval_box`` (or [-3, 3]^n when the function declares none)."""
    if f.eval_box is not None:
        lo, hi = f.eval_box
    else:
        lo, hi = np.full(f.dim, -3.0), np.full(f.dim, 3.0)
    return SamplePlan(
        seed=seed,
        n_points=n_points,
        box=(tuple(float(v) for v in lo), tuple(float(v) for v in hi)),
        n_lambdas=n_lambdas,
    )
