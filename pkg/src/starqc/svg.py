"""Static SVG of planar sublevel boundaries and solver trajectories."""

from __future__ import annotations

import numpy as np

from .errors import UnsupportedDimensionError
from .func_zoo import ObjectiveFunction
from .sets import sublevel_radial

VIEW = 4.0
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def radial_profile(f: ObjectiveFunction, delta: float, n_angles: int = 360) -> tuple[np.ndarray, np.ndarray]:
    """Angles and boundary radii r(theta) = sup{t : h(xbar + t u) <= delta}."""
    if f.dim != 2:
        raise UnsupportedDimensionError(f"plots need dim 2, {f.name} has dim {f.dim}")
    K = sublevel_radial(f, delta)
    th = 2.0 * np.pi * np.arange(n_angles) / n_angles
    U = np.column_stack([np.cos(th), np.sin(th)])
    return th, K.radial(U)


def _pts(P: np.ndarray) -> str:
    return " ".join(f"{x:.6f},{y:.6f}" for x, y in P)


def render(
    boundaries: list[tuple[str, np.ndarray]],
    trajectory: np.ndarray | None = None,
    title: str = "",
) -> str:
    """SVG text; world frame [-4, 4]^2 with y pointing up."""
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{-VIEW:g} {-VIEW:g} {2 * VIEW:g} {2 * VIEW:g}" '
        'width="480" height="480">',
    ]
    if title:
        out.append(f"<title>{title}</title>")
    out.append('<g transform="scale(1,-1)" fill="none" stroke-width="0.02">')
    out.append(
        f'<path d="M{-VIEW:g},0 L{VIEW:g},0 M0,{-VIEW:g} L0,{VIEW:g}" stroke="#bbbbbb" stroke-width="0.01"/>'
    )
    for i, (label, P) in enumerate(boundaries):
        color = PALETTE[i % len(PALETTE)]
        out.append(f'<polygon class="sublevel" data-label="{label}" stroke="{color}" points="{_pts(P)}"/>')
    if trajectory is not None and len(trajectory):
        T = np.asarray(trajectory, dtype=float)[:, :2]
        out.append(f'<polyline class="trajectory" stroke="#000000" points="{_pts(T)}"/>')
        out.append(f'<circle cx="{T[-1, 0]:.6f}" cy="{T[-1, 1]:.6f}" r="0.04" fill="#000000"/>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def sublevel_svg(
    f: ObjectiveFunction,
    deltas,
    trajectory: np.ndarray | None = None,
    n_angles: int = 360,
) -> str:
    xbar = np.asarray(f.minimizer if f.minimizer is not None else np.zeros(2), dtype=float)
    boundaries = []
    for d in deltas:
        th, r = radial_profile(f, d, n_angles)
        P = xbar + r[:, None] * np.column_stack([np.cos(th), np.sin(th)])
        boundaries.append((f"delta={d:g}", P))
    if trajectory is not None and np.asarray(trajectory).shape[1] != 2:
        raise UnsupportedDimensionError("trajectory must be planar")
    return render(boundaries, trajectory, title=f.name)
