"""Finite families of candidate balls for the discrete maximal operators.

Suprema over "all balls containing x" are approximated by a finite family:
centers on a strided sub-lattice of the grid crossed with a geometric radius
ladder, plus *distinguished* balls inserted verbatim so that identity tests
(indicator inputs, local maximal functions) close exactly, plus an optional
*cover ball* large enough to contain every grid node so no node is left
without a candidate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fields import GridSpec
from .groups import Ball, group_inv, group_mul, hom_norm

__all__ = [
    "BallFamily",
    "build_ball_family",
    "with_distinguished",
    "cover_ball_for",
    "close_family_over_1d",
]


@dataclass(frozen=True)
class BallFamily:
    balls: tuple[Ball, ...]
    centers_stride: int
    radii: tuple[float, ...]
    distinguished: tuple[int, ...] = ()
    cover_index: int | None = None

    def __post_init__(self):
        if len(self.balls) == 0:
            raise ValueError("ball family must be nonempty")
        if any(not b.radius > 0 for b in self.balls):
            raise ValueError("all radii must be positive")
        n = len(self.balls)
        if any(not 0 <= k < n for k in self.distinguished):
            raise ValueError("distinguished index out of range")
        if self.cover_index is not None and not 0 <= self.cover_index < n:
            raise ValueError("cover index out of range")

    def __len__(self) -> int:
        return len(self.balls)

    def distinguished_balls(self) -> tuple[Ball, ...]:
        return tuple(self.balls[k] for k in self.distinguished)


def cover_ball_for(grid: GridSpec) -> Ball:
    """A ball centered at the box midpoint containing every grid node."""
    center = np.array([(a + b) / 2.0 for a, b in zip(grid.lo, grid.hi)])
    gauges = hom_norm(
        group_mul(group_inv(grid.nodes, grid.group), center, grid.group),
        grid.group,
    )
    radius = float(np.max(gauges)) * (1.0 + 1e-9) + 1e-12
    return Ball(tuple(center), radius)


def default_radius_ladder(
    grid: GridSpec, r_min: float | None = None, ratio: float = math.sqrt(2.0)
) -> tuple[float, ...]:
    """Geometric radii from a couple of cells up to the box gauge diameter."""
    if r_min is None:
        r_min = 2.0 * max(
            h ** (1.0 / w)
            for h, w in zip(grid.spacing, grid.group.dilation_weights)
        )
    r_max = cover_ball_for(grid).radius
    if r_min >= r_max:
        return (r_min,)
    count = int(math.floor(math.log(r_max / r_min) / math.log(ratio))) + 1
    return tuple(r_min * ratio**j for j in range(count))


def build_ball_family(
    grid: GridSpec,
    centers_stride: int = 4,
    r_min: float | None = None,
    ratio: float = math.sqrt(2.0),
    count: int | None = None,
    distinguished: tuple[Ball, ...] = (),
    cover: bool = False,
) -> BallFamily:
    """Centers on every ``centers_stride``-th node per axis, geometric radii."""
    if centers_stride < 1:
        raise ValueError("stride must be >= 1")
    radii = default_radius_ladder(grid, r_min=r_min, ratio=ratio)
    if count is not None:
        radii = radii[:count] if count <= len(radii) else radii + tuple(
            radii[-1] * ratio ** (j + 1) for j in range(count - len(radii))
        )
    sub = [np.arange(0, n, centers_stride) for n in grid.shape]
    mesh = np.meshgrid(*[grid.axes[i][s] for i, s in enumerate(sub)], indexing="ij")
    centers = np.stack([m.ravel() for m in mesh], axis=-1)
    balls = [
        Ball(tuple(c), r) for c in centers for r in radii
    ]
    dist_idx = []
    for b in distinguished:
        balls.append(b)
        dist_idx.append(len(balls) - 1)
    cover_index = None
    if cover:
        balls.append(cover_ball_for(grid))
        cover_index = len(balls) - 1
    return BallFamily(
        tuple(balls),
        centers_stride,
        tuple(radii),
        tuple(dist_idx),
        cover_index,
    )


def with_distinguished(fam: BallFamily, extra: tuple[Ball, ...]) -> BallFamily:
    """New family with ``extra`` balls appended and marked distinguished."""
    balls = list(fam.balls)
    dist = list(fam.distinguished)
    for b in extra:
        balls.append(b)
        dist.append(len(balls) - 1)
    return BallFamily(
        tuple(balls), fam.centers_stride, fam.radii, tuple(dist), fam.cover_index
    )


def close_family_over_1d(fam: BallFamily, ball0: Ball, grid: GridSpec) -> BallFamily:
    """Make a 1-d family subset-closed over ``ball0``.

    For every family ball, the node set it shares with ``ball0`` is a run of
    consecutive nodes; a ball realizing exactly that run is appended (as
    distinguished). With the closed family, the local maximal function over
    ``ball0`` agrees with the global one applied to the truncated field at
    every node of ``ball0``.
    """
    if grid.ndim != 1:
        raise ValueError("subset closure is implemented for 1-d grids only")
    from .maximal import ball_members  # local import to avoid a cycle

    axis = grid.axes[0]
    h = grid.spacing[0]
    m0 = ball_members(grid, ball0)
    if m0.size == 0:
        raise ValueError("ball0 contains no grid node")
    runs = set()
    for b in fam.balls + (ball0,):
        mk = ball_members(grid, b)
        inter = np.intersect1d(mk, m0, assume_unique=True)
        if inter.size:
            runs.add((int(inter[0]), int(inter[-1])))
    extra = []
    known = {(b.center, b.radius) for b in fam.balls}
    for i, j in sorted(runs):
        center = (0.5 * (axis[i] + axis[j]),)
        radius = 0.5 * (axis[j] - axis[i]) + 0.5 * h
        if (center, radius) not in known:
            extra.append(Ball(center, radius))
            known.add((center, radius))
    return with_distinguished(fam, tuple(extra))
