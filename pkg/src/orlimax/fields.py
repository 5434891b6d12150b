"""Scalar fields sampled on rectangular coordinate grids with Haar quadrature.

Nodes are the tensor product of per-axis linspaces, flattened in C order
(lexicographic over axis indices); every node carries the same quadrature
weight ``cell_volume = prod((hi - lo) / (n - 1))``. All reductions run over
ascending node index, which makes integrals reproducible bit-for-bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .groups import Ball, GroupSpec, ball_contains

__all__ = [
    "GridSpec",
    "SampledField",
    "RegionMask",
    "sample",
    "mask_from_ball",
    "whole_box",
    "integrate",
    "average_over",
    "distribution_function",
    "combine",
    "pos_part",
    "neg_part",
]


@dataclass(frozen=True)
class GridSpec:
    """Rectangular node lattice in the group's exponential coordinates."""

    group: GroupSpec
    lo: tuple[float, ...]
    hi: tuple[float, ...]
    shape: tuple[int, ...]

    def __post_init__(self):
        lo = tuple(float(v) for v in self.lo)
        hi = tuple(float(v) for v in self.hi)
        shape = tuple(int(n) for n in self.shape)
        if not (len(lo) == len(hi) == len(shape) == self.group.coord_dim):
            raise ValueError("grid box must match the group coordinate dimension")
        if any(a >= b for a, b in zip(lo, hi)):
            raise ValueError("grid box must satisfy lo < hi componentwise")
        if any(n < 3 for n in shape):
            raise ValueError("need at least 3 points per axis")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        object.__setattr__(self, "shape", shape)

    @property
    def ndim(self) -> int:
        return len(self.shape)

    @property
    def n_nodes(self) -> int:
        return int(np.prod(self.shape))

    @cached_property
    def axes(self) -> tuple[np.ndarray, ...]:
        return tuple(
            np.linspace(a, b, n) for a, b, n in zip(self.lo, self.hi, self.shape)
        )

    @cached_property
    def spacing(self) -> tuple[float, ...]:
        return tuple(
            (b - a) / (n - 1) for a, b, n in zip(self.lo, self.hi, self.shape)
        )

    @property
    def cell_volume(self) -> float:
        return float(np.prod(self.spacing))

    @cached_property
    def nodes(self) -> np.ndarray:
        """(n_nodes, ndim) array of node coordinates in C (lexicographic) order."""
        mesh = np.meshgrid(*self.axes, indexing="ij")
        pts = np.stack([m.ravel() for m in mesh], axis=-1)
        pts.flags.writeable = False
        return pts

    def axis_window(self, axis: int, lo: float, hi: float) -> tuple[int, int]:
        """Index half-open range [a, b) of axis nodes inside [lo, hi]."""
        ax = self.axes[axis]
        a = int(np.searchsorted(ax, lo, side="left"))
        b = int(np.searchsorted(ax, hi, side="right"))
        return a, b

    def box_flat_indices(self, windows: list[tuple[int, int]]) -> np.ndarray:
        """Ascending flat indices of the sub-box given per-axis index ranges."""
        ranges = [np.arange(a, b) for a, b in windows]
        if any(r.size == 0 for r in ranges):
            return np.empty(0, dtype=np.intp)
        flat = ranges[0]
        for n, r in zip(self.shape[1:], ranges[1:]):
            flat = (flat[:, None] * n + r[None, :]).ravel()
        return flat

    def descriptor(self) -> str:
        """One-line grid descriptor used in field CSV headers."""
        lo = ",".join(repr(v) for v in self.lo)
        hi = ",".join(repr(v) for v in self.hi)
        shape = ",".join(str(n) for n in self.shape)
        return f"group={self.group.kind};dim={self.group.coord_dim};lo={lo};hi={hi};shape={shape}"


@dataclass(frozen=True, eq=False)
class SampledField:
    """Finite real values, one per grid node, in node order."""

    grid: GridSpec
    values: np.ndarray

    def __post_init__(self):
        vals = np.ascontiguousarray(self.values, dtype=float)
        if vals.shape != (self.grid.n_nodes,):
            raise ValueError(
                f"expected {self.grid.n_nodes} values, got shape {vals.shape}"
            )
        if not np.all(np.isfinite(vals)):
            bad = int(np.flatnonzero(~np.isfinite(vals))[0])
            raise ValueError(
                f"non-finite field value at node {bad}, "
                f"coordinates {tuple(self.grid.nodes[bad])}"
            )
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)


@dataclass(frozen=True, eq=False)
class RegionMask:
    """Node subset with its quadrature measure."""

    grid: GridSpec
    member: np.ndarray

    def __post_init__(self):
        member = np.ascontiguousarray(self.member, dtype=bool)
        if member.shape != (self.grid.n_nodes,):
            raise ValueError("mask length must equal the node count")
        member.flags.writeable = False
        object.__setattr__(self, "member", member)

    @cached_property
    def indices(self) -> np.ndarray:
        idx = np.flatnonzero(self.member)
        idx.flags.writeable = False
        return idx

    @property
    def measure(self) -> float:
        return self.indices.size * self.grid.cell_volume


def sample(fn, grid: GridSpec) -> SampledField:
    """Evaluate ``fn`` at the grid nodes.

    ``fn`` receives the full (n_nodes, ndim) coordinate array and must return
    one finite value per node; a scalar-only callable can be wrapped with
    ``np.apply_along_axis`` by the caller.
    """
    vals = np.asarray(fn(grid.nodes), dtype=float)
    if vals.shape != (grid.n_nodes,):
        raise ValueError(f"sampler returned shape {vals.shape}")
    if not np.all(np.isfinite(vals)):
        bad = int(np.flatnonzero(~np.isfinite(vals))[0])
        raise ValueError(
            f"sampler produced a non-finite value at node {bad}, "
            f"coordinates {tuple(grid.nodes[bad])}"
        )
    return SampledField(grid, vals)


def mask_from_ball(ball: Ball, grid: GridSpec) -> RegionMask:
    member = ball_contains(ball, grid.nodes, grid.group)
    return RegionMask(grid, member)


def whole_box(grid: GridSpec) -> RegionMask:
    return RegionMask(grid, np.ones(grid.n_nodes, dtype=bool))


def _same_grid(f: SampledField, other) -> None:
    if f.grid is not other.grid and f.grid != other.grid:
        raise ValueError("operands live on different grids")


def integrate(f: SampledField, region: RegionMask) -> float:
    """Riemann sum over the region, summed in ascending node order."""
    _same_grid(f, region)
    return float(np.sum(f.values[region.indices]) * f.grid.cell_volume)


def average_over(f: SampledField, region: RegionMask) -> float:
    """Mean of f over the region, clamped into [min, max] of f there.

    The clamp removes summation round-off, so the average of a constant
    field is that constant exactly.
    """
    if region.indices.size == 0:
        raise ValueError("cannot average over a zero-measure region")
    _same_grid(f, region)
    vals = f.values[region.indices]
    raw = float(np.sum(vals)) / vals.size
    return float(min(max(raw, vals.min()), vals.max()))


def distribution_function(f: SampledField, region: RegionMask, t: float) -> float:
    """Measure of the strict super-level set {x in region : |f(x)| > t}."""
    if t < 0:
        raise ValueError("level must be nonnegative")
    _same_grid(f, region)
    n = int(np.count_nonzero(np.abs(f.values[region.indices]) > t))
    return n * f.grid.cell_volume


def combine(
    f: SampledField,
    op: str,
    g: SampledField | None = None,
    c: float | None = None,
) -> SampledField:
    """Nodewise combinator: add | sub | mul | abs | scale | pos_part | neg_part."""
    if op in ("add", "sub", "mul"):
        if g is None:
            raise ValueError(f"{op} needs a second field")
        _same_grid(f, g)
        arith = {"add": np.add, "sub": np.subtract, "mul": np.multiply}[op]
        return SampledField(f.grid, arith(f.values, g.values))
    if op == "abs":
        return SampledField(f.grid, np.abs(f.values))
    if op == "scale":
        if c is None:
            raise ValueError("scale needs a constant")
        return SampledField(f.grid, f.values * float(c))
    if op == "pos_part":
        return pos_part(f)
    if op == "neg_part":
        return neg_part(f)
    raise ValueError(f"unknown combine op {op!r}")


def neg_part(f: SampledField) -> SampledField:
    """|f| where f < 0, else 0."""
    return SampledField(f.grid, np.where(f.values < 0, -f.values, 0.0))


def pos_part(f: SampledField) -> SampledField:
    """f where f >= 0, else 0; satisfies pos - neg = f and pos * neg = 0."""
    return SampledField(f.grid, np.where(f.values < 0, 0.0, f.values))
