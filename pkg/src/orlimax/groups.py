"""Concrete homogeneous groups: Euclidean R^n and the first Heisenberg group.

Points are identified with their exponential coordinates and stored as plain
float arrays; the Haar measure is Lebesgue measure in these coordinates.
Each group carries anisotropic dilations, a dilation-homogeneous gauge rho,
and power-law ball volumes |B(x, r)| = c1 * r**Q, where Q is the homogeneous
dimension (the sum of the dilation weights).

The gauge for Heisenberg1 is the Koranyi-type norm
``rho(x, y, t) = ((x**2 + y**2)**2 + t**2) ** 0.25``, which satisfies the
triangle inequality exactly (quasi-triangle constant 1); the Euclidean gauge
is the ordinary length. The constants ``c1`` (unit-ball volume) and ``c0``
(quasi-triangle constant) are calibrated numerically per group instance and
cached on the spec rather than hardcoded, so swapping the gauge only
requires re-calibration.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

__all__ = [
    "EUCLIDEAN",
    "HEISENBERG1",
    "GroupSpec",
    "Ball",
    "euclidean",
    "heisenberg1",
    "identity",
    "group_mul",
    "group_inv",
    "dilate",
    "hom_norm",
    "ball_contains",
    "ball_volume",
    "calibrate_constants",
    "membership_window",
]

EUCLIDEAN = "euclidean"
HEISENBERG1 = "heisenberg1"


@dataclass(frozen=True)
class GroupSpec:
    """A homogeneous group instance.

    ``c1``/``c0`` start out unset and are filled in by
    :func:`calibrate_constants`; operations that need them raise until then.
    """

    kind: str
    coord_dim: int
    Q: int
    dilation_weights: tuple[int, ...]
    c1: float | None = None
    c0: float | None = None
    calibration_resolution: int | None = None
    c0_samples: int | None = None

    def __post_init__(self):
        if self.kind not in (EUCLIDEAN, HEISENBERG1):
            raise ValueError(f"unknown group kind {self.kind!r}")
        if len(self.dilation_weights) != self.coord_dim:
            raise ValueError("one dilation weight per coordinate required")
        if self.Q != sum(self.dilation_weights):
            raise ValueError(
                f"homogeneous dimension {self.Q} does not match "
                f"dilation weights {self.dilation_weights}"
            )
        if self.c1 is not None and not self.c1 > 0:
            raise ValueError("c1 must be positive")
        if self.c0 is not None and not self.c0 >= 1:
            raise ValueError("c0 must be >= 1")

    @property
    def calibrated(self) -> bool:
        return self.c1 is not None and self.c0 is not None


def euclidean(n: int) -> GroupSpec:
    """Euclidean R^n with vector addition and isotropic dilations."""
    if n < 1:
        raise ValueError("dimension must be >= 1")
    return GroupSpec(EUCLIDEAN, n, n, (1,) * n)


def heisenberg1() -> GroupSpec:
    """The first Heisenberg group in exponential coordinates (x, y, t)."""
    return GroupSpec(HEISENBERG1, 3, 4, (1, 1, 2))


def identity(spec: GroupSpec) -> np.ndarray:
    return np.zeros(spec.coord_dim)


def _check_dim(g: np.ndarray, spec: GroupSpec, who: str) -> np.ndarray:
    g = np.asarray(g, dtype=float)
    if g.shape[-1:] != (spec.coord_dim,):
        raise ValueError(
            f"{who}: expected last axis of length {spec.coord_dim}, "
            f"got shape {g.shape}"
        )
    return g


def group_mul(g, h, spec: GroupSpec) -> np.ndarray:
    """Group product; vectorized over leading axes.

    Heisenberg1 law in exponential coordinates:
    (x, y, t) * (x', y', t') = (x + x', y + y', t + t' + (x y' - y x')/2).
    """
    g = _check_dim(g, spec, "group_mul")
    h = _check_dim(h, spec, "group_mul")
    if spec.kind == EUCLIDEAN:
        return g + h
    out = g + h
    out[..., 2] += 0.5 * (g[..., 0] * h[..., 1] - g[..., 1] * h[..., 0])
    return out


def group_inv(g, spec: GroupSpec) -> np.ndarray:
    """Group inverse: negation of exponential coordinates (2-step nilpotent)."""
    g = _check_dim(g, spec, "group_inv")
    return -g


def dilate(g, s: float, spec: GroupSpec) -> np.ndarray:
    """Anisotropic dilation: coordinate i is scaled by s**weight_i."""
    if not s > 0:
        raise ValueError(f"dilation factor must be positive, got {s}")
    g = _check_dim(g, spec, "dilate")
    w = np.asarray(spec.dilation_weights, dtype=float)
    return g * (float(s) ** w)


def hom_norm(g, spec: GroupSpec) -> np.ndarray:
    """Homogeneous gauge rho; vectorized over leading axes."""
    g = _check_dim(g, spec, "hom_norm")
    if spec.kind == EUCLIDEAN:
        return np.sqrt(np.sum(g * g, axis=-1))
    sq = g[..., 0] * g[..., 0] + g[..., 1] * g[..., 1]
    return (sq * sq + g[..., 2] * g[..., 2]) ** 0.25


@dataclass(frozen=True)
class Ball:
    """Open gauge ball {y : rho(y^-1 x) < radius} centered at x."""

    center: tuple[float, ...]
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError(f"ball radius must be positive, got {self.radius}")
        center = tuple(float(c) for c in self.center)
        if not all(np.isfinite(center)):
            raise ValueError("ball center must be finite")
        object.__setattr__(self, "center", center)

    def center_array(self) -> np.ndarray:
        return np.asarray(self.center, dtype=float)


def ball_contains(ball: Ball, g, spec: GroupSpec) -> np.ndarray:
    """Strict membership test; vectorized over leading axes of ``g``."""
    g = _check_dim(g, spec, "ball_contains")
    c = ball.center_array()
    if c.shape != (spec.coord_dim,):
        raise ValueError("ball center dimension does not match group")
    return hom_norm(group_mul(group_inv(g, spec), c, spec), spec) < ball.radius


def ball_volume(ball: Ball, spec: GroupSpec) -> float:
    """Haar volume c1 * r**Q; requires a calibrated c1."""
    if spec.c1 is None:
        raise ValueError("c1 not calibrated; run calibrate_constants first")
    return spec.c1 * ball.radius**spec.Q


def membership_window(ball: Ball, spec: GroupSpec) -> tuple[np.ndarray, np.ndarray]:
    """Per-coordinate bounds guaranteed to contain every point of the ball.

    Used by the pruned membership kernels: any y with rho(y^-1 x) < r has
    weight-1 coordinates within r of the center. For Heisenberg1 the
    t-coordinate window also absorbs the group-law twist, bounded by
    ``r**2 + (|x| + |y|) r / 2`` at center (x, y, t). Windows are inflated
    by a small pad so float rounding can never drop a true member.
    """
    c = ball.center_array()
    r = ball.radius
    pad = 1e-9 * (1.0 + float(np.max(np.abs(c))) + r)
    if spec.kind == EUCLIDEAN:
        half = np.full(spec.coord_dim, r)
    else:
        t_half = r * r + 0.5 * (abs(c[0]) + abs(c[1])) * r
        half = np.array([r, r, t_half])
    return c - half - pad, c + half + pad


def calibrate_constants(
    spec: GroupSpec,
    resolution: int = 257,
    pair_samples: int = 20000,
    seed: int = 0,
) -> GroupSpec:
    """Populate c1 and c0 by quadrature and sampled-pair maximization.

    c1 is the node-counting measure of the unit ball on a ``resolution``
    per-axis lattice over its bounding box. c0 is the largest sampled value
    of rho(gh) / (rho(g) + rho(h)), clipped to >= 1; for Euclidean groups it
    is exactly 1. The sample set always includes aligned horizontal pairs,
    which attain the sharp constant for both built-in gauges.
    """
    if resolution < 32:
        raise ValueError(f"calibration resolution must be >= 32, got {resolution}")
    # the unit ball has |coordinate| <= 1 for weight-1 and weight-2 axes alike
    axes = [np.linspace(-1.0, 1.0, resolution) for _ in spec.dilation_weights]
    mesh = np.meshgrid(*axes, indexing="ij")
    nodes = np.stack([m.ravel() for m in mesh], axis=-1)
    cell = float(np.prod([a[1] - a[0] for a in axes]))
    inside = hom_norm(nodes, spec) < 1.0
    c1 = float(np.count_nonzero(inside)) * cell

    if spec.kind == EUCLIDEAN:
        c0 = 1.0
        n_pairs = 0
    else:
        rng = np.random.Generator(np.random.Philox(key=seed))
        g = rng.uniform(-1.0, 1.0, size=(pair_samples, spec.coord_dim))
        h = rng.uniform(-1.0, 1.0, size=(pair_samples, spec.coord_dim))
        # aligned horizontal pairs attain ratio 1 exactly for the Koranyi gauge
        ax = np.zeros((2, spec.coord_dim))
        ax[0, 0] = 1.0
        ax[1, 0] = 2.0
        g = np.concatenate([g, ax[:1]])
        h = np.concatenate([h, ax[1:]])
        num = hom_norm(group_mul(g, h, spec), spec)
        den = hom_norm(g, spec) + hom_norm(h, spec)
        ok = den > 0
        c0 = max(1.0, float(np.max(num[ok] / den[ok])))
        n_pairs = int(np.count_nonzero(ok))

    return replace(
        spec,
        c1=c1,
        c0=c0,
        calibration_resolution=resolution,
        c0_samples=n_pairs,
    )
