"""Seeded test-field generators.

All randomness flows from one integer seed through named Philox streams
(counter-based, platform-stable): the stream for a purpose is keyed by a
hash of ``"{seed}:{label}"``, so corpora are reproducible and independent
of generation order.
"""

from __future__ import annotations

import hashlib

import numpy as np

from .family import cover_ball_for
from .fields import GridSpec, SampledField, sample
from .groups import Ball, hom_norm

__all__ = ["rng_for", "make_field", "make_corpus", "default_indicator_ball"]


def rng_for(seed: int, label: str) -> np.random.Generator:
    digest = hashlib.sha256(f"{seed}:{label}".encode()).digest()
    key = int.from_bytes(digest[:16], "little")
    return np.random.Generator(np.random.Philox(key=key))


def default_indicator_ball(grid: GridSpec, fraction: float = 1.0 / 6.0) -> Ball:
    """Ball at the box center with radius a fraction of the cover radius."""
    cover = cover_ball_for(grid)
    return Ball(cover.center, cover.radius * fraction)


def _gauge(grid: GridSpec) -> np.ndarray:
    return hom_norm(grid.nodes, grid.group)


def _min_gauge_cell(grid: GridSpec) -> float:
    return min(
        h ** (1.0 / w)
        for h, w in zip(grid.spacing, grid.group.dilation_weights)
    )


def make_field(tag: str, grid: GridSpec, seed: int = 0) -> SampledField:
    """Build one corpus field from a generator tag.

    Tags (parameters after a colon): ``constant[:c]``, ``indicator[:r]``,
    ``gauge-power:beta``, ``neg-gauge-power:beta``, ``log-gauge``,
    ``random-smooth``, ``step[:frac]``.
    """
    name, _, arg = tag.partition(":")
    if name == "constant":
        c = float(arg) if arg else 1.0
        return SampledField(grid, np.full(grid.n_nodes, c))
    if name == "indicator":
        ball = (
            Ball(default_indicator_ball(grid).center, float(arg))
            if arg
            else default_indicator_ball(grid)
        )
        from .fields import mask_from_ball

        return SampledField(grid, mask_from_ball(ball, grid).member.astype(float))
    if name in ("gauge-power", "neg-gauge-power"):
        beta = float(arg) if arg else 0.5
        vals = _gauge(grid) ** beta
        return SampledField(grid, -vals if name.startswith("neg") else vals)
    if name == "log-gauge":
        floor = _min_gauge_cell(grid)
        return SampledField(grid, np.log1p(1.0 / np.maximum(_gauge(grid), floor)))
    if name == "random-smooth":
        rng = rng_for(seed, f"random-smooth:{tag}")
        extent = np.array([b - a for a, b in zip(grid.lo, grid.hi)])
        freqs = rng.integers(1, 4, size=(6, grid.ndim))
        phases = rng.uniform(0, 2 * np.pi, size=6)
        amps = rng.uniform(0.2, 1.0, size=6)

        def fn(pts):
            out = np.zeros(pts.shape[0])
            for w, ph, a in zip(freqs, phases, amps):
                arg_ = 2 * np.pi * (pts @ (w / extent)) + ph
                out += a * np.cos(arg_)
            return out

        return sample(fn, grid)
    if name == "step":
        frac = float(arg) if arg else 0.5
        lo, hi = grid.lo[0], grid.hi[0]
        h = grid.spacing[0]
        # snap the jump halfway between two nodes so balls straddle it cleanly
        base = lo + frac * (hi - lo)
        k = int(np.clip(round((base - lo) / h), 0, grid.shape[0] - 2))
        jump = lo + (k + 0.5) * h
        return SampledField(grid, (grid.nodes[:, 0] >= jump).astype(float))
    raise ValueError(f"unknown corpus tag {tag!r}")


def make_corpus(
    grid: GridSpec, tags: list[str], seed: int = 0
) -> list[tuple[str, SampledField]]:
    return [(tag, make_field(tag, grid, seed)) for tag in tags]
