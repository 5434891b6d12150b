"""Discrete maximal operators over a finite ball family, fast and reference.

Every operator takes, at each output node, the maximum of a per-ball
candidate value over the family balls containing that node. The *fast*
kernels find ball members through per-axis bounding windows and reuse
per-ball quantities across output nodes; the *oracle* kernels run the
textbook double loop over (node, ball) pairs with a fresh full-grid member
scan for every pair and no pruning.

Both paths compute each candidate with the same helper on the same member
index array (ascending node order), so their outputs agree bit for bit:
pruning only changes which pairs are *examined*, never the arithmetic.

Candidate values (cell = quadrature cell volume, m = member indices,
measure = len(m) * cell, 0 <= alpha < Q):

* fractional maximal:  measure**(alpha/Q - 1) * sum(|f|[m]) * cell
* sharp maximal:       mean over m of |f - f_ball| with the clamped ball mean
* maximal commutator:  measure**(alpha/Q - 1) * sum(|b(x)-b[m]| * |f|[m]) * cell

The nonlinear commutators are nodewise combinations of the above:
``b * M_a f - M_a(b f)`` and ``b * M# f - M#(b f)``.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .family import BallFamily
from .fields import GridSpec, SampledField
from .groups import Ball, ball_contains, membership_window

__all__ = [
    "CoverageError",
    "OperatorParams",
    "ball_members",
    "BoundFamily",
    "bind_family",
    "fractional_maximal",
    "local_maximal",
    "sharp_maximal",
    "maximal_commutator",
    "commutator_maximal",
    "commutator_sharp",
    "oracle_fractional_maximal",
    "oracle_sharp_maximal",
    "oracle_maximal_commutator",
    "oracle_commutator_maximal",
    "oracle_commutator_sharp",
    "OPERATOR_TAGS",
    "apply_operator",
]

_ROW_CHUNK = 256


class CoverageError(RuntimeError):
    """A node lies in no family ball (and no cover ball is configured)."""


@dataclass(frozen=True)
class OperatorParams:
    alpha: float = 0.0
    beta: float | None = None

    def validate(self, Q: int) -> None:
        if not 0 <= self.alpha < Q:
            raise ValueError(f"alpha must lie in [0, {Q}), got {self.alpha}")
        if self.beta is not None and not 0 < self.beta < 1:
            raise ValueError(f"beta must lie in (0, 1), got {self.beta}")


def ball_members(grid: GridSpec, ball: Ball, pruned: bool = True) -> np.ndarray:
    """Ascending flat indices of the nodes strictly inside the ball."""
    if pruned:
        lo, hi = membership_window(ball, grid.group)
        windows = [grid.axis_window(i, lo[i], hi[i]) for i in range(grid.ndim)]
        cand = grid.box_flat_indices(windows)
        if cand.size == 0:
            return cand
        inside = ball_contains(ball, grid.nodes[cand], grid.group)
        return cand[inside]
    return np.flatnonzero(ball_contains(ball, grid.nodes, grid.group))


class BoundFamily:
    """A family with members resolved once against a fixed grid."""

    def __init__(self, family: BallFamily, grid: GridSpec):
        self.family = family
        self.grid = grid
        self.members = [ball_members(grid, b) for b in family.balls]
        self.sizes = np.array([m.size for m in self.members])

    def __len__(self) -> int:
        return len(self.family.balls)


def bind_family(family, grid: GridSpec) -> BoundFamily:
    if isinstance(family, BoundFamily):
        if family.grid is not grid and family.grid != grid:
            raise ValueError("bound family belongs to a different grid")
        return family
    return BoundFamily(family, grid)


def _avg_candidate(absf: np.ndarray, m: np.ndarray, coeff: float, cell: float) -> float:
    return coeff * (np.sum(absf[m]) * cell)


def _clamped_mean(vals: np.ndarray) -> float:
    raw = float(np.sum(vals)) / vals.size
    return float(min(max(raw, vals.min()), vals.max()))


def _osc_candidate(fvals: np.ndarray, m: np.ndarray, cell: float) -> float:
    fm = fvals[m]
    measure = m.size * cell
    f_ball = _clamped_mean(fm)
    return (np.sum(np.abs(fm - f_ball)) * cell) / measure


def _comm_candidate(
    b_at_x: float, b_m: np.ndarray, w_m: np.ndarray, coeff: float, cell: float
) -> float:
    return coeff * (np.sum(np.abs(b_at_x - b_m) * w_m) * cell)


def _raise_uncovered(grid: GridSpec, covered: np.ndarray) -> None:
    bad = int(np.flatnonzero(~covered)[0])
    raise CoverageError(
        f"node {bad} at {tuple(grid.nodes[bad])} lies in no family ball; "
        "add a cover ball to the family"
    )


def _merge_parts(parts):
    out, covered = parts[0]
    for o, c in parts[1:]:
        np.maximum(out, o, out=out)
        covered |= c
    return out, covered


def _scatter_run(grid, bound, ball_ids, absf, expo):
    cell = grid.cell_volume
    out = np.full(grid.n_nodes, -np.inf)
    covered = np.zeros(grid.n_nodes, dtype=bool)
    for k in ball_ids:
        m = bound.members[k]
        if m.size == 0:
            continue
        measure = m.size * cell
        val = _avg_candidate(absf, m, measure**expo, cell)
        out[m] = np.maximum(out[m], val)
        covered[m] = True
    return out, covered


def _run_balls(grid, bound, worker, threads: int):
    ids = range(len(bound))
    if threads <= 1:
        parts = [worker(list(ids))]
    else:
        slices = np.array_split(np.fromiter(ids, dtype=int), threads)
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(worker, [s.tolist() for s in slices]))
    return _merge_parts(parts)


def fractional_maximal(
    f: SampledField,
    family,
    alpha: float = 0.0,
    *,
    threads: int = 1,
) -> SampledField:
    """sup over containing family balls of measure**(alpha/Q - 1) * int |f|."""
    grid = f.grid
    OperatorParams(alpha).validate(grid.group.Q)
    bound = bind_family(family, grid)
    absf = np.abs(f.values)
    expo = alpha / grid.group.Q - 1.0

    out, covered = _run_balls(
        grid, bound, lambda ids: _scatter_run(grid, bound, ids, absf, expo), threads
    )
    if not covered.all():
        _raise_uncovered(grid, covered)
    return SampledField(grid, out)


def sharp_maximal(f: SampledField, family, *, threads: int = 1) -> SampledField:
    """sup over containing family balls of the mean oscillation of f."""
    grid = f.grid
    bound = bind_family(family, grid)
    fvals = f.values
    cell = grid.cell_volume

    def run(ids):
        out = np.full(grid.n_nodes, -np.inf)
        covered = np.zeros(grid.n_nodes, dtype=bool)
        for k in ids:
            m = bound.members[k]
            if m.size == 0:
                continue
            val = _osc_candidate(fvals, m, cell)
            out[m] = np.maximum(out[m], val)
            covered[m] = True
        return out, covered

    out, covered = _run_balls(grid, bound, run, threads)
    if not covered.all():
        _raise_uncovered(grid, covered)
    return SampledField(grid, out)


def maximal_commutator(
    b: SampledField,
    f: SampledField,
    family,
    alpha: float = 0.0,
    *,
    threads: int = 1,
) -> SampledField:
    """sup over containing balls of measure**(alpha/Q-1) * int |b(x)-b(y)| |f(y)|."""
    grid = f.grid
    if b.grid is not grid and b.grid != grid:
        raise ValueError("b and f live on different grids")
    OperatorParams(alpha).validate(grid.group.Q)
    bound = bind_family(family, grid)
    absf = np.abs(f.values)
    bvals = b.values
    cell = grid.cell_volume
    expo = alpha / grid.group.Q - 1.0

    def run(ids):
        out = np.full(grid.n_nodes, -np.inf)
        covered = np.zeros(grid.n_nodes, dtype=bool)
        for k in ids:
            m = bound.members[k]
            if m.size == 0:
                continue
            measure = m.size * cell
            coeff = measure**expo
            b_m = bvals[m]
            w_m = absf[m]
            # row-chunked |b(x) - b(y)| sums; each row reduces exactly like
            # the oracle's 1-d sum over the same member array
            for s in range(0, m.size, _ROW_CHUNK):
                rows = np.abs(b_m[s : s + _ROW_CHUNK, None] - b_m[None, :])
                rows *= w_m[None, :]
                vals = coeff * (rows.sum(axis=1) * cell)
                sl = m[s : s + _ROW_CHUNK]
                out[sl] = np.maximum(out[sl], vals)
            covered[m] = True
        return out, covered

    out, covered = _run_balls(grid, bound, run, threads)
    if not covered.all():
        _raise_uncovered(grid, covered)
    return SampledField(grid, out)


def commutator_maximal(
    b: SampledField, f: SampledField, family, alpha: float = 0.0, *, threads: int = 1
) -> SampledField:
    """Nonlinear commutator b * M_a f - M_a(b f); signed output."""
    bound = bind_family(family, f.grid)
    mf = fractional_maximal(f, bound, alpha, threads=threads)
    bf = SampledField(f.grid, b.values * f.values)
    mbf = fractional_maximal(bf, bound, alpha, threads=threads)
    return SampledField(f.grid, b.values * mf.values - mbf.values)


def commutator_sharp(
    b: SampledField, f: SampledField, family, *, threads: int = 1
) -> SampledField:
    """Nonlinear sharp commutator b * M# f - M#(b f); signed output."""
    bound = bind_family(family, f.grid)
    mf = sharp_maximal(f, bound, threads=threads)
    bf = SampledField(f.grid, b.values * f.values)
    mbf = sharp_maximal(bf, bound, threads=threads)
    return SampledField(f.grid, b.values * mf.values - mbf.values)


def local_maximal(
    f: SampledField, ball0: Ball, family, alpha: float = 0.0
) -> SampledField:
    """Fractional maximal restricted to family balls whose nodes lie in ball0.

    Defined on the nodes of ball0 (other nodes get 0). Include ball0 in the
    family (distinguished) so every node of ball0 has a candidate.
    """
    grid = f.grid
    OperatorParams(alpha).validate(grid.group.Q)
    bound = bind_family(family, grid)
    m0 = ball_members(grid, ball0)
    if m0.size == 0:
        raise ValueError("ball0 contains no grid node")
    absf = np.abs(f.values)
    cell = grid.cell_volume
    expo = alpha / grid.group.Q - 1.0
    out = np.full(grid.n_nodes, -np.inf)
    covered = np.zeros(grid.n_nodes, dtype=bool)
    lo, hi = int(m0[0]), int(m0[-1])
    member_set = np.zeros(grid.n_nodes, dtype=bool)
    member_set[m0] = True
    for m in bound.members:
        if m.size == 0 or m[0] < lo or m[-1] > hi:
            continue
        if not member_set[m].all():
            continue
        measure = m.size * cell
        val = _avg_candidate(absf, m, measure**expo, cell)
        out[m] = np.maximum(out[m], val)
        covered[m] = True
    if not covered[m0].all():
        bad = int(m0[~covered[m0]][0])
        raise CoverageError(
            f"node {bad} of ball0 lies in no subset ball; add ball0 to the family"
        )
    out[~covered] = 0.0
    return SampledField(grid, out)


# --- reference kernels -----------------------------------------------------
#
# Textbook double loops: for every output node, test every family ball for
# membership (one scalar gauge evaluation per pair) and, when inside, rescan
# the whole grid for the ball's members before computing the candidate.
# Nothing is cached or pruned.


def _contains_scalar(ball: Ball, node: np.ndarray, grid: GridSpec) -> bool:
    return bool(ball_contains(ball, node[None, :], grid.group)[0])


def oracle_fractional_maximal(
    f: SampledField, family: BallFamily, alpha: float = 0.0
) -> SampledField:
    grid = f.grid
    OperatorParams(alpha).validate(grid.group.Q)
    absf = np.abs(f.values)
    cell = grid.cell_volume
    expo = alpha / grid.group.Q - 1.0
    out = np.full(grid.n_nodes, -np.inf)
    covered = np.zeros(grid.n_nodes, dtype=bool)
    for i in range(grid.n_nodes):
        node = grid.nodes[i]
        for ball in family.balls:
            if not _contains_scalar(ball, node, grid):
                continue
            m = ball_members(grid, ball, pruned=False)
            measure = m.size * cell
            val = _avg_candidate(absf, m, measure**expo, cell)
            if val > out[i]:
                out[i] = val
            covered[i] = True
    if not covered.all():
        _raise_uncovered(grid, covered)
    return SampledField(grid, out)


def oracle_sharp_maximal(f: SampledField, family: BallFamily) -> SampledField:
    grid = f.grid
    fvals = f.values
    cell = grid.cell_volume
    out = np.full(grid.n_nodes, -np.inf)
    covered = np.zeros(grid.n_nodes, dtype=bool)
    for i in range(grid.n_nodes):
        node = grid.nodes[i]
        for ball in family.balls:
            if not _contains_scalar(ball, node, grid):
                continue
            m = ball_members(grid, ball, pruned=False)
            val = _osc_candidate(fvals, m, cell)
            if val > out[i]:
                out[i] = val
            covered[i] = True
    if not covered.all():
        _raise_uncovered(grid, covered)
    return SampledField(grid, out)


def oracle_maximal_commutator(
    b: SampledField, f: SampledField, family: BallFamily, alpha: float = 0.0
) -> SampledField:
    grid = f.grid
    OperatorParams(alpha).validate(grid.group.Q)
    absf = np.abs(f.values)
    bvals = b.values
    cell = grid.cell_volume
    expo = alpha / grid.group.Q - 1.0
    out = np.full(grid.n_nodes, -np.inf)
    covered = np.zeros(grid.n_nodes, dtype=bool)
    for i in range(grid.n_nodes):
        node = grid.nodes[i]
        for ball in family.balls:
            if not _contains_scalar(ball, node, grid):
                continue
            m = ball_members(grid, ball, pruned=False)
            measure = m.size * cell
            val = _comm_candidate(bvals[i], bvals[m], absf[m], measure**expo, cell)
            if val > out[i]:
                out[i] = val
            covered[i] = True
    if not covered.all():
        _raise_uncovered(grid, covered)
    return SampledField(grid, out)


def oracle_commutator_maximal(
    b: SampledField, f: SampledField, family: BallFamily, alpha: float = 0.0
) -> SampledField:
    mf = oracle_fractional_maximal(f, family, alpha)
    bf = SampledField(f.grid, b.values * f.values)
    mbf = oracle_fractional_maximal(bf, family, alpha)
    return SampledField(f.grid, b.values * mf.values - mbf.values)


def oracle_commutator_sharp(
    b: SampledField, f: SampledField, family: BallFamily
) -> SampledField:
    mf = oracle_sharp_maximal(f, family)
    bf = SampledField(f.grid, b.values * f.values)
    mbf = oracle_sharp_maximal(bf, family)
    return SampledField(f.grid, b.values * mf.values - mbf.values)


OPERATOR_TAGS = ("maxal", "sharp", "maxcomm", "comm-max", "comm-sharp")


def apply_operator(
    tag: str,
    f: SampledField,
    family,
    alpha: float = 0.0,
    b: SampledField | None = None,
    *,
    oracle: bool = False,
    threads: int = 1,
) -> SampledField:
    """Dispatch by CLI tag; commutator tags require the symbol field b."""
    if tag not in OPERATOR_TAGS:
        raise ValueError(f"unknown operator tag {tag!r}; expected {OPERATOR_TAGS}")
    needs_b = tag in ("maxcomm", "comm-max", "comm-sharp")
    if needs_b and b is None:
        raise ValueError(f"operator {tag!r} needs the symbol field b")
    if oracle:
        fam = family.family if isinstance(family, BoundFamily) else family
        if tag == "maxal":
            return oracle_fractional_maximal(f, fam, alpha)
        if tag == "sharp":
            return oracle_sharp_maximal(f, fam)
        if tag == "maxcomm":
            return oracle_maximal_commutator(b, f, fam, alpha)
        if tag == "comm-max":
            return oracle_commutator_maximal(b, f, fam, alpha)
        return oracle_commutator_sharp(b, f, fam)
    if tag == "maxal":
        return fractional_maximal(f, family, alpha, threads=threads)
    if tag == "sharp":
        return sharp_maximal(f, family, threads=threads)
    if tag == "maxcomm":
        return maximal_commutator(b, f, family, alpha, threads=threads)
    if tag == "comm-max":
        return commutator_maximal(b, f, family, alpha, threads=threads)
    return commutator_sharp(b, f, family, threads=threads)
