"""Luxemburg and weak Orlicz norms of sampled fields, plus the norm lemmas.

Both norms are gauge functionals ``inf { lam > 0 : G(lam) <= 1 }`` with a
nonincreasing G: the modular sum for the Luxemburg norm, the peak of
``phi(t) * m(f/lam, t)`` over levels t for the weak norm. The infimum is
found by doubling the upper bracket until feasible and then bisecting; the
returned value is the feasible (upper) end of the final bracket.

The weak-norm inner supremum is exact for sampled data: on a grid, the
distribution function m is a right-continuous step function with jumps at
the sorted distinct magnitudes v_1 < ... < v_k, so
``sup_t phi(t) m(t) = max_j phi(v_j) * measure{|f| >= v_j}``
(left limits, since phi is left-continuous and nondecreasing).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fields import RegionMask, SampledField, integrate, mask_from_ball
from .groups import Ball
from .young import LInfinityYoung, YoungFunction

__all__ = [
    "NormResult",
    "luxemburg_norm",
    "weak_norm",
    "holder_check",
    "mean_bound_check",
]

_MAX_BISECTIONS = 200
_REL_TOL = 1e-14


class NormConvergenceError(RuntimeError):
    pass


@dataclass(frozen=True)
class NormResult:
    value: float
    iterations: int
    bracket: tuple[float, float]
    converged: bool

    def __post_init__(self):
        lo, hi = self.bracket
        if self.converged and not (hi - lo) / max(hi, 1.0) <= 1e-10:
            raise ValueError("converged NormResult with a loose bracket")


def _gauge_infimum(feasible, start_hi: float) -> NormResult:
    """inf { lam > 0 : feasible(lam) } for a monotone feasibility predicate."""
    hi = max(start_hi, np.finfo(float).tiny)
    doublings = 0
    while not feasible(hi):
        hi *= 2.0
        doublings += 1
        if doublings > 200:
            raise NormConvergenceError(
                f"no feasible scaling found below {hi:.3e}"
            )
    lo = 0.0
    iterations = doublings
    while iterations < _MAX_BISECTIONS and (hi - lo) > _REL_TOL * hi:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if feasible(mid):
            hi = mid
        else:
            lo = mid
        iterations += 1
    converged = (hi - lo) / max(hi, 1.0) <= 1e-10
    if not converged:
        raise NormConvergenceError(
            f"norm bisection stalled with bracket ({lo:.6e}, {hi:.6e})"
        )
    return NormResult(float(hi), iterations, (float(lo), float(hi)), converged)


def luxemburg_norm(
    f: SampledField, phi: YoungFunction, region: RegionMask
) -> NormResult:
    """inf { lam : sum_region phi(|f|/lam) * cell <= 1 }.

    Zero fields (or empty regions) have norm 0; the sup-norm family is
    evaluated in closed form as max |f| / threshold.
    """
    vals = np.abs(f.values[region.indices])
    cell = f.grid.cell_volume
    if vals.size == 0 or not np.any(vals > 0):
        return NormResult(0.0, 0, (0.0, 0.0), True)
    vmax = float(np.max(vals))
    if isinstance(phi, LInfinityYoung):
        v = vmax / phi.threshold
        return NormResult(v, 0, (v, v), True)

    def feasible(lam: float) -> bool:
        with np.errstate(over="ignore", invalid="ignore"):
            total = np.sum(np.asarray(phi(vals / lam), dtype=float)) * cell
        return bool(total <= 1.0)

    return _gauge_infimum(feasible, start_hi=vmax * region.measure + 1.0)


def weak_norm(
    f: SampledField, phi: YoungFunction, region: RegionMask
) -> NormResult:
    """inf { lam : sup_t phi(t) * m(f/lam, t) <= 1 } via the jump formula."""
    vals = np.abs(f.values[region.indices])
    cell = f.grid.cell_volume
    if vals.size == 0 or not np.any(vals > 0):
        return NormResult(0.0, 0, (0.0, 0.0), True)
    vmax = float(np.max(vals))
    if isinstance(phi, LInfinityYoung):
        v = vmax / phi.threshold
        return NormResult(v, 0, (v, v), True)
    u = np.unique(vals[vals > 0])
    # tail measures m_j = measure{|f| >= u_j}
    svals = np.sort(vals)
    tail = (svals.size - np.searchsorted(svals, u, side="left")) * cell

    def feasible(lam: float) -> bool:
        with np.errstate(over="ignore", invalid="ignore"):
            peak = np.max(np.asarray(phi(u / lam), dtype=float) * tail)
        return bool(peak <= 1.0)

    return _gauge_infimum(feasible, start_hi=vmax * region.measure + 1.0)


def holder_check(
    f: SampledField,
    g: SampledField,
    phi: YoungFunction,
    region: RegionMask,
    rel_slack: float = 1e-6,
) -> tuple[float, float, bool]:
    """integral of |f g| against 2 ||f||_phi ||g||_conj(phi); returns (lhs, rhs, ok)."""
    prod = SampledField(f.grid, np.abs(f.values * g.values))
    lhs = integrate(prod, region)
    conj = phi.conjugate()
    rhs = 2.0 * luxemburg_norm(f, phi, region).value
    rhs *= luxemburg_norm(g, conj, region).value
    return lhs, rhs, bool(lhs <= rhs * (1.0 + rel_slack) + 1e-300)


def mean_bound_check(
    f: SampledField,
    phi: YoungFunction,
    ball: Ball,
    rel_slack: float = 1e-6,
) -> tuple[float, float, bool]:
    """Ball-mean bound: int_B |f| <= 2 |B| phi^-1(1/|B|) ||f||_phi(B).

    |B| is the discrete mask measure so the inequality closes under the
    same quadrature that defines both sides.
    """
    region = mask_from_ball(ball, f.grid)
    if region.indices.size == 0:
        raise ValueError("ball does not contain any grid node")
    absf = SampledField(f.grid, np.abs(f.values))
    lhs = integrate(absf, region)
    measure = region.measure
    inv_at = float(np.asarray(phi.inverse(1.0 / measure), dtype=float))
    rhs = 2.0 * measure * inv_at * luxemburg_norm(f, phi, region).value
    return lhs, rhs, bool(lhs <= rhs * (1.0 + rel_slack) + 1e-300)
