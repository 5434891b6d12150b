"""Young functions: evaluation, generalized inverses, conjugates, growth checks.

A Young function is convex, left-continuous, nondecreasing on [0, inf) with
value 0 at 0 and limit +inf; +inf is an admissible value and is represented
by ``np.inf``. The generalized inverse is ``inf {r >= 0 : phi(r) > s}``,
which coincides with the ordinary inverse for functions that are finite and
positive on (0, inf) (the "nice" class, flagged by ``in_class_Y``).

Three families are provided:

* ``PowerYoung(p, coeff)``  -- coeff * t**p with p >= 1.  The coefficient is
  1 in user-facing constructions; it exists so that Legendre conjugation is
  closed over the family: the conjugate of t**p is the scaled power
  (p - 1) * p**(-p') * r**p' with 1/p + 1/p' = 1.
* ``LInfinityYoung(threshold)`` -- 0 on [0, threshold], +inf beyond; its
  Orlicz space is the sup-norm space.
* ``TabulatedYoung`` -- strictly increasing positive samples with linear
  interpolation between breakpoints and declared power-law head/tail
  exponents for extrapolation.  Produced by numeric conjugation and by the
  target-space construction in :mod:`orlimax.lipschitz`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "YoungFunction",
    "PowerYoung",
    "LInfinityYoung",
    "TabulatedYoung",
    "tabulated_conjugate",
    "YoungPairCheck",
    "check_young_pair",
    "GrowthReport",
    "check_delta2",
    "check_nabla2",
]


def _as_nonneg(t) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("Young functions are defined on [0, inf) only")
    return t


class YoungFunction:
    """Base interface; subclasses implement __call__, inverse, conjugate."""

    label: str = "young"
    in_class_Y: bool = True

    def __call__(self, t):
        raise NotImplementedError

    def inverse(self, s):
        raise NotImplementedError

    def conjugate(self) -> "YoungFunction":
        raise NotImplementedError

    def __repr__(self):
        return f"<{type(self).__name__} {self.label}>"


class PowerYoung(YoungFunction):
    def __init__(self, p: float, coeff: float = 1.0):
        if not p >= 1:
            raise ValueError(f"power exponent must be >= 1, got {p}")
        if not coeff > 0:
            raise ValueError(f"power coefficient must be positive, got {coeff}")
        self.p = float(p)
        self.coeff = float(coeff)
        self.label = f"t^{self.p:g}" if coeff == 1.0 else f"{coeff:g}*t^{self.p:g}"

    def __call__(self, t):
        t = _as_nonneg(t)
        with np.errstate(over="ignore"):
            return self.coeff * t**self.p

    def inverse(self, s):
        s = _as_nonneg(s)
        with np.errstate(over="ignore"):
            return (s / self.coeff) ** (1.0 / self.p)

    def conjugate(self) -> YoungFunction:
        if self.p == 1.0:
            return LInfinityYoung(threshold=self.coeff)
        pc = self.p / (self.p - 1.0)
        coeff = (self.p - 1.0) * self.p ** (-pc) * self.coeff ** (1.0 - pc)
        return PowerYoung(pc, coeff)


class LInfinityYoung(YoungFunction):
    in_class_Y = False

    def __init__(self, threshold: float = 1.0):
        if not threshold > 0:
            raise ValueError("threshold must be positive")
        self.threshold = float(threshold)
        self.label = (
            "linfty" if threshold == 1.0 else f"linfty(theta={threshold:g})"
        )

    def __call__(self, t):
        t = _as_nonneg(t)
        return np.where(t <= self.threshold, 0.0, np.inf)

    def inverse(self, s):
        # inf{r : phi(r) > s} = threshold for every finite s >= 0
        s = np.asarray(s, dtype=float)
        if np.any(s < 0):
            raise ValueError("inverse argument must be >= 0")
        return np.where(np.isinf(s), np.inf, self.threshold)

    def conjugate(self) -> YoungFunction:
        return PowerYoung(1.0, coeff=self.threshold)


class TabulatedYoung(YoungFunction):
    """Piecewise-linear Young function on strictly increasing samples.

    Below the first breakpoint the function follows the power law
    ``v0 * (t / t0) ** head_exponent`` (so it is positive on (0, t0) and 0 at
    0); beyond the last it follows ``v_last * (t / t_last) ** tail_exponent``.
    Head defaults to the log-log slope of the first chord. Convexity is
    validated by checking that chord slopes never decrease (beyond round-off).
    """

    def __init__(
        self,
        breakpoints,
        values,
        tail_exponent: float,
        head_exponent: float | None = None,
        label: str = "tabulated",
    ):
        t = np.ascontiguousarray(breakpoints, dtype=float)
        v = np.ascontiguousarray(values, dtype=float)
        if t.ndim != 1 or t.shape != v.shape or t.size < 2:
            raise ValueError("need matching 1-d breakpoint/value arrays, size >= 2")
        if not (np.all(np.isfinite(t)) and np.all(np.isfinite(v))):
            raise ValueError("tabulated data must be finite")
        if not (np.all(np.diff(t) > 0) and t[0] > 0):
            raise ValueError("breakpoints must be positive and strictly increasing")
        if not (np.all(np.diff(v) > 0) and v[0] > 0):
            raise ValueError("values must be positive and strictly increasing")
        if not tail_exponent >= 1:
            raise ValueError("tail exponent must be >= 1")
        slopes = np.diff(v) / np.diff(t)
        drop = np.diff(slopes) < -1e-9 * slopes[1:]
        if np.any(drop):
            k = int(np.flatnonzero(drop)[0])
            raise ValueError(
                f"tabulated values are not convex near t={t[k + 1]:.6g}"
            )
        if head_exponent is None:
            head_exponent = float(
                np.log(v[1] / v[0]) / np.log(t[1] / t[0])
            )
        if not head_exponent >= 1:
            raise ValueError("head exponent must be >= 1")
        self.breakpoints = t
        self.values = v
        self.tail_exponent = float(tail_exponent)
        self.head_exponent = float(head_exponent)
        self.label = label

    def __call__(self, t):
        t = _as_nonneg(t)
        bp, v = self.breakpoints, self.values
        out = np.interp(t, bp, v)
        with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
            head = np.where(t > 0, v[0] * (t / bp[0]) ** self.head_exponent, 0.0)
            tail = v[-1] * (t / bp[-1]) ** self.tail_exponent
        out = np.where(t < bp[0], head, out)
        out = np.where(t > bp[-1], tail, out)
        return out

    def inverse(self, s):
        s = np.asarray(s, dtype=float)
        if np.any(s < 0):
            raise ValueError("inverse argument must be >= 0")
        bp, v = self.breakpoints, self.values
        out = np.interp(s, v, bp)
        with np.errstate(over="ignore"):
            head = bp[0] * (s / v[0]) ** (1.0 / self.head_exponent)
            tail = bp[-1] * (s / v[-1]) ** (1.0 / self.tail_exponent)
        out = np.where(s < v[0], head, out)
        out = np.where(s > v[-1], tail, out)
        return np.where(np.isinf(s), np.inf, out)

    def conjugate(self) -> YoungFunction:
        return tabulated_conjugate(self)


def tabulated_conjugate(
    phi: YoungFunction,
    r_lo: float = 1e-8,
    r_hi: float = 1e8,
    n: int = 2048,
    label: str | None = None,
) -> TabulatedYoung:
    """Numeric Legendre conjugate sup_s (r*s - phi(s)) on a log grid of r.

    The map s -> r*s - phi(s) is concave, hence unimodal; each grid point is
    bracketed by a coarse log scan and refined by golden-section search.
    Requires superlinear growth at both ends (head/tail exponents > 1 for
    tabulated input) so the conjugate is finite and strictly increasing.
    """
    if isinstance(phi, TabulatedYoung):
        if phi.tail_exponent <= 1 or phi.head_exponent <= 1:
            raise ValueError(
                "numeric conjugation needs head and tail exponents > 1"
            )
        a = phi.tail_exponent
        h = phi.head_exponent
        tail = a / (a - 1.0)
        head = h / (h - 1.0)
    elif isinstance(phi, PowerYoung) and phi.p > 1:
        tail = head = phi.p / (phi.p - 1.0)
    else:
        raise ValueError(f"cannot numerically conjugate {phi!r}")

    r = np.geomspace(r_lo, r_hi, n)
    # coarse bracket: scan s over a wide log grid, take the argmax neighbours
    s_scan = np.geomspace(1e-12, 1e12, 481)
    gains = r[:, None] * s_scan[None, :] - phi(s_scan)[None, :]
    k = np.argmax(gains, axis=1)
    lo = s_scan[np.maximum(k - 1, 0)]
    hi = s_scan[np.minimum(k + 1, s_scan.size - 1)]
    invphi = (np.sqrt(5.0) - 1.0) / 2.0
    for _ in range(90):
        x1 = hi - invphi * (hi - lo)
        x2 = lo + invphi * (hi - lo)
        f1 = r * x1 - phi(x1)
        f2 = r * x2 - phi(x2)
        take2 = f1 < f2  # maximum lies in [x1, hi]
        lo = np.where(take2, x1, lo)
        hi = np.where(take2, hi, x2)
    s_star = 0.5 * (lo + hi)
    w = np.maximum(r * s_star - phi(s_star), 0.0)
    keep = w > 0
    if np.count_nonzero(keep) < 8:
        raise ValueError("conjugate collapsed to zero on the requested range")
    return TabulatedYoung(
        r[keep],
        w[keep],
        tail_exponent=tail,
        head_exponent=head,
        label=label or f"conj({phi.label})",
    )


@dataclass(frozen=True)
class YoungPairCheck:
    ok: bool
    ratio_min: float
    ratio_max: float
    r_at_min: float
    r_at_max: float


def check_young_pair(
    phi: YoungFunction, r_grid, rel_slack: float = 1e-6
) -> YoungPairCheck:
    """Verify r <= phi^-1(r) * conj(phi)^-1(r) <= 2r on the grid."""
    r = np.asarray(r_grid, dtype=float)
    if r.size == 0 or np.any(r <= 0):
        raise ValueError("need a nonempty positive r grid")
    conj = phi.conjugate()
    ratio = phi.inverse(r) * conj.inverse(r) / r
    i_min = int(np.argmin(ratio))
    i_max = int(np.argmax(ratio))
    ok = bool(
        ratio[i_min] >= 1.0 - rel_slack and ratio[i_max] <= 2.0 + rel_slack
    )
    return YoungPairCheck(
        ok, float(ratio[i_min]), float(ratio[i_max]), float(r[i_min]), float(r[i_max])
    )


@dataclass(frozen=True)
class GrowthReport:
    delta2_constant: float | None
    nabla2_constant: float | None
    range_checked: tuple[float, float]
    samples: int

    def __post_init__(self):
        r_min, r_max = self.range_checked
        if not r_max / r_min >= 1e6:
            raise ValueError("growth checks must span at least 6 decades")
        for c in (self.delta2_constant, self.nabla2_constant):
            if c is not None and not c >= 1:
                raise ValueError("growth constants are >= 1 when present")


def _growth_samples(r_range, samples):
    r_min, r_max = r_range
    if not (r_min > 0 and r_max > r_min):
        raise ValueError("invalid r range")
    if samples < 100:
        raise ValueError("need at least 100 samples")
    return np.geomspace(r_min, r_max, samples)


def check_delta2(
    phi: YoungFunction, r_range=(1e-3, 1e3), samples: int = 400
) -> GrowthReport:
    """Doubling constant sup phi(2r)/phi(r) on a log sample; None if infinite."""
    r = _growth_samples(r_range, samples)
    num = np.asarray(phi(2.0 * r), dtype=float)
    den = np.asarray(phi(r), dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = num / den
    const: float | None
    if np.any(~np.isfinite(ratio)) or np.any(den == 0):
        const = None
    else:
        const = max(1.0, float(np.max(ratio)))
    return GrowthReport(const, None, (float(r[0]), float(r[-1])), samples)


def check_nabla2(
    phi: YoungFunction, r_range=(1e-3, 1e3), C_grid=None, samples: int = 400
) -> GrowthReport:
    """Smallest grid C > 1 with phi(C r) >= 2 C phi(r) at all samples."""
    r = _growth_samples(r_range, samples)
    if C_grid is None:
        C_grid = np.geomspace(1.01, 16.0, 241)
    C_grid = np.asarray(C_grid, dtype=float)
    if np.any(C_grid <= 1):
        raise ValueError("C grid must lie in (1, inf)")
    vals = np.asarray(phi(r), dtype=float)
    const: float | None = None
    for C in np.sort(C_grid):
        scaled = np.asarray(phi(C * r), dtype=float)
        with np.errstate(invalid="ignore"):
            ok = scaled >= 2.0 * C * vals
        # inf >= inf compares True; a genuinely infinite phi(r) defeats nabla2
        if np.any(np.isinf(vals)):
            break
        if np.all(ok):
            const = float(C)
            break
    return GrowthReport(None, const, (float(r[0]), float(r[-1])), samples)
