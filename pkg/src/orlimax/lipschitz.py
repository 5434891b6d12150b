"""Lipschitz seminorm estimators and the characterization functionals.

Two Lipschitz-type gauges of a symbol field b are estimated: the two-point
seminorm sup |b(x) - b(y)| / rho(y^-1 x)**beta over sampled node pairs, and
the ball form sup_B |B|**(-1-beta/Q) * int_B |b - b_B|.  On top of the
maximal kernels this module builds the four ball functionals used to probe
whether a symbol behaves like a nonnegative beta-Lipschitz function:

* F1(B) = |B|**(-beta/Q) * Psi^-1(1/|B|) * || b - M_B b ||_{L^Psi(B)}
* F2(B) = |B|**(-1-beta/Q) * || b - M_B b ||_{L^1(B)}
* F3(B), F4(B): the same with 2 * M#(b * chi_B) in place of M_B b

together with the target Young function construction Psi^-1(t) =
Phi^-1(t) * t**(-beta/Q) and operator-norm lower bounds over a test corpus.
A report never declares the characterization itself proved or refuted: a
finite grid and family only yield lower-bound diagnostics, scale-stability
notes, and a sign probe based on shrinking ball averages of the negative
part.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .family import BallFamily, with_distinguished
from .fields import (
    RegionMask,
    SampledField,
    average_over,
    integrate,
    mask_from_ball,
    neg_part,
    whole_box,
)
from .groups import Ball, group_inv, group_mul, hom_norm
from .maximal import (
    bind_family,
    commutator_maximal,
    commutator_sharp,
    fractional_maximal,
    local_maximal,
    maximal_commutator,
    sharp_maximal,
)
from .norms import luxemburg_norm, weak_norm
from .young import TabulatedYoung, YoungFunction

__all__ = [
    "LipEstimate",
    "lipschitz_estimate",
    "pair_seminorm_exact",
    "psi_from_phi",
    "functional_F1",
    "functional_F2",
    "functional_F3",
    "functional_F4",
    "lip_ball",
    "operator_ratio",
    "almost_decreasing_check",
    "probe_balls",
    "CharacterizationReport",
    "characterization_report",
]


@dataclass(frozen=True)
class LipEstimate:
    beta: float
    pair_norm: float
    ball_norm: float

    @property
    def ratio(self) -> float:
        if self.ball_norm > 0:
            return self.pair_norm / self.ball_norm
        return 0.0 if self.pair_norm == 0 else np.inf


def _pair_ratios(b: SampledField, beta: float, ii, jj) -> float:
    grid = b.grid
    spec = grid.group
    x = grid.nodes[ii]
    y = grid.nodes[jj]
    dist = hom_norm(group_mul(group_inv(y, spec), x, spec), spec)
    keep = dist > 0
    if not np.any(keep):
        return 0.0
    num = np.abs(b.values[ii] - b.values[jj])[keep]
    return float(np.max(num / dist[keep] ** beta))


def lipschitz_estimate(
    b: SampledField,
    beta: float,
    family,
    pair_budget: int = 4096,
    seed: int = 0,
) -> LipEstimate:
    """Sampled two-point seminorm (a lower bound) and the family ball norm."""
    if not 0 < beta < 1:
        raise ValueError("beta must lie in (0, 1)")
    if pair_budget < 1000:
        raise ValueError("pair budget must be >= 1000")
    grid = b.grid
    rng = np.random.Generator(np.random.Philox(key=seed))
    ii = rng.integers(0, grid.n_nodes, size=pair_budget)
    jj = rng.integers(0, grid.n_nodes, size=pair_budget)
    pair = _pair_ratios(b, beta, ii, jj)

    bound = bind_family(family, grid)
    expo = -1.0 - beta / grid.group.Q
    best = 0.0
    for m in bound.members:
        if m.size == 0:
            continue
        region = RegionMask(grid, _mask_of(grid.n_nodes, m))
        dev = np.abs(b.values - average_over(b, region))
        val = region.measure**expo * float(
            np.sum(dev[m]) * grid.cell_volume
        )
        best = max(best, val)
    return LipEstimate(beta, pair, best)


def _mask_of(n: int, idx: np.ndarray) -> np.ndarray:
    mask = np.zeros(n, dtype=bool)
    mask[idx] = True
    return mask


def pair_seminorm_exact(
    b: SampledField, beta: float, chunk: int = 256
) -> float:
    """Exact max of |b(x)-b(y)| / rho(y^-1 x)**beta over all node pairs."""
    grid = b.grid
    spec = grid.group
    nodes = grid.nodes
    vals = b.values
    best = 0.0
    for s in range(0, grid.n_nodes, chunk):
        x = nodes[s : s + chunk][:, None, :]
        d = hom_norm(group_mul(group_inv(nodes, spec)[None, :, :], x, spec), spec)
        num = np.abs(vals[s : s + chunk][:, None] - vals[None, :])
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = num / d**beta
        ratio[d == 0] = 0.0
        best = max(best, float(np.max(ratio)))
    return best


def psi_from_phi(
    phi: YoungFunction,
    beta: float,
    Q: int,
    t_range: tuple[float, float] = (1e-8, 1e8),
    points: int = 257,
) -> TabulatedYoung:
    """Target Young function with inverse Phi^-1(t) * t**(-beta/Q).

    Builds the tabulated function through (u_j, t_j) with
    u_j = Phi^-1(t_j) * t_j**(-beta/Q); rejects prescriptions that fail to
    increase strictly (e.g. powers t**p with p >= Q/beta).
    """
    if not 0 < beta < 1:
        raise ValueError("beta must lie in (0, 1)")
    t = np.geomspace(t_range[0], t_range[1], points)
    u = np.asarray(phi.inverse(t), dtype=float) * t ** (-beta / Q)
    if not np.all(np.isfinite(u)):
        raise ValueError("prescribed inverse is not finite on the range")
    d = np.diff(u)
    if np.any(d <= 0):
        k = int(np.flatnonzero(d <= 0)[0])
        raise ValueError(
            "prescribed inverse is not strictly increasing on "
            f"[{t[k]:.3e}, {t[k + 1]:.3e}]"
        )
    return TabulatedYoung(
        u,
        t,
        tail_exponent=float(np.log(t[-1] / t[-2]) / np.log(u[-1] / u[-2])),
        head_exponent=float(np.log(t[1] / t[0]) / np.log(u[1] / u[0])),
        label=f"target({phi.label},beta={beta:g},Q={Q})",
    )


def _deviation_from_local_max(
    b: SampledField, ball: Ball, family, region: RegionMask
) -> SampledField:
    mb = local_maximal(b, ball, family, 0.0)
    return SampledField(b.grid, b.values - mb.values)


def _deviation_from_sharp(
    b: SampledField, ball: Ball, family, region: RegionMask
) -> SampledField:
    bchi = SampledField(b.grid, np.where(region.member, b.values, 0.0))
    msharp = sharp_maximal(bchi, family)
    return SampledField(b.grid, b.values - 2.0 * msharp.values)


def _orlicz_functional(
    dev: SampledField, region: RegionMask, psi: YoungFunction, beta: float, Q: int
) -> float:
    measure = region.measure
    inv_at = float(np.asarray(psi.inverse(1.0 / measure), dtype=float))
    norm = luxemburg_norm(dev, psi, region).value
    return measure ** (-beta / Q) * inv_at * norm


def _l1_functional(
    dev: SampledField, region: RegionMask, beta: float, Q: int
) -> float:
    absdev = SampledField(dev.grid, np.abs(dev.values))
    return region.measure ** (-1.0 - beta / Q) * integrate(absdev, region)


def _ball_region(b: SampledField, ball: Ball) -> RegionMask:
    region = mask_from_ball(ball, b.grid)
    if region.indices.size == 0:
        raise ValueError("ball contains no grid node")
    return region


def functional_F1(
    b: SampledField, ball: Ball, psi: YoungFunction, beta: float, family
) -> float:
    region = _ball_region(b, ball)
    dev = _deviation_from_local_max(b, ball, family, region)
    return _orlicz_functional(dev, region, psi, beta, b.grid.group.Q)


def functional_F2(b: SampledField, ball: Ball, beta: float, family) -> float:
    region = _ball_region(b, ball)
    dev = _deviation_from_local_max(b, ball, family, region)
    return _l1_functional(dev, region, beta, b.grid.group.Q)


def functional_F3(
    b: SampledField, ball: Ball, psi: YoungFunction, beta: float, family
) -> float:
    region = _ball_region(b, ball)
    dev = _deviation_from_sharp(b, ball, family, region)
    return _orlicz_functional(dev, region, psi, beta, b.grid.group.Q)


def functional_F4(b: SampledField, ball: Ball, beta: float, family) -> float:
    region = _ball_region(b, ball)
    dev = _deviation_from_sharp(b, ball, family, region)
    return _l1_functional(dev, region, beta, b.grid.group.Q)


def lip_ball(b: SampledField, ball: Ball, beta: float) -> float:
    """Ball Lipschitz gauge |B|**(-1-beta/Q) * int_B |b - b_B|."""
    region = _ball_region(b, ball)
    dev = SampledField(b.grid, np.abs(b.values - average_over(b, region)))
    return region.measure ** (-1.0 - beta / b.grid.group.Q) * integrate(dev, region)


@dataclass(frozen=True)
class RatioRow:
    operator: str
    field_tag: str
    target_norm: float
    source_norm: float
    ratio: float
    note: str = ""


def operator_ratio(
    operator: str,
    corpus: list[tuple[str, SampledField]],
    phi: YoungFunction,
    psi: YoungFunction,
    family,
    b: SampledField | None = None,
    alpha: float = 0.0,
    weak_target: bool = False,
    threads: int = 1,
) -> tuple[list[RatioRow], float]:
    """Operator-norm lower bound: sup over the corpus of ||Tf||_Psi / ||f||_Phi."""
    if not corpus:
        raise ValueError("corpus must be nonempty")
    rows: list[RatioRow] = []
    sup_ratio = 0.0
    target = weak_norm if weak_target else luxemburg_norm
    for tag, f in corpus:
        box = whole_box(f.grid)
        src = luxemburg_norm(f, phi, box).value
        if src == 0.0:
            rows.append(RatioRow(operator, tag, 0.0, 0.0, 0.0, "skipped: zero norm"))
            continue
        if operator == "maxcomm":
            tf = maximal_commutator(b, f, family, alpha, threads=threads)
        elif operator == "comm-max":
            out = commutator_maximal(b, f, family, alpha, threads=threads)
            tf = SampledField(f.grid, np.abs(out.values))
        elif operator == "comm-sharp":
            out = commutator_sharp(b, f, family, threads=threads)
            tf = SampledField(f.grid, np.abs(out.values))
        elif operator == "maxal":
            tf = fractional_maximal(f, family, alpha, threads=threads)
        else:
            raise ValueError(f"unknown operator tag {operator!r}")
        tgt = target(tf, psi, box).value
        ratio = tgt / src
        rows.append(RatioRow(operator, tag, tgt, src, ratio))
        sup_ratio = max(sup_ratio, ratio)
    return rows, sup_ratio


def almost_decreasing_check(
    psi: YoungFunction,
    eps: float,
    r_range: tuple[float, float] = (1e-3, 1e3),
    samples: int = 400,
    k_tol: float = 10.0,
) -> tuple[bool, float]:
    """Is t**(1+eps)/psi(t) almost decreasing on the sampled range?

    Returns (holds, K) where K is the smallest constant valid on the sample:
    the max of h(t2)/h(t1) over sampled t1 <= t2. ``holds`` compares K to
    ``k_tol``; genuinely almost-decreasing shapes give K close to 1 while
    failures grow like a power of the range width.
    """
    if not eps > 0:
        raise ValueError("eps must be positive")
    t = np.geomspace(r_range[0], r_range[1], samples)
    vals = np.asarray(psi(t), dtype=float)
    ok = np.isfinite(vals) & (vals > 0)
    t, vals = t[ok], vals[ok]
    if t.size == 0:
        return False, np.inf
    h = t ** (1.0 + eps) / vals
    running_min = np.minimum.accumulate(h)
    K = float(np.max(h / running_min))
    return bool(K <= k_tol), K


def probe_balls(
    grid,
    n_centers: int = 10,
    r_min_cells: float = 4.0,
    max_radius_fraction: float = 0.25,
) -> tuple[tuple[Ball, ...], tuple[float, ...]]:
    """Dyadic-radius probe balls on an evenly strided center lattice."""
    h_gauge = max(
        h ** (1.0 / w) for h, w in zip(grid.spacing, grid.group.dilation_weights)
    )
    r0 = r_min_cells * h_gauge
    r_max = max_radius_fraction * min(b - a for a, b in zip(grid.lo, grid.hi))
    radii = []
    r = r0
    while r <= r_max * (1 + 1e-12):
        radii.append(r)
        r *= 2.0
    if not radii:
        radii = [r0]
    per_axis = max(2, int(round(n_centers ** (1.0 / grid.ndim))))
    if grid.ndim == 1:
        per_axis = n_centers
    centers = []
    idx_axes = [
        np.unique(np.linspace(0, n - 1, per_axis).round().astype(int))
        for n in grid.shape
    ]
    mesh = np.meshgrid(*[grid.axes[i][s] for i, s in enumerate(idx_axes)], indexing="ij")
    pts = np.stack([m.ravel() for m in mesh], axis=-1)
    balls = tuple(Ball(tuple(c), r) for c in pts for r in radii)
    return balls, tuple(radii)


@dataclass
class CharacterizationReport:
    beta: float
    phi_label: str
    psi_label: str
    per_ball: list[dict] = field(default_factory=list)
    sup_F1: float = 0.0
    sup_F2: float = 0.0
    sup_F3: float = 0.0
    sup_F4: float = 0.0
    sup_lip_ball: float = 0.0
    ratio_rows: list[RatioRow] = field(default_factory=list)
    sup_ratio: float = 0.0
    per_radius_sup_F2: dict[float, float] = field(default_factory=dict)
    verdict_notes: list[str] = field(default_factory=list)


def characterization_report(
    b: SampledField,
    beta: float,
    phi: YoungFunction,
    family: BallFamily,
    corpus: list[tuple[str, SampledField]] | None = None,
    n_probe_centers: int = 10,
    seed: int = 0,
    threads: int = 1,
) -> CharacterizationReport:
    """Per-ball functionals, their sups, operator ratios, and diagnostics.

    The probe balls are appended to the family as distinguished balls so the
    local maximal function always has each probe ball as a candidate. The
    verdict notes record (a) scale stability of the per-radius sups of F2
    over the top 16x dyadic window and (b) a sign probe: the average of the
    negative part over the smallest probe balls, compared against ten times
    the grid tolerance 1e-6 * max(1, max|b|).
    """
    grid = b.grid
    Q = grid.group.Q
    psi = psi_from_phi(phi, beta, Q)
    balls, radii = probe_balls(grid, n_centers=n_probe_centers)
    fam = with_distinguished(family, balls)
    bound = bind_family(fam, grid)

    report = CharacterizationReport(beta, phi.label, psi.label)
    by_radius: dict[float, float] = {r: 0.0 for r in radii}
    probe_ids = fam.distinguished[-len(balls):]
    for ball_id, ball in zip(probe_ids, balls):
        region = mask_from_ball(ball, grid)
        if region.indices.size == 0:
            continue
        dev1 = _deviation_from_local_max(b, ball, bound, region)
        dev3 = _deviation_from_sharp(b, ball, bound, region)
        f1 = _orlicz_functional(dev1, region, psi, beta, Q)
        f2 = _l1_functional(dev1, region, beta, Q)
        f3 = _orlicz_functional(dev3, region, psi, beta, Q)
        f4 = _l1_functional(dev3, region, beta, Q)
        lb = lip_ball(b, ball, beta)
        report.per_ball.append(
            {
                "ball_id": int(ball_id),
                "center": ball.center,
                "radius": ball.radius,
                "F1": f1,
                "F2": f2,
                "F3": f3,
                "F4": f4,
                "lip_ball": lb,
            }
        )
        report.sup_F1 = max(report.sup_F1, f1)
        report.sup_F2 = max(report.sup_F2, f2)
        report.sup_F3 = max(report.sup_F3, f3)
        report.sup_F4 = max(report.sup_F4, f4)
        report.sup_lip_ball = max(report.sup_lip_ball, lb)
        by_radius[ball.radius] = max(by_radius[ball.radius], f2)
    report.per_radius_sup_F2 = {r: v for r, v in by_radius.items() if v > 0.0}

    # (a) scale stability over the top 16x window of dyadic radii
    top = sorted(report.per_radius_sup_F2)[-5:]
    vals = [report.per_radius_sup_F2[r] for r in top]
    if len(vals) >= 2 and min(vals) > 0:
        factor = max(vals) / min(vals)
        report.verdict_notes.append(
            f"F2 per-radius sups over top {2 ** (len(vals) - 1)}x window "
            f"vary by factor {factor:.3g}"
        )
    elif report.sup_F2 == 0.0:
        report.verdict_notes.append("F2 vanishes on every probe ball")

    # (b) sign probe via shrinking ball averages of the negative part
    bneg = neg_part(b)
    tol = 1e-6 * max(1.0, float(np.max(np.abs(b.values))))
    smallest = min(radii)
    worst = 0.0
    for ball in balls:
        if ball.radius != smallest:
            continue
        region = mask_from_ball(ball, grid)
        if region.indices.size == 0:
            continue
        worst = max(worst, average_over(bneg, region))
    if worst > 10.0 * tol:
        report.verdict_notes.append(
            f"negative part detected: smallest-ball mean of b- reaches {worst:.3g}"
        )
    else:
        report.verdict_notes.append("sign probe: nonnegative")

    if corpus:
        sup_ratio = 0.0
        for op in ("maxcomm", "comm-max", "comm-sharp"):
            rows, sup = operator_ratio(
                op, corpus, phi, psi, bound, b=b, threads=threads
            )
            report.ratio_rows.extend(rows)
            sup_ratio = max(sup_ratio, sup)
        report.sup_ratio = sup_ratio
    return report
