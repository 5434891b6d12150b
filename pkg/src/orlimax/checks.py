"""Named property checks executed by the ``verify`` command.

Each check exercises one identity or inequality of the library at the
configured grid scale and reports a measured slack: for an inequality
``lhs <= rhs`` the slack is the smallest observed margin ``rhs - lhs``
(negative means violated); for an identity it is the largest observed
deviation (sign flipped so that positive always means "passing by this
much").
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .corpus import make_field, rng_for
from .family import build_ball_family, with_distinguished
from .fields import (
    GridSpec,
    SampledField,
    average_over,
    integrate,
    mask_from_ball,
    neg_part,
    whole_box,
)
from .groups import (
    Ball,
    GroupSpec,
    ball_volume,
    dilate,
    group_inv,
    group_mul,
    hom_norm,
    identity,
)
from .lipschitz import (
    almost_decreasing_check,
    functional_F1,
    functional_F2,
    functional_F3,
    functional_F4,
    lip_ball,
    pair_seminorm_exact,
    psi_from_phi,
)
from .maximal import (
    apply_operator,
    bind_family,
    commutator_maximal,
    fractional_maximal,
    local_maximal,
    maximal_commutator,
    sharp_maximal,
)
from .norms import holder_check, luxemburg_norm, mean_bound_check, weak_norm
from .young import (
    LInfinityYoung,
    PowerYoung,
    check_delta2,
    check_nabla2,
    check_young_pair,
    tabulated_conjugate,
)

__all__ = ["CheckResult", "run_all_checks", "pointwise_suite", "report_dict"]


@dataclass
class CheckResult:
    name: str
    passed: bool
    slack: float
    note: str = ""


def _sample_points(spec: GroupSpec, n: int, seed: int, scale: float = 2.0):
    rng = rng_for(seed, f"points:{spec.kind}:{n}")
    return rng.uniform(-scale, scale, size=(n, spec.coord_dim))


# --- group geometry ---------------------------------------------------------


def group_checks(spec: GroupSpec, seed: int) -> list[CheckResult]:
    out = []
    g = _sample_points(spec, 100, seed)
    h = _sample_points(spec, 100, seed + 1)
    k = _sample_points(spec, 100, seed + 2)
    e = identity(spec)

    assoc = np.max(
        np.abs(
            group_mul(group_mul(g, h, spec), k, spec)
            - group_mul(g, group_mul(h, k, spec), spec)
        )
    )
    ident = np.max(np.abs(group_mul(g, e[None, :], spec) - g))
    inv = np.max(np.abs(group_mul(g, group_inv(g, spec), spec)))
    worst = float(max(assoc, ident, inv))
    out.append(
        CheckResult("group.axioms", worst <= 1e-12, 1e-12 - worst,
                    f"assoc/identity/inverse worst residual {worst:.2e}")
    )

    worst = 0.0
    rho = hom_norm(g, spec)
    for s in (0.5, 2.0, 10.0):
        lhs = hom_norm(dilate(g, s, spec), spec)
        worst = max(worst, float(np.max(np.abs(lhs - s * rho) / (s * rho))))
    out.append(
        CheckResult("group.gauge-homogeneity", worst <= 1e-12, 1e-12 - worst,
                    f"relative homogeneity residual {worst:.2e}")
    )

    sym = float(np.max(np.abs(hom_norm(group_inv(g, spec), spec) - rho)))
    out.append(CheckResult("group.gauge-symmetry", sym == 0.0, -sym,
                           "rho(g^-1) == rho(g) exactly"))

    num = hom_norm(group_mul(g, h, spec), spec)
    den = spec.c0 * (rho + hom_norm(h, spec))
    margin = float(np.min(den - num))
    out.append(
        CheckResult("group.quasi-triangle", margin >= -1e-12, margin,
                    f"calibrated c0={spec.c0:.6g}")
    )
    return out


def volume_scaling_check(spec: GroupSpec, seed: int) -> CheckResult:
    rng = rng_for(seed, "volume-centers")
    centers = rng.uniform(-0.4, 0.4, size=(3, spec.coord_dim))
    res = 49 if spec.coord_dim >= 3 else 201
    worst = 0.0
    for r in (0.5, 1.0, 2.0):
        for c in centers:
            # box comfortably containing the ball; weight-2 axes need r**2 room
            half = np.array(
                [r + 0.5 + abs(ci) for ci in c]
            ) if spec.kind == "euclidean" else np.array(
                [r + 0.5 + abs(c[0]), r + 0.5 + abs(c[1]),
                 r * r + 2 * r + 1 + abs(c[2])]
            )
            grid = GridSpec(spec, tuple(c - half), tuple(c + half), (res,) * spec.coord_dim)
            measured = mask_from_ball(Ball(tuple(c), r), grid).measure
            expected = ball_volume(Ball(tuple(c), r), spec)
            worst = max(worst, abs(measured - expected) / expected)
    return CheckResult(
        "group.volume-scaling", worst <= 0.03, 0.03 - worst,
        f"worst relative volume error {worst:.4f} at resolution {res}"
    )


# --- young calculus ---------------------------------------------------------


def young_checks(young_list, seed: int) -> list[CheckResult]:
    out = []
    r6 = np.geomspace(1e-3, 1e3, 120)

    worst_pair = 0.0
    for phi in young_list:
        res = check_young_pair(phi, r6)
        if not res.ok:
            out.append(CheckResult(
                "young.inverse-product-bounds", False,
                min(res.ratio_min - 1.0, 2.0 - res.ratio_max),
                f"{phi.label}: ratios [{res.ratio_min:.8f}, {res.ratio_max:.8f}], "
                f"offending r={res.r_at_min:.3e}/{res.r_at_max:.3e}"))
            break
        worst_pair = max(worst_pair, res.ratio_max - 2.0, 1.0 - res.ratio_min)
    else:
        out.append(CheckResult(
            "young.inverse-product-bounds", True, 1e-6 - worst_pair,
            f"{len(young_list)} functions on 6 decades"))

    worst = 0.0
    for phi in young_list:
        if isinstance(phi, LInfinityYoung):
            continue
        t = np.geomspace(1e-3, 1e3, 60)
        vals = np.asarray(phi(t), dtype=float)
        back = np.asarray(phi.inverse(vals), dtype=float)
        worst = max(worst, float(np.max(np.abs(back - t) / t)))
        mono = np.all(np.diff(vals) >= 0) and np.all(np.diff(back) >= 0)
        if not mono:
            out.append(CheckResult("young.monotonicity", False, -1.0, phi.label))
    out.append(CheckResult(
        "young.inverse-roundtrip", worst <= 1e-10, 1e-10 - worst,
        f"worst relative round-trip error {worst:.2e}"))

    # numeric conjugation against the closed form, and its log-log exponent
    p = 1.5
    phi = PowerYoung(p)
    tab = tabulated_conjugate(phi, 1e-4, 1e4, 1024)
    closed = phi.conjugate()
    at = np.geomspace(1e-3, 1e3, 50)
    err = float(np.max(np.abs(tab(at) - closed(at)) / closed(at)))
    slopes = np.diff(np.log(tab.values)) / np.diff(np.log(tab.breakpoints))
    slope_err = float(np.max(np.abs(slopes - p / (p - 1.0))))
    ok = err <= 1e-3 and slope_err <= 1e-3
    out.append(CheckResult(
        "young.numeric-conjugate", ok, 1e-3 - max(err, slope_err),
        f"value err {err:.2e}, exponent err {slope_err:.2e} vs p'={p / (p - 1):g}"))

    d2 = check_delta2(PowerYoung(2.0))
    err = abs((d2.delta2_constant or 0.0) - 4.0) / 4.0
    absent = check_delta2(LInfinityYoung()).delta2_constant is None
    out.append(CheckResult(
        "young.doubling", err <= 1e-9 and absent, 1e-9 - err,
        "power doubling constant 2**p; sup-norm family has none"))

    n2 = check_nabla2(PowerYoung(4.0), C_grid=np.array([1.1, 1.2, 1.26, 1.5, 2.0]))
    ok = n2.nabla2_constant == 1.26
    absent = check_nabla2(PowerYoung(1.0)).nabla2_constant is None
    out.append(CheckResult(
        "young.lower-growth", ok and absent, 0.0 if ok and absent else -1.0,
        f"power 4 admits C=1.26 (threshold 2**(1/3)={2 ** (1 / 3):.6f}); "
        "power 1 admits none"))
    return out


# --- orlicz norms -----------------------------------------------------------


def indicator_norm_check(grid: GridSpec, young_list) -> CheckResult:
    box = min(b - a for a, b in zip(grid.lo, grid.hi))
    worst_law = 0.0
    worst_power = 0.0
    for r in (box / 16, box / 8, box / 4):
        ball = Ball(tuple((a + b) / 2 for a, b in zip(grid.lo, grid.hi)), r)
        region = mask_from_ball(ball, grid)
        chi = SampledField(grid, region.member.astype(float))
        measure = region.measure
        for phi in young_list:
            expected = 1.0 / float(np.asarray(phi.inverse(1.0 / measure)))
            strong = luxemburg_norm(chi, phi, region).value
            weak = weak_norm(chi, phi, region).value
            worst_law = max(
                worst_law,
                abs(strong - expected) / expected,
                abs(weak - expected) / expected,
            )
            if isinstance(phi, PowerYoung) and phi.coeff == 1.0:
                worst_power = max(
                    worst_power,
                    abs(strong - measure ** (1.0 / phi.p)) / measure ** (1.0 / phi.p),
                )
    ok = worst_law <= 1e-6 and worst_power <= 1e-9
    return CheckResult(
        "orlicz.indicator-norm-law", ok, 1e-6 - worst_law,
        f"law error {worst_law:.2e}; power-form error {worst_power:.2e}")


def norm_checks(grid: GridSpec, young_list, corpus, seed: int) -> list[CheckResult]:
    out = [indicator_norm_check(grid, young_list)]
    box = whole_box(grid)

    worst = 0.0
    for tag, f in corpus:
        for phi in young_list:
            s = luxemburg_norm(f, phi, box).value
            w = weak_norm(f, phi, box).value
            worst = max(worst, w - s)
    out.append(CheckResult(
        "orlicz.weak-le-strong", worst <= 1e-9, 1e-9 - worst,
        f"{len(corpus)} fields x {len(young_list)} young functions"))

    phi = PowerYoung(2.0)
    f = corpus[0][1]
    base = luxemburg_norm(f, phi, box).value
    worst = 0.0
    if base > 0:
        for c in (-3.0, 0.1, 7.0):
            scaled = SampledField(grid, c * f.values)
            v = luxemburg_norm(scaled, phi, box).value
            worst = max(worst, abs(v - abs(c) * base) / (abs(c) * base))
    out.append(CheckResult(
        "orlicz.norm-homogeneity", worst <= 1e-9, 1e-9 - worst,
        f"relative error {worst:.2e}"))

    worst = 0.0
    for p in (1.0, 1.5, 2.0, 3.0):
        phi = PowerYoung(p)
        for tag, f in corpus[:3]:
            v = luxemburg_norm(f, phi, box).value
            ref = float(
                np.sum(np.abs(f.values) ** p) * grid.cell_volume
            ) ** (1.0 / p)
            if ref > 0:
                worst = max(worst, abs(v - ref) / ref)
    out.append(CheckResult(
        "orlicz.power-consistency", worst <= 1e-9, 1e-9 - worst,
        f"Luxemburg vs discrete p-norm, error {worst:.2e}"))

    rng = rng_for(seed, "holder")
    worst = np.inf
    for _ in range(20):
        fv = rng.standard_normal(grid.n_nodes)
        gv = rng.standard_normal(grid.n_nodes)
        for phi in (PowerYoung(1.5), PowerYoung(2.0)):
            lhs, rhs, ok = holder_check(
                SampledField(grid, fv), SampledField(grid, gv), phi, box
            )
            worst = min(worst, rhs * (1 + 1e-6) - lhs)
    out.append(CheckResult(
        "orlicz.holder-factor-2", worst >= 0, float(worst),
        "20 seeded pairs, factor-2 bound with conjugate pairing"))

    ball = Ball(tuple((a + b) / 2 for a, b in zip(grid.lo, grid.hi)),
                min(b - a for a, b in zip(grid.lo, grid.hi)) / 5)
    worst = np.inf
    for tag, f in corpus:
        for phi in young_list:
            lhs, rhs, ok = mean_bound_check(f, phi, ball)
            worst = min(worst, rhs * (1 + 1e-6) - lhs)
    out.append(CheckResult(
        "orlicz.ball-mean-bound", worst >= 0, float(worst),
        "int_B |f| <= 2 |B| phi^-1(1/|B|) ||f||_phi(B)"))
    return out


# --- maximal operators ------------------------------------------------------


def maximal_identity_checks(grid: GridSpec, seed: int, alphas=None) -> list[CheckResult]:
    out = []
    Q = grid.group.Q
    if alphas is None:
        alphas = (0.0, Q / 2.0)
    box = min(b - a for a, b in zip(grid.lo, grid.hi))
    center = tuple((a + b) / 2 for a, b in zip(grid.lo, grid.hi))
    ball = Ball(center, box / 6)
    fam = build_ball_family(grid, centers_stride=max(2, grid.shape[0] // 8),
                            cover=True, distinguished=(ball,))
    bound = bind_family(fam, grid)
    region = mask_from_ball(ball, grid)
    chi = SampledField(grid, region.member.astype(float))
    idx = region.indices

    worst = 0.0
    for alpha in alphas:
        mf = fractional_maximal(chi, bound, alpha)
        target = region.measure ** (alpha / Q)
        worst = max(worst, float(np.max(np.abs(mf.values[idx] - target) / target)))
        lower = float(np.min(mf.values[idx]))
        if lower < target * (1 - 1e-12):
            worst = max(worst, (target - lower) / target)
    out.append(CheckResult(
        "maximal.indicator-identity", worst <= 1e-12, 1e-12 - worst,
        f"M_a(chi_B) == measure**(a/Q) on B, alphas {tuple(alphas)}, "
        f"relative error {worst:.2e}"))

    const = SampledField(grid, np.full(grid.n_nodes, 2.5))
    mc = fractional_maximal(const, bound, 0.0)
    err = float(np.max(np.abs(mc.values - 2.5)) / 2.5)
    out.append(CheckResult(
        "maximal.constant-field", err <= 1e-12, 1e-12 - err,
        f"M(c) == c, relative error {err:.2e}"))

    sharp_const = sharp_maximal(const, bound)
    worst_const = float(np.max(np.abs(sharp_const.values)))
    out.append(CheckResult(
        "sharp.constant-zero", worst_const == 0.0, -worst_const,
        "sharp maximal of a constant is exactly 0"))

    # half-oscillation: a companion ball with twice the measure makes the
    # mean oscillation of the indicator reach 1/2 on B
    companion = Ball(center, ball.radius * 2.0 ** (1.0 / Q))
    fam2 = with_distinguished(fam, (companion,))
    sharp_chi = sharp_maximal(chi, bind_family(fam2, grid))
    vals = sharp_chi.values[idx]
    lo, hi = float(np.min(vals)), float(np.max(vals))
    ok = 0.45 <= lo and hi <= 0.5 + 1e-12
    out.append(CheckResult(
        "sharp.half-oscillation", ok, min(lo - 0.45, 0.5 + 1e-12 - hi),
        f"indicator oscillation on B in [{lo:.4f}, {hi:.4f}]"))

    rng = rng_for(seed, "sublinearity")
    fv = rng.standard_normal(grid.n_nodes)
    gv = rng.standard_normal(grid.n_nodes)
    mf = fractional_maximal(SampledField(grid, fv), bound, 0.0).values
    mg = fractional_maximal(SampledField(grid, gv), bound, 0.0).values
    mfg = fractional_maximal(SampledField(grid, fv + gv), bound, 0.0).values
    scale = float(np.max(mf + mg))
    sub = float(np.max(mfg - (mf + mg)))
    mcf = fractional_maximal(SampledField(grid, -2.0 * fv), bound, 0.0).values
    hom = float(np.max(np.abs(mcf - 2.0 * mf)))
    worst = max(sub, hom) / scale
    out.append(CheckResult(
        "maximal.sublinearity", worst <= 1e-12, 1e-12 - worst,
        f"M(f+g) <= Mf + Mg and M(cf) == |c| Mf, residual {worst:.2e}"))

    dom = fractional_maximal(SampledField(grid, np.abs(fv)), bound, 0.0).values
    mono = float(np.max(mf - dom))
    out.append(CheckResult(
        "maximal.monotonicity", mono <= 0.0, -mono,
        "|f| <= |g| nodewise implies Mf <= Mg"))
    return out


def pointwise_suite(
    grid: GridSpec,
    beta: float,
    n_pairs: int,
    seed: int,
    threads: int = 1,
) -> CheckResult:
    """Pointwise commutator inequalities on seeded (b, f) pairs.

    Checks, at every node and with absolute slack 1e-9:

    * |[b, M] f| <= M_b f for b >= 0
    * |[b, M] f| <= M_b f + 2 b^- M f for signed b
    * |b - b_B0| <= M_b(chi_B0) on a distinguished ball B0
    * M_b f <= L * (2 c0)**beta * K_fam * M_beta f, where L is the exact
      two-point seminorm of b over grid nodes and K_fam the family constant
      max radius**beta * measure**(-beta/Q).
    """
    spec = grid.group
    box = min(b - a for a, b in zip(grid.lo, grid.hi))
    center = tuple((a + b) / 2 for a, b in zip(grid.lo, grid.hi))
    ball0 = Ball(center, box / 5)
    fam = build_ball_family(grid, centers_stride=max(2, grid.shape[0] // 8),
                            cover=True, distinguished=(ball0,))
    bound = bind_family(fam, grid)
    region0 = mask_from_ball(ball0, grid)
    chi0 = SampledField(grid, region0.member.astype(float))

    k_fam = 0.0
    for ball, m in zip(fam.balls, bound.members):
        if m.size:
            k_fam = max(
                k_fam, ball.radius**beta * (m.size * grid.cell_volume) ** (-beta / spec.Q)
            )

    worst = np.inf
    for j in range(n_pairs):
        b = make_field("random-smooth", grid, seed=seed + 31 * j)
        f = make_field("random-smooth", grid, seed=seed + 31 * j + 17)
        absb = SampledField(grid, np.abs(b.values))

        mf = fractional_maximal(f, bound, 0.0, threads=threads)
        mb_f = maximal_commutator(b, f, bound, 0.0, threads=threads)
        mabsb_f = maximal_commutator(absb, f, bound, 0.0, threads=threads)
        comm_pos = commutator_maximal(absb, f, bound, 0.0, threads=threads)
        worst = min(worst, float(np.min(
            mabsb_f.values + 1e-9 - np.abs(comm_pos.values))))

        comm = commutator_maximal(b, f, bound, 0.0, threads=threads)
        bminus = neg_part(b)
        rhs = mb_f.values + 2.0 * bminus.values * mf.values
        worst = min(worst, float(np.min(rhs + 1e-9 - np.abs(comm.values))))

        mb_chi = maximal_commutator(b, chi0, bound, 0.0, threads=threads)
        b_b0 = average_over(b, region0)
        lhs = np.abs(b.values[region0.indices] - b_b0)
        worst = min(worst, float(np.min(
            mb_chi.values[region0.indices] + 1e-9 - lhs)))

        lam = pair_seminorm_exact(b, beta)
        mbeta_f = fractional_maximal(f, bound, beta, threads=threads)
        bound_rhs = lam * (2.0 * spec.c0) ** beta * k_fam * mbeta_f.values
        worst = min(worst, float(np.min(bound_rhs + 1e-9 - mb_f.values)))

    return CheckResult(
        "commutator.pointwise-suite", worst >= 0.0, float(worst),
        f"{n_pairs} seeded pairs on {grid.shape}; worst margin {worst:.2e}")


def local_truncation_check(grid: GridSpec, seed: int) -> CheckResult:
    """1-d only: local maximal == global maximal of the truncated field."""
    from .family import close_family_over_1d

    box = grid.hi[0] - grid.lo[0]
    ball0 = Ball(((grid.lo[0] + grid.hi[0]) / 2 + box / 16,), box / 5)
    fam = build_ball_family(grid, centers_stride=4, cover=True,
                            distinguished=(ball0,))
    fam = close_family_over_1d(fam, ball0, grid)
    bound = bind_family(fam, grid)
    region0 = mask_from_ball(ball0, grid)
    rng = rng_for(seed, "local-trunc")
    f = SampledField(grid, rng.standard_normal(grid.n_nodes))
    trunc = SampledField(grid, np.where(region0.member, f.values, 0.0))
    for alpha in (0.0, 0.5):
        lhs = fractional_maximal(trunc, bound, alpha)
        rhs = local_maximal(f, ball0, bound, alpha)
        if not np.array_equal(lhs.values[region0.indices],
                              rhs.values[region0.indices]):
            err = float(np.max(np.abs(lhs.values[region0.indices]
                                      - rhs.values[region0.indices])))
            return CheckResult("maximal.local-equals-truncated", False, -err,
                               f"alpha={alpha}: mismatch {err:.2e}")
    return CheckResult("maximal.local-equals-truncated", True, 0.0,
                       "exact over a subset-closed family")


def oracle_equivalence_check(spec: GroupSpec, seed: int) -> CheckResult:
    """All five kernels against the reference loops, bit for bit."""
    if spec.kind == "euclidean" and spec.coord_dim == 1:
        grid = GridSpec(spec, (-2.0,), (2.0,), (65,))
    elif spec.kind == "euclidean" and spec.coord_dim == 2:
        grid = GridSpec(spec, (-2.0, -2.0), (2.0, 2.0), (17, 17))
    elif spec.kind == "euclidean":
        grid = GridSpec(spec, (-1.5,) * spec.coord_dim, (1.5,) * spec.coord_dim,
                        (9,) * spec.coord_dim)
    else:
        grid = GridSpec(spec, (-1.5, -1.5, -2.0), (1.5, 1.5, 2.0), (9, 9, 9))
    fam = build_ball_family(grid, centers_stride=3, cover=True)
    rng = rng_for(seed, f"oracle:{spec.kind}{spec.coord_dim}")
    f = SampledField(grid, rng.standard_normal(grid.n_nodes))
    b = SampledField(grid, rng.standard_normal(grid.n_nodes))
    alpha = 0.5
    for tag in ("maxal", "sharp", "maxcomm", "comm-max", "comm-sharp"):
        fast = apply_operator(tag, f, fam, alpha, b=b)
        ref = apply_operator(tag, f, fam, alpha, b=b, oracle=True)
        if not np.array_equal(fast.values, ref.values):
            err = float(np.max(np.abs(fast.values - ref.values)))
            return CheckResult("kernel.oracle-equivalence", False, -err,
                               f"{tag} differs by up to {err:.2e} on {grid.shape}")
    return CheckResult("kernel.oracle-equivalence", True, 0.0,
                       f"five operators bitwise equal on {grid.shape}")


# --- characterization machinery ---------------------------------------------


def target_space_checks(Q: int) -> list[CheckResult]:
    out = []
    beta = 0.5
    worst = 0.0
    tested = []
    for p in (1.5, 2.0):
        if p >= Q / beta:
            try:
                psi_from_phi(PowerYoung(p), beta, Q)
            except ValueError:
                tested.append(f"p={p:g} rejected")
                continue
            out.append(CheckResult("target.exponent-arithmetic", False, -1.0,
                                   f"p={p:g} should have been rejected"))
            return out
        q = 1.0 / (1.0 / p - beta / Q)
        psi = psi_from_phi(PowerYoung(p), beta, Q)
        slopes = np.diff(np.log(psi.values)) / np.diff(np.log(psi.breakpoints))
        worst = max(worst, float(np.max(np.abs(slopes - q))))
        t = np.geomspace(1e-6, 1e6, 40)
        lhs = np.asarray(psi.inverse(t), dtype=float) * t ** (beta / Q)
        rhs = np.asarray(PowerYoung(p).inverse(t), dtype=float)
        worst_rt = float(np.max(np.abs(lhs - rhs) / rhs))
        worst = max(worst, worst_rt)
        tested.append(f"p={p:g}->q={q:g}")
    out.append(CheckResult(
        "target.exponent-arithmetic", worst <= 1e-3, 1e-3 - worst,
        f"Q={Q}: " + ", ".join(tested) + f"; worst deviation {worst:.2e}"))
    return out


def almost_decreasing_checks(entries) -> list[CheckResult]:
    from .config import parse_young

    out = []
    for entry in entries:
        psi = parse_young(entry.get("psi", "power:2"))
        eps = float(entry.get("eps", 0.5))
        holds, K = almost_decreasing_check(psi, eps)
        out.append(CheckResult(
            f"target.almost-decreasing[{psi.label},eps={eps:g}]", holds,
            10.0 - K, f"smallest sampled constant K={K:.4g}"))
    return out


def charac_chain_checks(grid: GridSpec, beta: float, phi, seed: int) -> list[CheckResult]:
    out = []
    Q = grid.group.Q
    psi = psi_from_phi(phi, beta, Q)
    box = min(b - a for a, b in zip(grid.lo, grid.hi))
    center = tuple((a + b) / 2 for a, b in zip(grid.lo, grid.hi))
    balls = tuple(Ball(center, box / k) for k in (4, 6, 10)) + (
        Ball(tuple(c + box / 8 for c in center), box / 8),
    )
    fam = build_ball_family(grid, centers_stride=max(2, grid.shape[0] // 8),
                            cover=True, distinguished=balls)
    bound = bind_family(fam, grid)

    b = make_field("random-smooth", grid, seed=seed + 5)
    worst = np.inf
    for ball in balls:
        f1 = functional_F1(b, ball, psi, beta, bound)
        f2 = functional_F2(b, ball, beta, bound)
        f3 = functional_F3(b, ball, psi, beta, bound)
        f4 = functional_F4(b, ball, beta, bound)
        worst = min(worst, 2.0 * f1 + 1e-9 - f2, 2.0 * f3 + 1e-9 - f4)
    out.append(CheckResult(
        "charac.mean-chain", worst >= 0, float(worst),
        "F2 <= 2 F1 and F4 <= 2 F3 per probe ball"))

    const = SampledField(grid, np.full(grid.n_nodes, 3.0))
    worst = 0.0
    for ball in balls:
        worst = max(
            worst,
            functional_F1(const, ball, psi, beta, bound),
            functional_F2(const, ball, beta, bound),
            functional_F3(const, ball, psi, beta, bound),
            functional_F4(const, ball, beta, bound),
        )
    tol = 1e-6 * 3.0
    out.append(CheckResult(
        "charac.vanishing-for-constants", worst <= tol, tol - worst,
        f"all four functionals <= {worst:.2e} for b == 3"))

    worst = 0.0
    for ball in balls:
        base = lip_ball(b, ball, beta)
        shifted = lip_ball(SampledField(grid, b.values + 7.5), ball, beta)
        scale = max(1.0, abs(base))
        worst = max(worst, abs(base - shifted) / scale)
    out.append(CheckResult(
        "charac.shift-covariance", worst <= 1e-12, 1e-12 - worst,
        f"ball Lipschitz gauge shift residual {worst:.2e}"))
    return out


# --- assembly ---------------------------------------------------------------


def run_all_checks(prep, threads: int = 1) -> list[CheckResult]:
    """The full verification battery at the configured scale."""
    config = prep.config
    seed = config.seed
    spec = prep.group
    grid = prep.grid
    results: list[CheckResult] = []
    results.extend(group_checks(spec, seed))
    results.append(volume_scaling_check(spec, seed))
    results.extend(young_checks(prep.young, seed))
    results.extend(norm_checks(grid, prep.young, prep.corpus, seed))
    results.extend(maximal_identity_checks(grid, seed))
    beta = float(config.charac.get("beta", 0.5))
    n_pairs = int(config.verify.get("pairs", 6))
    results.append(pointwise_suite(grid, beta, n_pairs, seed, threads=threads))
    if grid.ndim == 1:
        results.append(local_truncation_check(grid, seed))
    results.append(oracle_equivalence_check(spec, seed))
    results.extend(target_space_checks(spec.Q))
    entries = config.verify.get(
        "almost_decreasing", [{"psi": "power:2", "eps": 0.5}]
    )
    results.extend(almost_decreasing_checks(entries))
    phi = None
    from .config import parse_young

    phi = parse_young(config.charac.get("phi", "power:1.5"))
    try:
        results.extend(charac_chain_checks(grid, beta, phi, seed))
    except ValueError as exc:
        results.append(CheckResult("charac.mean-chain", False, -1.0, str(exc)))
    return results


def report_dict(results: list[CheckResult]) -> dict:
    return {
        "all_passed": all(r.passed for r in results),
        "checks": [asdict(r) for r in results],
    }
