"""Maximal operators, commutators, and Orlicz norms on homogeneous groups.

A numerical laboratory for discrete harmonic analysis on Euclidean space
and the first Heisenberg group: fractional/sharp maximal functions and
their commutators over finite ball families, Luxemburg and weak Orlicz
norms, Young-function convex calculus, and Lipschitz-space
characterization functionals, with a brute-force reference kernel matching
the fast path bit for bit.
"""

from .corpus import make_corpus, make_field, rng_for
from .family import BallFamily, build_ball_family, cover_ball_for, with_distinguished
from .fields import (
    GridSpec,
    RegionMask,
    SampledField,
    average_over,
    combine,
    distribution_function,
    integrate,
    mask_from_ball,
    neg_part,
    pos_part,
    sample,
    whole_box,
)
from .groups import (
    Ball,
    GroupSpec,
    ball_contains,
    ball_volume,
    calibrate_constants,
    dilate,
    euclidean,
    group_inv,
    group_mul,
    heisenberg1,
    hom_norm,
    identity,
)
from .lipschitz import (
    CharacterizationReport,
    LipEstimate,
    almost_decreasing_check,
    characterization_report,
    functional_F1,
    functional_F2,
    functional_F3,
    functional_F4,
    lip_ball,
    lipschitz_estimate,
    operator_ratio,
    pair_seminorm_exact,
    psi_from_phi,
)
from .maximal import (
    CoverageError,
    apply_operator,
    bind_family,
    commutator_maximal,
    commutator_sharp,
    fractional_maximal,
    local_maximal,
    maximal_commutator,
    oracle_commutator_maximal,
    oracle_commutator_sharp,
    oracle_fractional_maximal,
    oracle_maximal_commutator,
    oracle_sharp_maximal,
    sharp_maximal,
)
from .norms import (
    NormResult,
    holder_check,
    luxemburg_norm,
    mean_bound_check,
    weak_norm,
)
from .young import (
    GrowthReport,
    LInfinityYoung,
    PowerYoung,
    TabulatedYoung,
    check_delta2,
    check_nabla2,
    check_young_pair,
    tabulated_conjugate,
)

__version__ = "0.1.0"
