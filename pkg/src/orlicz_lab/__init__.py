"""Numerical laboratory for Orlicz sequence spaces and rearrangement estimates.

The package is organised bottom-up:

``numerics``
    log-domain scalars, summation, bisection, and adaptive quadrature.
``measure``
    finite step functions, distribution/rearrangement duality, disjoint sums.
``orlicz``
    Orlicz function families, Luxemburg norms, dilation and exponent
    estimates.
``analysis``
    sum-space norms, Cesaro head/tail ratios, equivalence and spanning
    reports.
``counterexample``
    doubly exponential tower constructions and their verification reports.
``montecarlo``
    randomised sign-sum experiments against exact reference norms.
``reporting``
    deterministic CSV/JSON/SVG emission and run manifests.
"""

from .analysis import (
    CriteriaAgreement,
    DivergenceError,
    EquivalenceReport,
    SpanningReport,
    cesaro_head,
    cesaro_tail,
    check_spanning_condition,
    criteria_agreement,
    equivalence_constant,
    head_tail_norm,
    lp_l2_norm,
    profile_step_function,
    uniqueness_check,
)
from .counterexample import (
    BoundsReport,
    CorrespondenceReport,
    TowerConfig,
    TruncationError,
    Witness,
    dyadic_tower,
    find_nonequiv_witness,
    induced_orlicz,
    min_integral,
    quartic_tower,
    verify_min_integral_bounds,
    verify_norm_correspondence,
)
from .measure import StepFunction, distribution_equivalence, scaled_disjoint_union
from .montecarlo import (
    RosenthalResult,
    SimConfig,
    SimReport,
    empirical_lp_norm,
    rosenthal_ratio,
)
from .numerics import Grid, LogScalar
from .orlicz import (
    CanonicalProfile,
    DomainError,
    ExponentEstimates,
    InducedFunction,
    MarginReport,
    OrliczFunction,
    PowerFunction,
    PowerLogFunction,
    TabulatedFunction,
    epsilon_margin,
    exponent_estimates,
    growth_gap,
    luxemburg_norm,
    make_family,
    validate_convexity,
    weighted_profile_dilation,
)

__version__ = "0.1.0"

__all__ = [
    "BoundsReport",
    "CanonicalProfile",
    "CorrespondenceReport",
    "CriteriaAgreement",
    "DivergenceError",
    "DomainError",
    "EquivalenceReport",
    "ExponentEstimates",
    "Grid",
    "InducedFunction",
    "LogScalar",
    "MarginReport",
    "OrliczFunction",
    "PowerFunction",
    "PowerLogFunction",
    "RosenthalResult",
    "SimConfig",
    "SimReport",
    "SpanningReport",
    "StepFunction",
    "TabulatedFunction",
    "TowerConfig",
    "TruncationError",
    "Witness",
    "cesaro_head",
    "cesaro_tail",
    "check_spanning_condition",
    "criteria_agreement",
    "distribution_equivalence",
    "dyadic_tower",
    "empirical_lp_norm",
    "epsilon_margin",
    "equivalence_constant",
    "exponent_estimates",
    "find_nonequiv_witness",
    "growth_gap",
    "head_tail_norm",
    "induced_orlicz",
    "lp_l2_norm",
    "luxemburg_norm",
    "make_family",
    "min_integral",
    "profile_step_function",
    "quartic_tower",
    "rosenthal_ratio",
    "scaled_disjoint_union",
    "uniqueness_check",
    "validate_convexity",
    "verify_min_integral_bounds",
    "verify_norm_correspondence",
    "weighted_profile_dilation",
]
