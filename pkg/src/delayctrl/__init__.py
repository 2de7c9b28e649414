"""Relative controllability analysis of linear difference equations with delays.

The package models systems x(t) = sum_j A_j x(t - Lambda_j) + B u(t),
computes their recursive matrix coefficients and class-sums, decides
relative controllability at a horizon, finds minimal controllability times,
compares delay vectors by rational dependence, and synthesizes steering and
tracking controls.
"""

from .coefficients import (
    GeneratorBlock,
    SystemSpec,
    XiHatTable,
    XiTable,
    controllability_generators,
    diblik_xi_hat,
    xi,
    xi_hat,
)
from .controllability import (
    AugmentedSystem,
    ControllabilityReport,
    RankBackend,
    TransferResult,
    augmented_system,
    ck_rank_condition,
    controllable_some_time,
    is_relatively_controllable,
    kalman_augmented_check,
    minimal_controllability_time,
    rank_of_span,
    reduced_generator_check,
    saturation_bound,
    transfer_controllability,
)
from .delays import (
    ClassEntry,
    DelayBasis,
    DelayVector,
    TimeStamp,
    commensurable_approx,
    commensurable_surrogate,
    epsilon0,
    make_delay_vector,
    preorder_leq,
    time_tolerance,
)
from .errors import (
    AmbiguousBoundary,
    ApproxNotPositive,
    ClassBeyondHorizon,
    DelayCtrlError,
    DimensionMismatch,
    EpsilonClamped,
    EpsilonTooLarge,
    MixedScalarMode,
    NonPositiveBasis,
    NotCommensurable,
    NotComparable,
    NotControllableAtT,
    RankDeficientBasis,
    RationalParseError,
    RecursionBudgetExceeded,
    SchemaError,
    SurrogateSearchExceeded,
    TheoremViolation,
    ZeroDelay,
)
from .scalars import EXACT, NUMERIC, QC, parse_rational, parse_scalar
from .signals import SignalFunction
from .synthesis import (
    ControlPlan,
    evaluate_plan,
    free_response,
    solve_explicit,
    solve_recursive,
    synthesize_point_control,
    synthesize_tracking_control,
)
from .sysio import parse_delays, parse_signal, parse_system, system_to_json

__version__ = "1.0.0"

__all__ = [
    "AmbiguousBoundary", "ApproxNotPositive", "AugmentedSystem",
    "ClassBeyondHorizon", "ClassEntry", "ControlPlan",
    "ControllabilityReport", "DelayBasis", "DelayCtrlError", "DelayVector",
    "DimensionMismatch", "EXACT", "EpsilonClamped", "EpsilonTooLarge",
    "GeneratorBlock", "MixedScalarMode", "NUMERIC", "NonPositiveBasis",
    "NotCommensurable", "NotComparable", "NotControllableAtT", "QC",
    "RankBackend", "RankDeficientBasis", "RationalParseError",
    "RecursionBudgetExceeded", "SchemaError", "SignalFunction",
    "SurrogateSearchExceeded", "SystemSpec", "TheoremViolation", "TimeStamp",
    "TransferResult", "XiHatTable", "XiTable", "ZeroDelay",
    "augmented_system", "ck_rank_condition", "commensurable_approx",
    "commensurable_surrogate", "controllability_generators",
    "controllable_some_time", "diblik_xi_hat", "epsilon0", "evaluate_plan",
    "free_response", "is_relatively_controllable", "kalman_augmented_check",
    "make_delay_vector", "minimal_controllability_time", "parse_delays",
    "parse_rational", "parse_scalar", "parse_signal", "parse_system",
    "preorder_leq", "rank_of_span", "reduced_generator_check",
    "saturation_bound", "solve_explicit", "solve_recursive",
    "synthesize_point_control", "synthesize_tracking_control",
    "system_to_json", "time_tolerance", "transfer_controllability", "xi",
    "xi_hat",
]
