"""Exact-arithmetic verification lab for a six-weight contraction inequality
on the Collatz maps: the generic framework, the explicit weight tables for
the accelerated map, and exhaustive sweep engines with exact reports."""

from .arith import OverflowLimitError, WIDTH_LIMIT, format_rational, parse_rational
from .collatz import (
    CapExceededError,
    TrajectoryRecord,
    accel_T,
    collatz_C,
    consistency_CT,
    consistency_sweep,
    stopping_time,
    stopping_times_upto,
)
from .framework import (
    ConditionId,
    ConditionOutcome,
    ConditionParams,
    LambdaSpec,
    OrbitDecayReport,
    OrbitRecord,
    WeightVector,
    check_condition,
    check_orbit_decay,
    contraction_ratio,
    iterate_orbit,
    lemma1_gap,
    lhs,
    metric_d,
    symmetrize,
    weighted_lhs,
)
from .verifier import (
    ConditionCoverageReport,
    LambdaSearchResult,
    RangeSpec,
    VerificationReport,
    Violation,
    condition_coverage,
    cross_check_simplified,
    m_bound_sweep,
    merge_reports,
    orbit_decay_sweep,
    search_lambda,
    verify_lemmas,
    verify_pseudocontraction,
    verify_simplified,
)
from .weights import (
    OddOddSubcase,
    PairClass,
    ParityCase,
    beta0,
    case_bound,
    case_lambda,
    classify,
    delta0,
    eps0,
    odd_odd_subcase,
    simplified_lhs,
    weight_vector,
    zeta0,
)

__version__ = "0.1.0"
