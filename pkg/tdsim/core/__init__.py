"""Trace distance estimators, threshold selection and the pure-state SWAP test."""

from .low_rank import (
    ApproxLowRankProfile,
    LowRankBound,
    ThresholdSelection,
    approx_low_rank_difference,
    choose_delta_p_oracle,
    choose_delta_p_profile,
    choose_delta_p_rank,
    depolarized_profile,
    exact_profile,
    gibbs_profile,
    power_law_profile,
    select_threshold,
    threshold_for_mass,
    user_profile,
)
from .swap_test import (
    SwapTestResult,
    overlap_bound_holds,
    pure_trace_distance,
    swap_test_circuit,
    swap_test_pure,
    swap_test_pure_samples,
)
from .trace_distance import (
    CSV_COLUMNS,
    CertificationResult,
    EstimateReport,
    certify_states,
    channel_delta,
    check_precondition,
    estimate_purified,
    estimate_samples,
    estimate_trace_distance,
    resolve_delta_p,
    trace_distance_via_sign,
)

__all__ = [
    "ApproxLowRankProfile",
    "CSV_COLUMNS",
    "CertificationResult",
    "EstimateReport",
    "LowRankBound",
    "SwapTestResult",
    "ThresholdSelection",
    "approx_low_rank_difference",
    "certify_states",
    "channel_delta",
    "check_precondition",
    "choose_delta_p_oracle",
    "choose_delta_p_profile",
    "choose_delta_p_rank",
    "depolarized_profile",
    "estimate_purified",
    "estimate_samples",
    "estimate_trace_distance",
    "exact_profile",
    "gibbs_profile",
    "overlap_bound_holds",
    "power_law_profile",
    "pure_trace_distance",
    "resolve_delta_p",
    "select_threshold",
    "swap_test_circuit",
    "swap_test_pure",
    "swap_test_pure_samples",
    "threshold_for_mass",
    "trace_distance_via_sign",
    "user_profile",
]
