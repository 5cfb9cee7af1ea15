"""tdsim - a classical simulator of quantum trace distance estimation."""

from .core.low_rank import ApproxLowRankProfile, choose_delta_p_profile
from .core.swap_test import swap_test_pure, swap_test_pure_samples
from .core.trace_distance import (
    EstimateReport,
    certify_states,
    estimate_purified,
    estimate_samples,
    estimate_trace_distance,
)
from .encoding.purification import purify
from .fixtures.generators import gen_low_rank, generate_pair
from .linalg.density import DensityOperator, trace_distance_exact
from .metrics.query_ledger import QueryLedger
from .validation.config import EstimationConfig, FixtureSpec
from .version import __author__, __author_email__, __version__

__all__ = [
    "ApproxLowRankProfile",
    "DensityOperator",
    "EstimateReport",
    "EstimationConfig",
    "FixtureSpec",
    "QueryLedger",
    "certify_states",
    "choose_delta_p_profile",
    "estimate_purified",
    "estimate_samples",
    "estimate_trace_distance",
    "gen_low_rank",
    "generate_pair",
    "purify",
    "swap_test_pure",
    "swap_test_pure_samples",
    "trace_distance_exact",
]
