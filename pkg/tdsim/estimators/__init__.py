from .amplitude import (
    AmplitudeEstimate,
    amplitude_estimate,
    estimate_probability,
    flag_probability,
    qae_error_bound,
    qae_grid_size,
    qae_outcome_distribution,
)
from .backend import BACKENDS, EstimationBackend, median_of
from .hadamard import (
    TermEstimate,
    estimate_trace_term,
    hadamard_test_circuit,
    hadamard_test_prob,
    hadamard_test_sample,
)

__all__ = [
    "AmplitudeEstimate",
    "BACKENDS",
    "EstimationBackend",
    "TermEstimate",
    "amplitude_estimate",
    "estimate_probability",
    "estimate_trace_term",
    "flag_probability",
    "hadamard_test_circuit",
    "hadamard_test_prob",
    "hadamard_test_sample",
    "median_of",
    "qae_error_bound",
    "qae_grid_size",
    "qae_outcome_distribution",
]
