"""Dense linear algebra on qubit registers."""

from .density import (
    DensityOperator,
    rank_delta,
    sign_matrix,
    trace_distance_exact,
    w_small_eigen,
)
from .operators import (
    PREDICATE_TOL,
    RECONSTRUCTION_TOL,
    Operator,
    SpectralDecomposition,
    complete_unitary,
    contraction_dilation,
    is_hermitian,
    is_psd,
    is_unitary,
    operator_norm,
    partial_trace,
    permute_qubits,
    qubit_permutation,
    spectral_decomposition,
    svd,
    tensor,
    trace_norm,
)

__all__ = [
    "DensityOperator",
    "Operator",
    "PREDICATE_TOL",
    "RECONSTRUCTION_TOL",
    "SpectralDecomposition",
    "complete_unitary",
    "contraction_dilation",
    "is_hermitian",
    "is_psd",
    "is_unitary",
    "operator_norm",
    "partial_trace",
    "permute_qubits",
    "qubit_permutation",
    "rank_delta",
    "sign_matrix",
    "spectral_decomposition",
    "svd",
    "tensor",
    "trace_distance_exact",
    "trace_norm",
    "w_small_eigen",
]
