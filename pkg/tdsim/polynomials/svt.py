"""Singular value transformation at the matrix level."""

from ..encoding.block_encoding import BlockEncoding, embed_with_new_ancilla
from ..exceptions import ArgumentError, DilationError
from ..linalg.operators import (
    PREDICATE_TOL,
    Operator,
    as_operator,
    contraction_dilation,
    operator_norm,
    svd,
)
from ..metrics.query_ledger import combine_costs
from ..utils.logger import get_logger
from .sign import OddPolynomial, eval_poly

logger = get_logger(__name__)

# U_A queries per unit of polynomial degree
GAMMA = 2


def matrix_svt_exact(p: OddPolynomial, A: Operator) -> Operator:
    """W p(Sigma) V† from the SVD of A; equals p(A) for Hermitian A since p is odd."""
    op = as_operator(A)
    norm = operator_norm(op)
    if norm > 1 + PREDICATE_TOL:
        raise ArgumentError(f"singular value transformation needs ‖A‖ <= 1, got {norm:.12g}")
    W, s, V = svd(op)
    return (W * eval_poly(p, s)) @ V.conj().T


def qsvt_query_cost(p: OddPolynomial, U_A: BlockEncoding):
    """Base-oracle calls of one application of the transformed encoding."""
    return combine_costs(U_A.queries, {U_A.label: 1}, times=GAMMA * p.degree)


def qsvt_block_encoding(
    p: OddPolynomial, U_A: BlockEncoding, label: str = "U_psv"
) -> BlockEncoding:
    """Encoding of p^SV(A) for the operator A = alpha * block encoded by ``U_A``.

    The alpha of ``U_A`` is kept, so the new block is p^SV(A) / alpha; one
    ancilla is added for the contraction dilation.
    """
    A = U_A.encoded_operator()
    transformed = matrix_svt_exact(p, A)
    target = transformed / U_A.alpha
    norm = operator_norm(target)
    if norm > 1 + PREDICATE_TOL:
        raise DilationError(
            f"transformed block has norm {norm:.12g} > 1; the polynomial is not bounded"
        )
    unitary = embed_with_new_ancilla(contraction_dilation(target), U_A)
    logger.debug("qsvt", degree=p.degree, ancillas=U_A.ancillas + 1, label=label)
    return BlockEncoding(
        unitary=unitary,
        alpha=U_A.alpha,
        ancillas=U_A.ancillas + 1,
        eps=0.0,
        system_qubits=U_A.system_qubits,
        label=label,
        provenance=f"qsvt(degree={p.degree}, {U_A.label})",
        queries=qsvt_query_cost(p, U_A),
    )
