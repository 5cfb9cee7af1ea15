"""Purified quantum query access and the density-to-block-encoding construction."""

import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from ..exceptions import ArgumentError
from ..linalg.density import SPECTRAL_ZERO_TOL, DensityOperator
from ..linalg.operators import (
    Operator,
    as_operator,
    check_qubit_cap,
    complete_unitary,
    num_qubits,
    operator_norm,
    partial_trace,
    register_swap,
    spectral_decomposition,
)
from ..utils.logger import get_logger
from .block_encoding import BlockEncoding

logger = get_logger(__name__)


@dataclass(frozen=True, eq=False)
class PurifiedOracle:
    """Unitary O on [system (n), ancilla (n_anc)] with O|0>|0> purifying ``state``."""

    unitary: Operator
    n: int
    n_anc: int
    state: DensityOperator
    label: str = "O_rho"

    def __post_init__(self):
        op = as_operator(self.unitary, "oracle unitary")
        if num_qubits(op.shape[0]) != self.n + self.n_anc:
            raise ArgumentError(
                f"oracle of dimension {op.shape[0]} does not act on "
                f"{self.n} + {self.n_anc} qubits"
            )
        if self.state.n != self.n:
            raise ArgumentError("oracle state lives on a different register")
        object.__setattr__(self, "unitary", op)

    def prepared_vector(self) -> np.ndarray:
        return self.unitary[:, 0]

    def prepared_state(self) -> Operator:
        """Reduced state of O|0>|0> on the system register."""
        psi = self.prepared_vector()
        return partial_trace(np.outer(psi, psi.conj()), range(self.n))

    def residual(self) -> float:
        return operator_norm(self.prepared_state() - self.state.op)

    def relabeled(self, label: str) -> "PurifiedOracle":
        return replace(self, label=label)


def purify(rho: DensityOperator, label: str = "O_rho") -> PurifiedOracle:
    """Build a purification oracle with ancilla register of ceil(log2 rank) qubits.

    The prepared vector is sum_j sqrt(lambda_j) |psi_j>|j>; the remaining
    columns are completed by Gram-Schmidt.
    """
    if not rho.normalized:
        raise ArgumentError("only normalized states can be purified")
    decomposition = spectral_decomposition(rho.op)
    weights = np.clip(decomposition.eigenvalues, 0.0, None)
    kept = weights > SPECTRAL_ZERO_TOL
    rank = int(np.count_nonzero(kept))
    n_anc = max(1, math.ceil(math.log2(max(rank, 1))))
    check_qubit_cap(rho.n + n_anc)

    amplitudes = np.zeros((rho.dim, 2 ** n_anc), dtype=np.complex128)
    amplitudes[:, :rank] = decomposition.eigenvectors[:, kept] * np.sqrt(weights[kept])
    vector = amplitudes.reshape(-1)
    vector = vector / np.linalg.norm(vector)
    unitary = complete_unitary(vector)
    logger.debug("purified state", n=rho.n, rank=rank, n_anc=n_anc, label=label)
    return PurifiedOracle(unitary, rho.n, n_anc, rho, label)


def block_encoding_label(oracle_label: str) -> str:
    """O_rho -> U_rho; other labels get a U[...] wrapper."""
    if oracle_label.startswith("O_"):
        return "U_" + oracle_label[2:]
    return f"U[{oracle_label}]"


def density_to_block_encoding(
    oracle: PurifiedOracle, label: Optional[str] = None
) -> BlockEncoding:
    """(1, n + n_anc, 0)-block-encoding of the purified state.

    Qubits are [S (n), A (n_anc), T (n)] and the unitary is
    (O† (x) I_T) SWAP_{S,T} (O (x) I_T): two oracle calls per use.
    """
    n, m = oracle.n, oracle.n_anc
    check_qubit_cap(2 * n + m)
    eye_t = np.eye(2 ** n, dtype=np.complex128)
    forward = np.kron(oracle.unitary, eye_t)
    swap = register_swap(n, m, n)
    unitary = forward.conj().T @ (swap @ forward)
    return BlockEncoding(
        unitary=unitary,
        alpha=1.0,
        ancillas=n + m,
        eps=0.0,
        system_qubits=n,
        label=label or block_encoding_label(oracle.label),
        provenance=f"purified({oracle.label})",
        queries={oracle.label: 2},
    )
