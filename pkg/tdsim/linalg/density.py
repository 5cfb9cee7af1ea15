"""Density operators and the exact spectral oracles."""

from dataclasses import dataclass
from typing import Any, Dict, Union

import numpy as np

from ..exceptions import ArgumentError
from ..utils.serialization import operator_from_json, operator_to_json
from .operators import (
    PREDICATE_TOL,
    Operator,
    as_operator,
    is_hermitian,
    num_qubits,
    spectral_decomposition,
)

# eigenvalues at or below this magnitude are numerical zeros
SPECTRAL_ZERO_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """Hermitian PSD operator with trace at most one on ``n`` qubits."""

    op: Operator
    n: int
    normalized: bool = True

    def __post_init__(self):
        op = as_operator(self.op, "density operator")
        if num_qubits(op.shape[0]) != self.n:
            raise ArgumentError(
                f"dimension {op.shape[0]} does not match {self.n} qubits"
            )
        if not is_hermitian(op, PREDICATE_TOL):
            raise ArgumentError("density operator is not Hermitian")
        op = (op + op.conj().T) / 2
        smallest = float(np.min(np.linalg.eigvalsh(op)))
        if smallest < -PREDICATE_TOL:
            raise ArgumentError(f"density operator has eigenvalue {smallest:.3g} < 0")
        trace = float(np.real(np.trace(op)))
        if trace > 1 + PREDICATE_TOL:
            raise ArgumentError(f"trace {trace:.12g} exceeds 1")
        if self.normalized and abs(trace - 1) > PREDICATE_TOL:
            raise ArgumentError(f"normalized state has trace {trace:.12g}")
        object.__setattr__(self, "op", op)

    @classmethod
    def from_matrix(cls, op: Operator, normalized: bool = True) -> "DensityOperator":
        matrix = as_operator(op)
        return cls(matrix, num_qubits(matrix.shape[0]), normalized)

    @classmethod
    def from_pure_state(cls, vector: np.ndarray) -> "DensityOperator":
        psi = np.asarray(vector, dtype=np.complex128).reshape(-1)
        norm = np.linalg.norm(psi)
        if norm == 0:
            raise ArgumentError("pure state vector is zero")
        psi = psi / norm
        return cls.from_matrix(np.outer(psi, psi.conj()))

    @classmethod
    def maximally_mixed(cls, n: int) -> "DensityOperator":
        dim = 2 ** n
        return cls(np.eye(dim, dtype=np.complex128) / dim, n)

    @property
    def dim(self) -> int:
        return self.op.shape[0]

    @property
    def trace(self) -> float:
        return float(np.real(np.trace(self.op)))

    def eigenvalues(self) -> np.ndarray:
        """Eigenvalues in descending order."""
        return np.sort(np.linalg.eigvalsh(self.op))[::-1]

    def purity(self) -> float:
        return float(np.real(np.trace(self.op @ self.op)))

    def rank(self) -> int:
        return rank_delta(self.op, 0.0)

    def to_json(self) -> Dict[str, Any]:
        data = operator_to_json(self.op)
        data.update({"n": self.n, "normalized": self.normalized})
        return data

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "DensityOperator":
        op = operator_from_json(data)
        normalized = bool(data.get("normalized", True))
        n = int(data.get("n", num_qubits(op.shape[0])))
        return cls(op, n, normalized)


OperatorLike = Union[Operator, DensityOperator]


def _matrix(A: OperatorLike) -> Operator:
    return A.op if isinstance(A, DensityOperator) else as_operator(A)


def trace_distance_exact(rho: DensityOperator, sigma: DensityOperator) -> float:
    """Half the sum of absolute eigenvalues of ``rho - sigma``."""
    if rho.dim != sigma.dim:
        raise ArgumentError(
            f"dimension mismatch: {rho.dim} vs {sigma.dim}"
        )
    values = np.linalg.eigvalsh(rho.op - sigma.op)
    return float(np.clip(0.5 * np.sum(np.abs(values)), 0.0, 1.0))


def _hermitian_spectrum(A: OperatorLike, delta: float) -> np.ndarray:
    matrix = _matrix(A)
    if delta < 0:
        raise ArgumentError(f"threshold must be non-negative, got {delta}")
    if not is_hermitian(matrix, PREDICATE_TOL):
        raise ArgumentError("small-eigenvalue statistics need a Hermitian operator")
    magnitudes = np.abs(np.linalg.eigvalsh((matrix + matrix.conj().T) / 2))
    magnitudes[magnitudes <= SPECTRAL_ZERO_TOL] = 0.0
    return magnitudes


def w_small_eigen(A: OperatorLike, delta: float) -> float:
    """Sum of the absolute eigenvalues not greater than ``delta``."""
    magnitudes = _hermitian_spectrum(A, delta)
    return float(np.sum(magnitudes[magnitudes <= delta]))


def rank_delta(A: OperatorLike, delta: float) -> int:
    """Number of eigenvalues with magnitude above ``delta``."""
    magnitudes = _hermitian_spectrum(A, delta)
    return int(np.count_nonzero(magnitudes > delta))


def sign_matrix(A: OperatorLike) -> Operator:
    """sgn(A) in the eigenbasis, with sgn(0) = 0."""
    decomposition = spectral_decomposition(_matrix(A))

    def _sign(values: np.ndarray) -> np.ndarray:
        signs = np.sign(values)
        signs[np.abs(values) <= SPECTRAL_ZERO_TOL] = 0.0
        return signs

    return decomposition.apply(_sign)
