"""Dense complex operators on qubit registers.

Qubit 0 is the most significant tensor factor: ``tensor(A, B)`` places ``A``
on qubit 0. Every function here is pure and thread-safe.
"""

from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple

import numpy as np

from ..exceptions import ArgumentError, DilationError, DimensionCapError
from ..validation.config import get_settings

PREDICATE_TOL = 1e-9
RECONSTRUCTION_TOL = 1e-10

Operator = np.ndarray


def as_operator(A: Operator, name: str = "operator") -> Operator:
    """Validate a square finite matrix and return it as complex128."""
    op = np.asarray(A, dtype=np.complex128)
    if op.ndim != 2 or op.shape[0] != op.shape[1] or op.shape[0] < 1:
        raise ArgumentError(f"{name} must be a non-empty square matrix, got {op.shape}")
    if not np.all(np.isfinite(op)):
        raise ArgumentError(f"{name} has non-finite entries")
    return op


def num_qubits(dim: int) -> int:
    """Number of qubits of a register of dimension ``dim``."""
    if dim < 1 or dim & (dim - 1):
        raise ArgumentError(f"dimension {dim} is not a power of two")
    return dim.bit_length() - 1


def check_qubit_cap(n_qubits: int) -> None:
    """Raise if a register of ``n_qubits`` exceeds the configured cap."""
    cap = get_settings().max_qubits
    if n_qubits > cap:
        raise DimensionCapError(
            f"register of {n_qubits} qubits exceeds the cap of {cap} qubits"
        )


def identity(n_qubits: int) -> Operator:
    check_qubit_cap(n_qubits)
    return np.eye(2 ** n_qubits, dtype=np.complex128)


def is_unitary(A: Operator, tol: float = PREDICATE_TOL) -> bool:
    op = np.asarray(A)
    # Frobenius norm bounds the operator norm from above
    return bool(np.linalg.norm(op.conj().T @ op - np.eye(op.shape[0])) <= tol)


def is_hermitian(A: Operator, tol: float = PREDICATE_TOL) -> bool:
    op = np.asarray(A)
    return bool(np.max(np.abs(op - op.conj().T), initial=0.0) <= tol)


def is_psd(A: Operator, tol: float = PREDICATE_TOL) -> bool:
    op = np.asarray(A)
    if not is_hermitian(op, tol):
        return False
    return bool(np.min(np.linalg.eigvalsh((op + op.conj().T) / 2)) >= -tol)


def operator_norm(A: Operator) -> float:
    """Largest singular value."""
    return float(np.linalg.norm(np.asarray(A), 2))


def trace_norm(A: Operator) -> float:
    op = np.asarray(A)
    if is_hermitian(op, PREDICATE_TOL):
        return float(np.sum(np.abs(np.linalg.eigvalsh((op + op.conj().T) / 2))))
    return float(np.sum(np.linalg.svd(op, compute_uv=False)))


def tensor(A: Operator, B: Operator, *more: Operator) -> Operator:
    """Kronecker product of two or more operators."""
    factors = [A, B, *more]
    dim = 1
    for factor in factors:
        dim *= np.asarray(factor).shape[0]
    if dim > 2 ** get_settings().max_qubits:
        raise DimensionCapError(
            f"tensor product of dimension {dim} exceeds the qubit cap"
        )
    result = as_operator(factors[0])
    for factor in factors[1:]:
        result = np.kron(result, as_operator(factor))
    return result


def _validate_qubits(indices: Iterable[int], n: int) -> List[int]:
    qubits = list(indices)
    if len(set(qubits)) != len(qubits):
        raise ArgumentError(f"duplicate qubit indices in {qubits}")
    for q in qubits:
        if not isinstance(q, (int, np.integer)) or not 0 <= q < n:
            raise ArgumentError(f"qubit index {q} outside 0..{n - 1}")
    return sorted(int(q) for q in qubits)


def partial_trace(A: Operator, keep: Iterable[int]) -> Operator:
    """Trace out every qubit not in ``keep``.

    The kept qubits appear in increasing index order in the result.
    """
    op = as_operator(A)
    n = num_qubits(op.shape[0])
    kept = _validate_qubits(keep, n)
    traced = [q for q in range(n) if q not in kept]
    dk, dt = 2 ** len(kept), 2 ** len(traced)
    if n == 0:
        return op.copy()
    axes = kept + traced + [n + q for q in kept] + [n + q for q in traced]
    reshaped = op.reshape([2] * (2 * n)).transpose(axes).reshape(dk, dt, dk, dt)
    return np.einsum("ijkj->ik", reshaped)


def _inverse(perm: Sequence[int]) -> List[int]:
    inverse = [0] * len(perm)
    for i, p in enumerate(perm):
        inverse[p] = i
    return inverse


def permute_qubits(A: Operator, perm: Sequence[int]) -> Operator:
    """Relabel qubits: the factor on qubit ``i`` moves to position ``perm[i]``."""
    op = as_operator(A)
    n = num_qubits(op.shape[0])
    if sorted(perm) != list(range(n)):
        raise ArgumentError(f"{list(perm)} is not a permutation of {n} qubits")
    inv = _inverse(perm)
    axes = inv + [n + i for i in inv]
    return op.reshape([2] * (2 * n)).transpose(axes).reshape(op.shape)


def qubit_permutation(n: int, perm: Sequence[int]) -> Operator:
    """Unitary sending the bit on qubit ``i`` to qubit ``perm[i]``."""
    if sorted(perm) != list(range(n)):
        raise ArgumentError(f"{list(perm)} is not a permutation of {n} qubits")
    inv = _inverse(perm)
    eye = np.eye(2 ** n, dtype=np.complex128).reshape([2] * (2 * n))
    return eye.transpose(inv + list(range(n, 2 * n))).reshape(2 ** n, 2 ** n)


def register_swap(n_a: int, n_mid: int, n_b: int) -> Operator:
    """Swap two equal registers separated by ``n_mid`` untouched qubits."""
    if n_a != n_b:
        raise ArgumentError("swapped registers must have equal width")
    total = n_a + n_mid + n_b
    perm = list(range(total))
    for i in range(n_a):
        perm[i] = n_a + n_mid + i
        perm[n_a + n_mid + i] = i
    return qubit_permutation(total, perm)


def complete_unitary(columns: Operator, tol: float = 1e-8) -> Operator:
    """Extend orthonormal columns to a unitary by Gram-Schmidt.

    Candidates are the standard basis vectors in index order, so the
    completion is deterministic.
    """
    cols = np.asarray(columns, dtype=np.complex128)
    if cols.ndim == 1:
        cols = cols.reshape(-1, 1)
    dim, k = cols.shape
    if np.linalg.norm(cols.conj().T @ cols - np.eye(k), 2) > PREDICATE_TOL:
        raise DilationError("columns to complete are not orthonormal")
    basis = np.zeros((dim, dim), dtype=np.complex128)
    basis[:, :k] = cols
    filled = k
    for i in range(dim):
        if filled == dim:
            break
        v = np.zeros(dim, dtype=np.complex128)
        v[i] = 1.0
        for _ in range(2):
            current = basis[:, :filled]
            v = v - current @ (current.conj().T @ v)
        norm = np.linalg.norm(v)
        if norm > tol:
            basis[:, filled] = v / norm
            filled += 1
    if filled < dim:
        raise DilationError("Gram-Schmidt completion ran out of candidates")
    return basis


def contraction_dilation(P: Operator, tol: float = PREDICATE_TOL) -> Operator:
    """Unitary [[P, sqrt(I - PP†)], [sqrt(I - P†P), -P†]] for ``‖P‖ ≤ 1``."""
    op = as_operator(P)
    norm = operator_norm(op)
    if norm > 1 + tol:
        raise DilationError(f"cannot dilate an operator of norm {norm:.12g} > 1")
    # both square roots share one SVD so the off-diagonal identity is exact
    W, s, Vh = np.linalg.svd(op)
    c = np.sqrt(np.clip(1.0 - s ** 2, 0.0, None))
    left = (W * c) @ W.conj().T
    right = (Vh.conj().T * c) @ Vh
    return np.block([[op, left], [right, -op.conj().T]])


def svd(A: Operator) -> Tuple[Operator, np.ndarray, Operator]:
    """Return (W, singular values descending, V) with A = W diag(s) V†."""
    op = as_operator(A)
    W, s, Vh = np.linalg.svd(op)
    return W, s, Vh.conj().T


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Eigenpairs of a Hermitian operator, eigenvalues descending."""

    eigenvalues: np.ndarray
    eigenvectors: Operator

    def reconstruct(self) -> Operator:
        V = self.eigenvectors
        return (V * self.eigenvalues) @ V.conj().T

    def apply(self, fn) -> Operator:
        """Matrix function ``fn`` applied in the eigenbasis."""
        V = self.eigenvectors
        return (V * np.asarray(fn(self.eigenvalues))) @ V.conj().T


def spectral_decomposition(A: Operator) -> SpectralDecomposition:
    """Eigendecomposition with a fixed phase convention.

    Each eigenvector is rotated so its first entry of magnitude above 1e-8 is
    real positive; ties in eigenvalue keep their original index order.
    """
    op = as_operator(A)
    if not is_hermitian(op):
        raise ArgumentError("spectral decomposition requires a Hermitian operator")
    values, vectors = np.linalg.eigh((op + op.conj().T) / 2)
    order = np.argsort(-values, kind="stable")
    values, vectors = values[order], vectors[:, order]
    for j in range(vectors.shape[1]):
        column = vectors[:, j]
        lead = np.flatnonzero(np.abs(column) > 1e-8)[0]
        vectors[:, j] = column * (abs(column[lead]) / column[lead])
    return SpectralDecomposition(values, vectors)
