"""Block-encodings and the algebra that combines them.

Ancilla qubits are always the most significant qubits of a block-encoding's
unitary, so the encoded block is the top-left ``2**n x 2**n`` corner. New
ancillas introduced by a construction are prepended in front of the old ones.
"""

from dataclasses import dataclass, field, replace
from typing import Any, Dict, Mapping, Optional, Sequence

import numpy as np

from ..exceptions import ArgumentError
from ..linalg.operators import (
    PREDICATE_TOL,
    Operator,
    as_operator,
    check_qubit_cap,
    is_unitary,
    num_qubits,
    operator_norm,
    permute_qubits,
)
from ..metrics.query_ledger import combine_costs
from ..utils.logger import get_logger
from ..utils.serialization import operator_from_json, operator_to_json

logger = get_logger(__name__)


@dataclass(frozen=True, eq=False)
class BlockEncoding:
    """An (alpha, ancillas, eps)-block-encoding.

    ``queries`` is the cost of one application of ``unitary`` in calls to the
    underlying oracles; estimators multiply it by the number of executions.
    """

    unitary: Operator
    alpha: float
    ancillas: int
    eps: float
    system_qubits: int
    label: str = "U"
    provenance: str = ""
    queries: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self):
        op = as_operator(self.unitary, "block-encoding unitary")
        if self.alpha < 0 or self.eps < 0 or self.ancillas < 0:
            raise ArgumentError("alpha, eps and ancillas must be non-negative")
        expected = self.system_qubits + self.ancillas
        if num_qubits(op.shape[0]) != expected:
            raise ArgumentError(
                f"unitary of dimension {op.shape[0]} does not act on "
                f"{self.system_qubits} system + {self.ancillas} ancilla qubits"
            )
        object.__setattr__(self, "unitary", op)
        object.__setattr__(self, "queries", dict(self.queries))

    @property
    def system_dim(self) -> int:
        return 2 ** self.system_qubits

    @property
    def total_qubits(self) -> int:
        return self.system_qubits + self.ancillas

    def block(self) -> Operator:
        """<0|_a U |0>_a."""
        d = self.system_dim
        return self.unitary[:d, :d]

    def encoded_operator(self) -> Operator:
        return self.alpha * self.block()

    def is_unitary(self, tol: float = PREDICATE_TOL) -> bool:
        return is_unitary(self.unitary, tol)

    def rescaled(self, factor: float, label: Optional[str] = None) -> "BlockEncoding":
        """Same unitary read as an encoding of ``factor * A``."""
        if factor <= 0:
            raise ArgumentError(f"rescale factor must be positive, got {factor}")
        return replace(
            self,
            alpha=self.alpha * factor,
            eps=self.eps * factor,
            label=label or self.label,
        )

    def controlled(self) -> Operator:
        """|0><0| (x) I + |1><1| (x) U with the control prepended."""
        dim = self.unitary.shape[0]
        check_qubit_cap(self.total_qubits + 1)
        result = np.zeros((2 * dim, 2 * dim), dtype=np.complex128)
        result[:dim, :dim] = np.eye(dim)
        result[dim:, dim:] = self.unitary
        return result

    def to_json(self) -> Dict[str, Any]:
        data = operator_to_json(self.unitary)
        data.update(
            {
                "alpha": float(self.alpha),
                "ancillas": int(self.ancillas),
                "eps": float(self.eps),
                "system_qubits": int(self.system_qubits),
                "label": self.label,
                "provenance": self.provenance,
            }
        )
        return data

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "BlockEncoding":
        return cls(
            unitary=operator_from_json(data),
            alpha=float(data["alpha"]),
            ancillas=int(data["ancillas"]),
            eps=float(data["eps"]),
            system_qubits=int(data["system_qubits"]),
            label=data.get("label", "U"),
            provenance=data.get("provenance", ""),
        )


def verify_block_encoding(B: BlockEncoding, A: Operator) -> float:
    """Operator-norm residual ``‖alpha <0|B|0> - A‖``."""
    target = as_operator(A)
    if target.shape[0] != B.system_dim:
        raise ArgumentError(
            f"encoding acts on dimension {B.system_dim}, target has {target.shape[0]}"
        )
    return operator_norm(B.encoded_operator() - target)


def encodes(B: BlockEncoding, A: Operator, tol: float = PREDICATE_TOL) -> bool:
    """True iff the measured residual stays within the declared budget."""
    return verify_block_encoding(B, A) <= B.eps + tol


def trivial_encoding(A: Operator, label: str = "U") -> BlockEncoding:
    """Wrap a unitary as a (1, 0, 0)-block-encoding of itself."""
    op = as_operator(A)
    if not is_unitary(op):
        raise ArgumentError("only unitaries encode themselves without ancillas")
    return BlockEncoding(op, 1.0, 0, 0.0, num_qubits(op.shape[0]), label, "unitary")


def pad_ancillas(B: BlockEncoding, extra: int) -> BlockEncoding:
    """Prepend ``extra`` idle ancillas; the block is unchanged."""
    if extra < 0:
        raise ArgumentError("cannot remove ancillas")
    if extra == 0:
        return B
    check_qubit_cap(B.total_qubits + extra)
    unitary = np.kron(np.eye(2 ** extra, dtype=np.complex128), B.unitary)
    return replace(B, unitary=unitary, ancillas=B.ancillas + extra)


def _swap_middle_and_last(op: Operator, n_first: int, n_mid: int, n_last: int) -> Operator:
    """Reorder an operator on [first, mid, last] to act on [first, last, mid]."""
    perm = list(range(n_first))
    perm += [n_first + n_last + i for i in range(n_mid)]
    perm += [n_first + j for j in range(n_last)]
    return permute_qubits(op, perm)


@dataclass(frozen=True, eq=False)
class StatePrepPair:
    """(beta, b, eps1)-state-preparation pair (P_L, P_R)."""

    P_L: Operator
    P_R: Operator
    beta: float
    b: int
    eps1: float = 0.0

    def __post_init__(self):
        for name in ("P_L", "P_R"):
            op = as_operator(getattr(self, name), name)
            if op.shape[0] != 2 ** self.b or not is_unitary(op):
                raise ArgumentError(f"{name} must be a unitary on {self.b} qubits")
            object.__setattr__(self, name, op)

    def residual(self, y: Sequence[float]) -> float:
        """sum_j |beta c_j^* d_j - y_j| with y zero-padded to 2**b entries."""
        size = 2 ** self.b
        target = np.zeros(size, dtype=np.complex128)
        if len(y) > size:
            raise ArgumentError(f"{len(y)} coefficients do not fit {self.b} qubits")
        target[: len(y)] = y
        c, d = self.P_L[:, 0], self.P_R[:, 0]
        return float(np.sum(np.abs(self.beta * c.conj() * d - target)))


def difference_pair() -> StatePrepPair:
    """(HX, H): a (2, 1, 0)-state-preparation pair for y = (1, -1)."""
    h = np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2)
    x = np.array([[0, 1], [1, 0]], dtype=np.complex128)
    return StatePrepPair(h @ x, h, beta=2.0, b=1, eps1=0.0)


def lcu(
    encodings: Sequence[BlockEncoding],
    spp: StatePrepPair,
    y: Sequence[float],
    label: str = "U_lcu",
) -> BlockEncoding:
    """Linear combination sum_j y_j A_j of encodings sharing alpha.

    The result is an (alpha*beta, a+b, alpha*eps1 + alpha*beta*eps2)-block-
    encoding where eps2 is the largest input budget.
    """
    if not encodings:
        raise ArgumentError("lcu needs at least one encoding")
    if len(encodings) > 2 ** spp.b or len(y) != len(encodings):
        raise ArgumentError("coefficients, encodings and pair width disagree")
    n = encodings[0].system_qubits
    alpha = encodings[0].alpha
    for enc in encodings:
        if enc.system_qubits != n:
            raise ArgumentError(
                f"mismatched system qubits: {enc.system_qubits} vs {n}"
            )
        if abs(enc.alpha - alpha) > PREDICATE_TOL:
            raise ArgumentError(f"mismatched alpha: {enc.alpha} vs {alpha}")
    residual = spp.residual(y)
    if residual > spp.eps1 + PREDICATE_TOL:
        raise ArgumentError(
            f"state-preparation pair misses the coefficients by {residual:.3g}"
        )

    width = max(enc.ancillas for enc in encodings)
    padded = [pad_ancillas(enc, width - enc.ancillas) for enc in encodings]
    check_qubit_cap(spp.b + width + n)

    dim = padded[0].unitary.shape[0]
    size = 2 ** spp.b
    select = np.zeros((size * dim, size * dim), dtype=np.complex128)
    for j in range(size):
        block = padded[j].unitary if j < len(padded) else np.eye(dim)
        select[j * dim:(j + 1) * dim, j * dim:(j + 1) * dim] = block
    eye = np.eye(dim, dtype=np.complex128)
    unitary = np.kron(spp.P_L.conj().T, eye) @ select @ np.kron(spp.P_R, eye)

    eps2 = max(enc.eps for enc in encodings)
    queries = combine_costs(
        *[enc.queries for enc in encodings],
        *[{enc.label: 1} for enc in encodings],
    )
    logger.debug("built lcu", terms=len(encodings), ancillas=spp.b + width)
    return BlockEncoding(
        unitary=unitary,
        alpha=alpha * spp.beta,
        ancillas=spp.b + width,
        eps=alpha * spp.eps1 + alpha * spp.beta * eps2,
        system_qubits=n,
        label=label,
        provenance="lcu(" + ", ".join(enc.label for enc in encodings) + ")",
        queries=queries,
    )


def lcu_difference(
    U_rho: BlockEncoding, U_sigma: BlockEncoding, label: str = "U_nu"
) -> BlockEncoding:
    """Encoding of nu = (rho - sigma) / 2 with the inputs' alpha."""
    if U_rho.system_qubits != U_sigma.system_qubits:
        raise ArgumentError(
            f"mismatched system qubits: {U_rho.system_qubits} vs {U_sigma.system_qubits}"
        )
    combined = lcu([U_rho, U_sigma], difference_pair(), (1.0, -1.0), label=label)
    return combined.rescaled(0.5)


def product_block_encodings(
    U: BlockEncoding, V: BlockEncoding, label: str = "U_prod"
) -> BlockEncoding:
    """Encoding of A·B from an encoding U of A and V of B.

    Qubit order of the result is [V ancillas, U ancillas, system]; V is
    applied first.
    """
    if U.system_qubits != V.system_qubits:
        raise ArgumentError(
            f"mismatched system qubits: {U.system_qubits} vs {V.system_qubits}"
        )
    n, a, b = U.system_qubits, U.ancillas, V.ancillas
    check_qubit_cap(n + a + b)
    apply_u = np.kron(np.eye(2 ** b, dtype=np.complex128), U.unitary)
    apply_v = _swap_middle_and_last(
        np.kron(V.unitary, np.eye(2 ** a, dtype=np.complex128)), b, n, a
    )
    return BlockEncoding(
        unitary=apply_u @ apply_v,
        alpha=U.alpha * V.alpha,
        ancillas=a + b,
        eps=U.alpha * V.eps + V.alpha * U.eps,
        system_qubits=n,
        label=label,
        provenance=f"product({U.label}, {V.label})",
        queries=combine_costs(U.queries, V.queries, {U.label: 1}, {V.label: 1}),
    )


def embed_with_new_ancilla(dilation: Operator, B: BlockEncoding) -> Operator:
    """Place a dilation on [new, system] into the register [new, B's ancillas, system]."""
    n, a = B.system_qubits, B.ancillas
    check_qubit_cap(1 + a + n)
    full = np.kron(dilation, np.eye(2 ** a, dtype=np.complex128))
    return _swap_middle_and_last(full, 1, n, a)
