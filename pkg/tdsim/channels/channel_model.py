"""Quantum channels with a declared unitary target and a diamond-distance budget.

Superoperators act on row-major vectorizations, vec(X)[a*d + b] = X[a, b], so
the conjugation X -> K X K† has superoperator kron(K, conj(K)). Choi matrices
are normalized to unit trace.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np

from ..exceptions import ArgumentError, UnsupportedChannelError
from ..linalg.operators import (
    PREDICATE_TOL,
    Operator,
    as_operator,
    is_unitary,
    num_qubits,
    trace_norm,
)
from ..utils.serialization import operator_to_json

CHANNEL_MODES = ("noisy-oracle", "dme", "circuit", "composite")
# largest target dimension for which an explicit Kraus list is materialized
KRAUS_DIM_LIMIT = 32


def unitary_choi(U: Operator) -> Operator:
    d = U.shape[0]
    u = np.asarray(U, dtype=np.complex128).reshape(-1) / np.sqrt(d)
    return np.outer(u, u.conj())


def choi_to_superoperator(J: Operator) -> Operator:
    d = int(round(np.sqrt(J.shape[0])))
    return d * J.reshape(d, d, d, d).transpose(0, 2, 1, 3).reshape(d * d, d * d)


def superoperator_to_choi(S: Operator) -> Operator:
    d = int(round(np.sqrt(S.shape[0])))
    return S.reshape(d, d, d, d).transpose(0, 2, 1, 3).reshape(d * d, d * d) / d


def kraus_to_choi(kraus: np.ndarray) -> Operator:
    """Choi matrix of sum_k K_k X K_k† from a stacked (N, d, d) array."""
    stacked = np.asarray(kraus, dtype=np.complex128)
    d = stacked.shape[-1]
    flat = stacked.reshape(-1, d * d)
    return flat.T @ flat.conj() / d


def choi_to_kraus(J: Operator, tol: float = 1e-12) -> List[Operator]:
    d = int(round(np.sqrt(J.shape[0])))
    values, vectors = np.linalg.eigh(d * (J + J.conj().T) / 2)
    return [
        np.sqrt(value) * vectors[:, i].reshape(d, d)
        for i, value in enumerate(values)
        if value > tol
    ]


def choi_distance(J1: Operator, J2: Operator) -> float:
    """Half the trace norm of a Choi difference; a lower bound on the diamond distance."""
    return 0.5 * trace_norm(J1 - J2)


@dataclass(frozen=True, eq=False)
class CircuitForm:
    """E(X) = tr_env(W (env (x) X) W†), applied ``repetitions`` times.

    W acts on [environment, target]; fresh environment state for each step.
    """

    W: Operator
    environment: Operator
    repetitions: int = 1

    def __post_init__(self):
        W = as_operator(self.W, "circuit unitary")
        env = as_operator(self.environment, "environment state")
        if W.shape[0] % env.shape[0]:
            raise ArgumentError("environment does not factor the circuit register")
        if self.repetitions < 0:
            raise ArgumentError("repetitions must be non-negative")
        object.__setattr__(self, "W", W)
        object.__setattr__(self, "environment", env)

    @property
    def env_dim(self) -> int:
        return self.environment.shape[0]

    @property
    def target_dim(self) -> int:
        return self.W.shape[0] // self.env_dim

    def step_kraus(self) -> np.ndarray:
        """Kraus operators of one step stacked as (N, d, d)."""
        d_env, d = self.env_dim, self.target_dim
        values, vectors = np.linalg.eigh((self.environment + self.environment.conj().T) / 2)
        keep = values > 1e-14
        weighted = vectors[:, keep] * np.sqrt(values[keep])
        blocks = self.W.reshape(d_env, d, d_env, d)
        kraus = np.einsum("faeb,es->fsab", blocks, weighted)
        return kraus.reshape(-1, d, d)

    def superoperator(self) -> Operator:
        step = choi_to_superoperator(kraus_to_choi(self.step_kraus()))
        return np.linalg.matrix_power(step, self.repetitions)

    def inverse(self) -> "CircuitForm":
        return CircuitForm(self.W.conj().T, self.environment, self.repetitions)


@dataclass(eq=False)
class ChannelModel:
    """A channel E meant to stand in for conjugation by ``declared_target``.

    ``delta_budget`` is the declared diamond-distance bound and
    ``copies_per_use`` the number of fresh input samples one use consumes.
    The superoperator is built lazily from the closed form (noisy-oracle) or
    from the circuit form.
    """

    declared_target: Operator
    delta_budget: float
    copies_per_use: int = 0
    mode: str = "noisy-oracle"
    workspace_qubits: int = 0
    circuit: Optional[CircuitForm] = None
    label: str = "E"
    metadata: Dict[str, Any] = field(default_factory=dict)
    _superoperator: Optional[Operator] = field(default=None, repr=False)

    def __post_init__(self):
        target = as_operator(self.declared_target, "declared target")
        if not is_unitary(target):
            raise ArgumentError("declared target must be unitary")
        num_qubits(target.shape[0])
        if self.mode not in CHANNEL_MODES:
            raise ArgumentError(f"unknown channel mode {self.mode!r}")
        if self.delta_budget < 0 or self.copies_per_use < 0:
            raise ArgumentError("budget and copies must be non-negative")
        if self.mode != "noisy-oracle" and self.circuit is None and self._superoperator is None:
            raise ArgumentError(f"a {self.mode} channel needs a circuit form or superoperator")
        if self.circuit is not None and self.circuit.target_dim != target.shape[0]:
            raise ArgumentError("circuit form acts on a different register than the target")
        self.declared_target = target

    @property
    def dim(self) -> int:
        return self.declared_target.shape[0]

    @property
    def num_qubits(self) -> int:
        return num_qubits(self.dim)

    def superoperator(self) -> Operator:
        if self._superoperator is None:
            if self.mode == "noisy-oracle":
                U, d, delta = self.declared_target, self.dim, self.delta_budget
                identity = np.eye(d, dtype=np.complex128).reshape(-1)
                self._superoperator = (1 - delta / 2) * np.kron(U, U.conj()) + (
                    delta / (2 * d)
                ) * np.outer(identity, identity)
            else:
                self._superoperator = self.circuit.superoperator()
        return self._superoperator

    def choi(self) -> Operator:
        return superoperator_to_choi(self.superoperator())

    def kraus(self) -> List[Operator]:
        if self.dim > KRAUS_DIM_LIMIT:
            raise UnsupportedChannelError(
                f"Kraus lists are only materialized up to dimension {KRAUS_DIM_LIMIT}"
            )
        if self.mode == "noisy-oracle":
            d, delta = self.dim, self.delta_budget
            operators = [np.sqrt(1 - delta / 2) * self.declared_target]
            if delta > 0:
                weight = np.sqrt(delta / (2 * d))
                for i in range(d):
                    for j in range(d):
                        unit = np.zeros((d, d), dtype=np.complex128)
                        unit[i, j] = weight
                        operators.append(unit)
            return operators
        return choi_to_kraus(self.choi())

    def apply(self, X: Operator) -> Operator:
        op = as_operator(X)
        if op.shape[0] != self.dim:
            raise ArgumentError(f"channel acts on dimension {self.dim}, got {op.shape[0]}")
        if self.mode == "noisy-oracle" and self._superoperator is None:
            U, delta = self.declared_target, self.delta_budget
            mixed = np.trace(op) * np.eye(self.dim) / self.dim
            return (1 - delta / 2) * U @ op @ U.conj().T + (delta / 2) * mixed
        return (self.superoperator() @ op.reshape(-1)).reshape(self.dim, self.dim)

    def completeness_residual(self) -> float:
        """‖sum_k K_k† K_k - I‖ computed from the Choi matrix."""
        d = self.dim
        blocks = self.choi().reshape(d, d, d, d)
        gram = d * np.einsum("acae->ce", blocks).conj()
        return float(np.max(np.abs(gram - np.eye(d))))

    def choi_proxy_distance(self, target: Optional[Operator] = None) -> float:
        reference = self.declared_target if target is None else as_operator(target)
        return choi_distance(self.choi(), unitary_choi(reference))

    def satisfies_budget(self, tol: float = PREDICATE_TOL) -> bool:
        return self.choi_proxy_distance() <= self.delta_budget + tol

    def to_json(self) -> Dict[str, Any]:
        return {
            "kraus": [operator_to_json(K) for K in self.kraus()],
            "delta": float(self.delta_budget),
            "k_per_use": int(self.copies_per_use),
            "mode": self.mode,
            "label": self.label,
        }
