"""Hadamard tests on block-encodings and the trace-term estimator."""

import math
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from ..encoding.block_encoding import BlockEncoding
from ..encoding.purification import PurifiedOracle
from ..exceptions import ArgumentError
from ..linalg.density import DensityOperator
from ..linalg.operators import Operator, check_qubit_cap
from ..metrics.query_ledger import SAMPLES_RHO, QueryCost, QueryLedger, combine_costs
from ..utils.logger import get_logger
from .amplitude import clamp_probability, estimate_probability, flag_probability, qae_grid_size
from .backend import EstimationBackend, median_of

logger = get_logger(__name__)

PARTS = ("real", "imag")


def _check_part(part: str) -> None:
    if part not in PARTS:
        raise ArgumentError(f"part must be one of {PARTS}, got {part!r}")


def _check_dims(B: BlockEncoding, n: int) -> None:
    if B.system_qubits != n:
        raise ArgumentError(
            f"encoding acts on {B.system_qubits} qubits but the state has {n}"
        )


def application_cost(B: BlockEncoding) -> QueryCost:
    """One call to B expressed in base-oracle calls, plus the call itself."""
    return combine_costs(B.queries, {B.label: 1})


def hadamard_test_prob(
    B: BlockEncoding,
    rho: DensityOperator,
    part: str = "real",
    ledger: Optional[QueryLedger] = None,
) -> float:
    """Probability of outcome 0: (1 + Re tr(block rho)) / 2, or the Im analogue."""
    _check_part(part)
    _check_dims(B, rho.n)
    value = complex(np.trace(B.block() @ rho.op))
    component = value.real if part == "real" else value.imag
    if ledger is not None:
        ledger.charge_costs(application_cost(B))
    return clamp_probability((1.0 + component) / 2.0, "hadamard test")


def hadamard_test_sample(
    B: BlockEncoding,
    rho: DensityOperator,
    part: str,
    shots: int,
    rng: np.random.Generator,
    ledger: Optional[QueryLedger] = None,
    fidelity: float = 1.0,
    cost: Optional[QueryCost] = None,
    sample_key: str = SAMPLES_RHO,
) -> float:
    """Empirical frequency of outcome 0 over ``shots`` runs, each consuming one copy of rho.

    With ``fidelity`` s < 1 a run reports the ideal outcome with probability s
    and a uniformly random bit otherwise.
    """
    if shots < 1:
        raise ArgumentError(f"shots must be positive, got {shots}")
    if not 0.0 <= fidelity <= 1.0:
        raise ArgumentError(f"fidelity must lie in [0, 1], got {fidelity}")
    p0 = hadamard_test_prob(B, rho, part)
    p = fidelity * p0 + (1.0 - fidelity) / 2.0
    successes = int(rng.binomial(shots, clamp_probability(p, "noisy hadamard test")))
    if ledger is not None:
        ledger.charge(sample_key, shots)
        ledger.charge_costs(cost if cost is not None else application_cost(B), times=shots)
    return successes / shots


def hadamard_test_circuit(
    B: BlockEncoding, oracle: PurifiedOracle, part: str = "real"
) -> Operator:
    """Composite unitary on [flag, B ancillas, system, purification ancillas].

    Applied to |0...0> it prepares the purification with ``oracle`` and runs the
    Hadamard test of B on the system register; outcome 0 on the flag has
    probability (1 + Re tr(block rho)) / 2 (S† on the flag for the Im part).
    """
    _check_part(part)
    _check_dims(B, oracle.n)
    total = 1 + B.ancillas + B.system_qubits + oracle.n_anc
    check_qubit_cap(total)

    U = B.unitary
    eye = np.eye(U.shape[0], dtype=np.complex128)
    if part == "real":
        diagonal, off = eye + U, eye - U
    else:
        diagonal, off = eye - 1j * U, eye + 1j * U
    test = 0.5 * np.block([[diagonal, off], [off, diagonal]])

    dim = 2 ** total
    width = oracle.unitary.shape[0]
    spread = np.kron(test, np.eye(2 ** oracle.n_anc, dtype=np.complex128))
    # right-multiply by I (x) O blockwise
    blocks = spread.reshape(dim, dim // width, width) @ oracle.unitary
    return blocks.reshape(dim, dim)


@dataclass
class TermEstimate:
    """Estimate of tr(block rho) with the raw runs behind it."""

    value: float
    runs: List[float] = field(default_factory=list)
    grid_size: int = 0
    shots: int = 0
    probability: float = 0.0


def estimate_trace_term(
    U_sgn: BlockEncoding,
    oracle: PurifiedOracle,
    eps_H: float,
    backend: EstimationBackend,
    ledger: Optional[QueryLedger] = None,
    part: str = "real",
) -> TermEstimate:
    """Estimate Re tr(block rho) to additive ``eps_H`` from the composite Hadamard circuit."""
    if eps_H <= 0:
        raise ArgumentError(f"eps_H must be positive, got {eps_H}")
    circuit = hadamard_test_circuit(U_sgn, oracle, part)
    p = flag_probability(circuit)
    per_call = combine_costs(application_cost(U_sgn), {oracle.label: 1})

    if backend.mode == "ideal":
        if ledger is not None:
            ledger.charge_costs(per_call)
        return TermEstimate(2 * p - 1, [2 * p - 1], probability=p)

    if backend.mode == "qae":
        M = qae_grid_size(eps_H, backend.qae_constant)
        estimate = estimate_probability(p, M, backend, ledger, per_call)
        runs = [2 * r - 1 for r in estimate.runs]
        return TermEstimate(2 * estimate.estimate - 1, runs, grid_size=M, probability=p)

    shots = math.ceil(1.0 / eps_H ** 2)
    counts = backend.rng.binomial(shots, p, size=backend.repetitions)
    runs = [2 * c / shots - 1 for c in counts]
    if ledger is not None:
        ledger.charge_costs(per_call, times=shots * backend.repetitions)
    return TermEstimate(median_of(runs), runs, shots=shots, probability=p)
