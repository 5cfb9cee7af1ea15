"""Amplitude estimation by exact simulation of canonical phase estimation.

For a flag probability p = sin^2(theta) the Grover iterate has eigenphases
+-theta/pi (in turns) on the relevant two-dimensional subspace, so the M-point
phase-estimation outcome distribution is an even mixture of two Fejer kernels.
"""

import math
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from ..exceptions import ArgumentError
from ..linalg.operators import Operator, as_operator, num_qubits
from ..metrics.query_ledger import QueryCost, QueryLedger
from ..utils.logger import get_logger
from .backend import DEFAULT_QAE_CONSTANT, EstimationBackend, median_of

logger = get_logger(__name__)

CLAMP_WARNING = 1e-9


@dataclass
class AmplitudeEstimate:
    estimate: float
    runs: List[float] = field(default_factory=list)
    grid_size: int = 0
    probability: float = 0.0


def clamp_probability(p: float, context: str = "probability") -> float:
    """Clip to [0, 1], warning when the correction is not a rounding artifact."""
    clipped = min(max(float(p), 0.0), 1.0)
    if abs(clipped - p) > CLAMP_WARNING:
        logger.warning("clamped probability", context=context, value=float(p))
    return clipped


def qae_grid_size(eps: float, constant: float = DEFAULT_QAE_CONSTANT) -> int:
    """Smallest power of two M >= constant / eps."""
    if eps <= 0:
        raise ArgumentError(f"target accuracy must be positive, got {eps}")
    target = max(2, math.ceil(constant / eps))
    return 1 << (target - 1).bit_length()


def qae_error_bound(p: float, M: int) -> float:
    """2 pi sqrt(p(1-p)) / M + pi^2 / M^2."""
    return 2 * math.pi * math.sqrt(max(p * (1 - p), 0.0)) / M + math.pi ** 2 / M ** 2


def flag_probability(circuit: Operator, flag_qubit: int = 0) -> float:
    """Probability of outcome 0 on ``flag_qubit`` after applying ``circuit`` to |0...0>."""
    op = np.asarray(circuit)
    n = num_qubits(op.shape[0])
    if not 0 <= flag_qubit < n:
        raise ArgumentError(f"flag qubit {flag_qubit} outside the {n}-qubit register")
    amplitudes = op[:, 0].reshape([2] * n)
    marked = np.take(amplitudes, 0, axis=flag_qubit)
    return float(np.sum(np.abs(marked) ** 2))


def qae_outcome_distribution(p: float, M: int) -> np.ndarray:
    """Probability of each phase-estimation outcome y in 0..M-1."""
    if M < 2:
        raise ArgumentError(f"phase-estimation grid needs M >= 2, got {M}")
    phase = math.asin(math.sqrt(clamp_probability(p, "qae input"))) / math.pi
    y = np.arange(M, dtype=np.float64)

    def fejer(offset: np.ndarray) -> np.ndarray:
        denominator = np.sin(np.pi * offset / M)
        values = np.ones_like(offset)
        regular = np.abs(denominator) > 1e-12
        values[regular] = np.sin(np.pi * offset[regular]) ** 2 / (
            M ** 2 * denominator[regular] ** 2
        )
        return values

    probs = 0.5 * (fejer(y - M * phase) + fejer(y + M * phase))
    return probs / probs.sum()


def _grid_estimate(y: int, M: int) -> float:
    # sin^2(pi y / M) is symmetric under y -> M - y
    return math.sin(math.pi * min(y, M - y) / M) ** 2


def estimate_probability(
    p: float,
    M: int,
    backend: Optional[EstimationBackend] = None,
    ledger: Optional[QueryLedger] = None,
    cost: Optional[QueryCost] = None,
) -> AmplitudeEstimate:
    """Median-of-K amplitude estimate of a known flag probability ``p``.

    Each run costs ``M`` executions of the circuit, charged as ``cost`` per
    execution.
    """
    if M < 2:
        raise ArgumentError(f"amplitude estimation needs M >= 2, got {M}")
    p = clamp_probability(p, "amplitude")
    backend = backend or EstimationBackend(mode="qae")
    if backend.mode == "sampling":
        raise ArgumentError("amplitude estimation runs on the qae or ideal backend, not sampling")
    if backend.is_ideal:
        if ledger is not None and cost:
            ledger.charge_costs(cost)
        return AmplitudeEstimate(p, [p], M, p)

    distribution = qae_outcome_distribution(p, M)
    outcomes = backend.rng.choice(M, size=backend.repetitions, p=distribution)
    runs = [_grid_estimate(int(y), M) for y in outcomes]
    if ledger is not None and cost:
        ledger.charge_costs(cost, times=M * backend.repetitions)
    return AmplitudeEstimate(median_of(runs), runs, M, p)


def amplitude_estimate(
    circuit: Operator,
    M: int,
    backend: Optional[EstimationBackend] = None,
    ledger: Optional[QueryLedger] = None,
    cost: Optional[QueryCost] = None,
    flag_qubit: int = 0,
) -> AmplitudeEstimate:
    """Estimate the probability that ``circuit`` leaves ``flag_qubit`` in |0>."""
    if M < 2:
        raise ArgumentError(f"amplitude estimation needs M >= 2, got {M}")
    op = as_operator(circuit, "circuit")
    return estimate_probability(flag_probability(op, flag_qubit), M, backend, ledger, cost)
