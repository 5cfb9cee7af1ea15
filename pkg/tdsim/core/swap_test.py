"""Trace distance of pure states through the SWAP test.

For pure states T = sqrt(1 - |<psi|phi>|^2), and the SWAP test flag reads 0
with probability (1 + |<psi|phi>|^2) / 2.
"""

import math
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from ..encoding.purification import PurifiedOracle
from ..estimators.amplitude import estimate_probability, flag_probability, qae_grid_size
from ..estimators.backend import EstimationBackend, median_of
from ..exceptions import ArgumentError
from ..linalg.density import DensityOperator
from ..linalg.operators import Operator, check_qubit_cap, register_swap
from ..metrics.query_ledger import O_RHO, O_SIGMA, SAMPLES_RHO, SAMPLES_SIGMA, QueryLedger
from ..utils.logger import get_logger

logger = get_logger(__name__)

PURITY_TOL = 1e-9
HADAMARD = np.array([[1, 1], [1, -1]], dtype=np.complex128) / math.sqrt(2)


def _check_pure(state: DensityOperator, name: str) -> None:
    if abs(state.purity() - 1.0) > PURITY_TOL:
        raise ArgumentError(f"{name} is not pure (purity {state.purity():.6g})")


def pure_trace_distance(overlap_squared: float) -> float:
    """sqrt(1 - x) with x clipped to [0, 1]."""
    return math.sqrt(max(0.0, 1.0 - min(max(overlap_squared, 0.0), 1.0)))


def swap_test_circuit(O_psi: PurifiedOracle, O_phi: PurifiedOracle) -> Operator:
    """Unitary on [control, A, ancA, B, ancB]: prepare both states, H, controlled swap of A and B, H."""
    if O_psi.n != O_phi.n:
        raise ArgumentError(f"states act on {O_psi.n} and {O_phi.n} qubits")
    n = O_psi.n
    total = 1 + 2 * n + O_psi.n_anc + O_phi.n_anc
    check_qubit_cap(total)

    swap = np.kron(
        register_swap(n, O_psi.n_anc, n),
        np.eye(2 ** O_phi.n_anc, dtype=np.complex128),
    )
    size = swap.shape[0]
    controlled = np.zeros((2 * size, 2 * size), dtype=np.complex128)
    controlled[:size, :size] = np.eye(size)
    controlled[size:, size:] = swap
    spread = np.kron(HADAMARD, np.eye(size, dtype=np.complex128))
    prepare = np.kron(
        np.eye(2, dtype=np.complex128), np.kron(O_psi.unitary, O_phi.unitary)
    )
    return spread @ controlled @ spread @ prepare


@dataclass
class SwapTestResult:
    estimate: float
    overlap_squared: float
    runs: List[float] = field(default_factory=list)
    grid_size: int = 0
    shots: int = 0
    delta: float = 0.0


def swap_test_pure(
    O_psi: PurifiedOracle,
    O_phi: PurifiedOracle,
    eps: float,
    backend: Optional[EstimationBackend] = None,
    ledger: Optional[QueryLedger] = None,
) -> SwapTestResult:
    """Estimate T for pure states from the SWAP test at delta = eps^2 / 4.

    |x - |<psi|phi>|^2| <= delta gives |sqrt(1 - x) - T| <= 2 sqrt(delta) = eps.
    The ``qae`` backend runs amplitude estimation on the circuit; ``sampling``
    measures it ceil(4 / delta^2) times per run.
    """
    if not 0 < eps < 1:
        raise ArgumentError(f"eps must lie in (0, 1), got {eps}")
    _check_pure(O_psi.state, "psi")
    _check_pure(O_phi.state, "phi")
    backend = backend or EstimationBackend(mode="qae")
    delta = eps ** 2 / 4

    p0 = flag_probability(swap_test_circuit(O_psi, O_phi))
    if backend.mode == "sampling":
        shots = math.ceil(4 / delta ** 2)
        counts = backend.rng.binomial(shots, p0, size=backend.repetitions)
        runs = [2 * c / shots - 1 for c in counts]
        if ledger is not None:
            ledger.charge_costs({O_RHO: 1, O_SIGMA: 1}, times=shots * backend.repetitions)
        x = min(max(median_of(runs), 0.0), 1.0)
        return SwapTestResult(pure_trace_distance(x), x, runs, shots=shots, delta=delta)

    M = qae_grid_size(delta, backend.qae_constant)
    estimate = estimate_probability(p0, M, backend, ledger, {O_RHO: 1, O_SIGMA: 1})
    runs = [2 * r - 1 for r in estimate.runs]
    overlap = min(max(2 * estimate.estimate - 1, 0.0), 1.0)
    result = pure_trace_distance(overlap)
    logger.debug("swap test", delta=delta, grid_size=M, overlap=overlap, estimate=result)
    return SwapTestResult(result, overlap, runs, grid_size=M, delta=delta)


def swap_test_pure_samples(
    psi: DensityOperator,
    phi: DensityOperator,
    eps: float,
    backend: Optional[EstimationBackend] = None,
    ledger: Optional[QueryLedger] = None,
) -> SwapTestResult:
    """SWAP test from copies: ceil(4 / delta^2) shots per run at delta = eps^2 / 4."""
    if not 0 < eps < 1:
        raise ArgumentError(f"eps must lie in (0, 1), got {eps}")
    if psi.dim != phi.dim:
        raise ArgumentError(f"dimension mismatch: {psi.dim} vs {phi.dim}")
    _check_pure(psi, "psi")
    _check_pure(phi, "phi")
    backend = backend or EstimationBackend(mode="sampling")
    delta = eps ** 2 / 4

    overlap = float(np.clip(np.real(np.trace(psi.op @ phi.op)), 0.0, 1.0))
    p0 = (1 + overlap) / 2
    if backend.is_ideal:
        if ledger is not None:
            ledger.charge(SAMPLES_RHO)
            ledger.charge(SAMPLES_SIGMA)
        return SwapTestResult(pure_trace_distance(overlap), overlap, [overlap], delta=delta)

    shots = math.ceil(4 / delta ** 2)
    counts = backend.rng.binomial(shots, p0, size=backend.repetitions)
    runs = [2 * c / shots - 1 for c in counts]
    if ledger is not None:
        ledger.charge(SAMPLES_RHO, shots * backend.repetitions)
        ledger.charge(SAMPLES_SIGMA, shots * backend.repetitions)
    x = min(max(median_of(runs), 0.0), 1.0)
    return SwapTestResult(pure_trace_distance(x), x, runs, shots=shots, delta=delta)


def overlap_bound_holds(x_tilde: float, overlap_squared: float, delta: float) -> bool:
    """|sqrt(1 - x_tilde) - sqrt(1 - F^2)| <= 2 sqrt(delta), given |x_tilde - F^2| <= delta."""
    if abs(x_tilde - overlap_squared) > delta:
        raise ArgumentError("the bound only applies when |x_tilde - F^2| <= delta")
    gap = abs(pure_trace_distance(x_tilde) - pure_trace_distance(overlap_squared))
    return gap <= 2 * math.sqrt(delta) + 1e-12
