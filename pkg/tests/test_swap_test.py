import math

import numpy as np
import pytest

from tdsim.core.swap_test import (
    overlap_bound_holds,
    pure_trace_distance,
    swap_test_circuit,
    swap_test_pure,
    swap_test_pure_samples,
)
from tdsim.encoding.purification import purify
from tdsim.estimators.amplitude import flag_probability, qae_grid_size
from tdsim.estimators.backend import EstimationBackend
from tdsim.exceptions import ArgumentError
from tdsim.linalg.density import trace_distance_exact
from tdsim.metrics.query_ledger import O_RHO, O_SIGMA, SAMPLES_RHO, QueryLedger


def test_pure_trace_distance():
    assert pure_trace_distance(1.0) == 0.0
    assert pure_trace_distance(0.0) == 1.0
    assert pure_trace_distance(1.2) == 0.0
    assert pure_trace_distance(0.75) == pytest.approx(0.5)


def test_swap_circuit_probability(pure_pair):
    psi, phi = pure_pair
    overlap = float(np.real(np.trace(psi.op @ phi.op)))
    circuit = swap_test_circuit(purify(psi), purify(phi))
    assert flag_probability(circuit) == pytest.approx((1 + overlap) / 2)


def test_swap_test_pure_qae(pure_pair):
    psi, phi = pure_pair
    ledger = QueryLedger()
    eps = 0.2
    backend = EstimationBackend(mode="qae", seed=2)
    result = swap_test_pure(purify(psi), purify(phi), eps, backend, ledger)

    assert abs(result.estimate - trace_distance_exact(psi, phi)) <= eps
    assert result.delta == pytest.approx(0.01)
    assert result.grid_size == qae_grid_size(0.01)
    assert ledger.get(O_RHO) == ledger.get(O_SIGMA) == result.grid_size * backend.repetitions


def test_swap_test_pure_ideal(pure_pair):
    psi, phi = pure_pair
    result = swap_test_pure(purify(psi), purify(phi), 0.1, EstimationBackend(mode="ideal"))
    assert result.estimate == pytest.approx(trace_distance_exact(psi, phi), abs=1e-9)


def test_swap_test_rejects_mixed_states(state_pair, pure_pair):
    rho, _ = state_pair
    psi, _ = pure_pair
    with pytest.raises(ArgumentError):
        swap_test_pure(purify(rho), purify(psi), 0.1)
    with pytest.raises(ArgumentError):
        swap_test_pure(purify(psi), purify(psi), 1.5)


def test_swap_test_from_samples(pure_pair):
    psi, phi = pure_pair
    ledger = QueryLedger()
    eps = 0.4
    backend = EstimationBackend(mode="sampling", seed=8, repetitions=3)
    result = swap_test_pure_samples(psi, phi, eps, backend, ledger)

    delta = eps ** 2 / 4
    assert result.shots == math.ceil(4 / delta ** 2)
    assert ledger.get(SAMPLES_RHO) == result.shots * 3
    assert abs(result.estimate - trace_distance_exact(psi, phi)) <= eps


@pytest.mark.parametrize("overlap", [0.0, 0.3, 0.9, 0.995, 1.0])
def test_overlap_bound(overlap):
    delta = 0.01
    for x in np.linspace(max(0.0, overlap - delta), min(1.0, overlap + delta), 7):
        assert overlap_bound_holds(float(x), overlap, delta)
    with pytest.raises(ArgumentError):
        overlap_bound_holds(overlap + 0.5, overlap, delta)


def test_swap_test_pure_sampling_backend_measures_shots(pure_pair):
    psi, phi = pure_pair
    O_psi, O_phi = purify(psi), purify(phi)
    eps = 0.4
    ledger = QueryLedger()

    sampled = swap_test_pure(O_psi, O_phi, eps, EstimationBackend(mode="sampling", seed=4), ledger)
    amplified = swap_test_pure(O_psi, O_phi, eps, EstimationBackend(mode="qae", seed=4))

    assert sampled.shots == math.ceil(4 / sampled.delta ** 2) > 0
    assert sampled.grid_size == 0
    assert amplified.shots == 0
    assert sampled.estimate != amplified.estimate
    assert ledger.get(O_RHO) == ledger.get(O_SIGMA) == sampled.shots * 9
    assert abs(sampled.estimate - trace_distance_exact(psi, phi)) <= eps
