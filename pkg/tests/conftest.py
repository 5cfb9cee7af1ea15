"""Shared test fixtures."""
import numpy as np
import pytest

from tdsim.encoding.purification import purify
from tdsim.fixtures.generators import gen_low_rank, gen_pure
from tdsim.metrics.query_ledger import O_RHO, O_SIGMA, QueryLedger
from tdsim.polynomials.sign import clear_cache
from tdsim.validation.config import EstimationConfig


@pytest.fixture(autouse=True)
def isolated_settings(monkeypatch):
    """Keep environment overrides from leaking into tests."""
    for name in ("TDSIM_MAX_QUBITS", "TDSIM_MAX_WORKERS", "TDSIM_LOG_LEVEL"):
        monkeypatch.delenv(name, raising=False)


@pytest.fixture
def fresh_sign_cache():
    """Empty the sign polynomial cache before and after a test."""
    clear_cache()
    yield
    clear_cache()


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def state_pair():
    """Two independent rank-2 states on two qubits."""
    return gen_low_rank(2, 2, seed=7, stream="rho"), gen_low_rank(2, 2, seed=7, stream="sigma")


@pytest.fixture
def pure_pair():
    return gen_pure(2, seed=11, stream="psi"), gen_pure(2, seed=11, stream="phi")


@pytest.fixture
def oracle_pair(state_pair):
    rho, sigma = state_pair
    return purify(rho, O_RHO), purify(sigma, O_SIGMA)


@pytest.fixture
def ledger():
    return QueryLedger(run_id="test_run")


@pytest.fixture
def ideal_config():
    """Ideal backend at a coarse accuracy so polynomial degrees stay small."""
    return EstimationConfig(eps=0.2, rank_bound=2, seed=3, backend="ideal", repetitions=1)
