import json

import numpy as np
import pytest

from tdsim.exceptions import FixtureValidationError
from tdsim.fixtures.generators import (
    Fixture,
    gen_gibbs,
    gen_low_rank,
    gen_power_law,
    gen_pure,
    generate,
    generate_pair,
    gibbs_hamiltonian,
    haar_unitary,
    load_fixture,
    load_fixture_pair,
    power_law_spectrum,
    save_fixture,
    save_fixture_pair,
)
from tdsim.linalg.operators import is_unitary
from tdsim.validation.config import FixtureSpec


def test_haar_unitary(rng):
    assert is_unitary(haar_unitary(8, rng))


def test_low_rank_states_are_reproducible():
    a = gen_low_rank(3, 2, seed=9)
    b = gen_low_rank(3, 2, seed=9)
    c = gen_low_rank(3, 2, seed=9, stream="sigma")
    assert np.allclose(a.op, b.op)
    assert not np.allclose(a.op, c.op)
    assert a.rank() == 2
    assert a.trace() == pytest.approx(1.0)


def test_uniform_spectrum():
    state = gen_low_rank(2, 4, seed=1, uniform=True)
    assert np.allclose(state.eigenvalues(), 0.25)


def test_low_rank_validation():
    with pytest.raises(FixtureValidationError):
        gen_low_rank(2, 5, seed=0)
    with pytest.raises(FixtureValidationError):
        gen_low_rank(9, 1, seed=0)


def test_pure_state():
    assert gen_pure(2, 3).purity() == pytest.approx(1.0)


@pytest.mark.parametrize(
    "spec",
    [
        FixtureSpec(family="low-rank", n=2, r=2, seed=1),
        FixtureSpec(family="pure", n=2, seed=1),
        FixtureSpec(family="depolarized", n=3, r=2, lam=0.2, seed=1),
        FixtureSpec(family="gibbs", n=3, k=2, gap=2.0, seed=1),
        FixtureSpec(family="power-law", n=3, C=0.8, seed=1),
    ],
)
def test_generated_fixtures_match_their_profile(spec):
    fixture = generate(spec)
    assert fixture.family == spec.family
    assert fixture.state.trace() == pytest.approx(1.0)
    assert np.all(fixture.state.eigenvalues() >= -1e-12)
    assert fixture.profile.dominates(fixture.state, [0.001, 0.01, 0.05, 0.3])
    assert fixture.params["seed"] == spec.seed


def test_generate_pair_draws_independent_states():
    rho, sigma = generate_pair(FixtureSpec(family="low-rank", n=2, r=1, seed=4))
    assert rho.params["stream"] == "rho" and sigma.params["stream"] == "sigma"
    assert not np.allclose(rho.state.op, sigma.state.op)


def test_gibbs_gap_is_validated():
    H = gibbs_hamiltonian(2, 1, 1.5, seed=0)
    energies = np.linalg.eigvalsh(H)
    assert energies[1] - energies[0] >= 1.5 - 1e-9
    measured = gen_gibbs(H, 1)
    assert measured.params["gap"] >= 1.5 - 1e-9
    with pytest.raises(FixtureValidationError):
        gen_gibbs(H, 1, gap=10.0)
    with pytest.raises(FixtureValidationError):
        gen_gibbs(np.array([[0, 1], [0, 0]], dtype=complex), 1)


def test_power_law_spectrum():
    alphas = power_law_spectrum(8, 1.0)
    assert alphas[0] == pytest.approx(1.0)
    spread = power_law_spectrum(16, 0.7)
    assert spread.sum() == pytest.approx(1.0)
    assert np.all(spread <= 0.7 / np.arange(1, 17) ** 2 + 1e-12)
    with pytest.raises(FixtureValidationError):
        power_law_spectrum(2, 0.5)
    with pytest.raises(FixtureValidationError):
        gen_power_law(1, 0.5, seed=0)


def test_fixture_files(tmp_path):
    fixture = generate(FixtureSpec(family="depolarized", n=2, r=1, lam=0.1, seed=2))
    path = tmp_path / "fixtures" / "rho.json"
    save_fixture(fixture, str(path))
    loaded = load_fixture(str(path))
    assert isinstance(loaded, Fixture)
    assert loaded.profile.provenance == "depolarized"
    assert np.allclose(loaded.state.op, fixture.state.op)


def test_bare_state_file_gets_exact_profile(tmp_path):
    state = gen_low_rank(2, 3, seed=5)
    path = tmp_path / "state.json"
    path.write_text(json.dumps(state.to_json()))
    loaded = load_fixture(str(path))
    assert loaded.family == "user"
    assert loaded.profile.provenance == "exact"
    assert loaded.profile.rank_bound(0.1) == 3


def test_fixture_pair_document(tmp_path):
    rho, sigma = generate_pair(FixtureSpec(family="gibbs", n=3, k=2, gap=2.0, seed=3))
    path = tmp_path / "pair.json"
    save_fixture_pair(rho, sigma, str(path))

    loaded_rho, loaded_sigma = load_fixture_pair(str(path))
    assert np.allclose(loaded_rho.state.op, rho.state.op)
    assert np.allclose(loaded_sigma.state.op, sigma.state.op)
    assert loaded_sigma.profile.provenance == "gibbs"
    single = tmp_path / "single.json"
    single.write_text(json.dumps(rho.to_json()))
    with pytest.raises(FixtureValidationError):
        load_fixture_pair(str(single))
