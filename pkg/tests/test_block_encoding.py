from dataclasses import replace

import numpy as np
import pytest

from tdsim.encoding.block_encoding import (
    BlockEncoding,
    StatePrepPair,
    difference_pair,
    encodes,
    lcu,
    lcu_difference,
    pad_ancillas,
    product_block_encodings,
    trivial_encoding,
    verify_block_encoding,
)
from tdsim.encoding.purification import block_encoding_label, density_to_block_encoding, purify
from tdsim.exceptions import ArgumentError
from tdsim.fixtures.generators import gen_low_rank, haar_unitary
from tdsim.linalg.operators import is_unitary, partial_trace
from tdsim.metrics.query_ledger import O_RHO, O_SIGMA


def test_purify_prepares_the_state(state_pair):
    rho, _ = state_pair
    oracle = purify(rho, O_RHO)
    assert oracle.n_anc == 1
    assert is_unitary(oracle.unitary)
    assert oracle.residual() < 1e-10


def test_purify_ancilla_width_tracks_rank():
    rho = gen_low_rank(3, 3, seed=5)
    oracle = purify(rho)
    assert oracle.n_anc == 2
    assert oracle.unitary.shape == (32, 32)


def test_density_to_block_encoding_encodes_rho(state_pair):
    rho, _ = state_pair
    U = density_to_block_encoding(purify(rho, O_RHO))
    assert U.label == "U_rho"
    assert U.ancillas == 3
    assert U.queries == {O_RHO: 2}
    assert U.is_unitary()
    assert verify_block_encoding(U, rho.op) < 1e-10


def test_block_encoding_labels():
    assert block_encoding_label("O_sigma") == "U_sigma"
    assert block_encoding_label("custom") == "U[custom]"


def test_lcu_difference_encodes_nu(oracle_pair, state_pair):
    rho, sigma = state_pair
    U_rho, U_sigma = (density_to_block_encoding(o) for o in oracle_pair)
    U_nu = lcu_difference(U_rho, U_sigma)

    assert U_nu.alpha == pytest.approx(1.0)
    assert U_nu.ancillas == U_rho.ancillas + 1
    assert encodes(U_nu, (rho.op - sigma.op) / 2)
    assert U_nu.queries == {O_RHO: 2, O_SIGMA: 2, "U_rho": 1, "U_sigma": 1}


def test_lcu_pads_mismatched_ancillas(state_pair):
    rho, _ = state_pair
    wide = purify(gen_low_rank(2, 3, seed=2), O_SIGMA)
    U_rho = density_to_block_encoding(purify(rho, O_RHO))
    U_sigma = density_to_block_encoding(wide)
    U_nu = lcu_difference(U_rho, U_sigma)
    assert U_nu.ancillas == U_sigma.ancillas + 1
    assert encodes(U_nu, (rho.op - wide.state.op) / 2)


def test_lcu_rejects_mismatches(rng):
    U = trivial_encoding(haar_unitary(2, rng))
    V = trivial_encoding(haar_unitary(4, rng))
    with pytest.raises(ArgumentError):
        lcu([U, V], difference_pair(), (1.0, -1.0))
    with pytest.raises(ArgumentError):
        lcu([U, U.rescaled(2.0)], difference_pair(), (1.0, -1.0))
    with pytest.raises(ArgumentError):
        lcu([U, U], difference_pair(), (1.0, 1.0))


def test_state_prep_pair_residual():
    pair = difference_pair()
    assert pair.residual((1.0, -1.0)) == pytest.approx(0.0, abs=1e-12)
    assert pair.residual((1.0, 1.0)) == pytest.approx(2.0)
    with pytest.raises(ArgumentError):
        StatePrepPair(np.eye(2), 2 * np.eye(2), beta=1.0, b=1)


def test_product_of_unitaries(rng):
    A, B = haar_unitary(2, rng), haar_unitary(2, rng)
    U = trivial_encoding(A, "U_a")
    V = trivial_encoding(B, "U_b")
    P = product_block_encodings(U, V)
    assert encodes(P, A @ B)
    assert P.queries == {"U_a": 1, "U_b": 1}


def test_product_with_ancillas(state_pair):
    rho, sigma = state_pair
    U = density_to_block_encoding(purify(rho, O_RHO))
    V = density_to_block_encoding(purify(sigma, O_SIGMA))
    P = product_block_encodings(U, V)
    assert P.ancillas == U.ancillas + V.ancillas
    assert verify_block_encoding(P, rho.op @ sigma.op) < 1e-10


def test_pad_ancillas_keeps_block(rng):
    U = trivial_encoding(haar_unitary(2, rng))
    padded = pad_ancillas(U, 2)
    assert padded.ancillas == 2
    assert np.allclose(padded.block(), U.block())
    assert pad_ancillas(U, 0) is U
    with pytest.raises(ArgumentError):
        pad_ancillas(U, -1)


def test_controlled_acts_on_one_branch(rng):
    A = haar_unitary(2, rng)
    C = trivial_encoding(A).controlled()
    assert is_unitary(C)
    assert np.allclose(C[:2, :2], np.eye(2))
    assert np.allclose(C[2:, 2:], A)


def test_rescaled_and_validation(rng):
    U = trivial_encoding(haar_unitary(2, rng))
    assert U.rescaled(0.5).alpha == pytest.approx(0.5)
    with pytest.raises(ArgumentError):
        U.rescaled(0.0)
    with pytest.raises(ArgumentError):
        trivial_encoding(np.diag([1.0, 0.5]))
    with pytest.raises(ArgumentError):
        BlockEncoding(np.eye(4), 1.0, 2, 0.0, 1)


def test_json_keeps_metadata(state_pair):
    rho, _ = state_pair
    U = density_to_block_encoding(purify(rho, O_RHO))
    restored = BlockEncoding.from_json(U.to_json())
    assert restored.label == U.label
    assert restored.ancillas == U.ancillas
    assert np.allclose(restored.unitary, U.unitary)


def test_purified_block_has_reduced_state(state_pair):
    rho, _ = state_pair
    oracle = purify(rho, O_RHO)
    psi = oracle.prepared_vector()
    reduced = partial_trace(np.outer(psi, psi.conj()), range(oracle.n))
    assert np.allclose(reduced, rho.op, atol=1e-10)


def test_verify_block_encoding_rejects_corrupted_unitary(state_pair):
    rho, _ = state_pair
    U = density_to_block_encoding(purify(rho, O_RHO))
    theta = 0.3
    corrupted = replace(U, unitary=np.exp(1j * theta) * U.unitary)

    residual = verify_block_encoding(corrupted, rho.op)
    expected = abs(np.exp(1j * theta) - 1) * np.max(rho.eigenvalues())
    assert residual == pytest.approx(expected, rel=1e-8)
    assert not encodes(corrupted, rho.op)
