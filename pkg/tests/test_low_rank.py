import pytest

from tdsim.core.low_rank import (
    ORACLE_DELTA_CAP,
    ApproxLowRankProfile,
    approx_low_rank_difference,
    choose_delta_p_oracle,
    choose_delta_p_profile,
    choose_delta_p_rank,
    depolarized_profile,
    exact_profile,
    gibbs_profile,
    power_law_profile,
    select_threshold,
    threshold_for_mass,
    user_profile,
)
from tdsim.exceptions import ArgumentError, InfeasibleThresholdError
from tdsim.fixtures.generators import gen_depolarized, gen_low_rank
from tdsim.linalg.density import w_small_eigen


@pytest.mark.parametrize("r", [1, 2, 5])
def test_exact_profile_selector(r):
    eps = 0.1
    assert choose_delta_p_profile(exact_profile(r), exact_profile(r), eps) == pytest.approx(eps / (4 * r))


def test_rank_selector():
    assert choose_delta_p_rank(2, 0.2) == pytest.approx(0.0125)
    with pytest.raises(ArgumentError):
        choose_delta_p_rank(0, 0.2)
    with pytest.raises(ArgumentError):
        choose_delta_p_rank(2, 1.5)


def test_depolarized_selector_below_noise_floor():
    # eps/8 < lam: only the trivial branch W = N delta applies
    P = depolarized_profile(2, 0.1, 8)
    selection = select_threshold(P, P, 0.2)
    assert selection.delta_1 == pytest.approx(0.2 / 8 / 8)
    assert selection.r_1 == 8
    assert selection.delta_p == pytest.approx(2 * 0.2 / 64)


def test_depolarized_selector_above_noise_floor():
    P = depolarized_profile(1, 0.01, 4)
    selection = select_threshold(P, P, 0.2)
    assert selection.delta_1 == pytest.approx(0.025 - 0.01 * 3 / 4)
    assert selection.r_1 == 1
    assert selection.delta_p == pytest.approx(2 * 0.0175)


def test_threshold_respects_mass_target():
    for profile in (
        exact_profile(3),
        depolarized_profile(2, 0.05, 16),
        gibbs_profile(2, 3.0, 16),
        power_law_profile(1.0, 2 ** 16),
    ):
        delta = threshold_for_mass(profile, 0.02)
        assert profile.mass_bound(delta) <= 0.02 * (1 + 1e-9)


def test_power_law_mass_includes_threshold():
    P = power_law_profile(1.0, 64)
    assert P.rank_bound(0.01) == 10
    assert P.mass_bound(0.01) > 0.01
    assert P.mass_bound(1e-6) == pytest.approx(1e-6)


def test_infeasible_threshold():
    with pytest.raises(InfeasibleThresholdError):
        threshold_for_mass(depolarized_profile(1, 0.5, 4), 1e-17)
    with pytest.raises(ArgumentError):
        threshold_for_mass(exact_profile(1), 0.0)


def test_user_profile_table():
    P = user_profile([0.01, 0.1], [4, 2], [0.02, 0.1], N=8)
    assert P.rank_bound(0.001) == 8
    assert P.rank_bound(0.05) == 4
    assert P.mass_bound(0.05) == pytest.approx(0.02 + 4 * 0.05)
    with pytest.raises(ArgumentError):
        user_profile([0.1, 0.01], [1, 1], [0.0, 0.0], N=4)
    with pytest.raises(ArgumentError):
        user_profile([0.1], [1, 2], [0.0], N=4)


def test_profile_json():
    P = depolarized_profile(2, 0.1, 8)
    restored = ApproxLowRankProfile.from_json(P.to_json())
    assert restored.provenance == "depolarized"
    assert restored.mass_bound(0.05) == pytest.approx(P.mass_bound(0.05))
    with pytest.raises(ArgumentError):
        ApproxLowRankProfile.from_json({"provenance": "exact"})
    with pytest.raises(ArgumentError):
        ApproxLowRankProfile.from_json({"provenance": "cubic", "params": {}})
    with pytest.raises(ArgumentError):
        ApproxLowRankProfile.from_json({"provenance": "exact", "params": {"rank": 2}})


def test_profile_validation():
    with pytest.raises(ArgumentError):
        exact_profile(0)
    with pytest.raises(ArgumentError):
        depolarized_profile(2, 1.5, 4)
    with pytest.raises(ArgumentError):
        gibbs_profile(5, 1.0, 4)
    with pytest.raises(ArgumentError):
        power_law_profile(-1.0, 4)


def test_depolarized_fixture_is_dominated():
    fixture = gen_depolarized(gen_low_rank(3, 2, seed=3), 0.2)
    assert fixture.profile.dominates(fixture.state, [1e-4, 0.01, 0.1, 0.5])


def test_difference_inherits_parameters():
    for seed in range(10):
        a = gen_depolarized(gen_low_rank(2, 1, seed=seed, stream="rho"), 0.1)
        b = gen_depolarized(gen_low_rank(2, 2, seed=seed, stream="sigma"), 0.3)
        nu = (a.state.op - b.state.op) / 2
        for delta in (0.01, 0.05, 0.2):
            bound = approx_low_rank_difference(a.profile, b.profile, delta)
            assert bound.threshold == pytest.approx(delta / 2)
            assert bound.holds_for(nu)
    with pytest.raises(ArgumentError):
        approx_low_rank_difference(exact_profile(1), exact_profile(1), -0.1)


def test_oracle_selector(state_pair):
    rho, sigma = state_pair
    eps = 0.2
    delta_p = choose_delta_p_oracle(rho, sigma, eps)
    assert 0 < delta_p <= ORACLE_DELTA_CAP
    assert w_small_eigen((rho.op - sigma.op) / 2, delta_p) <= eps / 4 + 1e-12
    assert choose_delta_p_oracle(rho, rho, eps) == ORACLE_DELTA_CAP
