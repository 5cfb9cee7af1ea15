import json
import math

import numpy as np
import pandas as pd
import pytest

from tdsim.core.low_rank import exact_profile
from tdsim.core.trace_distance import (
    CSV_COLUMNS,
    certify_states,
    channel_delta,
    check_precondition,
    estimate_purified,
    estimate_samples,
    estimate_trace_distance,
    resolve_delta_p,
    trace_distance_via_sign,
)
from tdsim.exceptions import ArgumentError, InfeasibleThresholdError, UnsupportedChannelError
from tdsim.fixtures.generators import gen_low_rank
from tdsim.linalg.density import DensityOperator, trace_distance_exact
from tdsim.metrics.query_ledger import O_RHO, O_SIGMA, SAMPLES_RHO, SAMPLES_SIGMA, QueryLedger
from tdsim.validation.config import EstimationConfig


def test_sign_identity(state_pair):
    rho, sigma = state_pair
    assert trace_distance_via_sign(rho, sigma) == pytest.approx(trace_distance_exact(rho, sigma))


def test_sign_identity_for_orthogonal_states():
    rho = DensityOperator.from_pure_state(np.array([1, 0], dtype=complex))
    sigma = DensityOperator.from_pure_state(np.array([0, 1], dtype=complex))
    assert trace_distance_via_sign(rho, sigma) == pytest.approx(1.0)
    assert trace_distance_via_sign(rho, rho) == pytest.approx(0.0)


def test_resolve_delta_p_sources(state_pair):
    rho, sigma = state_pair
    assert resolve_delta_p(EstimationConfig(eps=0.2, delta_p=0.01)) == (0.01, "given")
    assert resolve_delta_p(EstimationConfig(eps=0.2, rank_bound=2)) == (pytest.approx(0.0125), "rank")
    profiles = (exact_profile(2), exact_profile(2))
    value, source = resolve_delta_p(EstimationConfig(eps=0.2, profiles=profiles))
    assert source == "profile" and value == pytest.approx(0.025)
    assert resolve_delta_p(EstimationConfig(eps=0.2), rho, sigma)[1] == "oracle"
    with pytest.raises(ArgumentError):
        resolve_delta_p(EstimationConfig(eps=0.2, test_mode=False), rho, sigma)


def test_precondition_strict_raises(state_pair):
    rho, sigma = state_pair
    loose = EstimationConfig(eps=0.2, delta_p=0.9)
    record = check_precondition(rho, sigma, 0.9, loose)
    assert record["checked"] and not record["holds"]

    strict = EstimationConfig(eps=0.2, delta_p=0.9, strict_precondition=True)
    with pytest.raises(InfeasibleThresholdError):
        check_precondition(rho, sigma, 0.9, strict)

    untested = EstimationConfig(eps=0.2, delta_p=0.9, test_mode=False)
    assert check_precondition(rho, sigma, 0.9, untested)["checked"] is False


def test_ideal_purified_estimate(oracle_pair, ideal_config, fresh_sign_cache):
    ledger = QueryLedger()
    report = estimate_purified(*oracle_pair, ideal_config, ledger)
    d = report.parameters["degree"]

    assert report.mode == "purified"
    assert report.within_eps
    assert report.precondition["holds"]
    assert report.parameters["delta_p_source"] == "rank"
    assert ledger.get(O_RHO) == 8 * d + 1
    assert ledger.get(O_SIGMA) == 8 * d + 1
    assert report.queries_total == 16 * d + 2


def test_purified_estimate_with_qae(oracle_pair, fresh_sign_cache):
    cfg = EstimationConfig(eps=0.2, rank_bound=2, seed=5, backend="qae", repetitions=9)
    report = estimate_purified(*oracle_pair, cfg, max_workers=2)
    assert report.abs_error <= cfg.eps
    assert report.parameters["grid_size"] == 256
    assert len(report.runs["x_rho"]) == 9
    d = report.parameters["degree"]
    # each of the two terms pays its per-call cost on every grid point of every run
    assert report.ledger[O_RHO] == 9 * 256 * (4 * d + 1) + 9 * 256 * 4 * d


def test_equal_states_estimate_near_zero(state_pair, fresh_sign_cache):
    rho, _ = state_pair
    cfg = EstimationConfig(eps=0.2, rank_bound=2, backend="ideal", repetitions=1)
    report = estimate_trace_distance(rho, rho, cfg)
    assert report.exact_value == pytest.approx(0.0, abs=1e-12)
    assert abs(report.estimate) <= cfg.eps


def test_ideal_samples_estimate(state_pair, ideal_config, fresh_sign_cache):
    rho, sigma = state_pair
    cfg = ideal_config.copy(update={"check_channels": True})
    ledger = QueryLedger()
    report = estimate_samples(rho, sigma, cfg, ledger)
    parameters = report.parameters

    assert report.within_eps
    assert parameters["eps_p"] == pytest.approx(0.2 / 12)
    assert parameters["delta"] == pytest.approx(
        channel_delta(0.2, parameters["delta_p"], parameters["eps_p"])
    )
    assert parameters["budget_status"] == "ok"
    assert set(parameters["choi_proxy"]) == {"E_rho", "E_sigma"}
    assert all(v <= parameters["delta"] for v in parameters["choi_proxy"].values())
    composite = parameters["composite_choi_proxy"]
    assert set(composite) == {"E_rho", "E_sigma"}
    assert all(0 < v <= parameters["budget_qsvt"] / 2 for v in composite.values())
    assert ledger.get(SAMPLES_RHO) > 0 and ledger.get(SAMPLES_SIGMA) > 0
    assert report.queries_total == 0


def test_samples_rejects_dme_channels(state_pair, ideal_config):
    rho, sigma = state_pair
    with pytest.raises(UnsupportedChannelError):
        estimate_samples(rho, sigma, ideal_config, channel_mode="dme")


def test_mode_and_dimension_checks(state_pair, ideal_config):
    rho, _ = state_pair
    with pytest.raises(ArgumentError):
        estimate_trace_distance(rho, rho, ideal_config, mode="classical")
    with pytest.raises(ArgumentError):
        estimate_samples(rho, gen_low_rank(1, 1, seed=0), ideal_config)


def test_channel_delta():
    expected = math.pi * 0.1 * 0.01 / (48 * 2 * 8 * math.log(1 / 0.05))
    assert channel_delta(0.1, 0.01, 0.05) == pytest.approx(expected)


def test_certify_states(state_pair, fresh_sign_cache):
    rho, sigma = state_pair
    overrides = {"rank_bound": 2, "backend": "ideal", "repetitions": 1}
    same = certify_states(rho, rho, 0.2, **overrides)
    assert same.accepted
    assert same.threshold == pytest.approx(0.1)

    far = DensityOperator.from_pure_state(np.array([1, 0, 0, 0], dtype=complex))
    other = DensityOperator.from_pure_state(np.array([0, 0, 0, 1], dtype=complex))
    distinct = certify_states(far, other, 0.2, **overrides)
    assert not distinct.accepted
    assert distinct.estimate > 0.1


def test_report_outputs(oracle_pair, ideal_config, tmp_path, fresh_sign_cache):
    report = estimate_purified(*oracle_pair, ideal_config)
    csv_path = tmp_path / "out" / "runs.csv"
    report.append_csv(str(csv_path))
    report.append_csv(str(csv_path))
    frame = pd.read_csv(csv_path)
    assert list(frame.columns) == CSV_COLUMNS
    assert len(frame) == 2

    json_path = tmp_path / "report.json"
    report.save(str(json_path))
    data = json.loads(json_path.read_text())
    assert data["mode"] == "purified"
    assert data["queries_total"] == report.queries_total
    assert data["parameters"]["delta_p"] == pytest.approx(0.0125)
