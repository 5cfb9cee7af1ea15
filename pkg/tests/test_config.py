import pytest
from pydantic import ValidationError

from tdsim.core.low_rank import exact_profile
from tdsim.validation.config import EstimationConfig, FixtureSpec, SweepPlan, get_settings


def test_settings_defaults_and_environment(monkeypatch):
    settings = get_settings()
    assert settings.max_qubits == 12
    assert settings.log_level == "INFO"

    monkeypatch.setenv("TDSIM_MAX_QUBITS", "8")
    monkeypatch.setenv("TDSIM_MAX_WORKERS", "2")
    monkeypatch.setenv("TDSIM_LOG_LEVEL", "debug")
    settings = get_settings()
    assert settings.max_qubits == 8
    assert settings.max_workers == 2
    assert settings.log_level == "DEBUG"


def test_settings_reject_bad_values(monkeypatch):
    monkeypatch.setenv("TDSIM_LOG_LEVEL", "LOUD")
    with pytest.raises(ValidationError):
        get_settings()
    monkeypatch.setenv("TDSIM_LOG_LEVEL", "INFO")
    monkeypatch.setenv("TDSIM_MAX_QUBITS", "40")
    with pytest.raises(ValidationError):
        get_settings()


def test_estimation_config_validation():
    cfg = EstimationConfig(eps=0.1)
    assert cfg.repetitions == 9
    assert cfg.test_mode
    assert cfg.backend is None
    with pytest.raises(ValidationError):
        EstimationConfig(eps=1.0)
    with pytest.raises(ValidationError):
        EstimationConfig(eps=0.1, repetitions=4)
    with pytest.raises(ValidationError):
        EstimationConfig(eps=0.1, backend="exact")
    with pytest.raises(ValidationError):
        EstimationConfig(eps=0.1, profiles=(1, 2))


def test_estimation_config_accepts_profiles():
    profiles = (exact_profile(1), exact_profile(2))
    cfg = EstimationConfig(eps=0.1, profiles=profiles)
    assert cfg.profiles[1].rank_bound(0.1) == 2


def test_fixture_spec_validation():
    assert FixtureSpec(family="gibbs").k == 1
    with pytest.raises(ValidationError):
        FixtureSpec(family="low-rank", n=2, r=5)
    with pytest.raises(ValidationError):
        FixtureSpec(family="circulant")
    with pytest.raises(ValidationError):
        FixtureSpec(family="low-rank", n=9)


def test_sweep_plan_grid_must_be_monotone():
    assert SweepPlan(axis="eps", grid=[0.2, 0.1, 0.05]).trials == 1
    assert SweepPlan(axis="rank", grid=[1, 2, 4]).grid == [1, 2, 4]
    with pytest.raises(ValidationError):
        SweepPlan(axis="eps", grid=[0.1, 0.2, 0.15])
    with pytest.raises(ValidationError):
        SweepPlan(axis="eps", grid=[])
    with pytest.raises(ValidationError):
        SweepPlan(axis="eps", grid=[0.1], repetitions=2)
