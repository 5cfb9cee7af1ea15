"""Configuration models."""

from .config import (
    EstimationConfig,
    FixtureSpec,
    SimulatorSettings,
    SweepPlan,
    get_settings,
)

__all__ = [
    "EstimationConfig",
    "FixtureSpec",
    "SimulatorSettings",
    "SweepPlan",
    "get_settings",
]
