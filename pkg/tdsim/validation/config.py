"""Configuration models validated with pydantic."""

import os
from typing import Any, List, Optional, Tuple

from pydantic import BaseModel, Field, validator

try:  # pydantic 1.x and 2.x both expose Literal through typing
    from typing import Literal
except ImportError:  # pragma: no cover
    from typing_extensions import Literal  # type: ignore

BackendName = Literal["ideal", "sampling", "qae"]
ModeName = Literal["purified", "samples"]
FamilyName = Literal["low-rank", "depolarized", "gibbs", "power-law", "pure"]

MAX_QUBITS_ENV = "TDSIM_MAX_QUBITS"
MAX_WORKERS_ENV = "TDSIM_MAX_WORKERS"
LOG_LEVEL_ENV = "TDSIM_LOG_LEVEL"


class SimulatorSettings(BaseModel):
    max_qubits: int = Field(default=12, ge=1, le=16)
    max_workers: int = Field(default=4, ge=1, le=64)
    log_level: str = Field(default="INFO")

    @validator('log_level')
    def validate_log_level(cls, v):
        level = v.strip().upper()
        allowed = ["DEBUG", "INFO", "WARNING", "ERROR"]
        if level not in allowed:
            raise ValueError(f"log_level must be one of {allowed}")
        return level


def get_settings() -> SimulatorSettings:
    """Read settings from the environment on every call."""
    values = {}
    if os.environ.get(MAX_QUBITS_ENV):
        values["max_qubits"] = int(os.environ[MAX_QUBITS_ENV])
    if os.environ.get(MAX_WORKERS_ENV):
        values["max_workers"] = int(os.environ[MAX_WORKERS_ENV])
    if os.environ.get(LOG_LEVEL_ENV):
        values["log_level"] = os.environ[LOG_LEVEL_ENV]
    return SimulatorSettings(**values)


class EstimationConfig(BaseModel):
    eps: float = Field(..., gt=0.0, lt=1.0)
    delta_p: Optional[float] = Field(default=None, gt=0.0)
    rank_bound: Optional[int] = Field(default=None, ge=1)
    # (profile for rho, profile for sigma); see tdsim.core.low_rank
    profiles: Optional[Tuple[Any, Any]] = None
    seed: int = Field(default=0, ge=0)
    backend: Optional[BackendName] = None
    repetitions: int = Field(default=9, ge=1)
    qae_constant: float = Field(default=8.0, gt=0.0)
    test_mode: bool = True
    strict_precondition: bool = False
    check_channels: bool = False

    @validator('repetitions')
    def validate_repetitions(cls, v):
        if v % 2 == 0:
            raise ValueError("repetitions must be odd so the median is a sample")
        return v

    @validator('profiles')
    def validate_profiles(cls, v):
        if v is None:
            return v
        for profile in v:
            if not (hasattr(profile, "rank_bound") and hasattr(profile, "mass_bound")):
                raise ValueError("profiles must provide rank_bound and mass_bound")
        return v


class FixtureSpec(BaseModel):
    family: FamilyName
    n: int = Field(default=2, ge=1, le=8)
    r: int = Field(default=2, ge=1)
    lam: float = Field(default=0.0, ge=0.0, le=1.0)
    k: int = Field(default=1, ge=1)
    gap: float = Field(default=1.0, ge=0.0)
    C: float = Field(default=1.0, gt=0.0)
    uniform: bool = False
    seed: int = Field(default=0, ge=0)

    @validator('r')
    def validate_rank(cls, v, values):
        n = values.get("n")
        if n is not None and v > 2 ** n:
            raise ValueError(f"rank {v} exceeds dimension 2**{n}")
        return v


class SweepPlan(BaseModel):
    axis: Literal["eps", "rank", "delta"]
    grid: List[float]
    trials: int = Field(default=1, ge=1)
    family: FamilyName = "low-rank"
    n: int = Field(default=2, ge=1, le=6)
    rank: int = Field(default=2, ge=1)
    eps: float = Field(default=0.1, gt=0.0, lt=1.0)
    lam: float = Field(default=0.0, ge=0.0, le=1.0)
    mode: ModeName = "purified"
    backend: Optional[BackendName] = None
    seed_base: int = Field(default=0, ge=0)
    repetitions: int = Field(default=9, ge=1)
    max_workers: Optional[int] = Field(default=None, ge=1)

    @validator('grid')
    def validate_grid(cls, v):
        if not v:
            raise ValueError("grid must contain at least one value")
        if len(v) > 1:
            steps = [b - a for a, b in zip(v, v[1:])]
            if not (all(s > 0 for s in steps) or all(s < 0 for s in steps)):
                raise ValueError("grid must be strictly monotone")
        return v

    @validator('repetitions')
    def validate_repetitions(cls, v):
        if v % 2 == 0:
            raise ValueError("repetitions must be odd")
        return v
