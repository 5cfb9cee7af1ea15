"""Fidelity-of-simulation backends for probability estimation."""

from dataclasses import dataclass, field
from typing import Sequence, Tuple

import numpy as np

from ..exceptions import ArgumentError
from ..utils.rng import StreamName, rng_stream

BACKENDS = ("ideal", "sampling", "qae")
DEFAULT_REPETITIONS = 9
DEFAULT_QAE_CONSTANT = 8.0


@dataclass
class EstimationBackend:
    """Estimation mode plus the median-of-K repetition policy.

    Each backend owns one random stream derived from ``seed`` and ``stream``;
    ``child`` derives independent streams for sub-estimates.
    """

    mode: str = "qae"
    seed: int = 0
    repetitions: int = DEFAULT_REPETITIONS
    qae_constant: float = DEFAULT_QAE_CONSTANT
    stream: Tuple[StreamName, ...] = ()
    rng: np.random.Generator = field(init=False, repr=False)

    def __post_init__(self):
        if self.mode not in BACKENDS:
            raise ArgumentError(f"unknown backend {self.mode!r}; expected one of {BACKENDS}")
        if self.repetitions < 1 or self.repetitions % 2 == 0:
            raise ArgumentError(f"repetitions must be a positive odd number, got {self.repetitions}")
        if self.qae_constant <= 0:
            raise ArgumentError("qae_constant must be positive")
        self.stream = tuple(self.stream)
        self.rng = rng_stream(self.seed, "backend", *self.stream)

    @property
    def is_ideal(self) -> bool:
        return self.mode == "ideal"

    def child(self, *names: StreamName) -> "EstimationBackend":
        return EstimationBackend(
            mode=self.mode,
            seed=self.seed,
            repetitions=self.repetitions,
            qae_constant=self.qae_constant,
            stream=self.stream + tuple(names),
        )

    def with_mode(self, mode: str) -> "EstimationBackend":
        return EstimationBackend(mode, self.seed, self.repetitions, self.qae_constant, self.stream)


def median_of(values: Sequence[float]) -> float:
    if len(values) == 0:
        raise ArgumentError("median of an empty sample")
    return float(np.median(np.asarray(values, dtype=np.float64)))
