"""Timing helpers used by the sweep harness."""

import statistics
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Dict, Iterator, List

from .logger import get_logger

logger = get_logger(__name__)


@dataclass
class TimingRecord:
    """Wall-clock durations collected under one label."""

    name: str
    durations: List[float] = field(default_factory=list)

    def __str__(self) -> str:
        """Format the record as a one-line summary."""
        if not self.durations:
            return f"{self.name}: no samples"
        return (
            f"{self.name}: n={len(self.durations)} "
            f"mean={statistics.mean(self.durations):.4f}s "
            f"max={max(self.durations):.4f}s"
        )


@contextmanager
def timer(name: str) -> Iterator[Dict[str, float]]:
    """Time a block; the yielded dict receives ``elapsed`` on exit."""
    result: Dict[str, float] = {}
    start = time.perf_counter()
    try:
        yield result
    finally:
        result["elapsed"] = time.perf_counter() - start
        logger.debug(f"{name} finished", elapsed=round(result["elapsed"], 6))


class PerformanceMonitor:
    """Collects durations per label."""

    def __init__(self):
        self.records: Dict[str, TimingRecord] = {}

    def record(self, name: str, elapsed: float) -> None:
        self.records.setdefault(name, TimingRecord(name)).durations.append(elapsed)

    def get_statistics(self, name: str) -> Dict[str, float]:
        """Return count/mean/median/min/max for a label."""
        record = self.records.get(name)
        if record is None or not record.durations:
            return {}
        values = record.durations
        return {
            "count": float(len(values)),
            "mean": statistics.mean(values),
            "median": statistics.median(values),
            "min": min(values),
            "max": max(values),
        }

    def clear(self) -> None:
        self.records.clear()
