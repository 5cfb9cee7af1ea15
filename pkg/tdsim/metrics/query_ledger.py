"""Query and sample accounting shared by every estimator."""

import os
import threading
from datetime import datetime
from typing import Dict, Iterable, Mapping, Optional

import pandas as pd

from ..exceptions import ArgumentError
from ..utils.serialization import write_json

O_RHO = "O_rho"
O_SIGMA = "O_sigma"
U_RHO = "U_rho"
U_SIGMA = "U_sigma"
U_NU = "U_nu"
U_PSV = "U_psv"
CHANNEL_USES = "channel_uses"
SAMPLES_RHO = "samples_rho"
SAMPLES_SIGMA = "samples_sigma"

ORACLE_KEYS = (O_RHO, O_SIGMA)
SAMPLE_KEYS = (SAMPLES_RHO, SAMPLES_SIGMA)

QueryCost = Mapping[str, int]


def combine_costs(*costs: QueryCost, times: int = 1) -> Dict[str, int]:
    """Sum cost maps and scale the result by ``times``."""
    total: Dict[str, int] = {}
    for cost in costs:
        for key, count in cost.items():
            total[key] = total.get(key, 0) + int(count)
    return {key: count * int(times) for key, count in total.items()}


class QueryLedger:
    """Monotone counters keyed by oracle or resource name."""

    def __init__(self, run_id: Optional[str] = None):
        self.run_id = run_id or datetime.now().strftime("run_%Y%m%d_%H%M%S")
        self.counters: Dict[str, int] = {}
        self._lock = threading.Lock()

    def charge(self, key: str, count: int = 1) -> None:
        if count < 0:
            raise ArgumentError(f"ledger charges must be non-negative, got {count}")
        with self._lock:
            self.counters[key] = self.counters.get(key, 0) + int(count)

    def charge_costs(self, costs: QueryCost, times: int = 1) -> None:
        """Charge a per-execution cost map ``times`` times."""
        for key, count in combine_costs(costs, times=times).items():
            self.charge(key, count)

    def merge(self, other: "QueryLedger") -> None:
        self.charge_costs(other.snapshot())

    def get(self, key: str) -> int:
        return self.counters.get(key, 0)

    def total(self, keys: Iterable[str]) -> int:
        return sum(self.get(key) for key in keys)

    @property
    def queries_total(self) -> int:
        return self.total(ORACLE_KEYS)

    @property
    def samples_total(self) -> int:
        return self.total(SAMPLE_KEYS)

    def snapshot(self) -> Dict[str, int]:
        with self._lock:
            return dict(sorted(self.counters.items()))

    def to_frame(self) -> pd.DataFrame:
        """Rows of ``run_id, oracle, count``."""
        rows = [
            {"run_id": self.run_id, "oracle": key, "count": count}
            for key, count in self.snapshot().items()
        ]
        return pd.DataFrame(rows, columns=["run_id", "oracle", "count"])

    def export_csv(self, path: str, append: bool = True) -> None:
        directory = os.path.dirname(path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        exists = os.path.exists(path)
        self.to_frame().to_csv(
            path,
            mode="a" if append else "w",
            header=not (append and exists),
            index=False,
        )

    def save_json(self, path: str) -> None:
        write_json(path, {"run_id": self.run_id, "counters": self.snapshot()})
