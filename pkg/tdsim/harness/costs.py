"""Asymptotic cost orders of trace distance estimation and its baselines.

Documentation output only: the values are the order expressions evaluated
at (r, eps) without constants.
"""

import math
from typing import Callable, List, NamedTuple

import pandas as pd

from ..exceptions import ArgumentError


class CostEntry(NamedTuple):
    access: str
    task: str
    method: str
    order: str
    formula: Callable[[int, float], float]


def _log(x: float) -> float:
    return math.log(max(x, math.e))


COST_ENTRIES: List[CostEntry] = [
    CostEntry(
        "purified", "estimation", "low-rank QSVT estimator", "r/eps^2 log(1/eps)",
        lambda r, eps: r / eps ** 2 * _log(1 / eps),
    ),
    CostEntry(
        "purified", "estimation", "previous low-rank estimator", "r^5/eps^6",
        lambda r, eps: r ** 5 / eps ** 6,
    ),
    CostEntry(
        "purified", "estimation (pure states)", "SWAP test with amplitude estimation", "1/eps^2",
        lambda r, eps: 1 / eps ** 2,
    ),
    CostEntry(
        "samples", "estimation", "low-rank QSVT estimator",
        "r^2/eps^5 log^2(r/eps) log^2(1/eps)",
        lambda r, eps: r ** 2 / eps ** 5 * _log(r / eps) ** 2 * _log(1 / eps) ** 2,
    ),
    CostEntry(
        "samples", "estimation (pure states)", "SWAP test", "1/eps^4",
        lambda r, eps: 1 / eps ** 4,
    ),
    CostEntry(
        "samples", "certification", "lower bound", "r/eps^2",
        lambda r, eps: r / eps ** 2,
    ),
]


def cost_table(r: int, eps: float) -> pd.DataFrame:
    """One row per method with its order expression and value at (r, eps)."""
    if r < 1:
        raise ArgumentError(f"rank must be positive, got {r}")
    if not 0 < eps < 1:
        raise ArgumentError(f"eps must lie in (0, 1), got {eps}")
    rows = [
        {
            "access": entry.access,
            "task": entry.task,
            "method": entry.method,
            "order": entry.order,
            "value": entry.formula(r, eps),
        }
        for entry in COST_ENTRIES
    ]
    return pd.DataFrame(rows, columns=["access", "task", "method", "order", "value"])
