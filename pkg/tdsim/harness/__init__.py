"""Sweeps, acceptance criteria and cost tables."""

from .acceptance import (
    CRITERIA,
    FAULTS,
    AcceptanceReport,
    CriterionResult,
    run_acceptance,
    select_criteria,
)
from .costs import COST_ENTRIES, cost_table
from .sweep import SWEEP_COLUMNS, SweepResult, run_sweep, run_trial, summarize

__all__ = [
    "COST_ENTRIES",
    "CRITERIA",
    "FAULTS",
    "SWEEP_COLUMNS",
    "AcceptanceReport",
    "CriterionResult",
    "SweepResult",
    "cost_table",
    "run_acceptance",
    "run_sweep",
    "run_trial",
    "select_criteria",
    "summarize",
]
