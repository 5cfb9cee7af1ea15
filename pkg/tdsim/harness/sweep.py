"""Seeded parameter sweeps with CSV reports and per-point checkpoints."""

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd
from tqdm import tqdm

from ..core.trace_distance import CSV_COLUMNS, estimate_trace_distance
from ..exceptions import DimensionCapError
from ..fixtures.generators import generate_pair
from ..monitoring.resources import ResourceMonitor
from ..utils.benchmarking import PerformanceMonitor, timer
from ..utils.logger import get_logger
from ..utils.rng import child_seed
from ..utils.serialization import read_json, write_json
from ..validation.config import EstimationConfig, FixtureSpec, SweepPlan, get_settings

logger = get_logger(__name__)

SWEEP_COLUMNS = ["point", "axis", "value", "trial"] + CSV_COLUMNS + ["degree", "success"]
EXACT_RANK_FAMILIES = ("low-rank", "pure")


@dataclass
class SweepResult:
    frame: pd.DataFrame
    summary: Dict[str, Any] = field(default_factory=dict)
    aborted: bool = False


def register_qubits(plan: SweepPlan, rank: int) -> int:
    """Widest register a trial of ``plan`` builds."""
    n_anc = max(1, math.ceil(math.log2(max(rank, 1))))
    if plan.mode == "purified":
        return 2 * plan.n + 2 * n_anc + 3
    return plan.n + 5


def _point_settings(plan: SweepPlan, value: float) -> Tuple[float, int, Optional[float]]:
    eps = value if plan.axis == "eps" else plan.eps
    rank = int(round(value)) if plan.axis == "rank" else plan.rank
    delta_p = value if plan.axis == "delta" else None
    return eps, rank, delta_p


def run_trial(plan: SweepPlan, point: int, value: float, trial: int) -> Dict[str, Any]:
    """One (grid point, trial) estimate as a report row."""
    eps, rank, delta_p = _point_settings(plan, value)
    family_rank = 1 if plan.family == "pure" else rank
    spec = FixtureSpec(
        family=plan.family,
        n=plan.n,
        r=family_rank,
        lam=plan.lam,
        seed=child_seed(plan.seed_base, "fixture", trial),
    )
    fx_rho, fx_sigma = generate_pair(spec)
    settings: Dict[str, Any] = {}
    if delta_p is None:
        if plan.family in EXACT_RANK_FAMILIES:
            settings["rank_bound"] = family_rank
        else:
            settings["profiles"] = (fx_rho.profile, fx_sigma.profile)
    cfg = EstimationConfig(
        eps=eps,
        delta_p=delta_p,
        seed=child_seed(plan.seed_base, "estimate", point, trial),
        backend=plan.backend,
        repetitions=plan.repetitions,
        **settings,
    )
    report = estimate_trace_distance(fx_rho.state, fx_sigma.state, cfg, plan.mode, max_workers=1)
    row = {"point": point, "axis": plan.axis, "value": value, "trial": trial}
    row.update(report.csv_row())
    row["degree"] = report.parameters["degree"]
    row["success"] = bool(report.within_eps)
    return row


def _checkpoint_path(out_dir: str, point: int) -> str:
    return os.path.join(out_dir, "checkpoints", f"point_{point:03d}.json")


def _fit_slope(x: List[float], y: List[float]) -> Optional[float]:
    if len(x) < 2:
        return None
    return float(np.polyfit(np.asarray(x), np.asarray(y), 1)[0])


def summarize(frame: pd.DataFrame, plan: SweepPlan) -> Dict[str, Any]:
    """Log-log slopes of the ledger totals per grid point plus success frequencies.

    Totals are divided by log(1/eps_p) before fitting the eps and rank axes.
    """
    summary: Dict[str, Any] = {"axis": plan.axis, "mode": plan.mode, "rows": int(len(frame))}
    if frame.empty:
        return summary
    metric = "queries_total" if plan.mode == "purified" else "samples_total"
    share = 8 if plan.mode == "purified" else 12
    means = frame.groupby("value", sort=True)[[metric, "eps", "delta_p"]].mean()
    x: List[float] = []
    y: List[float] = []
    for value, row in means.iterrows():
        total = float(row[metric])
        if total <= 0:
            continue
        normalizer = math.log(share / float(row["eps"]))
        if plan.axis == "eps":
            x.append(math.log(1.0 / float(value)))
            y.append(math.log(total / normalizer))
        elif plan.axis == "rank":
            x.append(math.log(float(value)))
            y.append(math.log(total / normalizer))
        else:
            x.append(math.log(1.0 / float(row["delta_p"])))
            y.append(math.log(total))
    summary["metric"] = metric
    summary["slope"] = _fit_slope(x, y)
    summary["success_frequency"] = float(frame["success"].astype(bool).mean())
    summary["success_by_point"] = {
        str(value): float(group["success"].astype(bool).mean())
        for value, group in frame.groupby("value", sort=True)
    }
    return summary


def run_sweep(
    plan: SweepPlan,
    out_dir: Optional[str] = None,
    resume: bool = False,
    progress: bool = True,
) -> SweepResult:
    """Run every (grid point, trial) of ``plan`` in plan order.

    Trials of one grid point share a bounded thread pool. A point that exceeds
    the qubit cap aborts the remaining points and the partial result is
    flagged in the summary.
    """
    workers = plan.max_workers or get_settings().max_workers
    monitor = ResourceMonitor()
    widest = max(register_qubits(plan, _point_settings(plan, v)[1]) for v in plan.grid)
    if not monitor.check_register(widest, workers):
        workers = 1

    perf = PerformanceMonitor()
    rows: List[Dict[str, Any]] = []
    aborted_at: Optional[float] = None
    bar = tqdm(total=len(plan.grid) * plan.trials, desc=f"sweep {plan.axis}", disable=not progress)
    with timer("sweep") as timing:
        for point, value in enumerate(plan.grid):
            checkpoint = _checkpoint_path(out_dir, point) if out_dir else None
            if resume and checkpoint and os.path.exists(checkpoint):
                rows.extend(read_json(checkpoint)["rows"])
                bar.update(plan.trials)
                logger.info("resumed grid point", point=point, value=value)
                continue
            try:
                with timer(f"point {point}") as point_timing:
                    with ThreadPoolExecutor(max_workers=workers) as pool:
                        futures = [
                            pool.submit(run_trial, plan, point, value, trial)
                            for trial in range(plan.trials)
                        ]
                        point_rows = []
                        for future in futures:
                            point_rows.append(future.result())
                            bar.update(1)
            except DimensionCapError as e:
                aborted_at = value
                logger.warning("sweep aborted", point=point, value=value, reason=str(e))
                break
            perf.record("point", point_timing["elapsed"])
            rows.extend(point_rows)
            if checkpoint:
                write_json(checkpoint, {"value": value, "rows": point_rows})
    bar.close()

    frame = pd.DataFrame(rows, columns=SWEEP_COLUMNS)
    summary = summarize(frame, plan)
    summary["aborted"] = aborted_at is not None
    summary["aborted_at"] = aborted_at
    summary["elapsed"] = timing["elapsed"]
    summary["point_timing"] = perf.get_statistics("point")
    summary["system"] = monitor.get_system_health()
    summary["process"] = monitor.get_process_usage()
    if out_dir:
        os.makedirs(out_dir, exist_ok=True)
        frame.to_csv(os.path.join(out_dir, "sweep.csv"), index=False)
        write_json(os.path.join(out_dir, "summary.json"), summary)
    logger.info("sweep finished", axis=plan.axis, rows=len(frame), slope=summary.get("slope"))
    return SweepResult(frame, summary, aborted_at is not None)
