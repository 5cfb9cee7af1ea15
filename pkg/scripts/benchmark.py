#!/usr/bin/env python3
"""Benchmark script for tdsim estimators."""

import argparse
from datetime import datetime
from typing import Dict, List

from tdsim.core.trace_distance import estimate_trace_distance
from tdsim.fixtures.generators import generate_pair
from tdsim.polynomials.sign import clear_cache
from tdsim.utils.benchmarking import PerformanceMonitor, timer
from tdsim.utils.serialization import write_json
from tdsim.validation.config import EstimationConfig, FixtureSpec


def run_benchmark(
    iterations: int,
    eps_grid: List[float],
    mode: str,
    n: int,
    rank: int
) -> Dict:
    """Time estimates over an eps grid, cold and warm sign-polynomial cache."""
    monitor = PerformanceMonitor()
    results = []

    for eps in eps_grid:
        clear_cache()
        for i in range(iterations):
            fx_rho, fx_sigma = generate_pair(FixtureSpec(family="low-rank", n=n, r=rank, seed=i))
            cfg = EstimationConfig(eps=eps, rank_bound=rank, seed=i)
            label = f"eps={eps:g}" + (" cold" if i == 0 else "")
            with timer(label) as timing:
                report = estimate_trace_distance(fx_rho.state, fx_sigma.state, cfg, mode)
            monitor.record(label, timing["elapsed"])
            results.append({
                "eps": eps,
                "seed": i,
                "elapsed": timing["elapsed"],
                "degree": report.parameters["degree"],
                "abs_error": report.abs_error,
                "queries_total": report.queries_total,
                "samples_total": report.samples_total,
            })

    return {
        "timestamp": datetime.now().isoformat(),
        "mode": mode,
        "iterations": iterations,
        "statistics": {name: monitor.get_statistics(name) for name in monitor.records},
        "results": results
    }


def main():
    parser = argparse.ArgumentParser(description="Run tdsim benchmarks")
    parser.add_argument("--iterations", type=int, default=5)
    parser.add_argument("--eps", type=float, nargs="+", default=[0.2, 0.1, 0.05])
    parser.add_argument("--mode", choices=["purified", "samples"], default="purified")
    parser.add_argument("--n", type=int, default=2)
    parser.add_argument("--rank", type=int, default=2)
    parser.add_argument("--output", type=str, default="benchmark_results.json")
    args = parser.parse_args()

    print(f"Running benchmark with {args.iterations} iterations per eps...")
    results = run_benchmark(args.iterations, args.eps, args.mode, args.n, args.rank)
    write_json(args.output, results)

    print(f"\nResults saved to {args.output}")
    for name, stats in results["statistics"].items():
        print(f"{name}: mean {stats['mean']:.3f}s over {int(stats['count'])} runs")


if __name__ == "__main__":
    main()
