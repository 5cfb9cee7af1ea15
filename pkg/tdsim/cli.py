"""Command line interface for tdsim."""

import argparse
import dataclasses
import sys
from typing import Any, Dict, List, Optional, Tuple

from .core.low_rank import ApproxLowRankProfile
from .core.swap_test import swap_test_pure, swap_test_pure_samples
from .core.trace_distance import estimate_samples, estimate_trace_distance
from .encoding.purification import purify
from .estimators.backend import EstimationBackend
from .exceptions import ArgumentError
from .fixtures.generators import (
    Fixture,
    generate_pair,
    load_fixture,
    load_fixture_pair,
    save_fixture,
    save_fixture_pair,
)
from .harness.acceptance import FAULTS, run_acceptance
from .harness.costs import cost_table
from .harness.sweep import run_sweep
from .linalg.density import trace_distance_exact
from .metrics.query_ledger import O_RHO, O_SIGMA, QueryLedger
from .utils.logger import configure_logging
from .utils.serialization import dumps, read_json, write_json
from .validation.config import EstimationConfig, FixtureSpec, SweepPlan, get_settings


def _emit(payload: Any, output: Optional[str]) -> None:
    if output:
        write_json(output, payload)
    else:
        print(dumps(payload))


def _load_profiles(path: str):
    """A single profile shared by both states, or ``{"rho": ..., "sigma": ...}``."""
    data = read_json(path)
    if isinstance(data, dict) and "rho" in data and "sigma" in data:
        return (
            ApproxLowRankProfile.from_json(data["rho"]),
            ApproxLowRankProfile.from_json(data["sigma"]),
        )
    profile = ApproxLowRankProfile.from_json(data)
    return profile, profile


def _add_state_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--pair", help="Fixture pair JSON written by gen --out")
    parser.add_argument("--state-a", help="Fixture or state JSON for rho")
    parser.add_argument("--state-b", help="Fixture or state JSON for sigma")
    parser.add_argument("--eps", type=float, required=True, help="Target additive accuracy")
    parser.add_argument("--seed", type=int, default=0, help="Seed of every random stream")
    parser.add_argument(
        "--backend",
        choices=["ideal", "sampling", "qae"],
        help="Estimation backend (default depends on the access model)"
    )
    parser.add_argument("--repetitions", type=int, default=9, help="Median-of-K runs (odd)")
    parser.add_argument("--output", help="Write the JSON report here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tdsim",
        description="Simulated trace distance estimation for low-rank quantum states"
    )
    parser.add_argument("--verbose", action="store_true", help="Enable debug logging")
    parser.add_argument("--quiet", action="store_true", help="Hide progress bars and info logs")
    parser.add_argument("--log-file", help="Also write log records to this file")
    commands = parser.add_subparsers(dest="command", required=True)

    estimate = commands.add_parser("estimate", help="Estimate T(rho, sigma)")
    _add_state_arguments(estimate)
    estimate.add_argument("--mode", choices=["purified", "samples"], default="purified")
    threshold = estimate.add_mutually_exclusive_group()
    threshold.add_argument("--rank-bound", type=int, help="Upper bound on both ranks")
    threshold.add_argument("--profile", help="Approximately-low-rank profile JSON")
    threshold.add_argument("--delta-p", type=float, help="Explicit singular value threshold")
    estimate.add_argument(
        "--channel-mode",
        choices=["noisy-oracle", "dme"],
        default="noisy-oracle",
        help="Sampling-to-block-encoding channel model (samples mode)"
    )
    estimate.add_argument("--strict", action="store_true", help="Fail on precondition violations")
    estimate.add_argument("--check-channels", action="store_true", help="Report Choi-proxy distances")
    estimate.add_argument("--csv", help="Append the report row to this CSV file")
    estimate.add_argument("--ledger-csv", help="Append the query ledger to this CSV file")

    swap = commands.add_parser("swap-pure", help="SWAP-test estimate for pure states")
    _add_state_arguments(swap)
    swap.add_argument("--access", choices=["purified", "samples"], default="purified")

    gen = commands.add_parser("gen", help="Generate a seeded fixture pair")
    gen.add_argument(
        "--family",
        choices=["low-rank", "depolarized", "gibbs", "power-law", "pure"],
        default="low-rank"
    )
    gen.add_argument("--n", type=int, default=2, help="System qubits")
    gen.add_argument("--r", type=int, default=2, help="Rank of the low-rank part")
    gen.add_argument("--lam", type=float, default=0.0, help="Depolarizing weight")
    gen.add_argument("--k", type=int, default=1, help="Gibbs cut index")
    gen.add_argument("--gap", type=float, default=1.0, help="Gibbs spectral gap")
    gen.add_argument("--C", type=float, default=1.0, help="Power-law constant")
    gen.add_argument("--uniform", action="store_true", help="Equal weights on the support")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", help="Path for the fixture pair with both profiles")
    gen.add_argument("--out-a", help="Separate path for the rho fixture")
    gen.add_argument("--out-b", help="Separate path for the sigma fixture")

    sweep = commands.add_parser("sweep", help="Run a parameter sweep")
    sweep.add_argument("--plan", required=True, help="SweepPlan JSON")
    sweep.add_argument("--out", required=True, help="Output directory")
    sweep.add_argument("--resume", action="store_true", help="Reuse finished grid points")

    accept = commands.add_parser("accept", help="Run the acceptance suite")
    accept.add_argument(
        "--only",
        action="append",
        help="Criterion number or tag to run (repeatable)"
    )
    accept.add_argument("--inject-fault", choices=list(FAULTS), help="Negative control")
    accept.add_argument("--scale", type=float, default=1.0, help="Fraction of the seed counts")
    accept.add_argument("--seed-base", type=int, default=0)
    accept.add_argument("--output", help="Write the JSON report here")

    costs = commands.add_parser("costs", help="Print the asymptotic cost table")
    costs.add_argument("--rank", type=int, default=2)
    costs.add_argument("--eps", type=float, default=0.1)
    costs.add_argument("--output", help="Write the table as CSV")

    return parser


def _load_states(parsed: argparse.Namespace) -> Tuple[Fixture, Fixture]:
    if parsed.pair:
        if parsed.state_a or parsed.state_b:
            raise ArgumentError("give either --pair or --state-a/--state-b")
        return load_fixture_pair(parsed.pair)
    if not (parsed.state_a and parsed.state_b):
        raise ArgumentError("give --pair or both --state-a and --state-b")
    return load_fixture(parsed.state_a), load_fixture(parsed.state_b)


def _run_estimate(parsed: argparse.Namespace) -> int:
    fx_rho, fx_sigma = _load_states(parsed)
    settings = {}
    if parsed.rank_bound is not None:
        settings["rank_bound"] = parsed.rank_bound
    elif parsed.delta_p is not None:
        settings["delta_p"] = parsed.delta_p
    elif parsed.profile:
        settings["profiles"] = _load_profiles(parsed.profile)
    else:
        settings["profiles"] = (fx_rho.profile, fx_sigma.profile)
    cfg = EstimationConfig(
        eps=parsed.eps,
        seed=parsed.seed,
        backend=parsed.backend,
        repetitions=parsed.repetitions,
        strict_precondition=parsed.strict,
        check_channels=parsed.check_channels,
        **settings,
    )
    ledger = QueryLedger()
    rho, sigma = fx_rho.state, fx_sigma.state
    if parsed.mode == "samples":
        report = estimate_samples(rho, sigma, cfg, ledger, channel_mode=parsed.channel_mode)
    else:
        report = estimate_trace_distance(rho, sigma, cfg, parsed.mode, ledger)
    _emit(report.to_json(), parsed.output)
    if parsed.csv:
        report.append_csv(parsed.csv)
    if parsed.ledger_csv:
        ledger.export_csv(parsed.ledger_csv)
    return 0


def _run_swap(parsed: argparse.Namespace) -> int:
    fx_psi, fx_phi = _load_states(parsed)
    psi, phi = fx_psi.state, fx_phi.state
    mode = parsed.backend or ("qae" if parsed.access == "purified" else "sampling")
    backend = EstimationBackend(mode=mode, seed=parsed.seed, repetitions=parsed.repetitions)
    ledger = QueryLedger()
    if parsed.access == "purified":
        result = swap_test_pure(purify(psi, O_RHO), purify(phi, O_SIGMA), parsed.eps, backend, ledger)
    else:
        result = swap_test_pure_samples(psi, phi, parsed.eps, backend, ledger)
    payload = dataclasses.asdict(result)
    payload.update({
        "access": parsed.access,
        "exact": trace_distance_exact(psi, phi),
        "ledger": ledger.snapshot(),
    })
    _emit(payload, parsed.output)
    return 0


def _run_gen(parsed: argparse.Namespace) -> int:
    spec = FixtureSpec(
        family=parsed.family,
        n=parsed.n,
        r=parsed.r,
        lam=parsed.lam,
        k=parsed.k,
        gap=parsed.gap,
        C=parsed.C,
        uniform=parsed.uniform,
        seed=parsed.seed,
    )
    split = (parsed.out_a, parsed.out_b)
    if any(split) and not all(split):
        raise ArgumentError("--out-a and --out-b go together")
    if not parsed.out and not all(split):
        raise ArgumentError("give --out or --out-a with --out-b")
    fx_rho, fx_sigma = generate_pair(spec)
    written: Dict[str, Any] = {}
    if parsed.out:
        save_fixture_pair(fx_rho, fx_sigma, parsed.out)
        written["pair"] = parsed.out
    if all(split):
        save_fixture(fx_rho, parsed.out_a)
        save_fixture(fx_sigma, parsed.out_b)
        written.update({"rho": parsed.out_a, "sigma": parsed.out_b})
    written["exact"] = trace_distance_exact(fx_rho.state, fx_sigma.state)
    print(dumps(written))
    return 0


def _run_sweep(parsed: argparse.Namespace) -> int:
    plan = SweepPlan(**read_json(parsed.plan))
    result = run_sweep(plan, parsed.out, resume=parsed.resume, progress=not parsed.quiet)
    print(dumps(result.summary))
    return 1 if result.aborted else 0


def _run_accept(parsed: argparse.Namespace) -> int:
    report = run_acceptance(
        only=parsed.only,
        inject_fault=parsed.inject_fault,
        scale=parsed.scale,
        seed_base=parsed.seed_base,
        progress=not parsed.quiet,
    )
    print(report.to_frame().to_string(index=False))
    if parsed.output:
        write_json(parsed.output, report.to_json())
    return 0 if report.passed else 1


def _run_costs(parsed: argparse.Namespace) -> int:
    table = cost_table(parsed.rank, parsed.eps)
    if parsed.output:
        table.to_csv(parsed.output, index=False)
    else:
        print(table.to_string(index=False))
    return 0


COMMANDS = {
    "estimate": _run_estimate,
    "swap-pure": _run_swap,
    "gen": _run_gen,
    "sweep": _run_sweep,
    "accept": _run_accept,
    "costs": _run_costs,
}


def main(args: Optional[List[str]] = None) -> int:
    """Main entry point for the CLI."""
    if args is None:
        args = sys.argv[1:]

    parsed_args = build_parser().parse_args(args)

    # Setup logging
    if parsed_args.verbose:
        log_level = "DEBUG"
    elif parsed_args.quiet:
        log_level = "WARNING"
    else:
        log_level = get_settings().log_level
    logger = configure_logging(log_level, parsed_args.log_file)

    try:
        return COMMANDS[parsed_args.command](parsed_args)

    except Exception as e:
        logger.error(f"Error: {str(e)}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
