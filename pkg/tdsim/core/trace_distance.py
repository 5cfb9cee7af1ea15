"""Trace distance estimation from purified access and from samples."""

import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from ..channels.sampling import (
    apply_channel_as_block_encoding,
    channel_block_encoding,
    sampling_to_block_encoding,
)
from ..encoding.block_encoding import BlockEncoding, lcu_difference
from ..encoding.purification import PurifiedOracle, density_to_block_encoding, purify
from ..estimators.backend import EstimationBackend, median_of
from ..estimators.hadamard import (
    TermEstimate,
    estimate_trace_term,
    hadamard_test_prob,
    hadamard_test_sample,
)
from ..exceptions import ArgumentError, InfeasibleThresholdError, UnsupportedChannelError
from ..linalg.density import DensityOperator, sign_matrix, trace_distance_exact, w_small_eigen
from ..metrics.query_ledger import (
    O_RHO,
    O_SIGMA,
    SAMPLES_RHO,
    SAMPLES_SIGMA,
    U_NU,
    U_PSV,
    QueryLedger,
)
from ..polynomials.sign import ETA, measured_eta, sign_poly
from ..polynomials.svt import GAMMA, qsvt_block_encoding
from ..utils.logger import get_logger
from ..utils.serialization import write_json
from ..validation.config import EstimationConfig, get_settings
from .low_rank import choose_delta_p_oracle, choose_delta_p_profile, choose_delta_p_rank

logger = get_logger(__name__)

MODES = ("purified", "samples")
CSV_COLUMNS = [
    "seed",
    "mode",
    "eps",
    "delta_p",
    "estimate",
    "exact",
    "abs_error",
    "queries_total",
    "samples_total",
]
DEFAULT_BACKENDS = {"purified": "qae", "samples": "sampling"}


@dataclass
class EstimateReport:
    mode: str
    eps: float
    estimate: float
    exact_value: Optional[float] = None
    abs_error: Optional[float] = None
    ledger: Dict[str, int] = field(default_factory=dict)
    parameters: Dict[str, Any] = field(default_factory=dict)
    runs: Dict[str, List[float]] = field(default_factory=dict)
    precondition: Dict[str, Any] = field(default_factory=dict)
    seed: int = 0
    elapsed: float = 0.0

    @property
    def queries_total(self) -> int:
        return self.ledger.get(O_RHO, 0) + self.ledger.get(O_SIGMA, 0)

    @property
    def samples_total(self) -> int:
        return self.ledger.get(SAMPLES_RHO, 0) + self.ledger.get(SAMPLES_SIGMA, 0)

    @property
    def within_eps(self) -> Optional[bool]:
        if self.abs_error is None:
            return None
        return self.abs_error <= self.eps

    def csv_row(self) -> Dict[str, Any]:
        return {
            "seed": self.seed,
            "mode": self.mode,
            "eps": self.eps,
            "delta_p": self.parameters.get("delta_p"),
            "estimate": self.estimate,
            "exact": self.exact_value,
            "abs_error": self.abs_error,
            "queries_total": self.queries_total,
            "samples_total": self.samples_total,
        }

    def to_json(self) -> Dict[str, Any]:
        return {
            "mode": self.mode,
            "eps": self.eps,
            "estimate": self.estimate,
            "exact_value": self.exact_value,
            "abs_error": self.abs_error,
            "ledger": dict(self.ledger),
            "queries_total": self.queries_total,
            "samples_total": self.samples_total,
            "parameters": dict(self.parameters),
            "runs": {name: list(values) for name, values in self.runs.items()},
            "precondition": dict(self.precondition),
            "seed": self.seed,
            "elapsed": self.elapsed,
        }

    def save(self, path: str) -> None:
        write_json(path, self.to_json())

    def append_csv(self, path: str) -> None:
        directory = os.path.dirname(path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        exists = os.path.exists(path)
        pd.DataFrame([self.csv_row()], columns=CSV_COLUMNS).to_csv(
            path, mode="a", header=not exists, index=False
        )


def resolve_delta_p(
    cfg: EstimationConfig,
    rho: Optional[DensityOperator] = None,
    sigma: Optional[DensityOperator] = None,
) -> Tuple[float, str]:
    """delta_p and where it came from: given, rank, profile or oracle (test mode only)."""
    if cfg.delta_p is not None:
        return float(cfg.delta_p), "given"
    if cfg.rank_bound is not None:
        return choose_delta_p_rank(cfg.rank_bound, cfg.eps), "rank"
    if cfg.profiles is not None:
        P_rho, P_sigma = cfg.profiles
        return choose_delta_p_profile(P_rho, P_sigma, cfg.eps), "profile"
    if cfg.test_mode and rho is not None and sigma is not None:
        delta_p = choose_delta_p_oracle(rho, sigma, cfg.eps)
        logger.warning("delta_p derived from the exact spectrum", delta_p=delta_p)
        return delta_p, "oracle"
    raise ArgumentError("delta_p is not derivable: give delta_p, a rank bound or profiles")


def check_precondition(
    rho: DensityOperator,
    sigma: DensityOperator,
    delta_p: float,
    cfg: EstimationConfig,
) -> Dict[str, Any]:
    """Record w((rho - sigma)/2, delta_p) against eps/4 in test mode."""
    bound = cfg.eps / 4
    if not cfg.test_mode:
        return {"checked": False, "delta_p": delta_p, "bound": bound}
    mass = w_small_eigen((rho.op - sigma.op) / 2, delta_p)
    holds = mass <= bound
    if not holds:
        message = f"w((rho - sigma)/2, {delta_p:.4g}) = {mass:.4g} exceeds eps/4 = {bound:.4g}"
        if cfg.strict_precondition:
            raise InfeasibleThresholdError(message)
        logger.warning("precondition violated", mass=mass, bound=bound, delta_p=delta_p)
    return {"checked": True, "delta_p": delta_p, "mass": mass, "bound": bound, "holds": holds}


def _backend(cfg: EstimationConfig, mode: str) -> EstimationBackend:
    return EstimationBackend(
        mode=cfg.backend or DEFAULT_BACKENDS[mode],
        seed=cfg.seed,
        repetitions=cfg.repetitions,
        qae_constant=cfg.qae_constant,
    )


def _run_terms(
    task: Callable[[str], TermEstimate],
    names: Sequence[str],
    max_workers: Optional[int],
) -> Dict[str, TermEstimate]:
    """Run the per-state terms, concurrently when more than one worker is allowed."""
    workers = max_workers if max_workers is not None else get_settings().max_workers
    if workers <= 1:
        return {name: task(name) for name in names}
    with ThreadPoolExecutor(max_workers=min(workers, len(names))) as pool:
        futures = {name: pool.submit(task, name) for name in names}
        return {name: futures[name].result() for name in names}


def _finish(
    report: EstimateReport,
    rho: DensityOperator,
    sigma: DensityOperator,
    cfg: EstimationConfig,
    ledger: QueryLedger,
    started: float,
) -> EstimateReport:
    if cfg.test_mode:
        report.exact_value = trace_distance_exact(rho, sigma)
        report.abs_error = abs(report.estimate - report.exact_value)
    report.ledger = ledger.snapshot()
    report.elapsed = time.perf_counter() - started
    logger.info(
        "trace distance estimated",
        mode=report.mode,
        estimate=report.estimate,
        exact=report.exact_value,
        queries_total=report.queries_total,
        samples_total=report.samples_total,
    )
    return report


def estimate_purified(
    O_rho: PurifiedOracle,
    O_sigma: PurifiedOracle,
    cfg: EstimationConfig,
    ledger: Optional[QueryLedger] = None,
    max_workers: Optional[int] = None,
) -> EstimateReport:
    """Estimate T(rho, sigma) to additive eps from two purification oracles.

    Builds the (1, ., 0)-encoding of nu = (rho - sigma)/2, applies the sign
    polynomial at (delta_p, eps/8) by QSVT and returns (x_rho - x_sigma)/2 for
    the Hadamard-test values x = tr(p(nu) state) estimated at eps/4.
    """
    started = time.perf_counter()
    if O_rho.n != O_sigma.n:
        raise ArgumentError(f"oracles act on {O_rho.n} and {O_sigma.n} qubits")
    ledger = ledger or QueryLedger()
    O_rho, O_sigma = O_rho.relabeled(O_RHO), O_sigma.relabeled(O_SIGMA)
    rho, sigma = O_rho.state, O_sigma.state

    eps = cfg.eps
    eps_p, eps_H = eps / 8, eps / 4
    delta_p, source = resolve_delta_p(cfg, rho, sigma)
    precondition = check_precondition(rho, sigma, delta_p, cfg)

    U_rho = density_to_block_encoding(O_rho)
    U_sigma = density_to_block_encoding(O_sigma)
    U_nu = lcu_difference(U_rho, U_sigma, label=U_NU)
    p = sign_poly(delta_p, eps_p)
    U_sgn = qsvt_block_encoding(p, U_nu, label=U_PSV)
    backend = _backend(cfg, "purified")
    oracles = {"x_rho": O_rho, "x_sigma": O_sigma}

    def term(name: str) -> TermEstimate:
        return estimate_trace_term(U_sgn, oracles[name], eps_H, backend.child(name), ledger)

    terms = _run_terms(term, list(oracles), max_workers)
    estimate = (terms["x_rho"].value - terms["x_sigma"].value) / 2

    parameters = {
        "eps_p": eps_p,
        "eps_H": eps_H,
        "delta_p": delta_p,
        "delta_p_source": source,
        "degree": p.degree,
        "eta": measured_eta(p),
        "gamma": GAMMA,
        "grid_size": terms["x_rho"].grid_size,
        "shots": terms["x_rho"].shots,
        "repetitions": backend.repetitions,
        "backend": backend.mode,
        "ancillas": U_sgn.ancillas,
        "x_rho": terms["x_rho"].value,
        "x_sigma": terms["x_sigma"].value,
    }
    report = EstimateReport(
        mode="purified",
        eps=eps,
        estimate=float(estimate),
        parameters=parameters,
        runs={name: list(t.runs) for name, t in terms.items()},
        precondition=precondition,
        seed=cfg.seed,
    )
    return _finish(report, rho, sigma, cfg, ledger, started)


def channel_delta(eps: float, delta_p: float, eps_p: float, gamma: float = GAMMA, eta: float = ETA) -> float:
    """Per-channel diamond budget pi eps delta_p / (48 gamma eta log(1/eps_p))."""
    return math.pi * eps * delta_p / (48 * gamma * eta * math.log(1.0 / eps_p))


def estimate_samples(
    rho: DensityOperator,
    sigma: DensityOperator,
    cfg: EstimationConfig,
    ledger: Optional[QueryLedger] = None,
    channel_mode: str = "noisy-oracle",
    max_workers: Optional[int] = None,
) -> EstimateReport:
    """Estimate T(rho, sigma) to additive eps from independent copies.

    Each state becomes a channel delta-close to its (4/pi, 3, 0)-block-encoding;
    the sign polynomial at (delta_p, eps/12) is applied through those channels
    and each Hadamard test shot consumes a fresh copy of the measured state.
    Returns 2 (x_rho - x_sigma) / pi.
    """
    started = time.perf_counter()
    if channel_mode == "dme":
        raise UnsupportedChannelError(
            "dme channels approximate e^{-i rho t}, not a block-encoding of rho"
        )
    if rho.n != sigma.n:
        raise ArgumentError(f"states act on {rho.n} and {sigma.n} qubits")
    ledger = ledger or QueryLedger()

    eps = cfg.eps
    eps_p, eps_H = eps / 12, math.pi * eps / 24
    delta_p, source = resolve_delta_p(cfg, rho, sigma)
    precondition = check_precondition(rho, sigma, delta_p, cfg)
    p = sign_poly(delta_p, eps_p)
    delta = channel_delta(eps, delta_p, eps_p)

    E_rho = sampling_to_block_encoding(rho, delta, channel_mode, label="E_rho")
    E_sigma = sampling_to_block_encoding(sigma, delta, channel_mode, label="E_sigma")
    U_nu = lcu_difference(channel_block_encoding(E_rho), channel_block_encoding(E_sigma), label=U_NU)
    U_sgn: BlockEncoding = qsvt_block_encoding(p, U_nu, label=U_PSV)

    q = GAMMA * p.degree
    # composite proxies need the dense q-th superoperator power
    budgets = [
        apply_channel_as_block_encoding(E, q, measure=cfg.check_channels) for E in (E_rho, E_sigma)
    ]
    declared = sum(b.declared for b in budgets)
    status = "ok"
    if declared >= 1:
        status = "overflow"
        logger.warning("qsvt channel budget overflow", declared=declared, q=q, delta=delta)
    fidelity = (1 - delta / 2) ** (2 * q)
    shots = math.ceil(1.0 / eps_H ** 2)
    backend = _backend(cfg, "samples")
    states = {"x_rho": (rho, SAMPLES_RHO), "x_sigma": (sigma, SAMPLES_SIGMA)}

    def term(name: str) -> TermEstimate:
        state, key = states[name]
        child = backend.child(name)
        if child.is_ideal:
            fractions = [hadamard_test_prob(U_sgn, state, "real", ledger)]
            ledger.charge(key, 1)
        else:
            fractions = [
                hadamard_test_sample(
                    U_sgn, state, "real", shots, child.rng, ledger, fidelity, sample_key=key
                )
                for _ in range(child.repetitions)
            ]
        executions = 1 if child.is_ideal else shots * len(fractions)
        apply_channel_as_block_encoding(E_rho, q, ledger, SAMPLES_RHO, executions=executions)
        apply_channel_as_block_encoding(E_sigma, q, ledger, SAMPLES_SIGMA, executions=executions)
        runs = [2 * f - 1 for f in fractions]
        return TermEstimate(median_of(runs), runs, shots=shots)

    terms = _run_terms(term, list(states), max_workers)
    estimate = 2 * (terms["x_rho"].value - terms["x_sigma"].value) / math.pi

    parameters: Dict[str, Any] = {
        "eps_p": eps_p,
        "eps_H": eps_H,
        "delta": delta,
        "delta_p": delta_p,
        "delta_p_source": source,
        "degree": p.degree,
        "eta": ETA,
        "measured_eta": measured_eta(p),
        "gamma": GAMMA,
        "channel_mode": channel_mode,
        "copies_per_use": E_rho.copies_per_use,
        "shots": shots,
        "repetitions": backend.repetitions,
        "backend": backend.mode,
        "budget_lcu": 2 * delta,
        "budget_qsvt": declared,
        "budget_status": status,
        "fidelity": fidelity,
        "x_rho": terms["x_rho"].value,
        "x_sigma": terms["x_sigma"].value,
    }
    if cfg.check_channels:
        parameters["choi_proxy"] = {
            E.label: E.choi_proxy_distance() for E in (E_rho, E_sigma)
        }
        parameters["composite_choi_proxy"] = {
            E.label: b.choi_proxy for E, b in zip((E_rho, E_sigma), budgets)
        }
    report = EstimateReport(
        mode="samples",
        eps=eps,
        estimate=float(estimate),
        parameters=parameters,
        runs={name: list(t.runs) for name, t in terms.items()},
        precondition=precondition,
        seed=cfg.seed,
    )
    return _finish(report, rho, sigma, cfg, ledger, started)


def estimate_trace_distance(
    rho: DensityOperator,
    sigma: DensityOperator,
    cfg: EstimationConfig,
    mode: str = "purified",
    ledger: Optional[QueryLedger] = None,
    max_workers: Optional[int] = None,
) -> EstimateReport:
    """Dispatch on the access model; purified access purifies both states first."""
    if mode not in MODES:
        raise ArgumentError(f"mode must be one of {MODES}, got {mode!r}")
    if mode == "purified":
        return estimate_purified(
            purify(rho, O_RHO), purify(sigma, O_SIGMA), cfg, ledger, max_workers
        )
    return estimate_samples(rho, sigma, cfg, ledger, max_workers=max_workers)


def trace_distance_via_sign(rho: DensityOperator, sigma: DensityOperator) -> float:
    """(tr(rho sgn(nu)) - tr(sigma sgn(nu))) / 2 for nu = (rho - sigma)/2."""
    sgn = sign_matrix((rho.op - sigma.op) / 2)
    return float(np.real(np.trace(rho.op @ sgn) - np.trace(sigma.op @ sgn)) / 2)


@dataclass
class CertificationResult:
    """Decision between rho = sigma and T(rho, sigma) >= eps."""

    accepted: bool
    threshold: float
    estimate: float
    report: EstimateReport


def certify_states(
    rho: DensityOperator,
    sigma: DensityOperator,
    eps: float,
    mode: str = "purified",
    **overrides: Any,
) -> CertificationResult:
    """Estimate at accuracy eps/2 and accept equality when the estimate is below eps/2."""
    cfg = EstimationConfig(eps=eps / 2, **overrides)
    report = estimate_trace_distance(rho, sigma, cfg, mode)
    accepted = report.estimate < eps / 2
    logger.info("certification", accepted=accepted, estimate=report.estimate, eps=eps)
    return CertificationResult(accepted, eps / 2, report.estimate, report)
