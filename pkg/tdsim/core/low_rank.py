"""Approximately-low-rank profiles and threshold selection.

An operator is (r, delta, w)-approximately-low-rank when at most r eigenvalues
exceed delta in magnitude and the remaining ones sum to at most w. A profile
carries a rank bound R(delta), which is non-increasing, and a mass bound
W(delta), which is non-decreasing.
"""

import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Iterable, Optional, Sequence

import numpy as np

from ..exceptions import ArgumentError, InfeasibleThresholdError
from ..linalg.density import DensityOperator, OperatorLike, rank_delta, w_small_eigen
from ..linalg.operators import PREDICATE_TOL
from ..utils.logger import get_logger

logger = get_logger(__name__)

PROVENANCES = ("exact", "depolarized", "gibbs", "power-law", "user")
BISECTION_FLOOR = 1e-15
BISECTION_STEPS = 200
# delta_p derived from the spectrum never exceeds this
ORACLE_DELTA_CAP = 0.5


@dataclass(frozen=True)
class ApproxLowRankProfile:
    provenance: str
    params: Dict[str, Any]
    rank_fn: Callable[[float], int] = field(repr=False, compare=False)
    mass_fn: Callable[[float], float] = field(repr=False, compare=False)
    # largest delta with W(delta) <= target, when known in closed form
    inverse_mass: Optional[Callable[[float], float]] = field(
        default=None, repr=False, compare=False
    )

    def __post_init__(self):
        if self.provenance not in PROVENANCES:
            raise ArgumentError(f"unknown profile provenance {self.provenance!r}")

    def rank_bound(self, delta: float) -> int:
        return int(self.rank_fn(float(delta)))

    def mass_bound(self, delta: float) -> float:
        return float(self.mass_fn(float(delta)))

    def dominates(self, A: OperatorLike, deltas: Iterable[float]) -> bool:
        """True when R and W bound the measured rank and mass at every delta."""
        for delta in deltas:
            if self.rank_bound(delta) < rank_delta(A, delta):
                return False
            if self.mass_bound(delta) < w_small_eigen(A, delta) - PREDICATE_TOL:
                return False
        return True

    def to_json(self) -> Dict[str, Any]:
        return {"provenance": self.provenance, "params": dict(self.params)}

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "ApproxLowRankProfile":
        try:
            provenance = data["provenance"]
            params = dict(data.get("params", {}))
        except (KeyError, TypeError):
            raise ArgumentError("profile JSON needs 'provenance' and 'params'")
        factories = {
            "exact": exact_profile,
            "depolarized": depolarized_profile,
            "gibbs": gibbs_profile,
            "power-law": power_law_profile,
            "user": user_profile,
        }
        if provenance not in factories:
            raise ArgumentError(f"unknown profile provenance {provenance!r}")
        try:
            return factories[provenance](**params)
        except TypeError as e:
            raise ArgumentError(f"bad parameters for {provenance} profile: {e}")


def exact_profile(r: int) -> ApproxLowRankProfile:
    """Rank-r state: R = r and W = r delta."""
    if r < 1:
        raise ArgumentError(f"rank must be positive, got {r}")
    return ApproxLowRankProfile(
        "exact",
        {"r": int(r)},
        lambda delta: r,
        lambda delta: r * delta,
        lambda target: target / r,
    )


def depolarized_profile(r: int, lam: float, N: int) -> ApproxLowRankProfile:
    """Rank-r state after depolarizing with weight lam in dimension N."""
    if not 1 <= r <= N:
        raise ArgumentError(f"rank {r} outside [1, {N}]")
    if not 0.0 <= lam <= 1.0:
        raise ArgumentError(f"depolarizing weight must lie in [0, 1], got {lam}")
    floor = lam / N

    def rank(delta: float) -> int:
        return r if delta >= floor else N

    def mass(delta: float) -> float:
        if delta >= floor:
            return lam * (N - r) / N + r * delta
        return N * delta

    def inverse(target: float) -> float:
        if target >= lam:
            return (target - lam * (N - r) / N) / r
        return target / N

    return ApproxLowRankProfile(
        "depolarized", {"r": int(r), "lam": float(lam), "N": int(N)}, rank, mass, inverse
    )


def gibbs_profile(k: int, gap: float, N: int) -> ApproxLowRankProfile:
    """Gibbs state whose k-th and (k+1)-th energies are at least ``gap`` apart.

    Every eigenvalue beyond the k-th is at most 1 / (e^gap k + 1).
    """
    if not 1 <= k <= N:
        raise ArgumentError(f"cut {k} outside [1, {N}]")
    if gap < 0:
        raise ArgumentError(f"gap must be non-negative, got {gap}")
    tail = 1.0 / (math.exp(min(gap, 700.0)) * k + 1.0)

    def rank(delta: float) -> int:
        return k if delta >= tail else N

    def mass(delta: float) -> float:
        if delta >= tail:
            return (N - k) * tail + k * delta
        return N * delta

    def inverse(target: float) -> float:
        if target >= N * tail:
            return (target - (N - k) * tail) / k
        return target / N

    return ApproxLowRankProfile(
        "gibbs", {"k": int(k), "gap": float(gap), "N": int(N)}, rank, mass, inverse
    )


def power_law_profile(C: float, N: int) -> ApproxLowRankProfile:
    """Spectrum capped by C / i^2.

    R(delta) = floor(sqrt(C / delta)) and W(delta) sums the cap from
    ceil(sqrt(C / delta)) on. One eigenvalue below the cap may sit under delta
    ahead of that index, so delta is added to W.
    """
    if C <= 0:
        raise ArgumentError(f"C must be positive, got {C}")
    if N < 1:
        raise ArgumentError(f"dimension must be positive, got {N}")
    caps = C / np.arange(1, N + 1, dtype=np.float64) ** 2

    def rank(delta: float) -> int:
        if delta <= 0:
            return N
        return min(N, int(math.floor(math.sqrt(C / delta))))

    def mass(delta: float) -> float:
        if delta <= 0:
            return 0.0
        start = int(math.ceil(math.sqrt(C / delta)))
        return float(np.sum(caps[start - 1:])) + delta if start <= N else delta

    return ApproxLowRankProfile("power-law", {"C": float(C), "N": int(N)}, rank, mass)


def user_profile(
    deltas: Sequence[float], ranks: Sequence[int], masses: Sequence[float], N: int
) -> ApproxLowRankProfile:
    """Profile tabulated at increasing thresholds.

    Between table points the mass grows by at most rank * delta; below the
    first point the trivial bounds R = N, W = N delta apply.
    """
    table = np.asarray(deltas, dtype=np.float64)
    if not (len(table) == len(ranks) == len(masses)) or len(table) == 0:
        raise ArgumentError("profile table columns must be non-empty and of equal length")
    if np.any(np.diff(table) <= 0) or table[0] <= 0:
        raise ArgumentError("profile thresholds must be positive and increasing")

    def row(delta: float) -> int:
        return int(np.searchsorted(table, delta, side="right")) - 1

    def rank(delta: float) -> int:
        i = row(delta)
        return N if i < 0 else int(ranks[i])

    def mass(delta: float) -> float:
        i = row(delta)
        return N * delta if i < 0 else float(masses[i]) + int(ranks[i]) * delta

    params = {
        "deltas": [float(d) for d in table],
        "ranks": [int(r) for r in ranks],
        "masses": [float(m) for m in masses],
        "N": int(N),
    }
    return ApproxLowRankProfile("user", params, rank, mass)


def threshold_for_mass(profile: ApproxLowRankProfile, target: float) -> float:
    """Largest delta in [1e-15, 1] with W(delta) <= target."""
    if target <= 0:
        raise ArgumentError(f"mass target must be positive, got {target}")
    if profile.inverse_mass is not None:
        delta = min(profile.inverse_mass(target), 1.0)
        if delta >= BISECTION_FLOOR and profile.mass_bound(delta) <= target * (1 + 1e-12):
            return delta

    lo, hi = BISECTION_FLOOR, 1.0
    if profile.mass_bound(lo) > target:
        raise InfeasibleThresholdError(
            f"{profile.provenance} profile cannot reach mass {target:.3g}; "
            "the accuracy is below the profile's noise floor"
        )
    if profile.mass_bound(hi) <= target:
        return hi
    for _ in range(BISECTION_STEPS):
        mid = 0.5 * (lo + hi)
        if profile.mass_bound(mid) <= target:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-16 * hi:
            break
    return lo


@dataclass
class ThresholdSelection:
    delta_1: float
    delta_2: float
    r_1: int
    r_2: int
    delta_p: float


def select_threshold(
    P_rho: ApproxLowRankProfile, P_sigma: ApproxLowRankProfile, eps: float
) -> ThresholdSelection:
    """delta_p = 2 min(delta_1, delta_2, eps/8r_1, eps/8r_2) with W(delta_i) <= eps/8."""
    if not 0 < eps < 1:
        raise ArgumentError(f"eps must lie in (0, 1), got {eps}")
    delta_1 = threshold_for_mass(P_rho, eps / 8)
    delta_2 = threshold_for_mass(P_sigma, eps / 8)
    r_1 = max(P_rho.rank_bound(delta_1), 1)
    r_2 = max(P_sigma.rank_bound(delta_2), 1)
    delta_p = 2 * min(delta_1, delta_2, eps / (8 * r_1), eps / (8 * r_2))
    logger.debug(
        "threshold selection",
        provenance=(P_rho.provenance, P_sigma.provenance),
        delta_1=delta_1,
        delta_2=delta_2,
        r_1=r_1,
        r_2=r_2,
        delta_p=delta_p,
    )
    return ThresholdSelection(delta_1, delta_2, r_1, r_2, delta_p)


def choose_delta_p_profile(
    P_rho: ApproxLowRankProfile, P_sigma: ApproxLowRankProfile, eps: float
) -> float:
    return select_threshold(P_rho, P_sigma, eps).delta_p


def choose_delta_p_rank(r: int, eps: float) -> float:
    """eps / 8r, enough when both states have rank at most r."""
    if r < 1:
        raise ArgumentError(f"rank bound must be positive, got {r}")
    if not 0 < eps < 1:
        raise ArgumentError(f"eps must lie in (0, 1), got {eps}")
    return eps / (8 * r)


def choose_delta_p_oracle(rho: DensityOperator, sigma: DensityOperator, eps: float) -> float:
    """Largest convenient delta_p with w((rho - sigma)/2, delta_p) <= eps/4, from the spectrum.

    Sorts |lambda(nu)| ascending, keeps the longest prefix of mass at most
    eps/4 and returns half the first excluded magnitude.
    """
    if rho.dim != sigma.dim:
        raise ArgumentError(f"dimension mismatch: {rho.dim} vs {sigma.dim}")
    nu = (rho.op - sigma.op) / 2
    magnitudes = np.sort(np.abs(np.linalg.eigvalsh(nu)))
    magnitudes[magnitudes <= 1e-12] = 0.0
    fits = np.cumsum(magnitudes) <= eps / 4
    J = int(np.count_nonzero(fits))
    if J == magnitudes.size:
        return ORACLE_DELTA_CAP
    return min(float(magnitudes[J]) / 2, ORACLE_DELTA_CAP)


@dataclass
class LowRankBound:
    """(rank, threshold, mass) parameters of an approximately-low-rank operator."""

    rank: int
    threshold: float
    mass: float

    def holds_for(self, A: OperatorLike) -> bool:
        return (
            rank_delta(A, self.threshold) <= self.rank
            and w_small_eigen(A, self.threshold) <= self.mass + PREDICATE_TOL
        )


def approx_low_rank_difference(
    P_rho: ApproxLowRankProfile, P_sigma: ApproxLowRankProfile, delta: float
) -> LowRankBound:
    """Parameters inherited by (rho - sigma)/2 from the two profiles at ``delta``.

    With rho (r1, delta, w1) and sigma (r2, delta, w2), Weyl's inequalities give
    (r1 + r2, delta/2, ((r1 + r2) delta + w1 + w2)/2).
    """
    if delta < 0:
        raise ArgumentError(f"threshold must be non-negative, got {delta}")
    r = P_rho.rank_bound(delta) + P_sigma.rank_bound(delta)
    mass = (r * delta + P_rho.mass_bound(delta) + P_sigma.mass_bound(delta)) / 2
    return LowRankBound(r, delta / 2, mass)
