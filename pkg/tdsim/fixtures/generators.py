"""Seeded state families, each paired with the profile it satisfies."""

import math
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Tuple

import numpy as np

from ..core.low_rank import (
    ApproxLowRankProfile,
    depolarized_profile,
    exact_profile,
    gibbs_profile,
    power_law_profile,
)
from ..exceptions import FixtureValidationError
from ..linalg.density import DensityOperator, trace_distance_exact
from ..linalg.operators import Operator, as_operator, is_hermitian, num_qubits
from ..utils.logger import get_logger
from ..utils.rng import StreamName, rng_stream
from ..utils.serialization import read_json, write_json
from ..validation.config import FixtureSpec

logger = get_logger(__name__)

GAP_TOL = 1e-9
# largest n for which fixtures are generated
MAX_FIXTURE_QUBITS = 8


def haar_unitary(dim: int, rng: np.random.Generator) -> Operator:
    """Haar-random unitary from the QR decomposition of a complex Gaussian matrix."""
    Z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / math.sqrt(2)
    Q, R = np.linalg.qr(Z)
    phases = np.diag(R) / np.abs(np.diag(R))
    return Q * phases


def _from_spectrum(weights: np.ndarray, basis: Operator, n: int) -> DensityOperator:
    k = weights.size
    columns = basis[:, :k]
    return DensityOperator((columns * weights) @ columns.conj().T, n)


def _check_qubits(n: int) -> None:
    if not 1 <= n <= MAX_FIXTURE_QUBITS:
        raise FixtureValidationError(f"n must lie in [1, {MAX_FIXTURE_QUBITS}], got {n}")


def gen_low_rank(
    n: int, r: int, seed: int, uniform: bool = False, stream: StreamName = "rho"
) -> DensityOperator:
    """Rank-r state with Haar eigenbasis and Dirichlet(1) (or uniform) eigenvalues."""
    _check_qubits(n)
    N = 2 ** n
    if not 1 <= r <= N:
        raise FixtureValidationError(f"rank must lie in [1, {N}], got {r}")
    rng = rng_stream(seed, "low-rank", n, r, stream)
    basis = haar_unitary(N, rng)
    weights = np.full(r, 1.0 / r) if uniform else rng.dirichlet(np.ones(r))
    return _from_spectrum(weights, basis, n)


def gen_pure(n: int, seed: int, stream: StreamName = "rho") -> DensityOperator:
    return gen_low_rank(n, 1, seed, stream=stream)


@dataclass
class Fixture:
    state: DensityOperator
    profile: ApproxLowRankProfile
    family: str
    params: Dict[str, Any] = field(default_factory=dict)

    def to_json(self) -> Dict[str, Any]:
        return {
            "family": self.family,
            "params": dict(self.params),
            "state": self.state.to_json(),
            "profile": self.profile.to_json(),
        }

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "Fixture":
        return cls(
            DensityOperator.from_json(data["state"]),
            ApproxLowRankProfile.from_json(data["profile"]),
            data.get("family", "user"),
            dict(data.get("params", {})),
        )


def gen_depolarized(rho: DensityOperator, lam: float) -> Fixture:
    """(1 - lam) rho + lam I/N with the depolarized profile of rank(rho)."""
    if not 0.0 <= lam <= 1.0:
        raise FixtureValidationError(f"lam must lie in [0, 1], got {lam}")
    N = rho.dim
    mixed = (1 - lam) * rho.op + lam * np.eye(N, dtype=np.complex128) / N
    r = max(rho.rank(), 1)
    state = DensityOperator(mixed, rho.n)
    return Fixture(state, depolarized_profile(r, lam, N), "depolarized", {"r": r, "lam": lam})


def gibbs_hamiltonian(n: int, k: int, gap: float, seed: int, stream: StreamName = "rho") -> Operator:
    """H with k energies in [0, 1] and the rest at least ``gap`` above them, in a Haar basis."""
    _check_qubits(n)
    N = 2 ** n
    if not 1 <= k <= N:
        raise FixtureValidationError(f"cut k must lie in [1, {N}], got {k}")
    rng = rng_stream(seed, "gibbs", n, k, stream)
    low = np.sort(rng.uniform(0.0, 1.0, size=k))
    high = low[-1] + gap + np.sort(rng.uniform(0.0, 1.0, size=N - k))
    energies = np.concatenate([low, high])
    basis = haar_unitary(N, rng)
    return (basis * energies) @ basis.conj().T


def gen_gibbs(H: Operator, k: int, gap: Optional[float] = None) -> Fixture:
    """exp(-H) / tr exp(-H) with the gapped Gibbs profile.

    ``gap`` declares the distance between the k-th and (k+1)-th smallest
    energies; it is validated against the spectrum and measured when omitted.
    """
    matrix = as_operator(H, "Hamiltonian")
    if not is_hermitian(matrix):
        raise FixtureValidationError("Hamiltonian must be Hermitian")
    n = num_qubits(matrix.shape[0])
    N = matrix.shape[0]
    if not 1 <= k <= N:
        raise FixtureValidationError(f"cut k must lie in [1, {N}], got {k}")
    energies, basis = np.linalg.eigh((matrix + matrix.conj().T) / 2)
    measured = float(energies[k] - energies[k - 1]) if k < N else 0.0
    if gap is None:
        gap = measured
    elif gap > measured + GAP_TOL:
        raise FixtureValidationError(
            f"declared gap {gap:g} exceeds the spectral gap {measured:g} at k={k}"
        )
    weights = np.exp(-(energies - energies[0]))
    weights /= weights.sum()
    state = DensityOperator((basis * weights) @ basis.conj().T, n)
    return Fixture(state, gibbs_profile(k, gap, N), "gibbs", {"k": k, "gap": float(gap)})


def power_law_spectrum(N: int, C: float) -> np.ndarray:
    """Fill alpha_i = min(C / i^2, remaining) from i = 1 until the trace reaches one."""
    caps = C / np.arange(1, N + 1, dtype=np.float64) ** 2
    if caps.sum() < 1.0 - 1e-12:
        raise FixtureValidationError(
            f"C={C:g} cannot reach trace one under the C/i^2 cap in dimension {N}"
        )
    alphas = np.zeros(N)
    remaining = 1.0
    for i, cap in enumerate(caps):
        alphas[i] = min(cap, remaining)
        remaining -= alphas[i]
        if remaining <= 0:
            break
    return alphas / alphas.sum()


def gen_power_law(n: int, C: float, seed: int, stream: StreamName = "rho") -> Fixture:
    _check_qubits(n)
    N = 2 ** n
    alphas = power_law_spectrum(N, C)
    rng = rng_stream(seed, "power-law", n, stream)
    state = _from_spectrum(alphas, haar_unitary(N, rng), n)
    return Fixture(state, power_law_profile(C, N), "power-law", {"C": float(C)})


def generate(spec: FixtureSpec, stream: StreamName = "rho") -> Fixture:
    """Build the fixture a FixtureSpec describes; ``stream`` separates rho from sigma."""
    family, n, seed = spec.family, spec.n, spec.seed
    if family == "low-rank":
        state = gen_low_rank(n, spec.r, seed, spec.uniform, stream)
        fixture = Fixture(state, exact_profile(spec.r), family)
    elif family == "pure":
        fixture = Fixture(gen_pure(n, seed, stream), exact_profile(1), family)
    elif family == "depolarized":
        fixture = gen_depolarized(gen_low_rank(n, spec.r, seed, spec.uniform, stream), spec.lam)
    elif family == "gibbs":
        H = gibbs_hamiltonian(n, spec.k, spec.gap, seed, stream)
        fixture = gen_gibbs(H, spec.k, spec.gap)
    else:
        fixture = gen_power_law(n, spec.C, seed, stream)
    fixture.params = spec.dict()
    fixture.params["stream"] = str(stream)
    logger.debug("generated fixture", family=family, n=n, seed=seed, stream=str(stream))
    return fixture


def generate_pair(spec: FixtureSpec) -> Tuple[Fixture, Fixture]:
    """Independent rho and sigma drawn from one family."""
    return generate(spec, "rho"), generate(spec, "sigma")


def save_fixture(fixture: Fixture, path: str) -> None:
    write_json(path, fixture.to_json())


def load_fixture(path: str) -> Fixture:
    """Read a fixture file; a bare state JSON is accepted with an exact-rank profile."""
    data = read_json(path)
    if "state" in data:
        return Fixture.from_json(data)
    state = DensityOperator.from_json(data)
    return Fixture(state, exact_profile(max(state.rank(), 1)), "user")


def save_fixture_pair(rho: Fixture, sigma: Fixture, path: str) -> None:
    """One document holding both fixtures, each with its profile."""
    write_json(path, {
        "family": rho.family,
        "rho": rho.to_json(),
        "sigma": sigma.to_json(),
        "exact": trace_distance_exact(rho.state, sigma.state),
    })


def load_fixture_pair(path: str) -> Tuple[Fixture, Fixture]:
    data = read_json(path)
    if not isinstance(data, dict) or "rho" not in data or "sigma" not in data:
        raise FixtureValidationError(f"{path} is not a fixture pair document")
    return Fixture.from_json(data["rho"]), Fixture.from_json(data["sigma"])
