"""Odd polynomial approximations of the sign function on [-2, 2].

Polynomials are stored in the Chebyshev basis of the rescaled variable
``t = x / 2`` so that the whole domain maps onto [-1, 1]. Only odd orders are
kept, which makes oddness structural.
"""

import math
from dataclasses import dataclass
from typing import Any, Dict, Optional, Sequence, Union

import numpy as np
from numpy.polynomial import chebyshev
from scipy.special import erfcinv, ive

from ..exceptions import ArgumentError, DomainError, SignPolynomialError
from ..utils.cache_manager import CacheManager
from ..utils.logger import get_logger

logger = get_logger(__name__)

# Fixed bound on measured_eta for every certified sign_poly cell; the erf
# construction measures about 3.0 to 3.2. Enters the sample-path channel
# budget, so a larger value only shrinks delta.
ETA = 8.0
GRID_POINTS = 100_001
DEGREE_CAP = 2 ** 17
SUP_TOL = 1e-12
DOMAIN_TOL = 1e-12

_cache = CacheManager(max_size=256)

ScalarOrArray = Union[float, np.ndarray]


@dataclass(frozen=True, eq=False)
class OddPolynomial:
    """sum_j coeffs[j] * T_{2j+1}(x / 2)."""

    coeffs: np.ndarray
    delta: Optional[float] = None
    eps_p: Optional[float] = None
    sup_norm_certificate: Optional[float] = None

    def __post_init__(self):
        coeffs = np.asarray(self.coeffs, dtype=np.float64).reshape(-1)
        if coeffs.size == 0:
            coeffs = np.zeros(1)
        if not np.all(np.isfinite(coeffs)):
            raise ArgumentError("polynomial coefficients must be finite")
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def degree(self) -> int:
        nonzero = np.flatnonzero(self.coeffs)
        if nonzero.size == 0:
            return 0
        return 2 * int(nonzero[-1]) + 1

    def chebyshev_coeffs(self) -> np.ndarray:
        """Dense Chebyshev series in t, even orders zero."""
        full = np.zeros(2 * self.coeffs.size)
        full[1::2] = self.coeffs
        return full

    def __call__(self, x: ScalarOrArray) -> ScalarOrArray:
        return eval_poly(self, x)

    def scaled(self, factor: float) -> "OddPolynomial":
        return OddPolynomial(self.coeffs * factor, self.delta, self.eps_p)

    def __neg__(self) -> "OddPolynomial":
        return self.scaled(-1.0)

    @classmethod
    def from_power_coefficients(cls, coeffs: Sequence[float]) -> "OddPolynomial":
        """Build from monomial coefficients in x (index = power); even powers must vanish."""
        power = np.asarray(coeffs, dtype=np.float64)
        if np.any(power[0::2] != 0):
            raise ArgumentError("an odd polynomial has no even powers")
        # x**k = 2**k * t**k
        in_t = power * 2.0 ** np.arange(power.size)
        cheb = chebyshev.poly2cheb(in_t)
        return cls(cheb[1::2])

    def to_json(self) -> Dict[str, Any]:
        return {
            "cheb_odd_coeffs": [float(c) for c in self.coeffs],
            "degree": self.degree,
            "delta": self.delta,
            "eps": self.eps_p,
        }

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "OddPolynomial":
        return cls(
            np.asarray(data["cheb_odd_coeffs"], dtype=np.float64),
            data.get("delta"),
            data.get("eps"),
        )


def eval_poly(p: OddPolynomial, x: ScalarOrArray) -> ScalarOrArray:
    """Clenshaw evaluation on [-2, 2]."""
    values = np.asarray(x, dtype=np.float64)
    if np.any(np.abs(values) > 2 + DOMAIN_TOL):
        raise DomainError("sign polynomials are defined on [-2, 2]")
    result = chebyshev.chebval(np.clip(values, -2.0, 2.0) / 2.0, p.chebyshev_coeffs())
    if np.ndim(x) == 0:
        return float(result)
    return result


def _erf_chebyshev_coeffs(a: float, count: int) -> np.ndarray:
    """First ``count`` odd Chebyshev coefficients of erf(a t) on [-1, 1].

    Closed form through exponentially scaled modified Bessel functions; the
    scaling keeps large ``a`` finite.
    """
    z = a * a / 2.0
    j = np.arange(count + 1)
    bessel = ive(j, z)
    signs = np.where(j[:-1] % 2 == 0, 1.0, -1.0)
    return (2.0 * a / math.sqrt(math.pi)) * signs * (bessel[:-1] + bessel[1:]) / (2 * j[:-1] + 1)


@dataclass(frozen=True)
class SignCertificate:
    sup_norm: float
    sign_error: float
    passed: bool


def _certification_grid(p: OddPolynomial, delta: float) -> np.ndarray:
    # the uniform grid is symmetric and p is odd, so x >= 0 suffices
    uniform = np.linspace(-2.0, 2.0, GRID_POINTS)
    d = max(p.degree, 1)
    extrema = 2.0 * np.cos(np.pi * np.arange(d + 1) / d)
    grid = np.concatenate([uniform, extrema, [delta, 2.0]])
    return np.unique(grid[grid >= 0.0])


def certify_sign_polynomial(
    p: OddPolynomial, delta: Optional[float] = None, eps_p: Optional[float] = None
) -> SignCertificate:
    """Grid check of |p| <= 1 on [-2, 2] and |p - sgn| <= eps_p outside (-delta, delta)."""
    delta = p.delta if delta is None else delta
    eps_p = p.eps_p if eps_p is None else eps_p
    if delta is None or eps_p is None:
        raise ArgumentError("certification needs delta and eps_p")
    grid = _certification_grid(p, delta)
    values = eval_poly(p, grid)
    sup_norm = float(np.max(np.abs(values)))
    outside = grid >= delta
    sign_error = float(np.max(np.abs(values[outside] - 1.0)))
    passed = sup_norm <= 1.0 + SUP_TOL and sign_error <= eps_p
    return SignCertificate(sup_norm, sign_error, passed)


def _check_parameters(delta: float, eps_p: float) -> None:
    if not 0 < delta <= 2:
        raise ArgumentError(f"delta must lie in (0, 2], got {delta}")
    if not 0 < eps_p < 0.5:
        raise ArgumentError(f"eps_p must lie in (0, 1/2), got {eps_p}")


def _truncation_length(coeffs: np.ndarray, budget: float) -> int:
    """Smallest J >= 1 whose tail sum_{j >= J} |c_j| is at most ``budget``."""
    tails = np.concatenate([np.cumsum(np.abs(coeffs)[::-1])[::-1], [0.0]])
    fits = np.flatnonzero(tails[1:] <= budget)
    return int(fits[0]) + 1


def sign_poly(delta: float, eps_p: float) -> OddPolynomial:
    """Certified odd polynomial with |p| <= 1 and |p - sgn| <= eps_p for |x| >= delta.

    Truncates the Chebyshev series of erf(k x) with k = erfcinv(eps_p / 2) / delta
    once the dropped tail is at most eps_p / 4, then divides by one plus the
    tail, which bounds |p| by one on the whole interval. Results are cached
    per (delta, eps_p).
    """
    _check_parameters(delta, eps_p)
    key = (float(delta), float(eps_p))
    cached = _cache.get(key)
    if cached is not None:
        return cached

    a = 2.0 * float(erfcinv(eps_p / 2.0)) / delta
    count = int(math.ceil(a * (math.sqrt(math.log(4.0 / eps_p)) + 6.0))) + 8
    coeffs = _erf_chebyshev_coeffs(a, count)
    J = _truncation_length(coeffs, eps_p / 4.0)

    while True:
        if 2 * J - 1 > DEGREE_CAP:
            raise SignPolynomialError(
                f"no certified sign polynomial below degree {DEGREE_CAP} "
                f"for delta={delta}, eps_p={eps_p}"
            )
        if J > coeffs.size:
            coeffs = _erf_chebyshev_coeffs(a, 2 * J)
        tail = float(np.sum(np.abs(coeffs[J:])))
        candidate = OddPolynomial(coeffs[:J] / (1.0 + tail), delta, eps_p)
        certificate = certify_sign_polynomial(candidate)
        if certificate.passed:
            break
        logger.warning(
            "escalating sign polynomial degree",
            degree=candidate.degree,
            sup_norm=certificate.sup_norm,
            sign_error=certificate.sign_error,
        )
        J = int(math.ceil(J * 1.1)) + 1

    result = OddPolynomial(candidate.coeffs, delta, eps_p, certificate.sup_norm)
    logger.debug(
        "certified sign polynomial",
        delta=delta,
        eps_p=eps_p,
        degree=result.degree,
        eta=measured_eta(result),
    )
    _cache.set(key, result)
    return result


def measured_eta(p: OddPolynomial) -> float:
    """degree * delta / log(1/eps_p) for a constructed sign polynomial."""
    if p.delta is None or p.eps_p is None:
        raise ArgumentError("eta is only defined for sign polynomials")
    return p.degree * p.delta / math.log(1.0 / p.eps_p)


def degree_bound(delta: float, eps_p: float, eta: float = ETA) -> int:
    return int(math.floor(eta * math.log(1.0 / eps_p) / delta))


def clear_cache() -> None:
    _cache.clear()
