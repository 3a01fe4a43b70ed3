"""
Bessel-function representation of the ideal-gas integrals, valid for
nu < lambda and fast once lambda is large, plus the nonrelativistic
expansion in 1/(2 lambda).
"""
import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import special

from . import polylog, specfun
from .exceptions import DomainError, RegimeError
from .series import (
    ASYMPTOTIC,
    DEFAULT_CONFIG,
    DEGRADED,
    SLOW_CONVERGENCE,
    EvalOutcome,
    SeriesConfig,
    Statistics,
    accumulate,
)

logger = logging.getLogger(__name__)

# crossover between the ascending and the asymptotic K_2 series; at this
# argument both hold about 1e-8 in double precision
Z_CROSS = 8.0
# beyond this the ascending series cancels to noise and its terms leave double range
K2_SMALL_MAX = 32.0
LAMBDA_NR = 10.0
MAX_BESSEL_TERMS = 10_000
_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class BesselSeriesParams:
    lam: float
    nu: float
    statistics: Statistics
    config: SeriesConfig = field(default=DEFAULT_CONFIG)

    def __post_init__(self):
        if not self.lam >= 0:
            raise DomainError("lambda = m/T must be nonnegative")

    @property
    def alpha(self) -> int:
        return self.statistics.alpha

    @property
    def nu_tilde(self) -> float:
        """Nonrelativistic chemical potential nu - lambda."""
        return self.nu - self.lam


def k2(z: float) -> float:
    """K_2(z) from scipy's cylindrical Bessel routines."""
    if not z > 0:
        raise DomainError("K_2 needs a positive argument")
    return float(special.kv(2, z))


def k2_small(z: float, cfg: SeriesConfig = None) -> EvalOutcome:
    """Ascending series 2/z^2 - 1/2 + sum_n (z/2)^(2n+2) [ψ-average - ln(z/2)] / (n!(n+2)!)."""
    cfg = cfg or DEFAULT_CONFIG
    if not z > 0:
        raise DomainError("k2_small needs a positive argument")
    if z > K2_SMALL_MAX:
        raise RegimeError(f"the ascending K_2 series is limited to z <= {K2_SMALL_MAX:g}, use k2_asym")
    half = 0.5 * z
    log_half = math.log(half)
    magnitudes = []

    def terms():
        for n in range(cfg.max_terms):
            bracket = 0.5 * (specfun.digamma(n + 1) + specfun.digamma(n + 3)) - log_half
            term = half ** (2 * n + 2) / (math.factorial(n) * math.factorial(n + 2)) * bracket
            magnitudes.append(abs(term))
            yield term

    tail, used, last = accumulate(terms(), cfg)
    head = 2.0 / z ** 2 - 0.5
    value = head + tail
    error = _EPS * (abs(head) + 0.5 + math.fsum(magnitudes)) + last
    flags = frozenset({DEGRADED}) if z > Z_CROSS else frozenset()
    return EvalOutcome(value, "k2-ascending", used, error, flags)


def k2_asym(z: float, cfg: SeriesConfig = None) -> EvalOutcome:
    """
    e^-z sqrt(π/2z) sum_n Γ(5/2+n)/(Γ(5/2-n) n!) (2z)^-n, truncated before
    the smallest term; the error estimate is the first omitted term.
    """
    cfg = cfg or DEFAULT_CONFIG
    if not z > 0:
        raise DomainError("k2_asym needs a positive argument")
    prefactor = math.exp(-z) * math.sqrt(math.pi / (2.0 * z))
    coefficient = 1.0
    total = 0.0
    omitted = 0.0
    used = 0
    for n in range(cfg.max_terms):
        total += coefficient
        used += 1
        following = coefficient * (2.5 + n) * (1.5 - n) / (2.0 * z * (n + 1))
        if abs(following) >= abs(coefficient) or abs(following) <= cfg.rtol * abs(total):
            omitted = abs(following)
            break
        coefficient = following
    flags = frozenset()
    if z < Z_CROSS:
        logger.warning("asymptotic K_2 used at z=%g below the crossover %g", z, Z_CROSS)
        flags = frozenset({ASYMPTOTIC})
    return EvalOutcome(prefactor * total, "k2-asymptotic", used, prefactor * omitted, flags)


def k2_series(z: float, cfg: SeriesConfig = None) -> EvalOutcome:
    """K_2 from whichever of the two series is valid at z."""
    return k2_small(z, cfg) if z <= Z_CROSS else k2_asym(z, cfg)


def _bessel_sum(p: BesselSeriesParams, order: int, k_power: int) -> EvalOutcome:
    """
    (λ²/2π²) sum_k α^(k+1) K_order(kλ) e^(kν) / k^k_power, written with
    exponentially scaled Bessel functions so that nothing overflows.
    """
    if not p.lam > 0:
        raise DomainError("the Bessel series needs lambda > 0")
    gap = p.lam - p.nu
    if not gap > 0:
        raise DomainError("the Bessel series needs nu < lambda")
    flags = frozenset()
    if gap < 0.1:
        logger.warning("Bessel series converges slowly: lambda - nu = %g", gap)
        flags = frozenset({SLOW_CONVERGENCE})
    n_terms = min(math.ceil(36.0 / gap), MAX_BESSEL_TERMS)
    k = np.arange(1, n_terms + 1, dtype=float)
    signs = np.where(k % 2 == 1, 1.0, float(p.alpha))
    terms = signs * special.kve(order, k * p.lam) * np.exp(-k * gap) / k ** k_power
    prefactor = p.lam ** 2 / (2.0 * math.pi ** 2)
    value = prefactor * math.fsum(terms)
    following = n_terms + 1.0
    tail = special.kve(order, following * p.lam) * math.exp(-following * gap) / following ** k_power
    error = prefactor * tail / (1.0 - math.exp(-gap)) + _EPS * abs(value) * math.sqrt(n_terms)
    return EvalOutcome(value, "bessel", n_terms, error, flags)


def pressure_bessel(p: BesselSeriesParams) -> EvalOutcome:
    """I_P = (λ²/2π²) sum_k α^(k+1) K_2(kλ) e^(kν) / k²."""
    return _bessel_sum(p, 2, 2)


def density_bessel(p: BesselSeriesParams) -> EvalOutcome:
    """I_n = ∂I_P/∂ν, the same series with one power of k less."""
    return _bessel_sum(p, 2, 1)


def scalar_density_bessel(p: BesselSeriesParams) -> EvalOutcome:
    """I_sc = -∂I_P/∂λ = (λ²/2π²) sum_k α^(k+1) K_1(kλ) e^(kν) / k."""
    return _bessel_sum(p, 1, 1)


def pressure_nonrel(p: BesselSeriesParams) -> EvalOutcome:
    """
    α (λ/2π)^(3/2) sum_n Γ(5/2+n)/(Γ(5/2-n) n!) Li_(n+5/2)(α e^ν̃) / (2λ)^n,
    truncated before the smallest term.
    """
    cfg = p.config
    if p.lam < LAMBDA_NR:
        raise RegimeError(f"the nonrelativistic expansion needs lambda >= {LAMBDA_NR}")
    nu_tilde = p.nu_tilde
    if p.statistics is Statistics.BOSON and nu_tilde > 0:
        raise DomainError("there is no low-temperature expansion for bosons with nu > lambda")
    sign = polylog.Sign.PLUS if p.statistics is Statistics.BOSON else polylog.Sign.MINUS

    coefficient = 1.0
    total = 0.0
    previous = math.inf
    omitted = 0.0
    used = 0
    small = 0
    flags = frozenset()
    for n in range(cfg.max_terms):
        li = polylog.polylog_exp(n + 2.5, nu_tilde, sign, cfg)
        term = coefficient * li.value
        if abs(term) > previous:
            omitted = abs(term)
            break
        total += term
        used += 1
        flags |= li.flags
        previous = abs(term)
        if abs(term) <= cfg.rtol * abs(total):
            small += 1
            if small >= cfg.patience:
                break
        else:
            small = 0
        coefficient *= (2.5 + n) * (1.5 - n) / ((n + 1) * 2.0 * p.lam)
    prefactor = p.alpha * (p.lam / (2.0 * math.pi)) ** 1.5
    value = prefactor * total
    error = abs(prefactor) * omitted + _EPS * abs(value)
    return EvalOutcome(value, "nonrelativistic", used, error, flags)
