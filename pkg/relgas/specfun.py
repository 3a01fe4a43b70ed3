"""
Gamma, digamma, polygamma and Riemann zeta machinery.

Values needed repeatedly by the high-temperature series (zeta at integers,
its derivative at even integers, and the beta/b combinations built from
them) live in an immutable ``ConstantCache`` built once per ``k_max``.
"""
import functools
import logging
import math
from dataclasses import dataclass

import mpmath
import numpy as np
from scipy import special

from .conf import relgas_settings
from .exceptions import CacheRangeError, DomainError, PoleError

logger = logging.getLogger(__name__)

EULER_GAMMA = float(np.euler_gamma)
LN2 = math.log(2.0)
LN_PI = math.log(math.pi)
LN_2PI = math.log(2.0 * math.pi)


def _is_integer(x) -> bool:
    return float(x).is_integer()


def _check_pole(x, name):
    if x <= 0 and _is_integer(x):
        raise PoleError(f"{name} has a pole at {x}")


def gamma(x: float) -> float:
    _check_pole(x, "gamma")
    return float(special.gamma(x))


def digamma(x: float) -> float:
    _check_pole(x, "digamma")
    return float(special.psi(x))


def polygamma(l: int, x: float) -> float:
    _check_pole(x, "polygamma")
    return float(special.polygamma(l, x))


def gamma_ratio_shifted(x: float, n: int) -> float:
    """Γ(-x-n)/Γ(-x) = (-1)^n Γ(x+1)/Γ(x+n+1), valid for non-integer x."""
    if _is_integer(x):
        raise PoleError("gamma_ratio_shifted needs a non-integer x")
    return (-1) ** n / float(special.poch(x + 1.0, n))


def zeta(s: float) -> float:
    """
    Riemann zeta on the real line. Negative arguments go through the
    functional equation, which vanishes exactly at negative even integers.
    """
    if s == 1:
        raise PoleError("zeta has a pole at 1")
    if s > 1:
        return float(special.zeta(s, 1))
    if s == 0:
        return -0.5
    if s < 0:
        if _is_integer(s) and int(s) % 2 == 0:
            return 0.0
        reflected = 1.0 - s
        return float(
            2.0
            * (2.0 * math.pi) ** (s - 1.0)
            * special.gamma(reflected)
            * special.zeta(reflected, 1)
            * math.sin(0.5 * math.pi * s)
        )
    return float(special.zeta(s))


def eta(s: float) -> float:
    """Dirichlet eta (1 - 2^(1-s)) ζ(s), with η(1) = ln 2."""
    if s == 1:
        return LN2
    return (1.0 - 2.0 ** (1.0 - s)) * zeta(s)


def zeta_prime_at_zero() -> float:
    return -0.5 * LN_2PI


@dataclass(frozen=True)
class ConstantCache:
    """
    Tabulated constants for k = 1..k_max. Index ``k - 1`` of every array
    holds the value belonging to 2k (even arrays) or 2k + 1 (odd arrays).
    """

    k_max: int
    zeta_even: np.ndarray
    zeta_odd: np.ndarray
    zeta_prime_even: np.ndarray
    zeta_prime_odd: np.ndarray
    beta_even: np.ndarray
    beta_odd: np.ndarray
    beta_logderiv_even: np.ndarray
    b_even: np.ndarray
    b_odd: np.ndarray
    b_logderiv_even: np.ndarray
    ln_factorial: np.ndarray

    @classmethod
    def build(cls, k_max: int = 64) -> "ConstantCache":
        if k_max < 1:
            raise ValueError("k_max must be a positive integer")
        k = np.arange(1, k_max + 1)
        even = (2 * k).astype(float)
        odd = even + 1.0

        zeta_even = special.zeta(even, 1)
        zeta_odd = special.zeta(odd, 1)
        with mpmath.workdps(30):
            zeta_prime_even = np.array([float(mpmath.zeta(int(x), 1, 1)) for x in even])
            zeta_prime_odd = np.array([float(mpmath.zeta(int(x), 1, 1)) for x in odd])

        b_even = special.gamma(even) * zeta_even
        b_odd = special.gamma(odd) * zeta_odd
        beta_even = b_even * (1.0 - 2.0 ** -even)
        beta_odd = b_odd * (1.0 - 2.0 ** -odd)

        b_logderiv_even = special.psi(even) + zeta_prime_even / zeta_even
        beta_logderiv_even = b_logderiv_even + LN2 / (1.0 - 2.0 ** -even) - LN2

        ln_factorial = special.gammaln(np.arange(0, 2 * k_max + 5) + 1.0)

        arrays = dict(
            zeta_even=zeta_even,
            zeta_odd=zeta_odd,
            zeta_prime_even=zeta_prime_even,
            zeta_prime_odd=zeta_prime_odd,
            beta_even=beta_even,
            beta_odd=beta_odd,
            beta_logderiv_even=beta_logderiv_even,
            b_even=b_even,
            b_odd=b_odd,
            b_logderiv_even=b_logderiv_even,
            ln_factorial=ln_factorial,
        )
        for values in arrays.values():
            values.setflags(write=False)
        logger.debug("Built constant cache with k_max=%d", k_max)
        return cls(k_max=k_max, **arrays)

    def slot(self, x) -> tuple:
        """Map an integer argument 2 <= x <= 2*k_max + 1 to (is_even, k)."""
        if not _is_integer(x) or not 2 <= x <= 2 * self.k_max + 1:
            raise CacheRangeError(f"argument {x} is outside the cached set 2..{2 * self.k_max + 1}")
        n = int(x)
        return n % 2 == 0, n // 2

    def index(self, k: int) -> int:
        if not 1 <= k <= self.k_max:
            raise CacheRangeError(f"index {k} is outside 1..{self.k_max}")
        return k - 1


@functools.lru_cache(maxsize=None)
def get_cache(k_max: int = None) -> ConstantCache:
    return ConstantCache.build(k_max or relgas_settings.K_MAX)


def zeta_even(k: int) -> float:
    cache = get_cache()
    return float(cache.zeta_even[cache.index(k)])


def zeta_odd(k: int) -> float:
    cache = get_cache()
    return float(cache.zeta_odd[cache.index(k)])


def zeta_int(n: int) -> float:
    """ζ(n) for integer n >= 2, from the cache when tabulated."""
    cache = get_cache()
    if 2 <= n <= 2 * cache.k_max + 1:
        is_even, k = cache.slot(n)
        return float((cache.zeta_even if is_even else cache.zeta_odd)[k - 1])
    return zeta(float(n))


def zeta_logderiv_int(n: int) -> float:
    """ζ'(n)/ζ(n) for integer n >= 2."""
    cache = get_cache()
    if 2 <= n <= 2 * cache.k_max + 1:
        is_even, k = cache.slot(n)
        if is_even:
            return float(cache.zeta_prime_even[k - 1] / cache.zeta_even[k - 1])
        return float(cache.zeta_prime_odd[k - 1] / cache.zeta_odd[k - 1])
    # beyond the table 2^-n already sits near the double-precision floor
    j = np.arange(2.0, 12.0)
    return float(-np.sum(np.log(j) * j ** -float(n)) / zeta(float(n)))


def zeta_prime_neg_even(n: int) -> float:
    """ζ'(-2n) = (-1)^n Γ(2n+1) ζ(2n+1) / (2 (2π)^(2n))."""
    if n < 1:
        raise CacheRangeError("zeta_prime_neg_even needs n >= 1")
    cache = get_cache()
    zeta_next = float(cache.zeta_odd[cache.index(n)])
    log_mag = float(cache.ln_factorial[2 * n]) - 2 * n * LN_2PI
    return (-1) ** n * 0.5 * zeta_next * math.exp(log_mag)


def zeta_prime_one_minus_even(n: int) -> float:
    """ζ'(1-2n) from the differentiated functional equation."""
    cache = get_cache()
    i = cache.index(n)
    bracket = digamma(2 * n) + cache.zeta_prime_even[i] / cache.zeta_even[i] - LN_2PI
    log_mag = float(cache.ln_factorial[2 * n - 1]) - 2 * n * LN_2PI
    return float((-1) ** (n + 1) * 2.0 * cache.zeta_even[i] * math.exp(log_mag) * bracket)


def beta_fn(x) -> float:
    """β(x) = Γ(x) ζ(x) (1 - 2^-x)."""
    cache = get_cache()
    is_even, k = cache.slot(x)
    return float((cache.beta_even if is_even else cache.beta_odd)[k - 1])


def beta_logderiv(x) -> float:
    """β'(x)/β(x) = ψ(x) + ζ'(x)/ζ(x) + ln2/(1 - 2^-x) - ln2."""
    cache = get_cache()
    is_even, k = cache.slot(x)
    if is_even:
        return float(cache.beta_logderiv_even[k - 1])
    return b_logderiv(x) + LN2 / (1.0 - 2.0 ** -float(x)) - LN2


def b_fn(x) -> float:
    """b(x) = Γ(x) ζ(x)."""
    cache = get_cache()
    is_even, k = cache.slot(x)
    return float((cache.b_even if is_even else cache.b_odd)[k - 1])


def b_logderiv(x) -> float:
    """b'(x)/b(x) = ψ(x) + ζ'(x)/ζ(x)."""
    cache = get_cache()
    is_even, k = cache.slot(x)
    if is_even:
        return float(cache.b_logderiv_even[k - 1])
    return digamma(float(x)) + float(cache.zeta_prime_odd[k - 1] / cache.zeta_odd[k - 1])


def polygamma_half(l: int) -> float:
    """ψ^(l)(1/2) = (-1)^(l+1) 2^(l+1) β(l+1) for l >= 1."""
    if l < 1:
        raise CacheRangeError("polygamma_half needs l >= 1")
    return (-1) ** (l + 1) * 2.0 ** (l + 1) * beta_fn(l + 1)


def robinson_limit(n: int, z: float) -> float:
    """
    lim_{s->n} [Γ(1-s)(-z)^(s-1) + ζ(s-n+1) z^(n-1)/Γ(n)]
    = z^(n-1)/Γ(n) [γ_E + ψ(n) - ln(-z)], real branch z < 0.
    """
    if n < 1:
        raise DomainError("robinson_limit needs a positive integer n")
    if z >= 0:
        raise DomainError("robinson_limit is real only for z < 0")
    return z ** (n - 1) / math.factorial(n - 1) * (EULER_GAMMA + digamma(n) - math.log(-z))


def ln_factorial(n: int) -> float:
    cache = get_cache()
    if 0 <= n < cache.ln_factorial.size:
        return float(cache.ln_factorial[n])
    return float(special.gammaln(n + 1.0))
