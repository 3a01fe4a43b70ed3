"""
Real polylogarithms Li_s(z) and Li_s(±e^z).

Every expansion is used only where all of its terms are real, so no complex
intermediate values appear. ``polylog_exp`` picks the representation for a
given (s, z) and reports the choice in the returned EvalOutcome.
"""
import enum
import itertools
import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import special

from . import specfun
from .exceptions import DomainError, SeriesDivergenceError
from .series import ASYMPTOTIC, DEFAULT_CONFIG, DEGRADED, EvalOutcome, SeriesConfig, accumulate

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi
LN_2PI = specfun.LN_2PI
LN_PI = specfun.LN_PI
EDGE_FRACTION = 0.98

# below this argument zeta(s - k) is built from logarithms to avoid overflow
_REFLECT_BELOW = -20.0
_CHUNK = 512
_EPS = np.finfo(float).eps


class Sign(enum.Enum):
    PLUS = 1
    MINUS = -1


@dataclass(frozen=True)
class PolylogQuery:
    """Li_s(sign * e^z) together with its truncation config."""

    order: float
    z: float
    sign: Sign = Sign.PLUS
    config: SeriesConfig = field(default=DEFAULT_CONFIG)

    def __post_init__(self):
        if self.sign is Sign.PLUS and self.z > 0:
            raise DomainError("Li_s(e^z) is complex for z > 0")

    def evaluate(self) -> EvalOutcome:
        return polylog_exp(self.order, self.z, self.sign, self.config)


def _near_edge(z: float, radius: float) -> bool:
    return abs(z) > EDGE_FRACTION * radius


def _warn_edge(name: str, z: float, radius: float):
    if _near_edge(z, radius):
        logger.warning("%s evaluated at z=%g, within 2%% of its radius %g", name, z, radius)


def li_direct(s: float, x: float, cfg: SeriesConfig = None) -> float:
    """Defining power series sum_k x^k / k^s for |x| < 1."""
    cfg = cfg or DEFAULT_CONFIG
    if not abs(x) < 1.0:
        raise SeriesDivergenceError(f"direct polylog series diverges for |x| = {abs(x)} >= 1")
    if x == 0.0:
        return 0.0
    total = 0.0
    start = 1
    while start <= cfg.max_terms:
        stop = min(start + _CHUNK, cfg.max_terms + 1)
        k = np.arange(start, stop, dtype=float)
        terms = np.power(x, k) / np.power(k, s)
        total += math.fsum(terms)
        if abs(terms[-1]) <= cfg.rtol * abs(total) or terms[-1] == 0.0:
            return total
        start = stop
    raise SeriesDivergenceError(
        f"direct polylog series for s={s:g}, x={x:g} did not reach rtol={cfg.rtol:g} within {cfg.max_terms} terms"
    )


def li_neg_integer_exp(n: int, z: float) -> float:
    """
    Li_{-n}(e^z) for integer n >= 0 and z < 0 in closed form:
    sum_j j! S(n+1, j+1) u^(j+1) with u = 1/(e^-z - 1) and S the Stirling
    numbers of the second kind. Every term is positive.
    """
    if n < 0 or not float(n).is_integer():
        raise DomainError("li_neg_integer_exp needs a nonnegative integer n")
    if not z < 0:
        raise DomainError("li_neg_integer_exp needs z < 0")
    n = int(n)
    u = 1.0 / math.expm1(-z)
    return math.fsum(
        math.factorial(j) * float(special.stirling2(n + 1, j + 1, exact=True)) * u ** (j + 1)
        for j in range(n + 1)
    )


def _taylor_term(s: float, k: int, z: float, alternating: bool) -> float:
    """zeta(s-k) z^k / k!, or eta(s-k) z^k / k! when ``alternating``."""
    if k == 0:
        return specfun.eta(s) if alternating else specfun.zeta(s)
    if z == 0.0:
        return 0.0
    x = s - k
    sign_z = -1.0 if (z < 0 and k % 2) else 1.0
    log_z = k * math.log(abs(z)) - math.lgamma(k + 1.0)
    if x > _REFLECT_BELOW:
        coefficient = specfun.eta(x) if alternating else specfun.zeta(x)
        if coefficient == 0.0:
            return 0.0
        return sign_z * coefficient * math.exp(log_z)
    if float(x).is_integer() and int(x) % 2 == 0:
        return 0.0
    sine = math.sin(0.5 * math.pi * x)
    log_mag = math.log(2.0) + (x - 1.0) * LN_2PI + math.lgamma(1.0 - x) + log_z
    factor = specfun.zeta(1.0 - x)
    if alternating:
        # 1 - 2^(1-x) = -2^(1-x) (1 - 2^(x-1))
        log_mag += (1.0 - x) * math.log(2.0)
        factor *= -(1.0 - 2.0 ** (x - 1.0))
    return sign_z * sine * factor * math.exp(log_mag)


def li_exp_expansion(s: float, z: float, cfg: SeriesConfig = None) -> float:
    """
    Li_s(e^z) = Γ(1-s)(-z)^(s-1) + sum_k ζ(s-k) z^k/k!  for z < 0, |z| <= 2π,
    s not a positive integer.
    """
    cfg = cfg or DEFAULT_CONFIG
    if float(s).is_integer():
        raise DomainError("li_exp_expansion needs a non-integer order; use li_exp_integer")
    if not z < 0 or abs(z) > TWO_PI:
        raise DomainError("li_exp_expansion needs -2π <= z < 0")
    _warn_edge("li_exp_expansion", z, TWO_PI)
    singular = specfun.gamma(1.0 - s) * (-z) ** (s - 1.0)
    tail, _, _ = accumulate((_taylor_term(s, k, z, False) for k in itertools.count()), cfg)
    return singular + tail


def _even_zeta_ratio(k: int, shift: int) -> float:
    """Γ(2k) ζ(2k) / Γ(2k + shift)."""
    return specfun.zeta_int(2 * k) * math.exp(math.lgamma(2 * k) - math.lgamma(2 * k + shift))


def li_exp_integer(n: int, z: float, cfg: SeriesConfig = None) -> float:
    """Integer-order limit of the Robinson expansion of Li_n(e^z), z < 0, |z| <= 2π."""
    cfg = cfg or DEFAULT_CONFIG
    if n < 1 or not float(n).is_integer():
        raise DomainError("li_exp_integer needs a positive integer order")
    if not z < 0 or abs(z) > TWO_PI:
        raise DomainError("li_exp_integer needs -2π <= z < 0")
    n = int(n)
    _warn_edge("li_exp_integer", z, TWO_PI)
    finite = sum(specfun.zeta_int(n - k) * z ** k / math.factorial(k) for k in range(n - 1))
    logarithmic = z ** (n - 1) / math.factorial(n - 1) * (
        specfun.digamma(n) + specfun.EULER_GAMMA - math.log(-z)
    )
    linear = -(z ** n) / (2.0 * math.factorial(n))
    ratio = (z / TWO_PI) ** 2

    def tail_terms():
        for k in itertools.count(1):
            yield 2.0 * z ** (n - 1) * (-1) ** k * _even_zeta_ratio(k, n) * ratio ** k

    tail, _, _ = accumulate(tail_terms(), cfg)
    return finite + logarithmic + linear + tail


def li_minus_exp(s: float, z: float, cfg: SeriesConfig = None) -> float:
    """Li_s(-e^z) = -sum_k η(s-k) z^k/k!  for |z| < π and any real s."""
    cfg = cfg or DEFAULT_CONFIG
    if not abs(z) < math.pi:
        raise DomainError("li_minus_exp needs |z| < π")
    _warn_edge("li_minus_exp", z, math.pi)
    if z == 0.0:
        return -specfun.eta(s)
    total, _, _ = accumulate((_taylor_term(s, k, z, True) for k in itertools.count()), cfg)
    return -total


def li_minus_exp_integer(n: int, z: float, cfg: SeriesConfig = None) -> float:
    """
    Integer-order regrouping of ``li_minus_exp``: the eta values at
    nonpositive arguments are replaced by their zeta closed forms.
    """
    cfg = cfg or DEFAULT_CONFIG
    if n < 1 or not float(n).is_integer():
        raise DomainError("li_minus_exp_integer needs a positive integer order")
    if not abs(z) < math.pi:
        raise DomainError("li_minus_exp_integer needs |z| < π")
    n = int(n)
    finite = -sum(specfun.eta(n - k) * z ** k / math.factorial(k) for k in range(n - 1))
    logarithmic = -(z ** (n - 1)) / math.factorial(n - 1) * specfun.LN2
    linear = -(z ** n) / (2.0 * math.factorial(n))
    ratio = (z / math.pi) ** 2

    def tail_terms():
        for k in itertools.count(1):
            yield (
                2.0 * z ** (n - 1) * (-1) ** k * (1.0 - 2.0 ** (-2 * k))
                * _even_zeta_ratio(k, n) * ratio ** k
            )

    tail, _, _ = accumulate(tail_terms(), cfg)
    return finite + logarithmic + linear + tail


def li_neg_even_exp(m: int, z: float, cfg: SeriesConfig = None) -> float:
    """Li_{-2m}(e^z) for 0 < |z| < 2π, including the pole -Γ(2m+1)/z^(2m+1)."""
    cfg = cfg or DEFAULT_CONFIG
    if m < 0:
        raise DomainError("li_neg_even_exp needs m >= 0")
    if z == 0.0:
        raise DomainError("Li_{-2m}(e^z) has a pole at z = 0")
    if not abs(z) < TWO_PI:
        raise DomainError("li_neg_even_exp needs |z| < 2π")
    _warn_edge("li_neg_even_exp", z, TWO_PI)
    pole = -math.factorial(2 * m) / z ** (2 * m + 1)
    delta = -0.5 if m == 0 else 0.0
    w = z / TWO_PI

    def terms():
        for k in itertools.count(m + 1):
            yield (
                2.0 * (-1) ** k * specfun.zeta_int(2 * k)
                * math.exp(math.lgamma(2 * k) - math.lgamma(2 * k - 2 * m) - (2 * m + 1) * LN_2PI)
                * w ** (2 * k - 2 * m - 1)
            )

    tail, _, _ = accumulate(terms(), cfg)
    return pole + delta + tail


def li_neg_even_minus_exp(m: int, z: float, cfg: SeriesConfig = None) -> float:
    """Li_{-2m}(-e^z) for |z| < π."""
    cfg = cfg or DEFAULT_CONFIG
    if m < 0:
        raise DomainError("li_neg_even_minus_exp needs m >= 0")
    if not abs(z) < math.pi:
        raise DomainError("li_neg_even_minus_exp needs |z| < π")
    _warn_edge("li_neg_even_minus_exp", z, math.pi)
    delta = -0.5 if m == 0 else 0.0
    if z == 0.0:
        return delta
    w = z / math.pi

    def terms():
        for k in itertools.count(m + 1):
            yield (
                2.0 * (-1) ** k * specfun.zeta_int(2 * k) * (1.0 - 2.0 ** (-2 * k))
                * math.exp(math.lgamma(2 * k) - math.lgamma(2 * k - 2 * m) - (2 * m + 1) * LN_PI)
                * w ** (2 * k - 2 * m - 1)
            )

    tail, _, _ = accumulate(terms(), cfg)
    return delta + tail


def _log_bracket(k: int) -> float:
    """ψ(2k) + ζ'(2k)/ζ(2k) - ln(2π)."""
    return specfun.digamma(2 * k) + specfun.zeta_logderiv_int(2 * k) - LN_2PI


def dli_ds_pole_part(m: int, z: float) -> float:
    """The z^-(2m+1) terms of ∂Li_s(e^z)/∂s at s = -2m."""
    if not z < 0:
        raise DomainError("the pole part is real only for z < 0")
    factorial = math.factorial(2 * m)
    return factorial * (specfun.digamma(2 * m + 1) - math.log(-z)) / z ** (2 * m + 1)


def dli_ds_neg_even_exp(m: int, z: float, cfg: SeriesConfig = None) -> float:
    """∂Li_s(e^z)/∂s at s = -2m, for -2π < z < 0."""
    cfg = cfg or DEFAULT_CONFIG
    if m < 0:
        raise DomainError("dli_ds_neg_even_exp needs m >= 0")
    if not z < 0 or not abs(z) < TWO_PI:
        raise DomainError("dli_ds_neg_even_exp needs -2π < z < 0")
    _warn_edge("dli_ds_neg_even_exp", z, TWO_PI)
    head = (-0.5 * LN_2PI if m == 0 else 0.0) + dli_ds_pole_part(m, z)
    w = z / TWO_PI

    def terms():
        for k in itertools.count(m if m > 0 else 1):
            term = 0.0
            if k >= m + 1:
                term -= (
                    2.0 * (-1) ** k * specfun.zeta_int(2 * k)
                    * math.exp(math.lgamma(2 * k) - math.lgamma(2 * k - 2 * m) - (2 * m + 1) * LN_2PI)
                    * w ** (2 * k - 2 * m - 1) * _log_bracket(k)
                )
            term += (
                0.5 * (-1) ** k * specfun.zeta_int(2 * k + 1)
                * math.exp(math.lgamma(2 * k + 1) - math.lgamma(2 * k - 2 * m + 1) - 2 * m * LN_2PI)
                * w ** (2 * k - 2 * m)
            )
            yield term

    tail, _, _ = accumulate(terms(), cfg)
    return head + tail


def dli_ds_neg_even_minus_exp(m: int, z: float, cfg: SeriesConfig = None) -> float:
    """∂Li_s(-e^z)/∂s at s = -2m, for |z| < π."""
    cfg = cfg or DEFAULT_CONFIG
    if m < 0:
        raise DomainError("dli_ds_neg_even_minus_exp needs m >= 0")
    if not abs(z) < math.pi:
        raise DomainError("dli_ds_neg_even_minus_exp needs |z| < π")
    _warn_edge("dli_ds_neg_even_minus_exp", z, math.pi)
    head = -0.5 * math.log(0.5 * math.pi) if m == 0 else 0.0
    w = z / math.pi
    ln2 = specfun.LN2

    def terms():
        for k in itertools.count(m if m > 0 else 1):
            term = (
                (-1) ** k * specfun.zeta_int(2 * k + 1) * (1.0 - 2.0 ** (-2 * k - 1))
                * math.exp(math.lgamma(2 * k + 1) - math.lgamma(2 * k - 2 * m + 1) - 2 * m * LN_PI)
                * w ** (2 * k - 2 * m)
            )
            if k >= m + 1:
                common = (
                    2.0 * (-1) ** k * specfun.zeta_int(2 * k)
                    * math.exp(math.lgamma(2 * k) - math.lgamma(2 * k - 2 * m) - (2 * m + 1) * LN_PI)
                    * w ** (2 * k - 2 * m - 1)
                )
                term -= common * (1.0 - 2.0 ** (-2 * k)) * _log_bracket(k)
                term -= common * ln2
            yield term

    tail, _, _ = accumulate(terms(), cfg)
    return head + tail


def li_asymptotic(s: float, z: float, cfg: SeriesConfig = None, tolerance: float = 1e-10) -> EvalOutcome:
    """
    Large-z expansion Li_s(-e^z) ~ -2 sum_n η(2n) z^(s-2n) / Γ(s+1-2n),
    truncated before the smallest term. For integer s the sum terminates and
    only the exponentially small Li_s(-e^-z) remainder is left.
    """
    cfg = cfg or DEFAULT_CONFIG
    if not z > 0:
        raise DomainError("li_asymptotic needs z > 0")
    total = 0.0
    previous = math.inf
    omitted = 0.0
    used = 0
    for n in range(cfg.max_terms):
        weight = float(special.rgamma(s + 1.0 - 2 * n))
        term = -2.0 * specfun.eta(2.0 * n) * z ** (s - 2 * n) * weight
        if weight == 0.0 and float(s).is_integer() and 2 * n > s:
            break
        if abs(term) > previous:
            omitted = abs(term)
            break
        total += term
        previous = abs(term)
        used += 1
    error = omitted + math.exp(-z)
    flags = frozenset()
    if error > tolerance * abs(total):
        logger.warning("asymptotic Li_%g(-e^%g) carries an estimated relative error %.2e", s, z, error / abs(total))
        flags = frozenset({ASYMPTOTIC})
    return EvalOutcome(total, "asymptotic", used, error, flags)


def li_inversion(n: int, z: float, cfg: SeriesConfig = None) -> float:
    """
    Li_n(-e^z) for integer n and z > 0 from the inversion identity:
    the terminating asymptotic polynomial minus (-1)^n Li_n(-e^-z). The
    polynomial is empty for n < 0.
    """
    if not float(n).is_integer():
        raise DomainError("li_inversion needs an integer order")
    n = int(n)
    polynomial = -2.0 * sum(
        specfun.eta(2.0 * j) * z ** (n - 2 * j) / math.factorial(n - 2 * j) for j in range(n // 2 + 1)
    )
    return polynomial - (-1) ** n * li_direct(n, -math.exp(-z), cfg)


def polylog_exp(s: float, z: float, sign: Sign = Sign.PLUS, cfg: SeriesConfig = None) -> EvalOutcome:
    """Li_s(sign * e^z) over the real line, choosing the representation by (s, z)."""
    cfg = cfg or DEFAULT_CONFIG
    integer = float(s).is_integer()
    if sign is Sign.PLUS:
        if z > 0:
            raise DomainError("Li_s(e^z) is complex for z > 0")
        if z == 0:
            if s <= 1:
                raise SeriesDivergenceError(f"Li_{s}(1) diverges")
            return EvalOutcome(specfun.zeta(s), "zeta")
        if z <= -1.0:
            return EvalOutcome(li_direct(s, math.exp(z), cfg), "direct")
        if integer and s >= 1:
            return EvalOutcome(li_exp_integer(int(s), z, cfg), "robinson-integer")
        if integer and s <= 0 and int(s) % 2 == 0:
            return EvalOutcome(li_neg_even_exp(-int(s) // 2, z, cfg), "neg-even")
        if integer:
            value = li_neg_integer_exp(-int(s), z)
            return EvalOutcome(value, "rational", 1 - int(s), _EPS * (1 - s) * value)
        return EvalOutcome(li_exp_expansion(s, z, cfg), "robinson")

    if z <= -1.5:
        return EvalOutcome(li_direct(s, -math.exp(z), cfg), "direct")
    if z < 1.5:
        return EvalOutcome(li_minus_exp(s, z, cfg), "wood")
    if integer:
        return EvalOutcome(li_inversion(int(s), z, cfg), "inversion")
    if z < EDGE_FRACTION * math.pi:
        return EvalOutcome(li_minus_exp(s, z, cfg), "wood")
    outcome = li_asymptotic(s, z, cfg)
    if outcome.flags:
        return EvalOutcome(outcome.value, outcome.method, outcome.terms_used, outcome.error_estimate, outcome.flags | {DEGRADED})
    return outcome
