"""
High-temperature expansions of the ideal-gas integrals I_P, I_n, I_sc, I_s.

Every series is stored as a sequence of blocks: block 0 holds the closed-form
head, block k >= 1 the k-th term of the tail. A block is a short list of
monomials c ν^a λ^b (ln λ)^e, which keeps λ -> 0 finite (the ratio ν/λ is
never formed) and lets derivatives be taken exactly, term by term. Fermion
derivative quantities are built from their own closed forms; boson ones are
obtained by differentiating the pressure blocks.
"""
import collections
import enum
import functools
import logging
import math
from dataclasses import dataclass

import numpy as np

from . import polylog, specfun
from .exceptions import DomainError, OutOfDomainError
from .series import DEFAULT_CONFIG, DEGRADED, EvalOutcome, SeriesConfig, Statistics, accumulate

logger = logging.getLogger(__name__)

PI2 = math.pi ** 2
LN_4PI = math.log(4.0 * math.pi)
EULER_GAMMA = specfun.EULER_GAMMA
LN2 = specfun.LN2

QUANTITIES = ("pressure", "density", "scalar", "entropy")
PARTS = ("even", "odd")
# consecutive negligible blocks before a k-sum stops
BLOCK_PATIENCE = 2
DEGRADED_RTOL = 1e-10
_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class ReducedState:
    lam: float
    nu: float
    statistics: Statistics

    def __post_init__(self):
        if not (math.isfinite(self.lam) and math.isfinite(self.nu)):
            raise DomainError("lambda and nu must be finite")
        if self.lam < 0:
            raise DomainError("lambda = m/T must be nonnegative")
        if self.statistics is Statistics.BOSON and self.nu > self.lam:
            raise DomainError("mu exceeds mass for boson")

    @property
    def alpha(self) -> int:
        return self.statistics.alpha

    @property
    def massless(self) -> bool:
        return self.lam == 0

    @property
    def r(self) -> float:
        return 0.0 if self.massless else self.nu / self.lam

    @property
    def radius(self) -> float:
        return math.pi if self.statistics is Statistics.FERMION else 2.0 * math.pi

    @property
    def proximity(self) -> float:
        """(λ + |ν|) over the convergence radius of the high-temperature series."""
        return (self.lam + abs(self.nu)) / self.radius

    def check_high_t(self):
        if self.statistics is Statistics.BOSON and abs(self.nu) > self.lam:
            raise DomainError("the boson high-temperature series needs |nu| <= lambda")
        if self.proximity >= 1.0:
            raise OutOfDomainError(
                f"lambda + |nu| = {self.lam + abs(self.nu):g} is outside the "
                f"high-temperature domain (< {self.radius:g}) for {self.statistics.value}s"
            )


class HFKind(enum.Enum):
    """Terminating hypergeometric polynomials HF(-p, -q; c) with p, q offsets from k."""

    PRESSURE_EVEN = (0, 2, 0.5)
    PRESSURE_ODD = (-1, 1, 1.5)
    DENSITY_EVEN = (-1, 1, 0.5)
    SCALAR_EVEN = (0, 1, 0.5)
    SCALAR_ODD = (-1, 0, 1.5)

    @property
    def label(self) -> str:
        return _HF_LABELS[self.name]

    @classmethod
    def parse(cls, value) -> "HFKind":
        if isinstance(value, cls):
            return value
        for kind in cls:
            if value in (kind.name, kind.label):
                return kind
        raise ValueError(f"Unknown hypergeometric polynomial kind '{value}'")


_HF_LABELS = {
    "PRESSURE_EVEN": "(-k,-k-2;1/2)",
    "PRESSURE_ODD": "(1-k,-k-1;3/2)",
    "DENSITY_EVEN": "(1-k,-k-1;1/2)",
    "SCALAR_EVEN": "(-k,-k-1;1/2)",
    "SCALAR_ODD": "(1-k,-k;3/2)",
}


@dataclass(frozen=True)
class HFPoly:
    kind: HFKind
    k: int

    def __post_init__(self):
        if self.p < 0:
            raise DomainError(f"{self.kind.label} is undefined for k = {self.k}")

    @property
    def p(self) -> int:
        return self.k + self.kind.value[0]

    @property
    def q(self) -> int:
        return self.k + self.kind.value[1]

    def _log_coefficient(self, i: int) -> float:
        half = self.kind.value[2] == 0.5
        return (
            math.lgamma(self.p + 1) + math.lgamma(self.q + 1)
            - math.lgamma(self.p - i + 1) - math.lgamma(self.q - i + 1)
            - math.lgamma(2 * i + (1 if half else 2))
        )

    @property
    def coefficients(self) -> tuple:
        """Coefficients over the powers (2r)^(2i), i = 0..p."""
        return tuple(math.exp(self._log_coefficient(i)) for i in range(self.p + 1))

    def evaluate(self, r: float) -> float:
        x = (2.0 * r) ** 2
        return math.fsum(c * x ** i for i, c in enumerate(self.coefficients))

    def scaled_terms(self, lam_power: int):
        """(coefficient, ν power, λ power) of λ^lam_power HF, with (2r)^(2i) -> 4^i ν^(2i) λ^(-2i)."""
        for i in range(self.p + 1):
            yield math.exp(self._log_coefficient(i) + i * math.log(4.0)), 2 * i, lam_power - 2 * i


def hf_poly(kind, k: int, r: float) -> float:
    return HFPoly(HFKind.parse(kind), k).evaluate(r)


@dataclass(frozen=True, eq=False)
class TermBlock:
    """Sum of monomials coeff * ν^nu_power * λ^lam_power * (ln λ)^log_power."""

    coeff: np.ndarray
    nu_power: np.ndarray
    lam_power: np.ndarray
    log_power: np.ndarray

    @classmethod
    def from_terms(cls, terms: dict) -> "TermBlock":
        items = [(key, c) for key, c in sorted(terms.items()) if c != 0.0]
        arrays = (
            np.array([c for _, c in items], dtype=float),
            np.array([key[0] for key, _ in items], dtype=int),
            np.array([key[1] for key, _ in items], dtype=int),
            np.array([key[2] for key, _ in items], dtype=int),
        )
        for values in arrays:
            values.setflags(write=False)
        return cls(*arrays)

    def __len__(self):
        return self.coeff.size

    def items(self):
        return zip(self.nu_power.tolist(), self.lam_power.tolist(), self.log_power.tolist(), self.coeff.tolist())

    def evaluate(self, lam: float, nu: float) -> float:
        if not len(self):
            return 0.0
        if lam == 0:
            # positive λ powers vanish with or without ln λ; the remaining
            # singular monomials sit in the boson odd part behind a power of
            # ν, and |ν| <= λ forces ν = 0 there
            keep = (self.log_power == 0) & (self.lam_power == 0)
            values = self.coeff[keep] * np.power(nu, self.nu_power[keep])
            return math.fsum(values)
        monomials = np.power(nu, self.nu_power) * np.power(lam, self.lam_power.astype(float))
        monomials = np.where(self.log_power == 1, monomials * math.log(lam), monomials)
        return math.fsum(self.coeff * monomials)

    def _transformed(self, produce) -> "TermBlock":
        terms = collections.defaultdict(float)
        for a, b, e, c in self.items():
            for coeff, key in produce(a, b, e, c):
                terms[key] += coeff
        return TermBlock.from_terms(terms)

    def d_nu(self) -> "TermBlock":
        return self._transformed(lambda a, b, e, c: [(c * a, (a - 1, b, e))] if a else [])

    def d_lam(self) -> "TermBlock":
        def produce(a, b, e, c):
            out = [(c * b, (a, b - 1, e))] if b else []
            if e:
                out.append((c, (a, b - 1, 0)))
            return out

        return self._transformed(produce)

    def entropy(self) -> "TermBlock":
        """4B - λ∂B/∂λ - ν∂B/∂ν."""
        def produce(a, b, e, c):
            out = [(c * (4 - a - b), (a, b, e))]
            if e:
                out.append((-c, (a, b, 0)))
            return out

        return self._transformed(produce)

    def scaled(self, factor: float) -> "TermBlock":
        return self._transformed(lambda a, b, e, c: [(factor * c, (a, b, e))])


class _BlockBuilder:
    def __init__(self):
        self._terms = collections.defaultdict(float)

    def add(self, coeff: float, nu_power: int, lam_power: int, log_power: int = 0):
        if coeff != 0.0:
            self._terms[(nu_power, lam_power, log_power)] += coeff

    def add_log(self, coeff: float, nu_power: int, lam_power: int, shift: float, constant: float = 0.0):
        """coeff ν^a λ^b (ln(λ/shift) + constant)."""
        self.add(coeff, nu_power, lam_power, 1)
        self.add(coeff * (constant - math.log(shift)), nu_power, lam_power)

    def add_hf(self, kind: HFKind, k: int, lam_power: int, scale: float, log_shift: float = None, nu_shift: int = 0):
        for coeff, a, b in HFPoly(kind, k).scaled_terms(lam_power):
            if log_shift is None:
                self.add(scale * coeff, a + nu_shift, b)
            else:
                self.add_log(scale * coeff, a + nu_shift, b, log_shift)

    def build(self) -> TermBlock:
        return TermBlock.from_terms(self._terms)


def _sign(n: int) -> float:
    return -1.0 if n % 2 else 1.0


def _ln_fact(n: int) -> float:
    return specfun.ln_factorial(n)


def _quarter(i: int, shift: int) -> float:
    """4^i / (2i + shift)!"""
    return math.exp(i * math.log(4.0) - _ln_fact(2 * i + shift))


def _log_derivative(statistics: Statistics, k: int) -> float:
    if statistics is Statistics.FERMION:
        return specfun.beta_logderiv(2 * k) - specfun.LN_PI
    return specfun.b_logderiv(2 * k) - specfun.LN_2PI


@dataclass(frozen=True)
class GPoly:
    """
    The bracketed polynomials of the odd-part tails: ``p`` for the pressure,
    ``n`` for the number density, ``sc`` for the scalar density (divided by
    λ) and ``s`` for the entropy. Boson statistics swaps in b'/b - ln 2π.
    """

    kind: str
    k: int
    statistics: Statistics = Statistics.FERMION

    def __post_init__(self):
        if self.kind not in ("p", "n", "sc", "s"):
            raise ValueError(f"Unknown G polynomial kind '{self.kind}'")
        if self.k < 1:
            raise DomainError("G polynomials start at k = 1")

    def emit(self, out: _BlockBuilder, scale: float, nu_shift: int = 0, lam_shift: int = 0):
        k = self.k
        d = _log_derivative(self.statistics, k)
        if self.kind == "sc":
            out.add(scale * _quarter(k, 1), 2 * k + nu_shift, lam_shift)
            for i in range(k):
                psi = specfun.digamma(k - i) + specfun.digamma(k - i + 1)
                weight = _quarter(i, 1) * psi * math.exp(-_ln_fact(k - i - 1) - _ln_fact(k - i))
                out.add(-scale * weight, 2 * i + nu_shift, 2 * k - 2 * i + lam_shift)
            hf_scale = 2.0 * d * math.exp(-_ln_fact(k - 1) - _ln_fact(k))
            out.add_hf(HFKind.SCALAR_ODD, k, 2 * k + lam_shift, scale * hf_scale, nu_shift=nu_shift)
            return

        shift = 0 if self.kind == "n" else 1
        sign = -1.0 if self.kind == "s" else 1.0
        out.add(sign * scale * _quarter(k, shift), 2 * k + nu_shift, 2 + lam_shift)
        out.add(-sign * scale * _quarter(k + 1, shift), 2 * k + 2 + nu_shift, lam_shift)
        for i in range(k):
            psi = specfun.digamma(k - i) + specfun.digamma(k - i + 2)
            weight = _quarter(i, shift) * psi * math.exp(-_ln_fact(k - i - 1) - _ln_fact(k - i + 1))
            out.add(-sign * scale * weight, 2 * i + nu_shift, 2 * k + 2 - 2 * i + lam_shift)
        if self.kind == "s":
            d += 1.0 / (2 * k - 1)
        hf_scale = sign * 2.0 * d * math.exp(-_ln_fact(k - 1) - _ln_fact(k + 1))
        kind = HFKind.DENSITY_EVEN if self.kind == "n" else HFKind.PRESSURE_ODD
        out.add_hf(kind, k, 2 * k + 2 + lam_shift, scale * hf_scale, nu_shift=nu_shift)

    def block(self) -> TermBlock:
        return _gpoly_block(self)

    def evaluate(self, lam: float, nu: float) -> float:
        return self.block().evaluate(lam, nu)


@functools.lru_cache(maxsize=None)
def _gpoly_block(g: GPoly) -> TermBlock:
    out = _BlockBuilder()
    g.emit(out, 1.0)
    return out.build()


def _beta(x: int) -> float:
    return math.log(specfun.beta_fn(x))


def _b(x: int) -> float:
    return math.log(specfun.b_fn(x))


# Fermion series. k = 0 is the head of each series.

def _fermion_pressure_even(out: _BlockBuilder, k: int):
    if k == 0:
        out.add(7.0 * PI2 / 720.0, 0, 0)
        out.add(1.0 / 24.0, 2, 0)
        out.add(1.0 / (48.0 * PI2), 4, 0)
        out.add(-1.0 / 48.0, 0, 2)
        out.add(-1.0 / (16.0 * PI2), 2, 2)
        out.add_log(-1.0 / (32.0 * PI2), 0, 4, math.pi, EULER_GAMMA - 0.75)
        return
    scale = 0.5 * _sign(k + 1) * math.exp(
        _beta(2 * k + 1) - _ln_fact(k) - _ln_fact(k + 2) - (2 * k + 2) * specfun.LN_2PI
    )
    out.add_hf(HFKind.PRESSURE_EVEN, k, 2 * k + 4, scale)


def _fermion_pressure_odd(out: _BlockBuilder, k: int):
    if k == 0:
        out.add(0.75 * specfun.zeta_odd(1) / PI2, 1, 0)
        out.add(LN2 / (6.0 * PI2), 3, 0)
        out.add(-LN2 / (4.0 * PI2), 1, 2)
        return
    base = _sign(k) * math.exp(_beta(2 * k) - 2 * k * specfun.LN_2PI) / PI2
    log_scale = base * math.exp(-_ln_fact(k - 1) - _ln_fact(k + 1))
    out.add_hf(HFKind.PRESSURE_ODD, k, 2 * k + 2, log_scale, log_shift=2.0, nu_shift=1)
    GPoly("p", k).emit(out, 0.5 * base, nu_shift=1)


def _fermion_density_even(out: _BlockBuilder, k: int):
    if k == 0:
        out.add(0.75 * specfun.zeta_odd(1) / PI2, 0, 0)
        out.add(LN2 / (2.0 * PI2), 2, 0)
        out.add(-LN2 / (4.0 * PI2), 0, 2)
        return
    s = _sign(k) * math.exp(_beta(2 * k) - (2 * k + 2) * specfun.LN_2PI)
    log_scale = 4.0 * s * math.exp(-_ln_fact(k - 1) - _ln_fact(k + 1))
    out.add_hf(HFKind.DENSITY_EVEN, k, 2 * k + 2, log_scale, log_shift=2.0)
    GPoly("n", k).emit(out, 2.0 * s)


def _fermion_density_odd(out: _BlockBuilder, k: int):
    if k == 0:
        out.add(1.0 / 12.0, 1, 0)
        out.add(1.0 / (12.0 * PI2), 3, 0)
        out.add(-1.0 / (8.0 * PI2), 1, 2)
        return
    scale = 2.0 * _sign(k + 1) * math.exp(
        _beta(2 * k + 1) - _ln_fact(k - 1) - _ln_fact(k + 1) - (2 * k + 2) * specfun.LN_2PI
    )
    out.add_hf(HFKind.PRESSURE_ODD, k, 2 * k + 2, scale, nu_shift=1)


# The closed forms of the scalar density carry an overall λ; it is folded
# into the λ powers below so these blocks give I_sc itself.

def _fermion_scalar_even(out: _BlockBuilder, k: int):
    if k == 0:
        out.add(1.0 / 24.0, 0, 1)
        out.add(1.0 / (8.0 * PI2), 2, 1)
        out.add_log(1.0 / (8.0 * PI2), 0, 3, math.pi, EULER_GAMMA - 0.5)
        return
    scale = _sign(k) * math.exp(
        _beta(2 * k + 1) - _ln_fact(k) - _ln_fact(k + 1) - (2 * k + 2) * specfun.LN_2PI
    )
    out.add_hf(HFKind.SCALAR_EVEN, k, 2 * k + 3, scale)


def _fermion_scalar_odd(out: _BlockBuilder, k: int):
    if k == 0:
        out.add(LN2 / (2.0 * PI2), 1, 1)
        return
    base = _sign(k) * math.exp(_beta(2 * k) - 2 * k * specfun.LN_2PI) / PI2
    log_scale = -2.0 * base * math.exp(-_ln_fact(k - 1) - _ln_fact(k))
    out.add_hf(HFKind.SCALAR_ODD, k, 2 * k + 1, log_scale, log_shift=2.0, nu_shift=1)
    GPoly("sc", k).emit(out, -base, nu_shift=1, lam_shift=1)


def _fermion_entropy_even(out: _BlockBuilder, k: int):
    if k == 0:
        out.add(7.0 * PI2 / 180.0, 0, 0)
        out.add(1.0 / 12.0, 2, 0)
        out.add(-1.0 / 24.0, 0, 2)
        out.add(1.0 / (32.0 * PI2), 0, 4)
        return
    scale = _sign(k) * math.exp(
        _beta(2 * k + 1) - _ln_fact(k - 1) - _ln_fact(k + 2) - (2 * k + 2) * specfun.LN_2PI
    )
    out.add_hf(HFKind.PRESSURE_EVEN, k, 2 * k + 4, scale)


def _fermion_entropy_odd(out: _BlockBuilder, k: int):
    if k == 0:
        out.add(2.25 * specfun.zeta_odd(1) / PI2, 1, 0)
        out.add(-LN2 / (4.0 * PI2), 1, 2)
        out.add(LN2 / (6.0 * PI2), 3, 0)
        return
    base = _sign(k) * (2 * k - 1) * math.exp(_beta(2 * k) - 2 * k * specfun.LN_2PI) / PI2
    log_scale = -base * math.exp(-_ln_fact(k - 1) - _ln_fact(k + 1))
    out.add_hf(HFKind.PRESSURE_ODD, k, 2 * k + 2, log_scale, log_shift=2.0, nu_shift=1)
    GPoly("s", k).emit(out, 0.5 * base, nu_shift=1)


# Boson pressure; the (λ² - ν²)^(3/2) terms are not polynomial and are
# handled by _boson_special.

def _boson_pressure_even(out: _BlockBuilder, k: int):
    if k == 0:
        out.add(PI2 / 90.0, 0, 0)
        out.add(1.0 / 12.0, 2, 0)
        out.add(-1.0 / (48.0 * PI2), 4, 0)
        out.add(-1.0 / 24.0, 0, 2)
        out.add(1.0 / (16.0 * PI2), 2, 2)
        out.add_log(1.0 / (32.0 * PI2), 0, 4, 4.0 * math.pi, EULER_GAMMA - 0.75)
        return
    scale = _sign(k) * math.exp(_b(2 * k + 1) - _ln_fact(k) - _ln_fact(k + 2) - (2 * k + 2) * LN_4PI)
    out.add_hf(HFKind.PRESSURE_EVEN, k, 2 * k + 4, scale)


def _boson_pressure_odd(out: _BlockBuilder, k: int):
    if k == 0:
        out.add(specfun.zeta_odd(1) / PI2, 1, 0)
        out.add(-7.0 / (24.0 * PI2), 1, 2)
        out.add(11.0 / (36.0 * PI2), 3, 0)
        out.add_log(1.0 / (4.0 * PI2), 1, 2, 2.0)
        out.add_log(-1.0 / (6.0 * PI2), 3, 0, 2.0)
        return
    base = _sign(k) * math.exp(_b(2 * k) - 2 * k * LN_4PI) / PI2
    log_scale = -base * math.exp(-_ln_fact(k - 1) - _ln_fact(k + 1))
    out.add_hf(HFKind.PRESSURE_ODD, k, 2 * k + 2, log_scale, log_shift=2.0, nu_shift=1)
    GPoly("p", k, Statistics.BOSON).emit(out, -0.5 * base, nu_shift=1)


_CLOSED_FORMS = {
    (Statistics.FERMION, "pressure", "even"): _fermion_pressure_even,
    (Statistics.FERMION, "pressure", "odd"): _fermion_pressure_odd,
    (Statistics.FERMION, "density", "even"): _fermion_density_even,
    (Statistics.FERMION, "density", "odd"): _fermion_density_odd,
    (Statistics.FERMION, "scalar", "even"): _fermion_scalar_even,
    (Statistics.FERMION, "scalar", "odd"): _fermion_scalar_odd,
    (Statistics.FERMION, "entropy", "even"): _fermion_entropy_even,
    (Statistics.FERMION, "entropy", "odd"): _fermion_entropy_odd,
    (Statistics.BOSON, "pressure", "even"): _boson_pressure_even,
    (Statistics.BOSON, "pressure", "odd"): _boson_pressure_odd,
}


@functools.lru_cache(maxsize=None)
def closed_form_block(statistics: Statistics, quantity: str, part: str, k: int) -> TermBlock:
    try:
        emit = _CLOSED_FORMS[(statistics, quantity, part)]
    except KeyError:
        raise ValueError(f"No closed-form series for {statistics.value} {quantity} ({part} part)")
    out = _BlockBuilder()
    emit(out, k)
    return out.build()


@functools.lru_cache(maxsize=None)
def derived_block(statistics: Statistics, quantity: str, part: str, k: int) -> TermBlock:
    """Block k of a quantity obtained by differentiating the pressure blocks."""
    if quantity == "pressure":
        return closed_form_block(statistics, "pressure", part, k)
    if quantity == "density":
        flipped = "odd" if part == "even" else "even"
        return closed_form_block(statistics, "pressure", flipped, k).d_nu()
    if quantity == "scalar":
        return closed_form_block(statistics, "pressure", part, k).d_lam().scaled(-1.0)
    if quantity == "entropy":
        return closed_form_block(statistics, "pressure", part, k).entropy()
    raise ValueError(f"Unknown quantity '{quantity}'")


def series_block(statistics: Statistics, quantity: str, part: str, k: int) -> TermBlock:
    if statistics is Statistics.FERMION:
        return closed_form_block(statistics, quantity, part, k)
    return derived_block(statistics, quantity, part, k)


def _arcsin_over_nu(lam: float, nu: float) -> float:
    """arcsin(ν/λ)/ν with its ν -> 0 limit 1/λ."""
    r = nu / lam
    if abs(r) < 1e-4:
        r2 = r * r
        return (1.0 + r2 / 6.0 + 3.0 * r2 * r2 / 40.0) / lam
    return math.asin(r) / nu


def _boson_special(quantity: str, part: str, lam: float, nu: float) -> float:
    """The (λ² - ν²)^(3/2) and arcsin terms of the boson pressure and their derivatives."""
    if lam == 0:
        return 0.0
    q2 = max(lam * lam - nu * nu, 0.0)
    q = math.sqrt(q2)
    angle = math.asin(max(-1.0, min(1.0, nu / lam)))
    if part == "even":
        if quantity in ("pressure", "entropy"):
            return q2 * q / (12.0 * math.pi)
        if quantity == "scalar":
            return -lam * q / (4.0 * math.pi)
        # ∂/∂ν of the odd arcsin term
        return (q2 - 3.0 * nu * q * angle) / (6.0 * PI2)
    if quantity in ("pressure", "entropy"):
        return nu * q2 * q * _arcsin_over_nu(lam, nu) / (6.0 * PI2)
    if quantity == "scalar":
        return -(3.0 * lam * q * angle - nu * q2 / lam) / (6.0 * PI2)
    # ∂/∂ν of the even (λ² - ν²)^(3/2) term
    return -nu * q / (4.0 * math.pi)


def _head(state: ReducedState, quantity: str, part: str, pick) -> float:
    value = pick(state.statistics, quantity, part, 0).evaluate(state.lam, state.nu)
    if state.statistics is Statistics.BOSON:
        value += _boson_special(quantity, part, state.lam, state.nu)
    return value


def _tail_factor(state: ReducedState) -> float:
    """Geometric bound on the unsummed blocks, in units of the last block."""
    return 1.0 / (1.0 - state.proximity ** 2)


def _sum_parts(state: ReducedState, quantity: str, parts, cfg: SeriesConfig, derived: bool):
    """
    Sum the requested parts block by block. The sum stops once the tail bound
    of the combined last blocks, plus rounding, stays within rtol of the
    total for BLOCK_PATIENCE consecutive blocks.
    """
    lam, nu = state.lam, state.nu
    pick = derived_block if derived else series_block
    k_max = _block_limit(cfg)
    factor = _tail_factor(state)
    budget = max(cfg.rtol - _EPS, _EPS)
    totals = {part: _head(state, quantity, part, pick) for part in parts}
    small = 0
    last = 0.0
    used = 0
    converged = False
    for k in range(1, k_max + 1):
        last = 0.0
        for part in parts:
            term = pick(state.statistics, quantity, part, k).evaluate(lam, nu)
            totals[part] += term
            last += abs(term)
        used = k
        if last * factor <= budget * abs(sum(totals.values())):
            small += 1
            if small >= BLOCK_PATIENCE:
                converged = True
                break
        else:
            small = 0
    return sum(totals.values()), used, last * factor, converged


def evaluate_series(
    state: ReducedState,
    quantity: str,
    cfg: SeriesConfig = None,
    part: str = "total",
    derived: bool = False,
) -> EvalOutcome:
    """
    Sum the high-temperature series of ``quantity`` at ``state``. ``derived``
    forces the differentiated-pressure blocks even for fermions.
    """
    cfg = cfg or DEFAULT_CONFIG
    if quantity not in QUANTITIES:
        raise ValueError(f"Unknown quantity '{quantity}'")
    if part not in PARTS + ("total",):
        raise ValueError(f"Unknown part '{part}'")
    state.check_high_t()
    parts = PARTS if part == "total" else (part,)
    value, used, tail, converged = _sum_parts(state, quantity, parts, cfg, derived)
    error = tail + _EPS * abs(value)
    flags = frozenset()
    if not converged and tail > DEGRADED_RTOL * abs(value):
        flags = frozenset({DEGRADED})
        logger.warning(
            "%s %s series stopped at k=%d with a tail bound of %.3e",
            state.statistics.value, quantity, used, tail,
        )
    return EvalOutcome(value, "high-t", used, error, flags)


def _block_limit(cfg: SeriesConfig) -> int:
    return min(specfun.get_cache().k_max, cfg.max_terms)


def max_proximity(cfg: SeriesConfig = None) -> float:
    """
    Largest proximity at which the block sum can meet ``cfg.rtol`` before the
    block limit. Blocks of the differentiated quantities carry an extra factor
    of order 2k, and the block prefactors get three more decades.
    """
    cfg = cfg or DEFAULT_CONFIG
    k_max = _block_limit(cfg)
    return (max(cfg.rtol, _EPS) / (2000.0 * k_max)) ** (1.0 / (2 * k_max))


def _require(state: ReducedState, statistics: Statistics, name: str):
    if state.statistics is not statistics:
        raise DomainError(f"{name} needs {statistics.value} statistics")


def pressure_ht_fermion(state: ReducedState, cfg: SeriesConfig = None, part: str = "total") -> EvalOutcome:
    _require(state, Statistics.FERMION, "pressure_ht_fermion")
    state.check_high_t()
    if state.massless and part == "total":
        return pressure_polylog_form(state, cfg)
    return evaluate_series(state, "pressure", cfg, part)


def pressure_ht_fermion_even(state: ReducedState, cfg: SeriesConfig = None) -> EvalOutcome:
    return pressure_ht_fermion(state, cfg, part="even")


def pressure_ht_fermion_odd(state: ReducedState, cfg: SeriesConfig = None) -> EvalOutcome:
    return pressure_ht_fermion(state, cfg, part="odd")


def density_ht_fermion(state: ReducedState, cfg: SeriesConfig = None, part: str = "total") -> EvalOutcome:
    _require(state, Statistics.FERMION, "density_ht_fermion")
    return evaluate_series(state, "density", cfg, part)


def scalar_density_ht_fermion(state: ReducedState, cfg: SeriesConfig = None, part: str = "total") -> EvalOutcome:
    _require(state, Statistics.FERMION, "scalar_density_ht_fermion")
    return evaluate_series(state, "scalar", cfg, part)


def entropy_ht_fermion(state: ReducedState, cfg: SeriesConfig = None, part: str = "total") -> EvalOutcome:
    _require(state, Statistics.FERMION, "entropy_ht_fermion")
    return evaluate_series(state, "entropy", cfg, part)


def pressure_ht_boson(state: ReducedState, cfg: SeriesConfig = None, part: str = "total") -> EvalOutcome:
    _require(state, Statistics.BOSON, "pressure_ht_boson")
    return evaluate_series(state, "pressure", cfg, part)


def density_ht_boson(state: ReducedState, cfg: SeriesConfig = None, part: str = "total") -> EvalOutcome:
    _require(state, Statistics.BOSON, "density_ht_boson")
    return evaluate_series(state, "density", cfg, part)


def scalar_density_ht_boson(state: ReducedState, cfg: SeriesConfig = None, part: str = "total") -> EvalOutcome:
    _require(state, Statistics.BOSON, "scalar_density_ht_boson")
    return evaluate_series(state, "scalar", cfg, part)


def entropy_ht_boson(state: ReducedState, cfg: SeriesConfig = None, part: str = "total") -> EvalOutcome:
    _require(state, Statistics.BOSON, "entropy_ht_boson")
    return evaluate_series(state, "entropy", cfg, part)


def check_polylog_domain(state: ReducedState):
    lam, nu = state.lam, state.nu
    if state.statistics is Statistics.FERMION:
        if lam + abs(nu) >= math.pi:
            raise OutOfDomainError("the polylog form needs lambda + |nu| < π for fermions")
        return
    if lam == 0:
        if nu > 0:
            raise DomainError("mu exceeds mass for boson")
        return
    # the n-sum runs in (λ/ν)^2 against the pole of Li_{-2n}(e^ν)
    if not (nu < -lam and abs(nu) < 2.0 * math.pi):
        raise OutOfDomainError("the boson polylog form needs -2π < nu < -lambda")


def pressure_polylog_form(state: ReducedState, cfg: SeriesConfig = None) -> EvalOutcome:
    """
    α/π² [Li_4(αe^ν) - λ²/4 Li_2(αe^ν)
          + λ²/2 sum_n w_n ((ψ(n+1)+ψ(n+3))/2 Li_-2n - ln(λ/2) Li_-2n + ∂_s Li_s|_-2n)],
    w_n = (λ/2)^(2n+2) / (n!(n+2)!).
    """
    cfg = cfg or DEFAULT_CONFIG
    check_polylog_domain(state)
    lam, nu, alpha = state.lam, state.nu, state.alpha
    fermion = state.statistics is Statistics.FERMION
    sign = polylog.Sign.MINUS if fermion else polylog.Sign.PLUS
    li4 = polylog.polylog_exp(4, nu, sign, cfg)
    if state.massless:
        return EvalOutcome(alpha * li4.value / PI2, "polylog", li4.terms_used, li4.error_estimate / PI2, li4.flags)

    li2 = polylog.polylog_exp(2, nu, sign, cfg)
    if fermion:
        li_neg, dli_neg = polylog.li_neg_even_minus_exp, polylog.dli_ds_neg_even_minus_exp
    else:
        li_neg, dli_neg = polylog.li_neg_even_exp, polylog.dli_ds_neg_even_exp
    log_half = math.log(0.5 * lam)

    def terms():
        for n in range(cfg.max_terms):
            weight = math.exp((2 * n + 2) * log_half - _ln_fact(n) - _ln_fact(n + 2))
            li = li_neg(n, nu, cfg)
            psi = 0.5 * (specfun.digamma(n + 1) + specfun.digamma(n + 3))
            yield weight * ((psi - log_half) * li + dli_neg(n, nu, cfg))

    tail, used, last = accumulate(terms(), cfg.with_patience(BLOCK_PATIENCE))
    total = li4.value - 0.25 * lam * lam * li2.value + 0.5 * lam * lam * tail
    value = alpha * total / PI2
    error = (li4.error_estimate + 0.5 * lam * lam * last) / PI2 + _EPS * abs(value)
    return EvalOutcome(value, "polylog", used, error, li4.flags | li2.flags)


def klajn_even_fermion(state: ReducedState, cfg: SeriesConfig = None) -> float:
    """
    Even part of the fermion pressure with the tail written through
    ψ^(2j)(1/2) as a double sum in (λ/4π) and (ν/2π).
    """
    cfg = cfg or DEFAULT_CONFIG
    _require(state, Statistics.FERMION, "klajn_even_fermion")
    state.check_high_t()
    lam, nu = state.lam, state.nu
    head = closed_form_block(Statistics.FERMION, "pressure", "even", 0).evaluate(lam, nu)
    if state.massless:
        return head
    x = lam / (4.0 * math.pi)
    y = nu / (2.0 * math.pi)

    def terms():
        for j in range(1, specfun.get_cache().k_max + 1):
            inner = math.fsum(
                x ** (2 * k + 2) * y ** (2 * j - 2 * k)
                * math.exp(-_ln_fact(k) - _ln_fact(k + 2) - _ln_fact(2 * j - 2 * k))
                for k in range(j + 1)
            )
            yield lam * lam * _sign(j) * specfun.polygamma_half(2 * j) * inner

    tail, _, _ = accumulate(terms(), cfg.with_patience(BLOCK_PATIENCE))
    return head + tail
