"""
Dimensional equation of state: (T, μ, m) in, P, n, ρ_sc, s, ε out.

All quantities share one energy unit (ħ = c = k_B = 1). The reduced
integrals only depend on λ = m/T and ν = μ/T, so every method below works
on those and the results are rescaled by powers of T at the end.
"""
import logging
import math
import sys
from dataclasses import dataclass, field
from typing import Dict

from . import bessel, hightemp, oracle
from .exceptions import DomainError, OutOfDomainError
from .series import DEFAULT_CONFIG, EvalOutcome, SeriesConfig, Statistics

logger = logging.getLogger(__name__)

METHODS = ("auto", "high_t", "polylog", "bessel", "quadrature")
# fraction of the high-temperature convergence radius used by `auto`
HIGH_T_SAFETY = 0.85
BESSEL_MIN_LAMBDA = 2.0
# step of the 5-point differences on the polylog path
DIFF_STEP = 1e-3
# relative accuracy below which a double-precision result cannot be asked for
RTOL_FLOOR = 4.0 * sys.float_info.epsilon


@dataclass(frozen=True)
class PhysicalState:
    T: float
    mu: float
    m: float
    statistics: Statistics

    def __post_init__(self):
        object.__setattr__(self, "statistics", Statistics.parse(self.statistics))
        if not all(math.isfinite(v) for v in (self.T, self.mu, self.m)):
            raise DomainError("T, mu and mass must be finite")
        if not self.T > 0:
            raise DomainError("temperature must be positive")
        if self.m < 0:
            raise DomainError("mass must be nonnegative")
        if self.statistics is Statistics.BOSON and self.mu > self.m:
            raise DomainError("mu exceeds mass for boson")

    @property
    def lam(self) -> float:
        return self.m / self.T

    @property
    def nu(self) -> float:
        return self.mu / self.T

    def reduced(self) -> hightemp.ReducedState:
        return hightemp.ReducedState(self.lam, self.nu, self.statistics)

    def conjugate(self) -> "PhysicalState":
        """The antiparticle state, μ -> -μ."""
        return PhysicalState(self.T, -self.mu, self.m, self.statistics)


@dataclass(frozen=True)
class ThermoSet:
    state: PhysicalState
    method: str
    pressure: float
    density: float
    scalar_density: float
    entropy: float
    energy: float
    outcomes: Dict[str, EvalOutcome] = field(default_factory=dict)

    @property
    def first_law_residual(self) -> float:
        """ε - (Ts + μn - P)."""
        s = self.state
        return self.energy - (s.T * self.entropy + s.mu * self.density - self.pressure)

    @property
    def relative_residual(self) -> float:
        scale = abs(self.energy) + abs(self.pressure)
        return abs(self.first_law_residual) / scale if scale else 0.0

    @property
    def error_estimate(self) -> float:
        """Largest error estimate among the reduced integrals, relative to its value."""
        return _worst_relative_error(self.outcomes.values())

    @property
    def terms_used(self) -> int:
        return max((o.terms_used for o in self.outcomes.values()), default=0)

    @property
    def flags(self) -> frozenset:
        merged = frozenset()
        for outcome in self.outcomes.values():
            merged |= outcome.flags
        return merged


@dataclass(frozen=True)
class PairResult:
    particle: ThermoSet
    antiparticle: ThermoSet

    @property
    def net_density(self) -> float:
        return self.particle.density - self.antiparticle.density


def select_method(lam: float, nu: float, statistics, cfg: SeriesConfig = None) -> str:
    statistics = Statistics.parse(statistics)
    cfg = cfg or DEFAULT_CONFIG
    reach = min(HIGH_T_SAFETY, hightemp.max_proximity(cfg))
    radius = math.pi if statistics is Statistics.FERMION else 2.0 * math.pi
    proximity = (lam + abs(nu)) / radius
    if statistics is Statistics.FERMION or abs(nu) <= lam:
        if proximity <= reach:
            return "high_t"
    return _fallback_method(lam, nu)


def _fallback_method(lam: float, nu: float) -> str:
    if nu < lam and lam >= BESSEL_MIN_LAMBDA:
        return "bessel"
    return "quadrature"


def _worst_relative_error(outcomes) -> float:
    return max((o.error_estimate / abs(o.value) for o in outcomes if o.value), default=0.0)


def _entropy_from_identity(lam, nu, p: EvalOutcome, n: EvalOutcome, sc: EvalOutcome) -> EvalOutcome:
    """I_s = 4 I_P + λ I_sc - ν I_n."""
    return EvalOutcome(
        value=4.0 * p.value + lam * sc.value - nu * n.value,
        method=p.method,
        terms_used=max(p.terms_used, n.terms_used, sc.terms_used),
        error_estimate=4.0 * p.error_estimate + lam * sc.error_estimate + abs(nu) * n.error_estimate,
        flags=p.flags | n.flags | sc.flags,
    )


def _high_t(state: PhysicalState, cfg: SeriesConfig, spec):
    reduced = state.reduced()
    if state.statistics is Statistics.FERMION:
        return (
            hightemp.pressure_ht_fermion(reduced, cfg),
            hightemp.density_ht_fermion(reduced, cfg),
            hightemp.scalar_density_ht_fermion(reduced, cfg),
            hightemp.entropy_ht_fermion(reduced, cfg),
        )
    return (
        hightemp.pressure_ht_boson(reduced, cfg),
        hightemp.density_ht_boson(reduced, cfg),
        hightemp.scalar_density_ht_boson(reduced, cfg),
        hightemp.entropy_ht_boson(reduced, cfg),
    )


def _bessel(state: PhysicalState, cfg: SeriesConfig, spec):
    params = bessel.BesselSeriesParams(state.lam, state.nu, state.statistics, cfg)
    p = bessel.pressure_bessel(params)
    n = bessel.density_bessel(params)
    sc = bessel.scalar_density_bessel(params)
    return p, n, sc, _entropy_from_identity(state.lam, state.nu, p, n, sc)


# one-sided 5-point weights for f'(x) from f(x), f(x-h), ..., f(x-4h)
_BACKWARD = (25.0, -48.0, 36.0, -16.0, 3.0)


def _difference(f, x: float, h: float, inside) -> tuple:
    """
    5-point derivative of f at x and the spread between it and the
    matching second-order estimate. The stencil is central when x ± 2h lie
    inside the domain and one-sided toward the interior otherwise.
    """
    if inside(x - 2 * h) and inside(x + 2 * h):
        f_values = [f(x + d * h) for d in (-2, -1, 1, 2)]
        fine = (f_values[0] - 8.0 * f_values[1] + 8.0 * f_values[2] - f_values[3]) / (12.0 * h)
        coarse = (f_values[2] - f_values[1]) / (2.0 * h)
        return fine, abs(fine - coarse) * h * h
    for step in (-h, h):
        if inside(x + 4 * step):
            f_values = [f(x + d * step) for d in range(5)]
            fine = -sum(w * v for w, v in zip(_BACKWARD, f_values)) / (12.0 * step)
            coarse = -(3.0 * f_values[0] - 4.0 * f_values[1] + f_values[2]) / (2.0 * step)
            return fine, abs(fine - coarse) * h * h
    raise OutOfDomainError(f"no difference stencil of step {h:g} fits the polylog domain at {x:g}")


def _polylog(state: PhysicalState, cfg: SeriesConfig, spec):
    lam, nu, stats = state.lam, state.nu, state.statistics
    p = hightemp.pressure_polylog_form(hightemp.ReducedState(lam, nu, stats), cfg)

    def pressure_at(lam_, nu_):
        return hightemp.pressure_polylog_form(hightemp.ReducedState(lam_, nu_, stats), cfg).value

    def inside(lam_, nu_):
        try:
            hightemp.check_polylog_domain(hightemp.ReducedState(lam_, nu_, stats))
        except DomainError:
            return False
        return True

    dn, n_err = _difference(lambda x: pressure_at(lam, x), nu, DIFF_STEP, lambda x: inside(lam, x))
    n = EvalOutcome(dn, "polylog", p.terms_used, n_err + p.error_estimate / DIFF_STEP, p.flags)
    if lam == 0:
        sc = EvalOutcome(0.0, "polylog")
    else:
        h = min(DIFF_STEP, 0.25 * lam)
        dl, sc_err = _difference(lambda x: pressure_at(x, nu), lam, h, lambda x: inside(x, nu))
        sc = EvalOutcome(-dl, "polylog", p.terms_used, sc_err + p.error_estimate / h, p.flags)
    return p, n, sc, _entropy_from_identity(lam, nu, p, n, sc)


def _quadrature(state: PhysicalState, cfg: SeriesConfig, spec: oracle.QuadratureSpec):
    lam, nu, stats = state.lam, state.nu, state.statistics
    p = oracle.pressure_quad(lam, nu, stats, spec)
    n = oracle.number_quad(lam, nu, stats, spec)
    sc = oracle.scalar_quad(lam, nu, stats, spec)
    return p, n, sc, _entropy_from_identity(lam, nu, p, n, sc)


_METHODS = {
    "high_t": _high_t,
    "polylog": _polylog,
    "bessel": _bessel,
    "quadrature": _quadrature,
}


def evaluate(
    state: PhysicalState,
    method: str = "auto",
    cfg: SeriesConfig = None,
    spec: oracle.QuadratureSpec = None,
) -> ThermoSet:
    cfg = cfg or DEFAULT_CONFIG
    if method not in METHODS:
        raise ValueError(f"Unknown method '{method}', expected one of {', '.join(METHODS)}")
    automatic = method == "auto"
    if automatic:
        method = select_method(state.lam, state.nu, state.statistics, cfg)
    logger.debug("Evaluating %s at lambda=%g nu=%g via %s", state.statistics.value, state.lam, state.nu, method)
    p, n, sc, s = _METHODS[method](state, cfg, spec)
    if automatic and method == "high_t" and _worst_relative_error((p, n, sc, s)) > max(cfg.rtol, RTOL_FLOOR):
        method = _fallback_method(state.lam, state.nu)
        logger.info("high-temperature series missed rtol=%g at lambda=%g nu=%g, using %s", cfg.rtol, state.lam, state.nu, method)
        p, n, sc, s = _METHODS[method](state, cfg, spec)

    T = state.T
    t3 = T ** 3
    t4 = T ** 4
    return ThermoSet(
        state=state,
        method=method,
        pressure=t4 * p.value,
        density=t3 * n.value,
        scalar_density=t3 * sc.value,
        entropy=t3 * s.value,
        energy=t4 * (3.0 * p.value + state.lam * sc.value),
        outcomes={"P": p, "n": n, "sc": sc, "s": s},
    )


def pair_evaluate(
    state: PhysicalState,
    method: str = "auto",
    cfg: SeriesConfig = None,
    spec: oracle.QuadratureSpec = None,
) -> PairResult:
    return PairResult(evaluate(state, method, cfg, spec), evaluate(state.conjugate(), method, cfg, spec))
