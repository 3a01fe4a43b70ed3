"""
Self-checks run by ``manage.py verify``: massless constants, agreement with
the quadrature oracle, the Bessel and nonrelativistic paths, thermodynamic
identities, the ψ^(2j)(1/2) form of the even part, the polylog expansions,
the convergence-domain guard and parity.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List

import numpy as np

from . import bessel, eos, hightemp, oracle, polylog
from .exceptions import OutOfDomainError
from .series import ASYMPTOTIC, DEFAULT_CONFIG, Statistics

logger = logging.getLogger(__name__)

FERMION = Statistics.FERMION
BOSON = Statistics.BOSON


@dataclass
class SuiteResult:
    name: str
    tolerance: float
    max_residual: float = 0.0
    checks: int = 0
    failures: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def record(self, label: str, residual: float, tolerance: float = None):
        tolerance = self.tolerance if tolerance is None else tolerance
        self.checks += 1
        scaled = residual * self.tolerance / tolerance
        self.max_residual = max(self.max_residual, scaled)
        if not residual <= tolerance:
            self.failures.append(f"{label}: residual {residual:.3e} > {tolerance:.1e}")

    def as_dict(self) -> dict:
        return {
            "suite": self.name,
            "passed": self.passed,
            "checks": self.checks,
            "max_residual": self.max_residual,
            "tolerance": self.tolerance,
            "failures": list(self.failures),
        }


def _relative(a: float, b: float) -> float:
    scale = max(abs(a), abs(b))
    return abs(a - b) / scale if scale else 0.0


def _state(lam, nu, statistics=FERMION):
    return hightemp.ReducedState(lam, nu, statistics)


def _five_point(f, x: float, h: float) -> float:
    return (f(x - 2 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2 * h)) / (12.0 * h)


def massless_suite(rng=None) -> SuiteResult:
    result = SuiteResult("massless", 1e-12)
    exact = {FERMION: 7.0 * math.pi ** 2 / 720.0, BOSON: math.pi ** 2 / 90.0}
    for statistics, value in exact.items():
        state = _state(0.0, 0.0, statistics)
        ht = hightemp.evaluate_series(state, "pressure")
        result.record(f"{statistics.value} high-t", _relative(ht.value, value))
        poly = hightemp.pressure_polylog_form(state)
        result.record(f"{statistics.value} polylog", _relative(poly.value, value))
        quad = oracle.pressure_quad(0.0, 0.0, statistics)
        result.record(f"{statistics.value} quadrature", _relative(quad.value, value))
    return result


FERMION_LAMBDAS = (0.05, 0.1, 0.3, 0.5, 1.0, 1.5)
FERMION_NUS = (0.0, 0.1, -0.1, 0.5, -0.5, 1.0, -1.0)
BOSON_LAMBDAS = (0.1, 0.5, 1.0, 2.0)
BOSON_RATIOS = (0.0, 0.25, -0.25, 0.9, -0.9)


def fermion_oracle_grid():
    return [(lam, nu) for lam in FERMION_LAMBDAS for nu in FERMION_NUS if lam + abs(nu) <= 0.8 * math.pi]


def boson_oracle_grid():
    return [(lam, ratio * lam) for lam in BOSON_LAMBDAS for ratio in BOSON_RATIOS]


def oracle_suite(rng=None) -> SuiteResult:
    result = SuiteResult("oracle", 1e-9)
    fermion = [
        ("P", hightemp.pressure_ht_fermion, oracle.pressure_quad),
        ("n", hightemp.density_ht_fermion, oracle.number_quad),
        ("sc", hightemp.scalar_density_ht_fermion, oracle.scalar_quad),
    ]
    for lam, nu in fermion_oracle_grid():
        for name, series, quad in fermion:
            value = series(_state(lam, nu)).value
            reference = quad(lam, nu, FERMION).value
            result.record(f"fermion {name} ({lam}, {nu})", _relative(value, reference))
    for lam, nu in boson_oracle_grid():
        value = hightemp.pressure_ht_boson(_state(lam, nu, BOSON)).value
        reference = oracle.pressure_quad(lam, nu, BOSON).value
        result.record(f"boson P ({lam}, {nu})", _relative(value, reference))
    return result


def bessel_suite(rng=None) -> SuiteResult:
    result = SuiteResult("bessel", 1e-10)
    for lam in (2.0, 5.0, 10.0, 20.0):
        for nu in (0.0, 0.5 * lam):
            params = bessel.BesselSeriesParams(lam, nu, FERMION)
            value = bessel.pressure_bessel(params).value
            reference = oracle.pressure_quad(lam, nu, FERMION).value
            result.record(f"bessel ({lam}, {nu})", _relative(value, reference))
    for nu in (0.0, 10.0):
        params = bessel.BesselSeriesParams(20.0, nu, FERMION)
        nonrel = bessel.pressure_nonrel(params).value
        result.record(f"nonrelativistic (20, {nu})", _relative(nonrel, bessel.pressure_bessel(params).value), 1e-8)
    for z in (0.5, 2.0, 4.0):
        small = bessel.k2_small(z)
        result.record(f"K_2 ascending z={z}", _relative(small.value, bessel.k2(z)))
    for z in (15.0, 30.0):
        asym = bessel.k2_asym(z)
        result.record(f"K_2 asymptotic z={z}", _relative(asym.value, bessel.k2(z)))
    return result


def identity_grid():
    return [(lam, nu) for lam in (0.1, 0.4, 0.7, 1.0, 1.3) for nu in (-0.8, -0.3, 0.0, 0.3, 0.8)]


def identities_suite(rng=None) -> SuiteResult:
    rng = rng or np.random.default_rng(0)
    result = SuiteResult("identities", 1e-7)
    h = 1e-3
    for lam, nu in identity_grid():
        def pressure(l, n):
            return hightemp.pressure_ht_fermion(_state(l, n)).value

        state = _state(lam, nu)
        i_p = hightemp.pressure_ht_fermion(state).value
        i_n = hightemp.density_ht_fermion(state).value
        i_sc = hightemp.scalar_density_ht_fermion(state).value
        i_s = hightemp.entropy_ht_fermion(state).value
        d_nu = _five_point(lambda x: pressure(lam, x), nu, h)
        d_lam = _five_point(lambda x: pressure(x, nu), lam, h)
        result.record(f"I_n vs dI_P/dnu ({lam}, {nu})", abs(i_n - d_nu))
        result.record(f"I_sc vs -dI_P/dlambda ({lam}, {nu})", abs(i_sc + d_lam))
        residual = abs(i_s - (4.0 * i_p + lam * i_sc - nu * i_n))
        result.record(f"entropy identity ({lam}, {nu})", residual, 1e-11)

    for _ in range(50):
        statistics = FERMION if rng.random() < 0.5 else BOSON
        T = float(rng.uniform(1.0, 100.0))
        m = float(rng.uniform(0.0, 5.0)) * T
        mu = float(rng.uniform(-2.0, 2.0)) * T
        if statistics is BOSON:
            mu = min(mu, m)
        thermo = eos.evaluate(eos.PhysicalState(T, mu, m, statistics))
        result.record(f"first law {statistics.value} T={T:.3g} mu={mu:.3g} m={m:.3g}", thermo.relative_residual, 1e-10)
    return result


def klajn_suite(rng=None) -> SuiteResult:
    rng = rng or np.random.default_rng(0)
    result = SuiteResult("klajn", 1e-12)
    count = 0
    while count < 100:
        lam, nu = float(rng.uniform(0.0, 2.5)), float(rng.uniform(-2.5, 2.5))
        if lam + abs(nu) >= 0.8 * math.pi:
            continue
        count += 1
        state = _state(lam, nu)
        klajn = hightemp.klajn_even_fermion(state)
        even = hightemp.evaluate_series(state, "pressure", part="even").value
        result.record(f"({lam:.4f}, {nu:.4f})", abs(klajn - even))
    return result


def polylog_suite(rng=None) -> SuiteResult:
    result = SuiteResult("polylog", 1e-12)
    cfg = DEFAULT_CONFIG
    for s in (1.5, 2.5, 3.5):
        z = -1.2
        result.record(
            f"Robinson s={s}", _relative(polylog.li_exp_expansion(s, z, cfg), polylog.li_direct(s, math.exp(z), cfg))
        )
    for n in (2, 3, 4):
        z = -1.1
        result.record(
            f"Robinson integer n={n}", _relative(polylog.li_exp_integer(n, z, cfg), polylog.li_direct(n, math.exp(z), cfg))
        )
    for s in (0.5, 2.5, 4.0):
        z = -1.7
        result.record(
            f"Wood s={s}", _relative(polylog.li_minus_exp(s, z, cfg), polylog.li_direct(s, -math.exp(z), cfg))
        )
    for n in (2, 4):
        z = -1.6
        result.record(
            f"Wood integer n={n}",
            _relative(polylog.li_minus_exp_integer(n, z, cfg), polylog.li_direct(n, -math.exp(z), cfg)),
        )
    for m in (0, 1, 2):
        z = -1.3
        result.record(
            f"Li_-2m m={m}",
            _relative(polylog.li_neg_even_exp(m, z, cfg), polylog.li_direct(-2 * m, math.exp(z), cfg)),
            1e-10,
        )
        result.record(
            f"Li_-2m(-e^z) m={m}",
            _relative(polylog.li_neg_even_minus_exp(m, z, cfg), polylog.li_direct(-2 * m, -math.exp(z), cfg)),
            1e-10,
        )
    h = 1e-4
    for m in (0, 1):
        z = -0.7
        s = -2 * m
        plus = _five_point(lambda x: polylog.li_exp_expansion(x, z, cfg), s, h)
        minus = _five_point(lambda x: polylog.li_minus_exp(x, z, cfg), s, h)
        result.record(f"dLi/ds m={m}", _relative(polylog.dli_ds_neg_even_exp(m, z, cfg), plus), 1e-7)
        result.record(f"dLi(-)/ds m={m}", _relative(polylog.dli_ds_neg_even_minus_exp(m, z, cfg), minus), 1e-7)
    for s, z in ((2.5, 20.0), (1.5, 25.0), (3.5, 30.0)):
        asym = polylog.li_asymptotic(s, z, cfg).value
        reference = -oracle.fermi_dirac_integral(s - 1.0, z)
        result.record(f"asymptotic s={s} z={z}", _relative(asym, reference), 1e-10)
    # at z = 15 the optimal truncation leaves about e^-z: the shortfall must
    # be flagged and covered by the error estimate
    for s in (1.5, 2.5, 3.5):
        z = 15.0
        asym = polylog.li_asymptotic(s, z, cfg)
        reference = -oracle.fermi_dirac_integral(s - 1.0, z)
        residual = _relative(asym.value, reference)
        if residual > 1e-10 and ASYMPTOTIC not in asym.flags:
            residual = math.inf
        result.record(
            f"asymptotic s={s} z={z}", residual, max(1e-10, asym.error_estimate / abs(asym.value))
        )
    return result


def domain_suite(rng=None) -> SuiteResult:
    result = SuiteResult("domain", 1e-9)
    points = [(2.5, 0.9), (1.0, 3.0), (0.5, -4.0), (3.0, 1.5), (4.0, -0.5), (2.0, 2.5)]
    for lam, nu in points:
        refused = False
        try:
            hightemp.pressure_ht_fermion(_state(lam, nu))
        except OutOfDomainError:
            refused = True
        result.record(f"high-t refuses ({lam}, {nu})", 0.0 if refused else math.inf)
        thermo = eos.evaluate(eos.PhysicalState(1.0, nu, lam, FERMION))
        reference = oracle.pressure_quad(lam, nu, FERMION).value
        result.record(f"auto fallback ({lam}, {nu}) via {thermo.method}", _relative(thermo.pressure, reference))
    return result


def parity_suite(rng=None) -> SuiteResult:
    result = SuiteResult("parity", 1e-14)
    for statistics, lams in ((FERMION, (0.0, 0.3, 1.0, 2.0)), (BOSON, (0.3, 1.0, 2.5))):
        for lam in lams:
            state = _state(lam, 0.0, statistics)
            for quantity in hightemp.QUANTITIES:
                value = hightemp.evaluate_series(state, quantity, part="odd").value
                result.record(f"{statistics.value} {quantity} odd part at nu=0, lambda={lam}", abs(value))
            nu = 0.4 * lam if statistics is BOSON else 0.5
            for quantity in hightemp.QUANTITIES:
                plus = _state(lam, nu, statistics)
                minus = _state(lam, -nu, statistics)
                for part, sign in (("even", 1.0), ("odd", -1.0)):
                    a = hightemp.evaluate_series(plus, quantity, part=part).value
                    b = hightemp.evaluate_series(minus, quantity, part=part).value
                    result.record(
                        f"{statistics.value} {quantity} {part} symmetry at ({lam}, {nu})",
                        abs(a - sign * b) / max(abs(a), 1.0),
                    )
    return result


SUITES: Dict[str, Callable] = {
    "massless": massless_suite,
    "oracle": oracle_suite,
    "bessel": bessel_suite,
    "identities": identities_suite,
    "klajn": klajn_suite,
    "polylog": polylog_suite,
    "domain": domain_suite,
    "parity": parity_suite,
}


def run_suites(names=None, seed: int = 0) -> List[SuiteResult]:
    results = []
    for name in names or SUITES:
        if name not in SUITES:
            raise ValueError(f"Unknown suite '{name}'")
        logger.info("Running %s suite", name)
        results.append(SUITES[name](np.random.default_rng(seed)))
    return results
