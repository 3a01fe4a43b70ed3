"""
Adaptive quadrature of the defining integrals.

    I_P  = 1/(6π²) ∫_λ^∞ (x² - λ²)^(3/2) f(x - ν) dx
    I_n  = ∂I_P/∂ν  = 1/(2π²) ∫_λ^∞ x (x² - λ²)^(1/2) f(x - ν) dx
    I_sc = -∂I_P/∂λ = λ/(2π²) ∫_λ^∞ (x² - λ²)^(1/2) f(x - ν) dx
    I_ε  =          1/(2π²) ∫_λ^∞ x² (x² - λ²)^(1/2) f(x - ν) dx

with f(y) = 1/(e^y - α). The density integrand follows from integrating the
ν-derivative of f by parts. Every integral is taken in t, x = λ + t², so
that x² - λ² = t²(2λ + t²) and the lower endpoint is smooth.
"""
import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, special

from .conf import relgas_settings
from .exceptions import DomainError, PoleError, QuadratureConvergenceError
from .series import ENDPOINT_POLE, EvalOutcome, Statistics

logger = logging.getLogger(__name__)

INTEGRANDS = ("pressure", "number", "scalar", "energy")
TAIL_WIDTH = 50.0


def _default_rtol():
    return relgas_settings.QUAD_RTOL


def _default_limit():
    return relgas_settings.QUAD_MAX_SUBDIVISIONS


@dataclass(frozen=True)
class QuadratureSpec:
    rtol: float = field(default_factory=_default_rtol)
    max_subdivisions: int = field(default_factory=_default_limit)

    def __post_init__(self):
        if not 1e-14 <= self.rtol <= 1e-6:
            raise ValueError("quadrature tolerance must lie in [1e-14, 1e-6]")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be positive")


def occupation(y, statistics: Statistics):
    """1/(e^y + 1) for fermions, 1/(e^y - 1) for bosons (y > 0)."""
    if statistics is Statistics.FERMION:
        return special.expit(-y)
    return np.exp(-y) / -np.expm1(-y)


def _kernel(integrand: str, lam: float, t):
    """Power-law kernel times dx/dt = 2t, as a function of t."""
    t2 = t * t
    root = np.sqrt(2.0 * lam + t2)
    if integrand == "pressure":
        return 2.0 * t2 * t2 * root ** 3 / (6.0 * math.pi ** 2)
    if integrand == "number":
        return 2.0 * (lam + t2) * t2 * root / (2.0 * math.pi ** 2)
    if integrand == "scalar":
        return 2.0 * lam * t2 * root / (2.0 * math.pi ** 2)
    return 2.0 * (lam + t2) ** 2 * t2 * root / (2.0 * math.pi ** 2)


def tail_bound(lam: float, nu: float) -> float:
    """∫_C^∞ x³ e^-(x-ν) dx, a bound on every integrand past the cut x = C."""
    cut = lam + max(TAIL_WIDTH, nu + TAIL_WIDTH)
    return math.exp(nu - cut) * (cut ** 3 + 3.0 * cut ** 2 + 6.0 * cut + 6.0)


def quad_integral(integrand: str, lam: float, nu: float, statistics, spec: QuadratureSpec = None) -> EvalOutcome:
    if integrand not in INTEGRANDS:
        raise ValueError(f"Unknown integrand '{integrand}'")
    spec = spec or QuadratureSpec()
    statistics = Statistics.parse(statistics)
    if not lam >= 0:
        raise DomainError("lambda = m/T must be nonnegative")
    flags = frozenset()
    if statistics is Statistics.BOSON:
        if nu > lam:
            raise PoleError("mu exceeds mass for boson")
        if nu == lam:
            logger.warning("boson integrand evaluated at the nu = lambda endpoint")
            flags = frozenset({ENDPOINT_POLE})
    if integrand == "scalar" and lam == 0:
        return EvalOutcome(0.0, "quadrature", 0, 0.0, flags)

    t_max = math.sqrt(max(TAIL_WIDTH, nu + TAIL_WIDTH))
    points = [math.sqrt(nu - lam)] if nu > lam else None

    def f(t):
        return _kernel(integrand, lam, t) * occupation(lam + t * t - nu, statistics)

    result = integrate.quad(
        f, 0.0, t_max, epsabs=0.0, epsrel=spec.rtol, limit=spec.max_subdivisions, points=points, full_output=1
    )
    if len(result) > 3:
        raise QuadratureConvergenceError(f"{integrand} integral at lambda={lam:g}, nu={nu:g}: {result[3]}")
    value, abserr, info = result[:3]
    error = abserr + tail_bound(lam, nu)
    return EvalOutcome(float(value), "quadrature", int(info["neval"]), float(error), flags)


def pressure_quad(lam: float, nu: float, statistics, spec: QuadratureSpec = None) -> EvalOutcome:
    return quad_integral("pressure", lam, nu, statistics, spec)


def number_quad(lam: float, nu: float, statistics, spec: QuadratureSpec = None) -> EvalOutcome:
    return quad_integral("number", lam, nu, statistics, spec)


def scalar_quad(lam: float, nu: float, statistics, spec: QuadratureSpec = None) -> EvalOutcome:
    return quad_integral("scalar", lam, nu, statistics, spec)


def energy_quad(lam: float, nu: float, statistics, spec: QuadratureSpec = None) -> EvalOutcome:
    return quad_integral("energy", lam, nu, statistics, spec)


def fermi_dirac_integral(j: float, eta: float, spec: QuadratureSpec = None) -> float:
    """
    Complete Fermi-Dirac integral F_j(η) = 1/Γ(j+1) ∫_0^∞ x^j / (e^(x-η) + 1) dx,
    which equals -Li_(j+1)(-e^η).
    """
    if not j > -1:
        raise DomainError("the Fermi-Dirac integral needs j > -1")
    spec = spec or QuadratureSpec()
    # x = t², dx = 2t dt, removes the x^j endpoint singularity for j < 0
    t_max = math.sqrt(max(TAIL_WIDTH, eta + TAIL_WIDTH))
    points = [math.sqrt(eta)] if eta > 0 else None

    def f(t):
        return 2.0 * t ** (2.0 * j + 1.0) * special.expit(eta - t * t)

    result = integrate.quad(
        f, 0.0, t_max, epsabs=0.0, epsrel=spec.rtol, limit=spec.max_subdivisions, points=points, full_output=1
    )
    if len(result) > 3:
        raise QuadratureConvergenceError(f"F_{j}({eta:g}): {result[3]}")
    return float(result[0] * special.rgamma(j + 1.0))
