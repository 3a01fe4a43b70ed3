"""
Shared plumbing for series evaluation: statistics selector, truncation
config, evaluation outcome and the consecutive-small-term stop rule.
"""
import enum
import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Tuple

from .conf import relgas_settings

DEGRADED = "degraded-accuracy"
OUT_OF_DOMAIN = "out-of-domain"
SLOW_CONVERGENCE = "slow-convergence"
ENDPOINT_POLE = "endpoint-pole"
ASYMPTOTIC = "asymptotic-shortfall"


class Statistics(enum.Enum):
    FERMION = "fermion"
    BOSON = "boson"

    @property
    def alpha(self) -> int:
        """-1 for Fermi-Dirac, +1 for Bose-Einstein occupation."""
        return -1 if self is Statistics.FERMION else 1

    @classmethod
    def parse(cls, value) -> "Statistics":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(f"Unknown statistics '{value}', expected fermion or boson")


@dataclass(frozen=True)
class SeriesConfig:
    rtol: float = 1e-16
    max_terms: int = 5000
    patience: int = 3

    def __post_init__(self):
        if not self.rtol > 0:
            raise ValueError("rtol must be positive")
        if self.max_terms < 1 or self.patience < 1:
            raise ValueError("max_terms and patience must be at least 1")

    @classmethod
    def from_settings(cls, **overrides) -> "SeriesConfig":
        base = cls(rtol=relgas_settings.RTOL, max_terms=relgas_settings.SERIES_MAX_TERMS)
        return replace(base, **overrides)

    def with_patience(self, patience: int) -> "SeriesConfig":
        return replace(self, patience=patience)


DEFAULT_CONFIG = SeriesConfig()


@dataclass(frozen=True)
class EvalOutcome:
    value: float
    method: str
    terms_used: int = 0
    error_estimate: float = 0.0
    flags: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if not self.error_estimate >= 0:
            raise ValueError("error_estimate must be nonnegative")
        if OUT_OF_DOMAIN in self.flags:
            raise ValueError("out-of-domain results must be raised, not returned")

    def scaled(self, factor: float) -> "EvalOutcome":
        return replace(self, value=self.value * factor, error_estimate=self.error_estimate * abs(factor))


def accumulate(terms: Iterable[float], cfg: SeriesConfig = DEFAULT_CONFIG) -> Tuple[float, int, float]:
    """
    Sum ``terms`` until ``cfg.patience`` consecutive terms satisfy
    |term| <= rtol * |partial| or ``cfg.max_terms`` terms have been used.

    Returns (sum, terms used, magnitude of the last term).
    """
    total = 0.0
    used = 0
    small = 0
    last = math.inf
    for term in terms:
        total += term
        used += 1
        last = abs(term)
        if last <= cfg.rtol * abs(total):
            small += 1
            if small >= cfg.patience:
                break
        else:
            small = 0
        if used >= cfg.max_terms:
            break
    return total, used, (0.0 if used == 0 else last)
