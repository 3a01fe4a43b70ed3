"""
Error hierarchy shared by the numerical modules and the CLI.
"""


class RelgasError(Exception):
    """Base class for every error raised by the relgas package."""


class DomainError(RelgasError, ValueError):
    """An argument lies outside the domain of the requested evaluation."""


class PoleError(DomainError):
    """A function was evaluated at one of its poles."""


class CacheRangeError(DomainError):
    """An index lies outside the precomputed constant cache."""


class OutOfDomainError(DomainError):
    """A series was asked for a point outside its convergence domain."""


class RegimeError(DomainError):
    """An asymptotic or limiting representation was used outside its regime."""


class SeriesDivergenceError(RelgasError, ArithmeticError):
    """A power series was evaluated where it does not converge."""


class QuadratureConvergenceError(RelgasError, ArithmeticError):
    """Adaptive quadrature did not reach the requested tolerance."""
