"""Exception types raised across the package."""

from __future__ import annotations

__all__ = [
    "BizsurvError",
    "ConvergenceError",
    "DegenerateCohortError",
    "DomainError",
    "FitFailureError",
    "IncompleteCohortError",
    "NoChangePointError",
    "ParseError",
    "RankingError",
    "SchemaError",
]


class BizsurvError(Exception):
    """Base class for every error raised by this package."""


class DomainError(BizsurvError, ValueError):
    """An argument or parameter vector lies outside its mathematical domain."""


class DegenerateCohortError(BizsurvError, ValueError):
    """Cohort counts admit no valid estimate (zero denominator, all-zero deaths, ...)."""


class NoChangePointError(BizsurvError):
    """The hazard is monotone on the search window; no interior extremum exists."""


class ConvergenceError(BizsurvError, RuntimeError):
    """An iterative routine exhausted its iteration budget before reaching tolerance."""


class FitFailureError(BizsurvError, RuntimeError):
    """Every optimizer restart diverged or landed on an invalid likelihood."""


class SchemaError(BizsurvError, ValueError):
    """Input data violates the documented table or document layout."""


class ParseError(BizsurvError, ValueError):
    """A cell or token could not be parsed; the message carries the location."""


class IncompleteCohortError(BizsurvError, ValueError):
    """A required (year, age) row is missing from the input table."""


class RankingError(BizsurvError, ValueError):
    """Model ranking is impossible (no fits, or no converged fit)."""
