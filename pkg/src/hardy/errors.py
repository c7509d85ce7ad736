"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class HardyError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(HardyError, ValueError):
    """An argument lies outside the domain of the operation."""


class ConfigError(HardyError):
    """A configuration block is missing or fails validation."""


class DivergenceError(HardyError):
    """A quantity that must be finite was found to diverge.

    ``evidence`` carries the numbers that led to the decision (block sums,
    growth ratios) so callers can report them.
    """

    def __init__(self, message: str, evidence: dict | None = None):
        super().__init__(message)
        self.evidence = dict(evidence or {})


class InconclusiveError(HardyError):
    """Neither convergence nor divergence could be established."""

    def __init__(self, message: str, evidence: dict | None = None):
        super().__init__(message)
        self.evidence = dict(evidence or {})


class ResolutionError(HardyError):
    """A witness set is empty at working precision (slack 1/n too small)."""


class InconsistencyError(HardyError):
    """Internal numerical inconsistency, typically a quadrature failure."""
