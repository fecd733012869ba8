"""Exception types shared across the package."""

from __future__ import annotations


class RodHearingError(Exception):
    """Base class for all package errors."""


class ZeroRow(RodHearingError, ValueError):
    """A boundary form has both coefficients equal to zero (rank A < 4)."""


class DomainError(RodHearingError, ValueError):
    """An argument lies outside the domain of a function (s <= 0, x outside [0, 1], ...)."""


class ConfigError(RodHearingError, ValueError):
    """Malformed configuration or spectrum input."""


class BadSpectrum(ConfigError):
    """Spectrum with the wrong count, duplicates, or non-positive values."""


class ScanExhausted(RodHearingError, RuntimeError):
    """Fewer roots than requested were found below the scan ceiling."""

    def __init__(self, message: str, found: list[float] | None = None):
        super().__init__(message)
        self.found = list(found or [])


class RankDeficient(RodHearingError, RuntimeError):
    """The nine-equation system does not determine a unique x-direction."""

    def __init__(self, message: str, rank: int, singular_values=None):
        super().__init__(message)
        self.rank = rank
        self.singular_values = [] if singular_values is None else [float(v) for v in singular_values]


class NoFit(RodHearingError, RuntimeError):
    """No fastening configuration reproduces the x-direction within tolerance."""

    def __init__(self, message: str, best_residual: float):
        super().__init__(message)
        self.best_residual = float(best_residual)
