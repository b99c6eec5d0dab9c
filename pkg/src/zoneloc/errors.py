"""Exception types raised across the package."""

from __future__ import annotations


class ZonelocError(Exception):
    """Base class for all package errors."""


class ValidationError(ZonelocError, ValueError):
    """Input data or configuration violates a documented invariant."""


class ParseError(ValidationError):
    """Malformed input file."""

    def __init__(self, message: str, line: int | None = None, path: str | None = None):
        self.line = line
        self.path = path
        where = ""
        if path is not None:
            where += f"{path}:"
        if line is not None:
            where += f"line {line}: "
        elif where:
            where += " "
        super().__init__(where + message)


class ConfigurationError(ValidationError):
    """A configuration value is out of its supported range."""


class DomainError(ZonelocError, ValueError):
    """An operation was called outside its domain (empty set, bad alpha, frame mismatch)."""


class DegenerateFitError(ZonelocError):
    """Samples cannot support a non-degenerate fit (too few, or zero spread)."""


class ConflictError(ZonelocError):
    """Fused evidence is in total conflict: all mass sits on the empty set."""

    def __init__(self, message: str, step: str | None = None):
        self.step = step
        super().__init__(message if step is None else f"{message} (at {step})")


class NoEvidenceError(ZonelocError):
    """An observation carried no reading for any modeled access point."""
