"""Exception hierarchy shared by the library and the command line.

The CLI maps :class:`InputError` to exit code 2 and :class:`NumericDomainError`
to exit code 3.
"""

from __future__ import annotations


class QScatterError(Exception):
    """Base class for every error raised on purpose by qscatter."""

    exit_code = 2


# ---------------------------------------------------------------------------
# Input errors (exit code 2)
# ---------------------------------------------------------------------------


class InputError(QScatterError):
    exit_code = 2


class SpecParseError(InputError):
    """A model file could not be parsed; carries a 1-based line and column."""

    def __init__(self, message: str, line: int, column: int = 1) -> None:
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


class SweepFormatError(InputError):
    pass


# ---------------------------------------------------------------------------
# Numeric domain errors (exit code 3)
# ---------------------------------------------------------------------------


class NumericDomainError(QScatterError, ValueError):
    exit_code = 3

    def __init__(self, message: str, *, ell: int | None = None) -> None:
        if ell is not None:
            message = f"mode ell={ell}: {message}"
        super().__init__(message)
        self.ell = ell


class SingularMatchingError(NumericDomainError):
    pass


class DegenerateMatchingError(SingularMatchingError):
    """Gamma^(1) is 0/0 (exact hard-sphere parameters)."""


class UnmatchableError(NumericDomainError):
    pass


class SaturatedPolarizationError(NumericDomainError):
    """|y_ell(kR)| < 1, so sin(Theta) = 1/y has no real solution."""

    def __init__(self, ell: int, kR: float, y_value: float) -> None:
        super().__init__(
            f"|y_ell(kR)| = {abs(y_value):.6g} < 1 at kR={kR:.6g}; "
            "polarization angle is saturated",
            ell=ell,
        )
        self.kR = kR
        self.y_value = y_value
