"""Exception hierarchy shared by all modules.

Each exception carries the CLI exit code it maps to, so the command-line
front end can translate failures without knowing where they came from.
"""


class PolarMaassError(Exception):
    """Base class for all library errors."""

    exit_code = 1


class DomainError(PolarMaassError, ValueError):
    """Input lies outside the domain of the requested operation."""

    exit_code = 2


class SingularPointError(PolarMaassError, ArithmeticError):
    """Evaluation point is (numerically) a pole of the function."""

    exit_code = 3


class PrecisionError(PolarMaassError, ArithmeticError):
    """A numerical procedure could not reach its accuracy target."""

    exit_code = 4


class ContourError(PrecisionError):
    """Angular Fourier coefficients failed to stabilise on a contour."""
