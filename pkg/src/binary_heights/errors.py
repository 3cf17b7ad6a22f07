"""Exception hierarchy for height computations.

Library code raises these; only the CLI maps them to exit codes.
"""

from typing import Any, Optional


class HeightError(Exception):
    """Base class for every error raised by binary_heights."""


class DomainError(HeightError, ValueError):
    """Input outside the mathematical domain of an operation."""


class ZeroValueError(DomainError):
    """A nonzero rational or integer was required."""


class ZeroFormError(DomainError):
    """The zero form has no roots, heights or invariants."""


class SingularMatrixError(DomainError):
    """A transformation with determinant zero was supplied."""


class UnsupportedDegreeError(DomainError):
    """The operation is not available in this degree."""

    def __init__(self, degree: int, supported: str):
        self.degree = degree
        self.supported = supported
        super().__init__(f"degree {degree} is not supported (supported: {supported})")


class NotPrimeError(DomainError):
    """A prime was required."""


class NonPrimitiveError(DomainError):
    """The form vanishes identically modulo the prime."""


class NotSquarefreeError(DomainError):
    """The form has a repeated root where distinct roots are required."""


class NullconeError(DomainError):
    """Every invariant vanishes: the moduli point is undefined."""


class UnstableFormError(DomainError):
    """The form is not semistable, so the height is infinite."""


class PointOnDivisorError(DomainError):
    """The point lies on the hyperplane defining the local height."""


class FormParseError(DomainError):
    """A form string could not be parsed."""

    def __init__(self, message: str, text: str, position: int):
        self.text = text
        self.position = position
        super().__init__(f"{message} at position {position}: {text!r}")


class NumericalError(HeightError, RuntimeError):
    """A numerical procedure failed to reach its tolerance."""


class RootFindingError(NumericalError):
    """Polished roots do not reproduce the form within tolerance."""

    def __init__(self, message: str, form: Any = None, backward_error: Optional[float] = None):
        self.form = form
        self.backward_error = backward_error
        super().__init__(message)


class DivergenceError(NumericalError):
    """The Chow norm has infimum minus infinity on an unstable configuration."""


class NonConvergenceError(NumericalError):
    """The iteration cap was reached before convergence."""

    def __init__(self, message: str, last_iterate: Any = None, iterations: int = 0):
        self.last_iterate = last_iterate
        self.iterations = iterations
        super().__init__(message)


class CorpusError(HeightError, OSError):
    """A corpus file could not be read or written."""
