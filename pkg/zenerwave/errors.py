"""Exception types for zenerwave.

Every error carries the context needed to report it without a traceback: the
offending Laplace variable, the failing (x, t) cell or the run-spec location.
Inadmissible material parameters are reported through a ValidationReport
verdict and never raise.
"""

from __future__ import annotations

from pathlib import Path


class ZenerwaveError(Exception):
    """Base class for all zenerwave errors.

    Attributes:
        message: Human-readable error message.
        original_error: The original exception that was caught, if any.
    """

    def __init__(self, message: str, original_error: Exception | None = None):
        self.message = message
        self.original_error = original_error
        super().__init__(message)


class ParameterError(ZenerwaveError, ValueError):
    """Material parameters or orders outside their domain."""


class EvaluationError(ZenerwaveError, ArithmeticError):
    """A Laplace symbol vanished where the model requires it nonzero.

    Attributes:
        s: The complex argument at which evaluation failed.
    """

    def __init__(self, s: complex, message: str):
        self.s = s
        super().__init__(f"s={s!r}: {message}")


class ConvergenceError(ZenerwaveError, ArithmeticError):
    """An inversion integral could not be brought within tolerance.

    Attributes:
        x: Position of the failing cell (None for material kernels).
        t: Time of the failing cell.
        limit: The truncation point or refinement level that was reached.
    """

    def __init__(
        self,
        message: str,
        x: float | None = None,
        t: float | None = None,
        limit: float | None = None,
    ):
        self.x = x
        self.t = t
        self.limit = limit
        where = f"x={x!r}, t={t!r}" if x is not None else f"t={t!r}"
        super().__init__(f"{where}: {message}")
        self.message = message


class SpecError(ZenerwaveError):
    """Run specification could not be read or does not match the schema.

    Attributes:
        path: Path to the spec file, if it came from disk.
        line: 1-based line of a JSON syntax error, if known.
        column: 1-based column of a JSON syntax error, if known.
    """

    def __init__(
        self,
        message: str,
        path: Path | None = None,
        line: int | None = None,
        column: int | None = None,
        original_error: Exception | None = None,
    ):
        self.path = path
        self.line = line
        self.column = column
        location = ""
        if path is not None:
            location = str(path)
            if line is not None:
                location += f":{line}:{column}"
            location += ": "
        super().__init__(f"{location}{message}", original_error)
        self.message = message
