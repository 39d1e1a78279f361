# ABOUTME: Exception hierarchy shared by all modules
# ABOUTME: Each error carries the CLI exit code it maps to

from typing import Optional


class ConditioningError(Exception):
    """Base class for every error raised by the app package."""

    exit_code = 2


class UsageError(ConditioningError, ValueError):
    """Caller broke a precondition: bad arguments, dimensions, indices or flags."""

    exit_code = 1


class NumericalError(ConditioningError):
    """Computation failed numerically."""

    exit_code = 2


class NumericalDomainError(NumericalError):
    """Right-hand side or Jacobian produced non-finite values."""

    def __init__(self, system_name: str, t: float, x, what: str = "rhs"):
        self.system_name = system_name
        self.t = t
        self.x = list(x)
        super().__init__(
            f"{what} of system '{system_name}' is not finite at t={t!r}, x={self.x!r}"
        )


class BlowUpError(NumericalError):
    """An integration stage became non-finite."""

    def __init__(self, t: float, method: str, h: float, step_index: Optional[int] = None):
        self.t = t
        self.method = method
        self.h = h
        self.step_index = step_index
        where = f" at step {step_index}" if step_index is not None else ""
        super().__init__(f"{method} blew up{where} (t={t!r}, h={h!r})")

    def at_step(self, step_index: int) -> "BlowUpError":
        """Copy of this error tagged with the step index where it happened."""
        return BlowUpError(self.t, self.method, self.h, step_index)


class ReferencePrecisionError(NumericalError):
    """Reference solution could not be certified to the required accuracy."""
