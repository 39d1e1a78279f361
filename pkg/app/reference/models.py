# ABOUTME: Data models for reference solutions and global-error curves
# ABOUTME: A certificate bounds the reference's own inaccuracy

from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from app.errors import UsageError
from app.integrators.models import Trajectory


@dataclass(frozen=True)
class ReferenceResult:
    """Reference trajectory sampled at query times, with its accuracy certificate."""
    trajectory: Trajectory
    certificate: float
    h_ref: float = 0.0  # 0.0 for exact flows
    refinements: int = 0

    @property
    def is_exact(self) -> bool:
        return self.trajectory.method_name == "exact"


@dataclass(frozen=True)
class ErrorCurve:
    """Euclidean global error ||x~(t) - x_ref(t)|| at query times."""
    times: npt.NDArray[np.float64]
    errors: npt.NDArray[np.float64]
    h: float
    method_name: str
    system_name: str
    reference_certificate: float = 0.0

    def __post_init__(self):
        times = np.array(self.times, dtype=np.float64).reshape(-1)
        errors = np.array(self.errors, dtype=np.float64).reshape(-1)
        if times.shape != errors.shape:
            raise UsageError(f"{times.size} times but {errors.size} errors")
        if np.any(np.isnan(errors)) or np.any(errors < 0):
            raise UsageError("Errors must be nonnegative")
        times.setflags(write=False)
        errors.setflags(write=False)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "errors", errors)

    @property
    def max_error(self) -> float:
        return float(np.max(self.errors)) if self.errors.size else 0.0
