# ABOUTME: Data models for transition matrices along a trajectory
# ABOUTME: ScaledMatrix keeps long products representable via a separate log scale

import math
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from app.errors import UsageError
from app.integrators.models import Trajectory

# mantissa 2-norm band
BAND_LOW = 0.5
BAND_HIGH = 2.0


def _norm_exponent(m: np.ndarray) -> int:
    """e with ||m||_2 = f * 2**e, f in [1/2, 1); m finite and nonzero."""
    from app.variational.norms import norm2

    # prescale by the largest entry so M^T M cannot overflow
    _, peak_exponent = math.frexp(float(np.max(np.abs(m))))
    _, rest = math.frexp(norm2(np.ldexp(m, -peak_exponent)))
    return peak_exponent + rest


@dataclass(frozen=True)
class ScaledMatrix:
    """
    Represents mantissa * exp(log_scale).

    Construction moves the mantissa into the 2-norm band [1/2, 2] by a power
    of two, so mantissa bits never change. A zero matrix keeps log_scale 0.
    """
    mantissa: npt.NDArray[np.float64]
    log_scale: float = 0.0

    def __post_init__(self):
        m = np.array(self.mantissa, dtype=np.float64)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise UsageError(f"ScaledMatrix needs a square matrix, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise UsageError("ScaledMatrix needs finite entries")
        log_scale = float(self.log_scale)
        if not np.any(m):
            log_scale = 0.0
        else:
            exponent = _norm_exponent(m)
            if exponent not in (0, 1):
                m = np.ldexp(m, -exponent)
                log_scale += exponent * math.log(2.0)
        m.setflags(write=False)
        object.__setattr__(self, "mantissa", m)
        object.__setattr__(self, "log_scale", log_scale)

    @classmethod
    def identity(cls, dimension: int) -> "ScaledMatrix":
        return cls(np.eye(dimension), 0.0)

    @classmethod
    def from_matrix(cls, m: np.ndarray) -> "ScaledMatrix":
        return cls(m, 0.0)

    @property
    def dimension(self) -> int:
        return self.mantissa.shape[0]

    def __matmul__(self, other: "ScaledMatrix") -> "ScaledMatrix":
        if not isinstance(other, ScaledMatrix):
            return NotImplemented
        return ScaledMatrix(self.mantissa @ other.mantissa, self.log_scale + other.log_scale)

    def represented(self) -> np.ndarray:
        """The plain matrix; entries overflow to inf for very large scales."""
        with np.errstate(over="ignore"):
            return self.mantissa * np.exp(self.log_scale)


@dataclass(frozen=True)
class TransitionSequence:
    """Per-step transition matrices M_j ~ Phi(t_{j+1}, t_j) along a base trajectory."""
    base: Trajectory
    steps: npt.NDArray[np.float64]

    def __post_init__(self):
        steps = np.array(self.steps, dtype=np.float64)
        d = self.base.dimension
        if steps.shape != (len(self.base) - 1, d, d):
            raise UsageError(
                f"Expected {len(self.base) - 1} transition matrices of size {d}x{d}, got {steps.shape}"
            )
        if not np.all(np.isfinite(steps)):
            raise UsageError("Transition matrices must be finite")
        steps.setflags(write=False)
        object.__setattr__(self, "steps", steps)

    def __len__(self) -> int:
        return self.steps.shape[0]

    @property
    def dimension(self) -> int:
        return self.base.dimension

    @property
    def h(self) -> float:
        return self.base.h

    @property
    def system_name(self) -> str:
        return self.base.system_name

    @property
    def method_name(self) -> str:
        return self.base.method_name
