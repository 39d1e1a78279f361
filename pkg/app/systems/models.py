# ABOUTME: Data models for ODE systems and state vectors
# ABOUTME: A System bundles f(t, x), its Jacobian, optional exact flow and default x0

from dataclasses import dataclass, field
from typing import Callable, Literal, Optional

import numpy as np
import numpy.typing as npt

from app.errors import UsageError

StateVector = npt.NDArray[np.float64]
Matrix = npt.NDArray[np.float64]

Rhs = Callable[[float, StateVector], StateVector]
JacobianFn = Callable[[float, StateVector], Matrix]
ExactFlow = Callable[[float, StateVector], StateVector]

Regime = Literal["fixed-point", "cycle", "torus", "neutral", "unstable", "chaotic", "user"]


def state_vector(components, dimension: Optional[int] = None) -> StateVector:
    """
    Build a finite float64 state vector.

    Args:
        components: Sequence of real numbers
        dimension: Expected length, checked when given

    Returns:
        1-D float64 array (a fresh copy)
    """
    x = np.array(components, dtype=np.float64).reshape(-1)
    if dimension is not None and x.shape[0] != dimension:
        raise UsageError(f"State has length {x.shape[0]}, expected {dimension}")
    if not np.all(np.isfinite(x)):
        raise UsageError(f"State vector must be finite, got {x.tolist()}")
    return x


@dataclass(frozen=True)
class System:
    """
    ODE x' = f(t, x) in R^d.

    f is assumed continuous in t and locally Lipschitz in x (several times
    differentiable where the Jacobian is used). Nothing checks this.
    """
    name: str
    dimension: int
    rhs: Rhs
    default_x0: StateVector
    jacobian: Optional[JacobianFn] = None
    exact: Optional[ExactFlow] = None  # flow from time 0: exact(t, x0) = x(t)
    description: str = ""
    regime: Regime = "user"
    autonomous: bool = True
    max_study_horizon: Optional[float] = None
    parameters: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.dimension < 1:
            raise UsageError(f"Dimension must be positive, got {self.dimension}")
        x0 = state_vector(self.default_x0, self.dimension)
        x0.setflags(write=False)
        object.__setattr__(self, "default_x0", x0)

    def __str__(self) -> str:
        return f"{self.name} (d={self.dimension}, {self.regime})"

    @property
    def has_exact(self) -> bool:
        return self.exact is not None

    def exact_at(self, t: float, x0: StateVector) -> StateVector:
        """Exact flow from time 0, returning x0 itself at t = 0."""
        if self.exact is None:
            raise UsageError(f"System '{self.name}' has no exact flow")
        if t == 0.0:
            return np.array(x0, dtype=np.float64)
        return np.asarray(self.exact(t, x0), dtype=np.float64)
