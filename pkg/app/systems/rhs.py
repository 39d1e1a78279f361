# ABOUTME: Evaluation of right-hand sides and Jacobians with precondition checks
# ABOUTME: Falls back to central finite differences when no analytic Jacobian exists

import numpy as np

from app.config import Config
from app.errors import NumericalDomainError, UsageError
from app.systems.models import Matrix, StateVector, System

# cbrt(machine epsilon), the usual optimum for central differences
FD_STEP = float(np.cbrt(np.finfo(np.float64).eps))


def _check_point(system: System, t: float, x) -> StateVector:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1 or x.shape[0] != system.dimension:
        raise UsageError(
            f"System '{system.name}' has dimension {system.dimension}, got state of shape {x.shape}"
        )
    if not np.isfinite(t) or not np.all(np.isfinite(x)):
        raise UsageError(f"Non-finite input for '{system.name}': t={t!r}, x={x.tolist()}")
    return x


def evaluate(system: System, t: float, x: StateVector) -> StateVector:
    """
    Evaluate f(t, x).

    Raises:
        UsageError: x has the wrong length or t, x are not finite
        NumericalDomainError: f(t, x) is not finite
    """
    x = _check_point(system, t, x)
    fx = np.asarray(system.rhs(t, x), dtype=np.float64)
    if fx.shape != (system.dimension,):
        raise UsageError(
            f"rhs of '{system.name}' returned shape {fx.shape}, expected ({system.dimension},)"
        )
    if not np.all(np.isfinite(fx)):
        raise NumericalDomainError(system.name, t, x)
    return fx


def finite_difference_jacobian(system: System, t: float, x: StateVector) -> Matrix:
    """Central differences with per-component step cbrt(eps) * max(1, |x_i|)."""
    x = np.asarray(x, dtype=np.float64)
    d = system.dimension
    jac = np.empty((d, d))
    for i in range(d):
        delta = FD_STEP * max(1.0, abs(x[i]))
        forward = x.copy()
        backward = x.copy()
        forward[i] += delta
        backward[i] -= delta
        # actual spacing after rounding
        spacing = forward[i] - backward[i]
        jac[:, i] = (np.asarray(system.rhs(t, forward)) - np.asarray(system.rhs(t, backward))) / spacing
    return jac


def jacobian_at(system: System, t: float, x: StateVector) -> Matrix:
    """
    Jacobian df/dx at (t, x): analytic when the system provides one,
    central finite differences otherwise.
    """
    x = _check_point(system, t, x)
    if system.jacobian is not None:
        jac = np.asarray(system.jacobian(t, x), dtype=np.float64)
    else:
        jac = finite_difference_jacobian(system, t, x)
    if jac.shape != (system.dimension, system.dimension):
        raise UsageError(f"Jacobian of '{system.name}' has shape {jac.shape}")
    if not np.all(np.isfinite(jac)):
        raise NumericalDomainError(system.name, t, x, what="Jacobian")
    return jac


def relative_discrepancy(a: Matrix, b: Matrix) -> float:
    """Max entrywise difference over max(1, largest entry magnitude)."""
    scale = max(1.0, float(np.max(np.abs(b))), float(np.max(np.abs(a))))
    return float(np.max(np.abs(a - b))) / scale


def check_jacobian(
    system: System,
    rng: np.random.Generator,
    points: int = Config.JACOBIAN_CHECK_POINTS,
    radius: float = Config.JACOBIAN_CHECK_RADIUS,
    t: float = 0.0,
) -> float:
    """
    Gradient check of the analytic Jacobian.

    Compares against finite differences at default_x0 and at `points` random
    points in a box of half-width `radius` around it.

    Returns:
        Largest relative discrepancy, 0.0 when the system has no analytic Jacobian
    """
    if system.jacobian is None:
        return 0.0
    x0 = system.default_x0
    samples = [x0] + [x0 + rng.uniform(-radius, radius, size=system.dimension) for _ in range(points)]
    worst = 0.0
    for x in samples:
        analytic = jacobian_at(system, t, x)
        numeric = finite_difference_jacobian(system, t, x)
        worst = max(worst, relative_discrepancy(numeric, analytic))
    return worst
