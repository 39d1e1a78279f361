# ABOUTME: One explicit Runge-Kutta step and fixed-step integration over [t0, t_final]
# ABOUTME: The same stage arithmetic optionally propagates the variational equation

import logging
import math
from typing import Callable, Optional

import numpy as np

from app.debug import debug_log
from app.errors import BlowUpError, UsageError
from app.integrators.models import Trajectory
from app.integrators.tableau import Method
from app.systems.models import Matrix, StateVector, System, state_vector
from app.systems.rhs import finite_difference_jacobian

log = logging.getLogger(__name__)

# ceil() slack so a span that is a multiple of h up to roundoff gets no sliver step
_STEP_COUNT_SLACK = 1e-9


def jacobian_function(system: System) -> Callable[[float, StateVector], Matrix]:
    """Analytic Jacobian when available, finite differences otherwise."""
    if system.jacobian is not None:
        return system.jacobian
    return lambda t, x: finite_difference_jacobian(system, t, x)


def _weighted_sum(coefficients, terms):
    """sum_j coefficients[j] * terms[j], left to right, skipping zero weights."""
    total = None
    for coefficient, term in zip(coefficients, terms):
        if coefficient == 0.0:
            continue
        weighted = coefficient * term
        total = weighted if total is None else total + weighted
    return total


def rk_advance(
    method: Method,
    system: System,
    t: float,
    x: StateVector,
    h: float,
    jacobian: Optional[Callable[[float, StateVector], Matrix]] = None,
) -> tuple[StateVector, Optional[Matrix]]:
    """
    Advance one step; with a Jacobian, also integrate Psi' = J Psi from Psi = I.

    Jacobians are evaluated at the stage states, so the transition matrix
    is the method applied to the augmented system (x, Psi).

    Returns:
        (x_next, M) where M approximates Phi(t + h, t), or None without a Jacobian
    """
    rhs = system.rhs
    k_stages = []
    l_stages = []
    identity = np.eye(system.dimension) if jacobian is not None else None
    for i in range(method.stages):
        t_i = t + method.c[i] * h
        x_incr = _weighted_sum(method.a[i], k_stages)
        x_i = x if x_incr is None else x + h * x_incr
        k_i = np.asarray(rhs(t_i, x_i), dtype=np.float64)
        if not np.all(np.isfinite(k_i)):
            raise BlowUpError(t, method.name, h)
        k_stages.append(k_i)
        if jacobian is not None:
            psi_incr = _weighted_sum(method.a[i], l_stages)
            psi_i = identity if psi_incr is None else identity + h * psi_incr
            l_i = np.asarray(jacobian(t_i, x_i), dtype=np.float64) @ psi_i
            if not np.all(np.isfinite(l_i)):
                raise BlowUpError(t, method.name, h)
            l_stages.append(l_i)

    x_incr = _weighted_sum(method.b, k_stages)
    x_next = x if x_incr is None else x + h * x_incr
    if not np.all(np.isfinite(x_next)):
        raise BlowUpError(t, method.name, h)
    if jacobian is None:
        return x_next, None
    psi_incr = _weighted_sum(method.b, l_stages)
    transition = identity if psi_incr is None else identity + h * psi_incr
    return x_next, transition


def step(method: Method, system: System, t: float, x: StateVector, h: float) -> StateVector:
    """
    One explicit Runge-Kutta step of size h.

    Raises:
        UsageError: h <= 0 or x not a finite state of the right dimension
        BlowUpError: a stage became non-finite
    """
    if not (h > 0 and math.isfinite(h)):
        raise UsageError(f"Step size must be positive and finite, got {h!r}")
    x = state_vector(x, system.dimension)
    with np.errstate(over="ignore", invalid="ignore"):
        x_next, _ = rk_advance(method, system, t, x, h)
    return x_next


def time_grid(t0: float, t_final: float, h: float) -> np.ndarray:
    """
    Uniform grid t0 + j*h ending exactly at t_final.

    The last step is shortened when (t_final - t0) is not a multiple of h.
    """
    for name, value in (("t0", t0), ("t_final", t_final), ("h", h)):
        if not math.isfinite(value):
            raise UsageError(f"{name} must be finite, got {value!r}")
    span = t_final - t0
    if span <= 0:
        raise UsageError(f"t_final must exceed t0, got [{t0!r}, {t_final!r}]")
    if h <= 0:
        raise UsageError(f"Step size must be positive, got {h!r}")
    if h > span * (1.0 + 1e-12):
        raise UsageError(f"Step size {h!r} exceeds the horizon {span!r}")
    n = max(1, math.ceil(span / h - _STEP_COUNT_SLACK))
    times = t0 + h * np.arange(n + 1, dtype=np.float64)
    times[-1] = t_final
    return times


def integrate(
    method: Method,
    system: System,
    x0: StateVector,
    t0: float,
    t_final: float,
    h: float,
) -> Trajectory:
    """
    Repeated steps from t0 to exactly t_final.

    Raises:
        UsageError: bad horizon, step size or initial state
        BlowUpError: a stage became non-finite; carries the step index
    """
    times = time_grid(t0, t_final, h)
    x = state_vector(x0, system.dimension)
    n = times.shape[0] - 1
    states = np.empty((n + 1, system.dimension))
    states[0] = x
    debug_log(f"{method.name} on {system.name}: {n} steps of h={h:g}", "INTEGRATE")
    with np.errstate(over="ignore", invalid="ignore"):
        for j in range(n):
            h_j = h if j < n - 1 else times[n] - times[n - 1]
            try:
                x, _ = rk_advance(method, system, times[j], x, h_j)
            except BlowUpError as e:
                log.warning(f"{method.name} on {system.name} blew up at step {j} (t={times[j]:g})")
                raise e.at_step(j) from None
            states[j + 1] = x
    return Trajectory(
        times=times,
        states=states,
        h=h,
        system_name=system.name,
        method_name=method.name,
    )
