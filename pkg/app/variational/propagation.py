# ABOUTME: Joint integration of state and variational equation, step by step
# ABOUTME: Ordered, renormalized products of transition matrices Phi(t_n, t_j)

import logging

import numpy as np

from app.debug import debug_log
from app.errors import BlowUpError, UsageError
from app.integrators.models import Trajectory
from app.integrators.stepper import jacobian_function, rk_advance, time_grid
from app.integrators.tableau import Method
from app.systems.models import StateVector, System, state_vector
from app.variational.models import ScaledMatrix, TransitionSequence

log = logging.getLogger(__name__)


def transition_sequence(
    method: Method,
    system: System,
    x0: StateVector,
    t0: float,
    t_final: float,
    h: float,
) -> TransitionSequence:
    """
    Integrate (x, Psi) with Psi reset to I at the start of every step.

    The base trajectory is bitwise identical to integrate() with the same
    arguments; M_j = Psi(t_{j+1}).
    """
    times = time_grid(t0, t_final, h)
    x = state_vector(x0, system.dimension)
    jacobian = jacobian_function(system)
    n = times.shape[0] - 1
    d = system.dimension
    states = np.empty((n + 1, d))
    steps = np.empty((n, d, d))
    states[0] = x
    debug_log(f"{method.name} variational on {system.name}: {n} steps of h={h:g}", "VARIATIONAL")
    with np.errstate(over="ignore", invalid="ignore"):
        for j in range(n):
            h_j = h if j < n - 1 else times[n] - times[n - 1]
            try:
                x, m = rk_advance(method, system, times[j], x, h_j, jacobian)
            except BlowUpError as e:
                log.warning(f"Variational {method.name} on {system.name} blew up at step {j}")
                raise e.at_step(j) from None
            states[j + 1] = x
            steps[j] = m
    base = Trajectory(
        times=times,
        states=states,
        h=h,
        system_name=system.name,
        method_name=method.name,
    )
    return TransitionSequence(base=base, steps=steps)


def transition(seq: TransitionSequence, j: int, n: int) -> ScaledMatrix:
    """
    Phi(t_n, t_j) = M_{n-1} ... M_j, renormalized after every multiply.

    Raises:
        UsageError: unless 0 <= j <= n <= len(seq)
    """
    if not (0 <= j <= n <= len(seq)):
        raise UsageError(f"Need 0 <= j <= n <= {len(seq)}, got j={j}, n={n}")
    product = ScaledMatrix.identity(seq.dimension)
    for k in range(j, n):
        product = ScaledMatrix(seq.steps[k] @ product.mantissa, product.log_scale)
    return product
