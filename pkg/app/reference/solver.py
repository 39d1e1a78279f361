# ABOUTME: Ground-truth trajectories x(t) and global-error curves against them
# ABOUTME: Step-halving RK4 certifies itself by agreement of consecutive refinements

import logging
import math

import numpy as np

from app.config import Config
from app.debug import debug_log
from app.errors import ReferencePrecisionError, UsageError
from app.integrators.models import Trajectory
from app.integrators.stepper import integrate
from app.integrators.tableau import RK4
from app.reference.models import ErrorCurve, ReferenceResult
from app.systems.models import StateVector, System, state_vector

log = logging.getLogger(__name__)


def _check_queries(t0: float, t_final: float, query_times) -> np.ndarray:
    q = np.asarray(query_times, dtype=np.float64).reshape(-1)
    if q.size == 0:
        raise UsageError("Need at least one query time")
    if q.size > 1 and not np.all(np.diff(q) > 0):
        raise UsageError("Reference query times must be strictly increasing")
    slack = 1e-12 * max(1.0, abs(t0), abs(t_final))
    if q[0] < t0 - slack or q[-1] > t_final + slack:
        raise UsageError(f"Query times must lie in [{t0!r}, {t_final!r}]")
    return q


def _exact_samples(system: System, x0: StateVector, t0: float, q: np.ndarray) -> np.ndarray:
    return np.array([system.exact_at(t - t0, x0) for t in q])


def _rk4_samples(system: System, x0: StateVector, t0: float, q: np.ndarray, h_ref: float) -> np.ndarray:
    """RK4 segment by segment so every query time is hit exactly."""
    samples = np.empty((q.size, system.dimension))
    x, t = x0, t0
    for i, tq in enumerate(q):
        if tq > t:
            span = tq - t
            x = integrate(RK4, system, x, t, tq, min(h_ref, span)).final_state
            t = tq
        samples[i] = x
    return samples


def reference_trajectory(
    system: System,
    x0: StateVector,
    t0: float,
    t_final: float,
    query_times,
    rtol: float = Config.REFERENCE_RTOL,
    max_halvings: int = Config.REFERENCE_MAX_HALVINGS,
) -> ReferenceResult:
    """
    Reference solution x(t) at query times.

    Uses the exact flow when the system has one (autonomous systems at any
    t0, nonautonomous ones only from t0 = 0); certificate 0. Otherwise RK4
    starting at h_ref = (t_final - t0) / 10^4 and halving until consecutive
    refinements agree to rtol * (1 + max ||x||) at the query times.

    Raises:
        ReferencePrecisionError: no agreement within max_halvings halvings
    """
    if not t_final > t0:
        raise UsageError(f"t_final must exceed t0, got [{t0!r}, {t_final!r}]")
    if max_halvings < 1:
        raise UsageError(f"Need at least one halving, got {max_halvings}")
    x0 = state_vector(x0, system.dimension)
    q = _check_queries(t0, t_final, query_times)

    if system.has_exact and (system.autonomous or t0 == 0.0):
        states = _exact_samples(system, x0, t0, q)
        debug_log(f"{system.name}: exact reference at {q.size} times", "REFERENCE")
        return ReferenceResult(
            trajectory=Trajectory(q, states, None, system.name, "exact"),
            certificate=0.0,
        )

    h_ref = (t_final - t0) / Config.REFERENCE_BASE_DIVISIONS
    previous = _rk4_samples(system, x0, t0, q, h_ref)
    for halving in range(1, max_halvings + 1):
        h_ref *= 0.5
        current = _rk4_samples(system, x0, t0, q, h_ref)
        discrepancy = float(np.max(np.linalg.norm(current - previous, axis=1)))
        tolerance = rtol * (1.0 + float(np.max(np.linalg.norm(current, axis=1))))
        debug_log(
            f"{system.name}: h_ref={h_ref:.3g} discrepancy={discrepancy:.3g} tol={tolerance:.3g}",
            "REFERENCE",
        )
        if discrepancy < tolerance:
            return ReferenceResult(
                trajectory=Trajectory(q, current, None, system.name, "reference"),
                certificate=discrepancy,
                h_ref=h_ref,
                refinements=halving,
            )
        previous = current

    log.error(f"Reference for {system.name} on [{t0:g}, {t_final:g}] not certified")
    raise ReferencePrecisionError(
        f"Reference for '{system.name}' on [{t0!r}, {t_final!r}] missed tolerance "
        f"after {max_halvings} halvings (last discrepancy {discrepancy:.3g}, "
        f"tolerance {tolerance:.3g}); shrink the horizon or loosen study tolerances"
    )


def global_error(
    approx: Trajectory,
    reference: Trajectory,
    query_times,
    certificate: float = 0.0,
) -> ErrorCurve:
    """
    ||x~(t) - x_ref(t)|| at query times.

    Raises:
        UsageError: trajectories of different systems or dimensions, or
            different initial states when both start at the same time
    """
    if approx.system_name != reference.system_name:
        raise UsageError(
            f"Cannot compare '{approx.system_name}' with '{reference.system_name}'"
        )
    if approx.dimension != reference.dimension:
        raise UsageError("Trajectories have different dimensions")
    if approx.t0 == reference.t0 and not np.array_equal(approx.states[0], reference.states[0]):
        raise UsageError("Trajectories start from different initial states")
    times_a, states_a = approx.sample(query_times)
    _, states_r = reference.sample(query_times)
    errors = np.linalg.norm(states_a - states_r, axis=1)
    return ErrorCurve(
        times=times_a,
        errors=errors,
        h=approx.h if approx.h is not None else math.nan,
        method_name=approx.method_name,
        system_name=approx.system_name,
        reference_certificate=certificate,
    )
