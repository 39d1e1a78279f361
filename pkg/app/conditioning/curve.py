# ABOUTME: Computes E(t_q) by trapezoid quadrature of ||Phi(t_q, t_j)|| on the trajectory grid
# ABOUTME: Backward accumulation P <- P M_j, batched over all query times

import logging
import math

import numpy as np

from app.config import Config
from app.conditioning.models import DEFINITIONS, ConditioningCurve, Definition
from app.debug import debug_log
from app.errors import UsageError
from app.integrators.models import snap_indices
from app.variational.models import TransitionSequence
from app.variational.norms import NORM_KINDS, NormKind, batch_norm

log = logging.getLogger(__name__)


def default_query_times(t0: float, t_final: float, count: int = Config.DEFAULT_QUERIES) -> np.ndarray:
    """count uniform points in [t0, t_final], both ends included."""
    if count < 2:
        raise UsageError(f"Need at least 2 query points, got {count}")
    return np.linspace(t0, t_final, count)


def conditioning_curve(
    seq: TransitionSequence,
    query_times=None,
    norm: NormKind = "2",
    definition: Definition = "integral",
) -> ConditioningCurve:
    """
    E(t_q) = integral over [t0, t_q] of ||Phi(t_q, s)|| ds, trapezoid on the grid.

    For each query, P starts at I = Phi(t_q, t_q) and absorbs M_j for
    j = m-1 down to 0. All queries advance together, one batched product
    and one batched norm per grid step. A query whose partial product
    exceeds LOG_SCALE_LIMIT is rescaled together with its running sum,
    and the scale is carried in log_values.

    definition="sup" gives sup_s ||Phi(t_q, s)|| * (t_q - t0) instead.

    Raises:
        UsageError: query outside [t0, t_final], decreasing queries, unknown norm or definition
    """
    if norm not in NORM_KINDS:
        raise UsageError(f"Unknown norm '{norm}', expected one of {NORM_KINDS}")
    if definition not in DEFINITIONS:
        raise UsageError(f"Unknown definition '{definition}', expected one of {DEFINITIONS}")
    times = seq.base.times
    if query_times is None:
        query_times = default_query_times(times[0], times[-1])
    requested = np.asarray(query_times, dtype=np.float64).reshape(-1)
    if requested.size > 1 and np.any(np.diff(requested) < 0):
        raise UsageError("Query times must be increasing")
    idx, snapped = snap_indices(times, requested, seq.h)

    count = idx.shape[0]
    d = seq.dimension
    product = np.broadcast_to(np.eye(d), (count, d, d)).copy()
    # ||Phi(t_q, t_q)|| = ||I||
    unit = 1.0 if norm == "2" else math.sqrt(d)
    previous = np.full(count, unit)
    total = np.zeros(count)
    peak = np.full(count, unit)
    log_scale = np.zeros(count)
    limit = Config.LOG_SCALE_LIMIT
    last = int(idx.max()) if count else 0
    debug_log(f"E on {seq.system_name}: {count} queries over {last} steps", "CONDITION")

    for j in range(last - 1, -1, -1):
        # queries with m > j are active; idx is sorted so they form a suffix
        start = int(np.searchsorted(idx, j, side="right"))
        block = np.matmul(product[start:], seq.steps[j])
        norms = batch_norm(block, norm)
        weight = 0.5 * (times[j + 1] - times[j])
        total[start:] += weight * (previous[start:] + norms)
        np.maximum(peak[start:], norms, out=peak[start:])
        previous[start:] = norms
        product[start:] = block
        overflow = np.nonzero(norms > limit)[0]
        if overflow.size:
            rows = start + overflow
            factor = norms[overflow]
            product[rows] /= factor[:, None, None]
            previous[rows] /= factor
            total[rows] /= factor
            peak[rows] /= factor
            log_scale[rows] += np.log(factor)

    with np.errstate(divide="ignore", over="ignore"):
        if definition == "integral":
            values = total * np.exp(log_scale)
            log_values = np.log(total) + log_scale
        else:
            elapsed = snapped - times[0]
            values = peak * elapsed * np.exp(log_scale)
            log_values = np.log(peak) + np.log(elapsed) + log_scale
    values[idx == 0] = 0.0
    log_values[idx == 0] = -math.inf

    if count and np.any(log_scale > 0):
        log.info(f"E on {seq.system_name} used log scaling up to e^{log_scale.max():.1f}")
    return ConditioningCurve(
        query_times=snapped,
        values=values,
        log_values=log_values,
        h=seq.h,
        system_name=seq.system_name,
        method_name=seq.method_name,
        requested_times=requested,
        norm=norm,
        definition=definition,
    )

