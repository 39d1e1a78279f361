# ABOUTME: Classifies the long-time growth of E(t) as constant, linear or exponential
# ABOUTME: Deterministic rules on the tail window [T/2, T], applied in a fixed order

import logging
from typing import Optional

import numpy as np

from app.conditioning.models import (
    ConditioningCurve,
    Fit,
    GrowthClass,
    GrowthReport,
    GrowthThresholds,
)
from app.errors import UsageError

log = logging.getLogger(__name__)


def fit_line(x: np.ndarray, y: np.ndarray) -> Fit:
    """Least-squares line y = slope * x + intercept with r^2; undefined on bad data."""
    if x.size < 2 or not np.all(np.isfinite(y)):
        return Fit.undefined()
    slope, intercept = np.polyfit(x, y, 1)
    residual = y - (slope * x + intercept)
    ss_res = float(np.sum(residual * residual))
    centered = y - np.mean(y)
    ss_tot = float(np.sum(centered * centered))
    if ss_tot == 0.0:
        r_squared = 1.0 if ss_res == 0.0 else 0.0
    else:
        r_squared = 1.0 - ss_res / ss_tot
    return Fit(float(slope), float(intercept), r_squared)


def upper_hull(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Least concave majorant of (x, y) sampled back at x; x must be increasing."""
    if x.size < 3:
        return y.copy()
    hull: list[int] = []
    for i in range(x.size):
        while len(hull) >= 2:
            a, b = hull[-2], hull[-1]
            # b lies on or below the chord a -> i
            if (y[b] - y[a]) * (x[i] - x[a]) <= (y[i] - y[a]) * (x[b] - x[a]):
                hull.pop()
            else:
                break
        hull.append(i)
    return np.interp(x, x[hull], y[hull])


class GrowthClassifier:
    """
    Growth verdicts for conditioning curves.

    Rules, first match wins, on the tail t in [t_mid, T]:
    1. constancy ratio (E(T) - E(t_mid)) / E(T) below the threshold -> Constant
    2. linear fit r^2 above the cutoff and exp-fit rate * tail length < 1 -> Linear
    3. exp fit on log E with r^2 above the cutoff and rate above min_rate -> Exponential
    4. otherwise Undetermined

    With thresholds.envelope the fits use the running maximum of E, the
    smallest nondecreasing upper bound of the sampled curve. The exp fit
    uses the upper concave hull of log E over the tail, which bridges the
    staircase of loop-scale bursts a chaotic flow leaves in the running
    maximum. A concave log curve, as from linear or polynomial growth, is
    its own hull.
    """

    def __init__(self, thresholds: Optional[GrowthThresholds] = None):
        self.thresholds = thresholds or GrowthThresholds()

    def classify(self, curve: ConditioningCurve) -> GrowthReport:
        th = self.thresholds
        if len(curve) < th.min_points:
            raise UsageError(
                f"Need at least {th.min_points} query points to classify, got {len(curve)}"
            )
        times = curve.query_times
        values = curve.values
        log_values = curve.log_values
        if th.envelope:
            values = np.maximum.accumulate(values)
            log_values = np.maximum.accumulate(log_values)

        t_first, t_final = float(times[0]), float(times[-1])
        if t_final <= t_first:
            raise UsageError("Query times must span a positive horizon")
        t_mid = t_first + 0.5 * (t_final - t_first)
        tail = times >= t_mid
        if np.count_nonzero(tail) < 2:
            raise UsageError("Tail window [T/2, T] holds fewer than 2 query points")

        constancy = self._constancy_ratio(times, values, log_values, t_mid)
        linear = fit_line(times[tail], values[tail])
        positive = tail & np.isfinite(log_values)
        exp_times, exp_logs = times[positive], log_values[positive]
        if th.envelope and exp_logs.size:
            exp_logs = upper_hull(exp_times, exp_logs)
        exponential = fit_line(exp_times, exp_logs)
        tail_length = t_final - t_mid

        if constancy < th.constancy:
            growth = GrowthClass.CONSTANT
        elif (
            linear.r_squared >= th.r_squared
            and np.isfinite(exponential.slope)
            and exponential.slope * tail_length < 1.0
        ):
            growth = GrowthClass.LINEAR
        elif exponential.r_squared >= th.r_squared and exponential.slope > th.min_rate:
            growth = GrowthClass.EXPONENTIAL
        else:
            growth = GrowthClass.UNDETERMINED

        report = GrowthReport(
            growth_class=growth,
            tail_linear_fit=linear,
            tail_exp_fit=exponential,
            constancy_ratio=constancy,
            thresholds=th,
            tail_start=t_mid,
            t_final=t_final,
        )
        log.info(f"{curve.system_name or 'curve'}: {report}")
        return report

    @staticmethod
    def _constancy_ratio(times, values, log_values, t_mid: float) -> float:
        """(E(T) - E(t_mid)) / E(T), interpolating E at t_mid."""
        if np.all(np.isfinite(values)):
            end = float(values[-1])
            if end == 0.0:
                return 0.0
            mid = float(np.interp(t_mid, times, values))
            return (end - mid) / end
        # magnitudes beyond float range: work with logs
        mid_log = float(np.interp(t_mid, times, log_values))
        return float(-np.expm1(mid_log - log_values[-1]))


def classify_growth(
    curve: ConditioningCurve, params: Optional[GrowthThresholds] = None
) -> GrowthReport:
    """Classify the growth of E(t); see GrowthClassifier for the rules."""
    return GrowthClassifier(params).classify(curve)
