# ABOUTME: Tests for conditioning data models
# ABOUTME: Validates curve invariants, scaling and threshold ranges

import math

import numpy as np
import pytest

from app.conditioning.models import ConditioningCurve, Fit, GrowthClass, GrowthThresholds
from app.errors import UsageError


def test_curve_computes_logs_when_missing():
    """log_values default to log(values), -inf at zero"""
    curve = ConditioningCurve(query_times=[0.0, 1.0], values=[0.0, math.e])

    assert curve.log_values[0] == -math.inf
    assert curve.log_values[1] == pytest.approx(1.0)


def test_curve_rejects_negative_or_nan_values():
    """E is a nonnegative quantity"""
    with pytest.raises(UsageError):
        ConditioningCurve(query_times=[0.0, 1.0], values=[0.0, -1.0])
    with pytest.raises(UsageError):
        ConditioningCurve(query_times=[0.0, 1.0], values=[0.0, np.nan])


def test_curve_rejects_mismatched_lengths():
    """One value per query time"""
    with pytest.raises(UsageError):
        ConditioningCurve(query_times=[0.0, 1.0, 2.0], values=[0.0, 1.0])


def test_curve_arrays_are_read_only():
    """Stored arrays cannot be mutated"""
    curve = ConditioningCurve(query_times=[0.0, 1.0], values=[0.0, 1.0])

    with pytest.raises(ValueError):
        curve.values[0] = 3.0


def test_scaled_keeps_metadata():
    """Scaling multiplies values and shifts logs"""
    curve = ConditioningCurve(query_times=[0.0, 1.0], values=[0.0, 2.0], system_name="decay")
    scaled = curve.scaled(10.0)

    assert scaled.values.tolist() == [0.0, 20.0]
    assert scaled.log_values[1] == pytest.approx(math.log(20.0))
    assert scaled.system_name == "decay"
    with pytest.raises(UsageError):
        curve.scaled(0.0)


def test_threshold_validation():
    """Thresholds outside their ranges are refused"""
    with pytest.raises(UsageError):
        GrowthThresholds(constancy=0.0)
    with pytest.raises(UsageError):
        GrowthThresholds(r_squared=1.5)
    with pytest.raises(UsageError):
        GrowthThresholds(min_rate=-0.1)


def test_threshold_defaults():
    """Defaults are 0.05, 0.99 and 0.1"""
    thresholds = GrowthThresholds()

    assert (thresholds.constancy, thresholds.r_squared, thresholds.min_rate) == (0.05, 0.99, 0.1)
    assert thresholds.envelope is True


def test_growth_class_values():
    """Class names are the strings printed by the CLI"""
    assert [c.value for c in GrowthClass] == ["Constant", "Linear", "Exponential", "Undetermined"]
    assert math.isnan(Fit.undefined().slope)
