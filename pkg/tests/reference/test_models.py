# ABOUTME: Tests for reference result and error curve models
# ABOUTME: Validates error invariants and exactness flags

import numpy as np
import pytest

from app.errors import UsageError
from app.integrators.models import Trajectory
from app.reference.models import ErrorCurve, ReferenceResult


def test_error_curve_max_error():
    """max_error is the largest sampled error"""
    curve = ErrorCurve(times=[0.0, 1.0, 2.0], errors=[0.0, 3e-7, 1e-7], h=0.1, method_name="rk4", system_name="decay")

    assert curve.max_error == pytest.approx(3e-7)


def test_error_curve_rejects_negative_errors():
    """Errors are norms"""
    with pytest.raises(UsageError):
        ErrorCurve(times=[0.0], errors=[-1.0], h=0.1, method_name="rk4", system_name="decay")


def test_error_curve_rejects_length_mismatch():
    """One error per time"""
    with pytest.raises(UsageError):
        ErrorCurve(times=[0.0, 1.0], errors=[0.0], h=0.1, method_name="rk4", system_name="decay")


def test_reference_result_exactness():
    """Exact flows are recognized by their trajectory label"""
    trajectory = Trajectory(np.array([1.0]), np.array([[0.5]]), None, "decay", "exact")

    assert ReferenceResult(trajectory=trajectory, certificate=0.0).is_exact
    refined = Trajectory(np.array([1.0]), np.array([[0.5]]), None, "vdp", "reference")
    assert not ReferenceResult(trajectory=refined, certificate=1e-12, h_ref=1e-4, refinements=2).is_exact
