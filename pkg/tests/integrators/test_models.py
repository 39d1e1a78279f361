# ABOUTME: Tests for the Trajectory model and grid snapping
# ABOUTME: Validates shape checks, read-only arrays and query sampling

import numpy as np
import pytest

from app.errors import UsageError
from app.integrators.models import Trajectory, snap_indices


def _trajectory(h=0.5) -> Trajectory:
    times = np.array([0.0, 0.5, 1.0, 1.5, 2.0])
    states = np.column_stack([times, -times])
    return Trajectory(times=times, states=states, h=h, system_name="line", method_name="exact")


def test_trajectory_exposes_endpoints():
    """t0, t_final, final_state and dimension come from the arrays"""
    trajectory = _trajectory()

    assert (trajectory.t0, trajectory.t_final, trajectory.dimension, len(trajectory)) == (0.0, 2.0, 2, 5)
    assert trajectory.final_state.tolist() == [2.0, -2.0]


def test_trajectory_arrays_are_read_only():
    """Stored arrays cannot be modified in place"""
    trajectory = _trajectory()

    with pytest.raises(ValueError):
        trajectory.states[0, 0] = 1.0


def test_trajectory_rejects_mismatched_shapes():
    """One state row per time"""
    with pytest.raises(UsageError):
        Trajectory(np.array([0.0, 1.0]), np.zeros((3, 1)), None, "s", "m")


def test_trajectory_rejects_non_increasing_times():
    """Times must strictly increase"""
    with pytest.raises(UsageError):
        Trajectory(np.array([0.0, 1.0, 1.0]), np.zeros((3, 1)), None, "s", "m")


def test_trajectory_rejects_non_uniform_grid():
    """Interior spacing must equal h"""
    times = np.array([0.0, 0.5, 1.2, 1.5])
    with pytest.raises(UsageError):
        Trajectory(times, np.zeros((4, 1)), 0.5, "s", "m")


def test_trajectory_allows_short_last_step():
    """Only the last step may differ from h"""
    times = np.array([0.0, 0.3, 0.6, 0.3 * 3, 1.0])
    trajectory = Trajectory(times, np.zeros((5, 1)), 0.3, "s", "m")

    assert trajectory.t_final == 1.0


def test_trajectory_rejects_non_finite_states():
    """NaN states never make it into a trajectory"""
    with pytest.raises(UsageError):
        Trajectory(np.array([0.0, 1.0]), np.array([[0.0], [np.nan]]), None, "s", "m")


def test_snap_indices_nearest_grid_point():
    """Queries move to the nearest grid time"""
    times = np.array([0.0, 0.5, 1.0, 1.5, 2.0])
    idx, snapped = snap_indices(times, [0.0, 0.74, 0.76, 2.0], 0.5)

    assert idx.tolist() == [0, 1, 2, 4]
    assert snapped.tolist() == [0.0, 0.5, 1.0, 2.0]


def test_snap_indices_rejects_out_of_range():
    """Queries outside the grid are usage errors"""
    times = np.array([0.0, 0.5, 1.0])
    with pytest.raises(UsageError):
        snap_indices(times, [1.2], 0.5)
    with pytest.raises(UsageError):
        snap_indices(times, [-0.1], 0.5)


def test_sample_uniform_grid():
    """Sampling snaps and returns the matching states"""
    snapped, states = _trajectory().sample([0.6, 2.0])

    assert snapped.tolist() == [0.5, 2.0]
    assert states.tolist() == [[0.5, -0.5], [2.0, -2.0]]


def test_sample_reference_needs_exact_times():
    """Trajectories without h only answer at their own sample times"""
    trajectory = _trajectory(h=None)

    _, states = trajectory.sample([1.0])
    assert states.tolist() == [[1.0, -1.0]]
    with pytest.raises(UsageError):
        trajectory.sample([0.75])
