# ABOUTME: Data model for trajectories on a time grid
# ABOUTME: Holds x(t) samples for numerical, exact and reference solutions

from dataclasses import dataclass
from typing import Optional

import numpy as np
import numpy.typing as npt

from app.errors import UsageError

# interior steps must match h to this relative precision
_SPACING_RTOL = 1e-12


def snap_indices(times: np.ndarray, query_times, h: float) -> tuple[np.ndarray, np.ndarray]:
    """
    Snap query times to the nearest grid point.

    Args:
        times: Increasing grid
        query_times: Times inside [times[0], times[-1]]
        h: Nominal spacing; a snap must move a query by less than h/2

    Returns:
        (indices, snapped_times)
    """
    q = np.asarray(query_times, dtype=np.float64).reshape(-1)
    t0, t_final = times[0], times[-1]
    slack = 1e-12 * max(1.0, abs(t0), abs(t_final))
    if q.size and (q.min() < t0 - slack or q.max() > t_final + slack):
        raise UsageError(
            f"Query times must lie in [{t0!r}, {t_final!r}], got range [{q.min()!r}, {q.max()!r}]"
        )
    right = np.clip(np.searchsorted(times, q), 1, len(times) - 1)
    left = right - 1
    idx = np.where(np.abs(times[left] - q) <= np.abs(times[right] - q), left, right)
    moved = np.abs(times[idx] - q)
    if moved.size and moved.max() >= 0.5 * h + slack:
        raise UsageError(f"Query time off the grid by {moved.max()!r} (h={h!r})")
    return idx, times[idx]


@dataclass(frozen=True)
class Trajectory:
    """
    States on a strictly increasing time grid.

    When h is set the grid is uniform with spacing h except possibly the
    last step. Reference trajectories sampled at query times carry h=None.
    """
    times: npt.NDArray[np.float64]
    states: npt.NDArray[np.float64]
    h: Optional[float]
    system_name: str
    method_name: str

    def __post_init__(self):
        times = np.array(self.times, dtype=np.float64).reshape(-1)
        states = np.array(self.states, dtype=np.float64)
        if states.ndim != 2 or states.shape[0] != times.shape[0]:
            raise UsageError(
                f"states shape {states.shape} does not match {times.shape[0]} times"
            )
        if times.size > 1 and not np.all(np.diff(times) > 0):
            raise UsageError("Trajectory times must be strictly increasing")
        if not np.all(np.isfinite(states)):
            raise UsageError(f"Trajectory of '{self.system_name}' has non-finite states")
        if self.h is not None and times.size > 2:
            steps = np.diff(times[:-1])
            bound = _SPACING_RTOL * np.maximum(1.0, np.abs(times[:-2]))
            if np.any(np.abs(steps - self.h) >= bound):
                raise UsageError(f"Trajectory grid is not uniform with h={self.h!r}")
        times.setflags(write=False)
        states.setflags(write=False)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "states", states)

    @property
    def dimension(self) -> int:
        return self.states.shape[1]

    @property
    def t0(self) -> float:
        return float(self.times[0])

    @property
    def t_final(self) -> float:
        return float(self.times[-1])

    @property
    def final_state(self) -> np.ndarray:
        return self.states[-1]

    def __len__(self) -> int:
        return self.times.shape[0]

    def sample(self, query_times) -> tuple[np.ndarray, np.ndarray]:
        """
        States at query times, snapped to the grid.

        Returns:
            (snapped_times, states) with one row per query
        """
        if self.h is None:
            idx = np.searchsorted(self.times, np.asarray(query_times, dtype=np.float64))
            idx = np.clip(idx, 0, len(self) - 1)
            q = np.asarray(query_times, dtype=np.float64)
            slack = 1e-12 * np.maximum(1.0, np.abs(q))
            if np.any(np.abs(self.times[idx] - q) > slack):
                raise UsageError(
                    f"Query times are not sample times of the {self.method_name} trajectory"
                )
            return self.times[idx], self.states[idx]
        idx, snapped = snap_indices(self.times, query_times, self.h)
        return snapped, self.states[idx]
