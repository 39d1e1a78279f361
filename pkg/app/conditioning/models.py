# ABOUTME: Data models for conditioning curves and growth verdicts
# ABOUTME: Values carry a parallel log representation for very large magnitudes

from dataclasses import dataclass, field
from enum import Enum
from typing import Literal, Optional

import numpy as np
import numpy.typing as npt

from app.config import Config
from app.errors import UsageError

Definition = Literal["integral", "sup"]
DEFINITIONS = ("integral", "sup")


class GrowthClass(str, Enum):
    CONSTANT = "Constant"
    LINEAR = "Linear"
    EXPONENTIAL = "Exponential"
    UNDETERMINED = "Undetermined"


@dataclass(frozen=True)
class ConditioningCurve:
    """E at query times. query_times are grid-snapped; requested_times are as asked."""
    query_times: npt.NDArray[np.float64]
    values: npt.NDArray[np.float64]
    log_values: Optional[npt.NDArray[np.float64]] = None
    h: Optional[float] = None
    system_name: str = ""
    method_name: str = ""
    requested_times: Optional[npt.NDArray[np.float64]] = None
    norm: str = "2"
    definition: Definition = "integral"

    def __post_init__(self):
        times = np.array(self.query_times, dtype=np.float64).reshape(-1)
        values = np.array(self.values, dtype=np.float64).reshape(-1)
        if times.shape != values.shape:
            raise UsageError(f"{times.size} query times but {values.size} values")
        if np.any(np.isnan(values)) or np.any(values < 0):
            raise UsageError("Conditioning values must be nonnegative")
        if times.size > 1 and np.any(np.diff(times) < 0):
            raise UsageError("Query times must be increasing")
        if self.log_values is None:
            with np.errstate(divide="ignore"):
                log_values = np.log(values)
        else:
            log_values = np.array(self.log_values, dtype=np.float64).reshape(-1)
            if log_values.shape != values.shape:
                raise UsageError("log_values must match values in length")
        requested = times if self.requested_times is None else np.array(
            self.requested_times, dtype=np.float64
        ).reshape(-1)
        if requested.shape != times.shape:
            raise UsageError("requested_times must match query_times in length")
        for name, arr in (("query_times", times), ("values", values),
                          ("log_values", log_values), ("requested_times", requested)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    def __len__(self) -> int:
        return self.query_times.shape[0]

    @property
    def max_snap(self) -> float:
        """Largest distance a query was moved onto the grid."""
        if len(self) == 0:
            return 0.0
        return float(np.max(np.abs(self.query_times - self.requested_times)))

    def scaled(self, factor: float) -> "ConditioningCurve":
        """Same curve with values multiplied by a positive factor."""
        if not factor > 0:
            raise UsageError(f"Scale factor must be positive, got {factor!r}")
        return ConditioningCurve(
            query_times=self.query_times,
            values=self.values * factor,
            log_values=self.log_values + np.log(factor),
            h=self.h,
            system_name=self.system_name,
            method_name=self.method_name,
            requested_times=self.requested_times,
            norm=self.norm,
            definition=self.definition,
        )


@dataclass(frozen=True)
class GrowthThresholds:
    """Decision thresholds for classify_growth."""
    constancy: float = Config.CONSTANCY_THRESHOLD
    r_squared: float = Config.R_SQUARED_CUTOFF
    min_rate: float = Config.MIN_EXP_RATE
    min_points: int = Config.MIN_CLASSIFY_POINTS
    envelope: bool = True  # fit the running maximum of E

    def __post_init__(self):
        if not 0 < self.constancy < 1:
            raise UsageError(f"Constancy threshold must be in (0, 1), got {self.constancy}")
        if not 0 < self.r_squared <= 1:
            raise UsageError(f"r^2 cutoff must be in (0, 1], got {self.r_squared}")
        if self.min_rate < 0:
            raise UsageError(f"Minimum exponential rate must be >= 0, got {self.min_rate}")


@dataclass(frozen=True)
class Fit:
    """Least-squares line with its coefficient of determination."""
    slope: float
    intercept: float
    r_squared: float

    @classmethod
    def undefined(cls) -> "Fit":
        return cls(float("nan"), float("nan"), float("nan"))


@dataclass(frozen=True)
class GrowthReport:
    """Verdict of classify_growth with the evidence behind it."""
    growth_class: GrowthClass
    tail_linear_fit: Fit
    tail_exp_fit: Fit  # slope is the exponential rate of log E
    constancy_ratio: float
    thresholds: GrowthThresholds = field(default_factory=GrowthThresholds)
    tail_start: float = 0.0
    t_final: float = 0.0

    def __str__(self) -> str:
        return (
            f"class={self.growth_class.value} "
            f"constancy={self.constancy_ratio:.4g} "
            f"lin_r2={self.tail_linear_fit.r_squared:.4g} "
            f"exp_rate={self.tail_exp_fit.slope:.4g} exp_r2={self.tail_exp_fit.r_squared:.4g}"
        )

    @property
    def is_determined(self) -> bool:
        return self.growth_class is not GrowthClass.UNDETERMINED
