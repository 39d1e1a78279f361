# ABOUTME: Data models for convergence studies and bound reports
# ABOUTME: Levels are ordered by step size, largest first

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import numpy.typing as npt

from app.conditioning.models import ConditioningCurve, GrowthReport
from app.errors import UsageError
from app.reference.models import ErrorCurve


@dataclass(frozen=True)
class StudyLevel:
    """One step size of a study; failed levels blew up and carry no errors."""
    h: float
    max_error: float
    error_curve: Optional[ErrorCurve] = None
    failed: bool = False
    failure: str = ""

    @property
    def ok(self) -> bool:
        return not self.failed


@dataclass(frozen=True)
class ConvergenceStudy:
    """Global errors at h0 / 2^k and observed orders between consecutive levels."""
    system_name: str
    method_name: str
    order: int
    t0: float
    t_final: float
    levels: list[StudyLevel]
    observed_orders: list[float]
    query_times: npt.NDArray[np.float64]
    reference_certificate: float = 0.0
    reference_kind: str = "exact"
    degenerate: bool = False

    def __post_init__(self):
        hs = [level.h for level in self.levels]
        for coarse, fine in zip(hs, hs[1:]):
            if not math.isclose(fine, 0.5 * coarse, rel_tol=1e-12):
                raise UsageError(f"Study levels must halve h, got {hs}")
        if len(self.observed_orders) != max(0, len(self.levels) - 1):
            raise UsageError("Need one observed order per consecutive pair of levels")

    @property
    def ok_levels(self) -> list[StudyLevel]:
        return [level for level in self.levels if level.ok]


@dataclass(frozen=True)
class BoundReport:
    """Empirical K(h) in ||x~(t;h) - x(t)|| < K (E(t) + eps) h^r."""
    epsilon: float
    per_level: list[tuple[float, float]]  # (h, K(h)) for levels that ran
    k_stability: float
    verified: bool
    curve: ConditioningCurve
    study: ConvergenceStudy
    growth: Optional[GrowthReport] = None
    stability_limit: float = 2.0
    notes: list[str] = field(default_factory=list)

    def __str__(self) -> str:
        verdict = "verified" if self.verified else "not verified"
        ks = ", ".join(f"K({h:g})={k:.4g}" for h, k in self.per_level)
        return f"{verdict} eps={self.epsilon:g} K_stability={self.k_stability:.4g} [{ks}]"
