# ABOUTME: Study orchestrator coordinating integrators, references and conditioning
# ABOUTME: Runs convergence studies, bound checks and regime experiments

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Optional

import numpy as np

from app.config import Config
from app.conditioning.classifier import GrowthClassifier
from app.conditioning.curve import conditioning_curve, default_query_times
from app.conditioning.models import ConditioningCurve, Definition, GrowthReport, GrowthThresholds
from app.debug import debug_log
from app.errors import BlowUpError, ReferencePrecisionError, UsageError
from app.integrators.models import snap_indices
from app.integrators.stepper import integrate, time_grid
from app.integrators.tableau import RK4, Method
from app.reference.models import ReferenceResult
from app.reference.solver import global_error, reference_trajectory
from app.studies.models import BoundReport, ConvergenceStudy, StudyLevel
from app.systems.models import StateVector, System
from app.variational.norms import NormKind
from app.variational.propagation import transition_sequence

log = logging.getLogger(__name__)


class StudyRunner:
    """Orchestrates the end-to-end experiments"""

    def __init__(
        self,
        thresholds: Optional[GrowthThresholds] = None,
        workers: int = Config.STUDY_WORKERS,
        norm: NormKind = "2",
        definition: Definition = "integral",
    ):
        self.classifier = GrowthClassifier(thresholds)
        self.workers = max(1, workers)
        self.norm = norm
        self.definition = definition

    # ==================== Regimes ====================

    def regime_experiment(
        self,
        system: System,
        t_final: float,
        h: float,
        method: Method = RK4,
        x0: Optional[StateVector] = None,
        t0: float = Config.DEFAULT_T0,
        queries: int = Config.DEFAULT_QUERIES,
    ) -> tuple[ConditioningCurve, GrowthReport]:
        """
        Integrate with the variational equation, compute E on a uniform
        query grid and classify its growth.
        """
        x0 = system.default_x0 if x0 is None else x0
        seq = transition_sequence(method, system, x0, t0, t_final, h)
        curve = conditioning_curve(
            seq, default_query_times(t0, t_final, queries), self.norm, self.definition
        )
        report = self.classifier.classify(curve)
        log.info(f"Regime {system.name} T={t_final:g} h={h:g}: {report.growth_class.value}")
        return curve, report

    # ==================== Convergence ====================

    def study_query_times(self, t0: float, t_final: float, h0: float, queries: int) -> np.ndarray:
        """Uniform queries snapped onto the coarsest grid, which every finer level contains."""
        coarse = time_grid(t0, t_final, h0)
        idx, _ = snap_indices(coarse, default_query_times(t0, t_final, queries), h0)
        return coarse[np.unique(idx)]

    def _check_horizon(self, system: System, t0: float, t_final: float) -> None:
        cap = system.max_study_horizon
        if cap is not None and t_final - t0 > cap:
            raise UsageError(
                f"Studies on '{system.name}' are capped at a horizon of {cap:g} "
                f"(reference certification fails beyond it), got {t_final - t0:g}"
            )

    def _run_level(
        self,
        system: System,
        method: Method,
        x0: StateVector,
        t0: float,
        t_final: float,
        h: float,
        reference: ReferenceResult,
        query_times: np.ndarray,
    ) -> StudyLevel:
        try:
            approx = integrate(method, system, x0, t0, t_final, h)
        except BlowUpError as e:
            log.warning(f"Level h={h:g} of {method.name} on {system.name} excluded: {e}")
            return StudyLevel(h=h, max_error=math.nan, failed=True, failure=str(e))
        curve = global_error(approx, reference.trajectory, query_times, reference.certificate)
        debug_log(f"{system.name} {method.name} h={h:g}: max error {curve.max_error:.4g}", "STUDY")
        return StudyLevel(h=h, max_error=curve.max_error, error_curve=curve)

    def convergence_study(
        self,
        system: System,
        method: Method,
        t_final: float,
        h0: float,
        n_levels: int = Config.DEFAULT_LEVELS,
        x0: Optional[StateVector] = None,
        t0: float = Config.DEFAULT_T0,
        queries: int = Config.DEFAULT_QUERIES,
    ) -> ConvergenceStudy:
        """
        Global errors at h0 / 2^k, k = 0 .. n_levels-1, against a certified
        reference, and observed orders log2(e(h) / e(h/2)).

        Raises:
            UsageError: fewer than 3 levels, or horizon beyond the system's cap
            ReferencePrecisionError: reference uncertified, or its certificate
                exceeds CERTIFICATE_FRACTION of the smallest measured error
        """
        if n_levels < Config.MIN_LEVELS:
            raise UsageError(f"Need at least {Config.MIN_LEVELS} levels, got {n_levels}")
        self._check_horizon(system, t0, t_final)
        x0 = system.default_x0 if x0 is None else np.asarray(x0, dtype=np.float64)
        query_times = self.study_query_times(t0, t_final, h0, queries)
        reference = reference_trajectory(system, x0, t0, t_final, query_times)
        hs = [h0 / 2**k for k in range(n_levels)]

        def run(h: float) -> StudyLevel:
            return self._run_level(system, method, x0, t0, t_final, h, reference, query_times)

        if self.workers > 1:
            with ThreadPoolExecutor(max_workers=self.workers) as pool:
                levels = list(pool.map(run, hs))
        else:
            levels = [run(h) for h in hs]

        errors = [level.max_error for level in levels if level.ok]
        degenerate = bool(errors) and all(e == 0.0 for e in errors)
        if degenerate:
            log.info(f"Degenerate study: {method.name} is exact on {system.name}")
        positive = [e for e in errors if e > 0.0]
        if positive and reference.certificate > Config.CERTIFICATE_FRACTION * min(positive):
            raise ReferencePrecisionError(
                f"Reference certificate {reference.certificate:.3g} is not below "
                f"{Config.CERTIFICATE_FRACTION:g} x the smallest error {min(positive):.3g}"
            )

        orders = []
        for coarse, fine in zip(levels, levels[1:]):
            if coarse.ok and fine.ok and coarse.max_error > 0 and fine.max_error > 0:
                orders.append(math.log2(coarse.max_error / fine.max_error))
            else:
                orders.append(math.nan)

        return ConvergenceStudy(
            system_name=system.name,
            method_name=method.name,
            order=method.order,
            t0=t0,
            t_final=t_final,
            levels=levels,
            observed_orders=orders,
            query_times=query_times,
            reference_certificate=reference.certificate,
            reference_kind=reference.trajectory.method_name,
            degenerate=degenerate,
        )

    # ==================== Bound ====================

    def bound_check(
        self,
        system: System,
        method: Method,
        t_final: float,
        h0: float,
        n_levels: int = Config.DEFAULT_LEVELS,
        epsilon: float = Config.DEFAULT_EPSILON,
        x0: Optional[StateVector] = None,
        t0: float = Config.DEFAULT_T0,
        queries: int = Config.DEFAULT_QUERIES,
    ) -> BoundReport:
        """
        K(h) = max_t e(t;h) / ((E(t) + eps) h^r) per level.

        E comes from an RK4 transition sequence at the finest step size.
        The bound counts as verified when K changes by at most a factor
        K_STABILITY_LIMIT between every pair of consecutive levels.

        Raises:
            UsageError: eps <= 0
        """
        if not (epsilon > 0 and math.isfinite(epsilon)):
            raise UsageError(
                f"The bound holds for any ε > 0; got epsilon={epsilon!r} "
                f"(E(t0) = 0, so ε = 0 divides by zero)"
            )
        study = self.convergence_study(system, method, t_final, h0, n_levels, x0, t0, queries)
        x0 = system.default_x0 if x0 is None else x0
        h_finest = study.levels[-1].h
        seq = transition_sequence(RK4, system, x0, t0, t_final, h_finest)
        curve = conditioning_curve(seq, study.query_times, self.norm, self.definition)

        notes = []
        growth = None
        if len(curve) >= self.classifier.thresholds.min_points:
            growth = self.classifier.classify(curve)
        else:
            notes.append(f"growth not classified: only {len(curve)} query points")

        per_level = [
            (level.h, bound_constant(level.error_curve.errors, curve.values, epsilon, level.h, method.order))
            for level in study.ok_levels
        ]

        ks = [k for _, k in per_level]
        if study.degenerate and ks and all(k == 0.0 for k in ks):
            k_stability = 1.0
        elif len(ks) < 2 or any(k <= 0 for k in ks):
            k_stability = math.nan
            notes.append("K stability undefined: need two levels with positive K")
        else:
            k_stability = max(max(a / b, b / a) for a, b in zip(ks, ks[1:]))
        if study.degenerate:
            notes.append("degenerate: exact on this system")
        verified = math.isfinite(k_stability) and k_stability <= Config.K_STABILITY_LIMIT

        report = BoundReport(
            epsilon=epsilon,
            per_level=per_level,
            k_stability=k_stability,
            verified=verified,
            curve=curve,
            study=study,
            growth=growth,
            stability_limit=Config.K_STABILITY_LIMIT,
            notes=notes,
        )
        log.info(f"Bound check {system.name} {method.name}: {report}")
        return report


def bound_constant(errors, values, epsilon: float, h: float, order: int) -> float:
    """K(h) = max over query times of e(t) / ((E(t) + eps) h^r)."""
    ratios = np.asarray(errors, dtype=np.float64) / (
        (np.asarray(values, dtype=np.float64) + epsilon) * h**order
    )
    return float(np.max(ratios))


def convergence_study(system, method, x0, t_final, h0, n_levels, t0=Config.DEFAULT_T0) -> ConvergenceStudy:
    """Convergence study with default runner settings."""
    return StudyRunner().convergence_study(system, method, t_final, h0, n_levels, x0, t0)


def bound_check(system, method, x0, t_final, h0, n_levels, epsilon=Config.DEFAULT_EPSILON,
                t0=Config.DEFAULT_T0) -> BoundReport:
    """Bound check with default runner settings."""
    return StudyRunner().bound_check(system, method, t_final, h0, n_levels, epsilon, x0, t0)


def regime_experiment(system, t_final, h, method=RK4) -> tuple[ConditioningCurve, GrowthReport]:
    """Regime experiment with default runner settings."""
    return StudyRunner().regime_experiment(system, t_final, h, method)
