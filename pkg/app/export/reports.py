# ABOUTME: JSON payloads for growth reports, studies, bound checks and systems
# ABOUTME: NaN and infinities become null so output stays strict JSON

import json
import math
from pathlib import Path
from typing import Any, Optional, Union

import numpy as np

from app.conditioning.models import ConditioningCurve, Fit, GrowthReport, GrowthThresholds
from app.export.csv_io import open_output
from app.studies.models import BoundReport, ConvergenceStudy
from app.systems.models import System


def _clean(value: Any) -> Any:
    if isinstance(value, dict):
        return {str(k): _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_clean(v) for v in value.tolist()]
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    return value


def dumps(payload: dict) -> str:
    return json.dumps(_clean(payload), sort_keys=True, indent=2, allow_nan=False)


def write_json(payload: dict, path: Optional[Union[str, Path]] = None) -> None:
    with open_output(path) as handle:
        handle.write(dumps(payload))
        handle.write("\n")


def fit_payload(fit: Fit) -> dict:
    return {"slope": fit.slope, "intercept": fit.intercept, "r_squared": fit.r_squared}


def thresholds_payload(thresholds: GrowthThresholds) -> dict:
    return {
        "constancy": thresholds.constancy,
        "r_squared": thresholds.r_squared,
        "min_rate": thresholds.min_rate,
        "min_points": thresholds.min_points,
        "envelope": thresholds.envelope,
    }


def growth_payload(report: GrowthReport) -> dict:
    return {
        "class": report.growth_class.value,
        "constancy_ratio": report.constancy_ratio,
        "tail_linear_fit": fit_payload(report.tail_linear_fit),
        "tail_exp_fit": fit_payload(report.tail_exp_fit),
        "tail_start": report.tail_start,
        "t_final": report.t_final,
        "thresholds": thresholds_payload(report.thresholds),
    }


def curve_payload(curve: ConditioningCurve, report: Optional[GrowthReport] = None) -> dict:
    """Metadata sidecar for a conditioning-curve CSV."""
    payload = {
        "system": curve.system_name,
        "method": curve.method_name,
        "h": curve.h,
        "norm": curve.norm,
        "definition": curve.definition,
        "queries": len(curve),
        "max_snap": curve.max_snap,
        "t_final": float(curve.query_times[-1]) if len(curve) else None,
        "E_final": float(curve.values[-1]) if len(curve) else None,
        "logE_final": float(curve.log_values[-1]) if len(curve) else None,
    }
    if report is not None:
        payload["growth"] = growth_payload(report)
    return payload


def study_payload(study: ConvergenceStudy) -> dict:
    return {
        "system": study.system_name,
        "method": study.method_name,
        "order": study.order,
        "t0": study.t0,
        "t_final": study.t_final,
        "reference": {"kind": study.reference_kind, "certificate": study.reference_certificate},
        "degenerate": study.degenerate,
        "levels": [
            {"h": level.h, "max_error": level.max_error, "failed": level.failed, "failure": level.failure}
            for level in study.levels
        ],
        "observed_orders": list(study.observed_orders),
    }


def bound_payload(report: BoundReport) -> dict:
    return {
        "epsilon": report.epsilon,
        "verified": report.verified,
        "k_stability": report.k_stability,
        "stability_limit": report.stability_limit,
        "per_level": [{"h": h, "K": k} for h, k in report.per_level],
        "growth": None if report.growth is None else growth_payload(report.growth),
        "conditioning": curve_payload(report.curve),
        "study": study_payload(report.study),
        "notes": list(report.notes),
    }


def system_payload(system: System, jacobian_error: Optional[float] = None) -> dict:
    payload = {
        "name": system.name,
        "dimension": system.dimension,
        "regime": system.regime,
        "autonomous": system.autonomous,
        "has_jacobian": system.jacobian is not None,
        "has_exact": system.has_exact,
        "default_x0": system.default_x0,
        "max_study_horizon": system.max_study_horizon,
        "description": system.description,
        "parameters": dict(system.parameters),
    }
    if jacobian_error is not None:
        payload["jacobian_error"] = jacobian_error
    return payload
