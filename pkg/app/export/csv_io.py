# ABOUTME: CSV writers for trajectories, conditioning curves and study tables
# ABOUTME: Also reads conditioning-curve CSVs back for the classify command

import csv
import math
import sys
from contextlib import contextmanager
from pathlib import Path
from typing import Iterable, Iterator, Optional, TextIO, Union

import numpy as np

from app.conditioning.models import ConditioningCurve
from app.errors import UsageError
from app.integrators.models import Trajectory
from app.reference.models import ErrorCurve
from app.studies.models import BoundReport, ConvergenceStudy

PathLike = Union[str, Path]


def format_float(value: float) -> str:
    """17 significant digits; nan and inf spelled the way float() reads them back."""
    value = float(value)
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return f"{value:.17g}"


@contextmanager
def open_output(path: Optional[PathLike]) -> Iterator[TextIO]:
    """
    Yield a text stream for path, or stdout when path is None or '-'.

    Raises:
        UsageError: path cannot be opened for writing
    """
    if path is None or str(path) == "-":
        yield sys.stdout
        return
    try:
        handle = open(path, "w", newline="", encoding="utf-8")
    except OSError as e:
        raise UsageError(f"Cannot write '{path}': {e.strerror or e}") from e
    with handle:
        yield handle


def write_rows(handle: TextIO, header: list[str], rows: Iterable[Iterable[float]]) -> None:
    writer = csv.writer(handle, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_float(v) for v in row])


def write_trajectory_csv(trajectory: Trajectory, path: Optional[PathLike] = None) -> None:
    header = ["t"] + [f"x{i + 1}" for i in range(trajectory.dimension)]
    rows = (
        [t, *state] for t, state in zip(trajectory.times, trajectory.states)
    )
    with open_output(path) as handle:
        write_rows(handle, header, rows)


def write_error_csv(curve: ErrorCurve, path: Optional[PathLike] = None) -> None:
    with open_output(path) as handle:
        write_rows(handle, ["t", "error"], zip(curve.times, curve.errors))


def write_curve_csv(curve: ConditioningCurve, path: Optional[PathLike] = None) -> None:
    """Columns t,E,logE; logE stays finite where E overflows a float."""
    with open_output(path) as handle:
        write_rows(handle, ["t", "E", "logE"], zip(curve.query_times, curve.values, curve.log_values))


def read_curve_csv(path: PathLike) -> ConditioningCurve:
    """
    Read a t,E[,logE] CSV as written by write_curve_csv.

    Raises:
        UsageError: missing file, missing columns, or unparsable numbers
    """
    try:
        with open(path, newline="", encoding="utf-8") as handle:
            rows = list(csv.reader(handle))
    except OSError as e:
        raise UsageError(f"Cannot read curve CSV '{path}': {e}") from e
    if not rows:
        raise UsageError(f"Curve CSV '{path}' is empty")

    header = [name.strip() for name in rows[0]]
    if "t" not in header or "E" not in header:
        raise UsageError(f"Curve CSV '{path}' needs columns t and E, got {header}")
    ti, ei = header.index("t"), header.index("E")
    li = header.index("logE") if "logE" in header else None

    try:
        body = [row for row in rows[1:] if row]
        times = np.array([float(row[ti]) for row in body])
        values = np.array([float(row[ei]) for row in body])
        logs = None if li is None else np.array([float(row[li]) for row in body])
    except (ValueError, IndexError) as e:
        raise UsageError(f"Malformed row in curve CSV '{path}': {e}") from e
    return ConditioningCurve(query_times=times, values=values, log_values=logs)


def write_convergence_csv(study: ConvergenceStudy, path: Optional[PathLike] = None) -> None:
    """Columns h,max_error,observed_order; each order sits on the finer of its two levels."""
    orders = [math.nan] + list(study.observed_orders)
    rows = ((level.h, level.max_error, order) for level, order in zip(study.levels, orders))
    with open_output(path) as handle:
        write_rows(handle, ["h", "max_error", "observed_order"], rows)


def write_bound_csv(report: BoundReport, path: Optional[PathLike] = None) -> None:
    with open_output(path) as handle:
        write_rows(handle, ["h", "K"], report.per_level)
