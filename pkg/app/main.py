# ABOUTME: Command-line entry point: python -m app.main <subcommand> [flags]
# ABOUTME: Dispatches to the library, writes CSV/JSON/SVG and maps outcomes to exit codes

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from app.config import Config
from app.conditioning.classifier import GrowthClassifier
from app.conditioning.curve import conditioning_curve, default_query_times
from app.conditioning.models import DEFINITIONS, GrowthClass, GrowthThresholds
from app.debug import debug_log
from app.errors import ConditioningError, NumericalError, UsageError
from app.export import csv_io, reports
from app.integrators.stepper import integrate
from app.integrators.tableau import METHODS, get_method
from app.reference.solver import reference_trajectory
from app.studies.runner import StudyRunner
from app.systems.builtin import builtin_suite, get_system
from app.systems.models import System, state_vector
from app.systems.rhs import check_jacobian
from app.ui.line_chart import render_curve_svg, write_svg
from app.variational.norms import NORM_KINDS
from app.variational.propagation import transition_sequence

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_UNDETERMINED = 3


class CliParser(argparse.ArgumentParser):
    """ArgumentParser that raises UsageError instead of exiting."""

    def error(self, message: str):
        raise UsageError(message)


# ==================== Parser ====================

def _common_flags() -> argparse.ArgumentParser:
    common = CliParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print machine-readable JSON")
    return common


def _system_flags(with_h: bool = True, with_h0: bool = False) -> argparse.ArgumentParser:
    p = CliParser(add_help=False)
    p.add_argument("--system", required=True, help="built-in system name (see list-systems)")
    p.add_argument("--method", default=Config.DEFAULT_METHOD, choices=sorted(METHODS))
    p.add_argument("--t0", type=float, default=Config.DEFAULT_T0)
    p.add_argument("--t-final", type=float, required=True)
    if with_h:
        p.add_argument("--h", type=float, required=True, help="step size")
    if with_h0:
        p.add_argument("--h0", type=float, required=True, help="coarsest step size")
        p.add_argument("--levels", type=int, default=Config.DEFAULT_LEVELS)
    p.add_argument("--x0", default=None, help="initial state as comma-separated numbers")
    p.add_argument("--queries", type=int, default=Config.DEFAULT_QUERIES)
    return p


def _output_flags() -> argparse.ArgumentParser:
    p = CliParser(add_help=False)
    p.add_argument("--out", default=None, help="CSV path ('-' or omitted: stdout)")
    p.add_argument("--svg", action="store_true", help="also write a line chart next to --out")
    return p


def _conditioning_flags() -> argparse.ArgumentParser:
    p = CliParser(add_help=False)
    p.add_argument("--norm", default="2", choices=NORM_KINDS)
    p.add_argument("--definition", default="integral", choices=DEFINITIONS)
    p.add_argument("--delta-const", type=float, default=Config.CONSTANCY_THRESHOLD)
    p.add_argument("--r2-cutoff", type=float, default=Config.R_SQUARED_CUTOFF)
    p.add_argument("--rho-min", type=float, default=Config.MIN_EXP_RATE)
    p.add_argument("--raw-fit", action="store_true", help="fit E itself instead of its running maximum")
    return p


def build_parser() -> CliParser:
    parser = CliParser(
        prog="app.main",
        description="Conditioning function E(t), growth classification and global-error bounds",
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=CliParser)
    common = _common_flags()
    out = _output_flags()
    cond = _conditioning_flags()

    p = sub.add_parser("list-systems", parents=[common], help="list built-in systems")
    p.add_argument("--seed", type=int, default=0, help="seed for the Jacobian check points")
    p.set_defaults(handler=cmd_list_systems)

    p = sub.add_parser("integrate", parents=[common, _system_flags(), out], help="integrate a trajectory")
    p.add_argument("--reference", action="store_true", help="emit the certified reference instead")
    p.set_defaults(handler=cmd_integrate)

    p = sub.add_parser("condition", parents=[common, _system_flags(), out, cond], help="compute E(t)")
    p.set_defaults(handler=cmd_condition)

    p = sub.add_parser("classify", parents=[common, cond], help="classify an E(t) CSV")
    p.add_argument("--in", dest="input", required=True, help="CSV with columns t,E[,logE]")
    p.set_defaults(handler=cmd_classify)

    p = sub.add_parser(
        "convergence", parents=[common, _system_flags(False, True), out], help="observed order study"
    )
    p.add_argument("--errors", action="store_true", help="also write the finest level's error curve next to --out")
    p.set_defaults(handler=cmd_convergence)

    p = sub.add_parser(
        "bound-check", parents=[common, _system_flags(False, True), out, cond], help="verify the error bound"
    )
    p.add_argument("--epsilon", type=float, default=Config.DEFAULT_EPSILON)
    p.set_defaults(handler=cmd_bound_check)

    p = sub.add_parser("regime", parents=[common, _system_flags(), out, cond], help="classify E(t) of a system")
    p.set_defaults(handler=cmd_regime)
    return parser


# ==================== Helpers ====================

def _thresholds(args) -> GrowthThresholds:
    return GrowthThresholds(
        constancy=args.delta_const,
        r_squared=args.r2_cutoff,
        min_rate=args.rho_min,
        envelope=not args.raw_fit,
    )


def _initial_state(args, system: System) -> np.ndarray:
    if args.x0 is None:
        return system.default_x0
    try:
        components = [float(part) for part in args.x0.split(",")]
    except ValueError as e:
        raise UsageError(f"--x0 must be comma-separated numbers, got {args.x0!r}") from e
    return state_vector(components, system.dimension)


def _sidecar(path: Optional[str], suffix: str) -> Optional[Path]:
    if path is None or path == "-":
        return None
    return Path(path).with_suffix(suffix)


def _csv_on_stdout(args) -> bool:
    if args.command == "regime":
        return args.out == "-"
    return getattr(args, "out", None) in (None, "-")


def _check_streams(args) -> None:
    """stdout carries the CSV when --out is omitted, so it cannot also carry JSON."""
    if getattr(args, "svg", False) and _sidecar(args.out, ".svg") is None:
        raise UsageError("--svg needs --out pointing at a file")
    if getattr(args, "errors", False) and _sidecar(args.out, ".csv") is None:
        raise UsageError("--errors needs --out pointing at a file")
    if args.json and _csv_on_stdout(args):
        raise UsageError("--json needs --out pointing at a file")


def _summary(args, line: str) -> None:
    print(line, file=sys.stderr if _csv_on_stdout(args) else sys.stdout)


def _emit_json(args, payload: dict) -> None:
    if args.json:
        print(reports.dumps(payload))


def _runner(args) -> StudyRunner:
    if hasattr(args, "norm"):
        return StudyRunner(_thresholds(args), Config.STUDY_WORKERS, args.norm, args.definition)
    return StudyRunner(workers=Config.STUDY_WORKERS)


# ==================== Commands ====================

def cmd_list_systems(args) -> int:
    rng = np.random.default_rng(args.seed)
    rows = []
    for system in builtin_suite():
        jac_err = check_jacobian(system, rng, Config.JACOBIAN_CHECK_POINTS, Config.JACOBIAN_CHECK_RADIUS)
        rows.append((system, jac_err))

    if args.json:
        print(reports.dumps({"systems": [reports.system_payload(s, e) for s, e in rows]}))
        return EXIT_OK

    print(f"{'name':<14}{'dim':>4}  {'regime':<12}{'jac_err':>10}  default_x0")
    for system, jac_err in rows:
        x0 = ",".join(f"{v:g}" for v in system.default_x0)
        print(f"{system.name:<14}{system.dimension:>4}  {system.regime:<12}{jac_err:>10.2e}  {x0}")
    return EXIT_OK


def cmd_integrate(args) -> int:
    _check_streams(args)
    system = get_system(args.system)
    method = get_method(args.method)
    x0 = _initial_state(args, system)

    if args.reference:
        queries = default_query_times(args.t0, args.t_final, args.queries)
        result = reference_trajectory(system, x0, args.t0, args.t_final, queries)
        trajectory = result.trajectory
        line = (
            f"reference {system.name} [{args.t0:g}, {args.t_final:g}] points={len(trajectory)} "
            f"kind={trajectory.method_name} certificate={result.certificate:.3g}"
        )
    else:
        trajectory = integrate(method, system, x0, args.t0, args.t_final, args.h)
        line = f"integrated {system.name} with {method.name} h={args.h:g} steps={len(trajectory) - 1}"

    csv_io.write_trajectory_csv(trajectory, args.out)
    if args.svg:
        series = {f"x{i + 1}": (trajectory.times, trajectory.states[:, i]) for i in range(trajectory.dimension)}
        write_svg(render_curve_svg(series, title=f"{system.name} trajectory", y_label="x"), _sidecar(args.out, ".svg"))
    _summary(args, line)
    _emit_json(args, {
        "system": system.name,
        "method": trajectory.method_name,
        "h": trajectory.h,
        "points": len(trajectory),
        "final_state": trajectory.final_state,
    })
    return EXIT_OK


def cmd_condition(args) -> int:
    _check_streams(args)
    system = get_system(args.system)
    method = get_method(args.method)
    x0 = _initial_state(args, system)
    seq = transition_sequence(method, system, x0, args.t0, args.t_final, args.h)
    curve = conditioning_curve(
        seq, default_query_times(args.t0, args.t_final, args.queries), args.norm, args.definition
    )
    report = None
    if len(curve) >= Config.MIN_CLASSIFY_POINTS:
        report = GrowthClassifier(_thresholds(args)).classify(curve)

    csv_io.write_curve_csv(curve, args.out)
    payload = reports.curve_payload(curve, report)
    sidecar = _sidecar(args.out, ".json")
    if sidecar is not None:
        reports.write_json(payload, sidecar)
    if args.svg:
        write_svg(
            render_curve_svg({"E": (curve.query_times, curve.values)}, title=f"E(t) {system.name}"),
            _sidecar(args.out, ".svg"),
        )
    verdict = str(report) if report is not None else "class=unclassified"
    _summary(args, f"{verdict} E({curve.query_times[-1]:g})={curve.values[-1]:.6g}")
    _emit_json(args, payload)
    return EXIT_OK


def cmd_classify(args) -> int:
    curve = csv_io.read_curve_csv(args.input)
    report = GrowthClassifier(_thresholds(args)).classify(curve)
    print(str(report))
    if args.json:
        print(reports.dumps(reports.growth_payload(report)))
    return EXIT_OK if report.is_determined else EXIT_UNDETERMINED


def cmd_convergence(args) -> int:
    _check_streams(args)
    system = get_system(args.system)
    method = get_method(args.method)
    x0 = _initial_state(args, system)
    study = _runner(args).convergence_study(
        system, method, args.t_final, args.h0, args.levels, x0, args.t0, args.queries
    )

    csv_io.write_convergence_csv(study, args.out)
    if args.svg:
        ok = study.ok_levels
        series = {f"{method.name} max error": ([lv.h for lv in ok], [lv.max_error for lv in ok])}
        svg = render_curve_svg(series, title=f"Convergence {system.name}", log_x=True, log_y=True,
                               x_label="h", y_label="max error")
        write_svg(svg, _sidecar(args.out, ".svg"))
    if args.errors:
        ok = study.ok_levels
        if ok:
            csv_io.write_error_csv(ok[-1].error_curve, _sidecar(args.out, ".errors.csv"))
        else:
            log.warning(f"No level of {method.name} on {system.name} finished; no error curve written")
    orders =",".join(f"{p:.4g}" for p in study.observed_orders)
    flag = " degenerate: exact on this system" if study.degenerate else ""
    _summary(args, f"{system.name} {method.name} order={method.order} observed=[{orders}]{flag}")
    _emit_json(args, reports.study_payload(study))
    return EXIT_OK


def cmd_bound_check(args) -> int:
    _check_streams(args)
    system = get_system(args.system)
    method = get_method(args.method)
    x0 = _initial_state(args, system)
    report = _runner(args).bound_check(
        system, method, args.t_final, args.h0, args.levels, args.epsilon, x0, args.t0, args.queries
    )

    csv_io.write_bound_csv(report, args.out)
    payload = reports.bound_payload(report)
    sidecar = _sidecar(args.out, ".json")
    if sidecar is not None:
        reports.write_json(payload, sidecar)
    if args.svg:
        series = {"K": ([h for h, _ in report.per_level], [k for _, k in report.per_level])}
        svg = render_curve_svg(series, title=f"K(h) {system.name} {method.name}", log_x=True,
                               x_label="h", y_label="K")
        write_svg(svg, _sidecar(args.out, ".svg"))
    _summary(args, f"{system.name} {method.name} {report}")
    _emit_json(args, payload)
    return EXIT_OK if report.verified else EXIT_UNDETERMINED


def cmd_regime(args) -> int:
    _check_streams(args)
    system = get_system(args.system)
    method = get_method(args.method)
    x0 = _initial_state(args, system)
    curve, report = _runner(args).regime_experiment(
        system, args.t_final, args.h, method, x0, args.t0, args.queries
    )

    if args.out is not None:
        csv_io.write_curve_csv(curve, args.out)
    if args.svg:
        write_svg(
            render_curve_svg({"E": (curve.query_times, curve.values)}, title=f"E(t) {system.name}",
                             log_y=report.growth_class is GrowthClass.EXPONENTIAL),
            _sidecar(args.out, ".svg"),
        )
    _summary(args, f"{report} E({curve.query_times[-1]:g})={curve.values[-1]:.6g}")
    _emit_json(args, reports.curve_payload(curve, report))
    return EXIT_OK if report.is_determined else EXIT_UNDETERMINED


# ==================== Entry point ====================

def configure_logging() -> None:
    logging.basicConfig(
        level=getattr(logging, Config.LOG_LEVEL, logging.WARNING),
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Parse argv, run the subcommand and return its exit code."""
    configure_logging()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        debug_log(f"command={args.command}", "CLI")
        return args.handler(args)
    except NumericalError as e:
        log.error(f"Numerical failure: {e}")
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    except ConditioningError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    except OSError as e:
        # writes that fail after the file opened, e.g. a full disk
        print(f"error: {e}", file=sys.stderr)
        return UsageError.exit_code
    except SystemExit as e:
        # --help
        return e.code if isinstance(e.code, int) else EXIT_OK


if __name__ == "__main__":
    sys.exit(run())
