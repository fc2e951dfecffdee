"""Command-line entry point: learn, generate, segment, compose, sweep, plot."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import letters, study
from .generator import IntegrationBlowupError, rollout
from .learner import DegenerateGoalError, DmpModel, Formulation, TransformParams, fit_dmp
from .phase import PhaseKind
from .strokes import SegmentationConfig, compose, segment
from .svg import render_report, render_trajectories
from .trajectory import DemonstrationFormatError, format_csv, format_json, load_demonstration

log = logging.getLogger("handwriting_dmp")

EXIT_USAGE = 1
EXIT_DATA = 2


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _write(path, text: str) -> None:
    path = Path(path)
    if path.parent and not path.parent.exists():
        path.parent.mkdir(parents=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _read_model(path) -> DmpModel:
    try:
        return DmpModel.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise DataError(f"{path}: cannot read model ({exc.strerror})") from None
    except (ValueError, KeyError, TypeError) as exc:
        raise DataError(f"{path}: not a model file ({exc})") from None


def _read_demo(path):
    try:
        return load_demonstration(path)
    except OSError as exc:
        raise DataError(f"{path}: cannot read demonstration ({exc.strerror})") from None
    except DemonstrationFormatError as exc:
        raise DataError(f"{path}: {exc}") from None


def _parse_assignment(text: str):
    """``dof=value``; a leading sign on the value makes it an offset."""
    name, sep, value = text.partition("=")
    if not sep or not name:
        raise UsageError(f"expected dof=value, got {text!r}")
    relative = value[:1] in "+-" and value[:1] != ""
    try:
        number = float(value)
    except ValueError:
        raise UsageError(f"bad number in {text!r}") from None
    return name.strip(), number, relative


def _apply(model: DmpModel, base: np.ndarray, assignments) -> np.ndarray | None:
    if not assignments:
        return None
    out = base.copy()
    names = model.dof_names
    for text in assignments:
        name, number, relative = _parse_assignment(text)
        if name not in names:
            raise UsageError(f"unknown dof {name!r} in {text!r} (model has {', '.join(names)})")
        j = names.index(name)
        out[j] = base[j] + number if relative else number
    return out


def _writer(fmt):
    return format_json if fmt == "json" else format_csv


def _params(args) -> TransformParams:
    beta = args.beta_z if args.beta_z is not None else args.alpha_z / 4.0
    return TransformParams(args.alpha_z, beta, Formulation(args.formulation))


# --- subcommands ----------------------------------------------------------


def cmd_learn(args):
    demo = _read_demo(args.demo)
    if args.dofs:
        try:
            demo = demo.select(args.dofs.split(","))
        except KeyError as exc:
            raise DataError(f"{args.demo}: {exc.args[0]}") from None
    try:
        model = fit_dmp(demo, _params(args), args.phase, args.width_factor, args.kernels,
                        truncated=not args.full_gaussian, alpha_x=args.alpha_x)
    except DegenerateGoalError as exc:
        raise DataError(f"{args.demo}: {exc}") from None
    _write(args.output, model.dumps())


def cmd_generate(args):
    model = _read_model(args.model)
    g = _apply(model, model.g, args.goal)
    y0 = _apply(model, model.y0, args.start)
    r = rollout(model, y0=y0, g=g, dt=args.dt, duration=args.duration, settle=args.settle)
    if r.degenerate:
        log.warning("original formulation with goal == start on dofs %s", r.degenerate)
    fmt = args.format or ("json" if str(args.output).endswith(".json") else "csv")
    _write(args.output, _writer(fmt)(r.positions, r.dt, r.dofs))


def cmd_segment(args):
    demo = _read_demo(args.demo)
    mu = None if args.mu_z in (None, "auto") else float(args.mu_z)
    try:
        seg = segment(demo, SegmentationConfig(args.theta, args.sigma, mu))
    except ValueError as exc:
        raise DataError(f"{args.demo}: {exc}") from None
    out = Path(args.output)
    out.mkdir(parents=True, exist_ok=True)
    _write(out / "manifest.json", seg.dumps())
    for k, s in enumerate(seg.strokes):
        _write(out / f"stroke_{k:02d}.csv", format_csv(s.samples.positions, s.samples.dt, s.samples.dofs))
    if not seg.strokes:
        print(f"{args.demo}: no pen-down strokes found", file=sys.stderr)


def _indexed(assignments, count):
    by_stroke = {}
    for text in assignments or ():
        idx, sep, rest = text.partition(":")
        if not sep or not idx.isdigit():
            raise UsageError(f"expected STROKE:dof=value, got {text!r}")
        k = int(idx)
        if k >= count:
            raise UsageError(f"stroke index {k} out of range (have {count} models)")
        by_stroke.setdefault(k, []).append(rest)
    return by_stroke


def cmd_compose(args):
    models = [_read_model(p) for p in args.models]
    goals = _indexed(args.goal, len(models))
    starts = _indexed(args.start, len(models))
    overrides = {}
    for k, m in enumerate(models):
        ov = {}
        if k in goals:
            ov["g"] = _apply(m, m.g, goals[k])
        if k in starts:
            ov["y0"] = _apply(m, m.y0, starts[k])
        if ov:
            overrides[k] = ov
    letter = compose(models, overrides, settle=args.settle)
    out = Path(args.output)
    out.mkdir(parents=True, exist_ok=True)
    for k, r in enumerate(letter.strokes):
        _write(out / f"stroke_{k:02d}.csv", format_csv(r.positions, r.dt, r.dofs))
    _write(out / "letter.json", letter.dumps())


def cmd_sweep(args):
    demos = {}
    if args.bundled:
        demos.update(letters.bundled_letters())
    for p in args.demos:
        demos[Path(p).stem] = _read_demo(p)
    if not demos:
        raise UsageError("no demonstrations given (pass files or --bundled)")
    params = TransformParams(args.alpha_z, args.beta_z if args.beta_z is not None else args.alpha_z / 4.0)
    if args.kind == "width":
        values = _floats(args.values) if args.values else study.WIDTH_FACTORS
        report = study.sweep_width(demos, values, params)
    else:
        values = [int(v) for v in _floats(args.values)] if args.values else study.KERNEL_COUNTS
        report = study.sweep_number(demos, values, params)
    _write(args.output, report.to_csv())
    if args.json:
        _write(args.json, report.to_json())
    if args.figure:
        from .figures import report_figure
        report_figure(report, args.figure)


def _floats(text):
    try:
        return [_fraction(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"bad value list {text!r}") from None


def _fraction(v: str) -> float:
    num, sep, den = v.partition("/")
    return float(num) / float(den) if sep else float(num)


def _is_report(path) -> bool:
    with open(path, encoding="utf-8") as fh:
        head = fh.readline().split(",")[0].strip()
    return head in ("width_factor", "kernels")


def cmd_plot(args):
    for p in args.inputs:
        if not Path(p).exists():
            raise DataError(f"{p}: no such file")
    if _is_report(args.inputs[0]):
        try:
            report = study.SweepReport.from_csv(Path(args.inputs[0]).read_text(encoding="utf-8"))
        except ValueError as exc:
            raise DataError(f"{args.inputs[0]}: {exc}") from None
        _write(args.output, render_report(report, args.width, args.height))
        if args.figure:
            from .figures import report_figure
            report_figure(report, args.figure)
        return
    demos = [_read_demo(p) for p in args.inputs]
    labels = args.labels.split(",") if args.labels else [Path(p).stem for p in args.inputs]
    _write(args.output, render_trajectories(demos, labels, width=args.width, height=args.height))
    if args.figure:
        from .figures import trajectory_figure
        trajectory_figure(demos, labels, args.figure)


def cmd_letters(args):
    out = Path(args.output)
    out.mkdir(parents=True, exist_ok=True)
    for name, demo in letters.bundled_letters().items():
        _write(out / f"demo_{name}.csv", format_csv(demo.positions, demo.dt, demo.dofs))
    d3 = letters.two_stroke_d()
    _write(out / "demo_D_3d.csv", format_csv(d3.positions, d3.dt, d3.dofs))
    a3 = letters.on_plane(letters.letter("a"))
    _write(out / "demo_a_3d.csv", format_csv(a3.positions, a3.dt, a3.dofs))


# --- parser ---------------------------------------------------------------


def _add_dynamics(p):
    p.add_argument("--alpha-z", type=float, default=25.0)
    p.add_argument("--beta-z", type=float, default=None, help="default: alpha_z / 4")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="handwriting-dmp", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("learn", help="fit a model to a demonstration")
    p.add_argument("demo")
    p.add_argument("-o", "--output", required=True)
    _add_dynamics(p)
    p.add_argument("--kernels", type=int, default=None, help="default: samples / 10")
    p.add_argument("--width-factor", type=float, default=1.0)
    p.add_argument("--phase", choices=[k.value for k in PhaseKind], default="linear")
    p.add_argument("--alpha-x", type=float, default=None)
    p.add_argument("--formulation", choices=[f.value for f in Formulation], default="goal-robust")
    p.add_argument("--full-gaussian", action="store_true", help="untruncated kernels")
    p.add_argument("--dofs", default=None, help="comma-separated subset, e.g. x,y")
    p.set_defaults(func=cmd_learn)

    p = sub.add_parser("generate", help="roll out a model to a trajectory file")
    p.add_argument("model")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--goal", action="append", metavar="DOF=VALUE",
                   help="absolute value, or an offset when signed (x=+0.1)")
    p.add_argument("--start", action="append", metavar="DOF=VALUE")
    p.add_argument("--dt", type=float, default=None)
    p.add_argument("--duration", type=float, default=None)
    p.add_argument("--settle", type=float, default=0.0, help="extra seconds after the phase ends")
    p.add_argument("--format", choices=["csv", "json"], default=None)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("segment", help="split a 3-D capture into strokes")
    p.add_argument("demo")
    p.add_argument("-o", "--output", required=True, help="output directory")
    p.add_argument("--theta", type=float, default=0.05, help="z-velocity threshold [m/s]")
    p.add_argument("--sigma", type=float, default=0.005, help="plane band half-width [m]")
    p.add_argument("--mu-z", default="auto", help="plane height [m] or 'auto'")
    p.set_defaults(func=cmd_segment)

    p = sub.add_parser("compose", help="roll out stroke models into one letter")
    p.add_argument("models", nargs="+")
    p.add_argument("-o", "--output", required=True, help="output directory")
    p.add_argument("--goal", action="append", metavar="K:DOF=VALUE")
    p.add_argument("--start", action="append", metavar="K:DOF=VALUE")
    p.add_argument("--settle", type=float, default=1.0)
    p.set_defaults(func=cmd_compose)

    p = sub.add_parser("sweep", help="kernel width or kernel number study")
    p.add_argument("kind", choices=["width", "number"])
    p.add_argument("demos", nargs="*")
    p.add_argument("--bundled", action="store_true", help="include the synthetic letters")
    p.add_argument("--values", default=None, help="comma-separated; fractions like 2/3 allowed")
    p.add_argument("-o", "--output", required=True, help="report CSV")
    p.add_argument("--json", default=None, help="also write the report as JSON")
    p.add_argument("--figure", default=None, help="also render a matplotlib figure")
    _add_dynamics(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("plot", help="render trajectories or a sweep report to SVG")
    p.add_argument("inputs", nargs="+")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--width", type=int, default=480)
    p.add_argument("--height", type=int, default=480)
    p.add_argument("--labels", default=None)
    p.add_argument("--figure", default=None, help="also render a matplotlib figure")
    p.set_defaults(func=cmd_plot)

    p = sub.add_parser("letters", help="write the bundled synthetic samples")
    p.add_argument("-o", "--output", required=True, help="output directory")
    p.set_defaults(func=cmd_letters)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        args.func(args)
    except UsageError as exc:
        print(f"handwriting-dmp: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"handwriting-dmp: error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (IntegrationBlowupError, DegenerateGoalError, ValueError, OSError) as exc:
        print(f"handwriting-dmp: error: {exc}", file=sys.stderr)
        return EXIT_DATA
    return 0


if __name__ == "__main__":
    sys.exit(main())
