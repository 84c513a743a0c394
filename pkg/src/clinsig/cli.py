"""Command-line interface.

Exit status: 0 on success, 1 when a computation has no answer (for example
``mles`` with n = 0 and P < 0.5), 2 for usage errors and unreadable study
files.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Sequence

from . import __version__
from .effects import mcses_from_scale
from .export import export_curve, export_points
from .inference import McsesSpec, mcses_sweep, support_interval
from .likelihood import StudyInput, marginal_power, mles, sample_curve
from .report import ReportRow, build_report, evaluate, report_csv, report_json
from .studies import StudyParseError, parse_study

# CLI scale name -> (MCSES scale, option supplying its parameter)
SCALES = {
    "raw": ("delta", None),
    "proportions": ("rate_difference", "base_rate"),
    "hazard": ("hazard_ratio", "allocation"),
    "means": ("mean_difference", "sd"),
}


class ComputationError(Exception):
    pass


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def _probability(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0.0 < value < 1.0:
        raise argparse.ArgumentTypeError(f"P-value must lie strictly inside (0, 1), got {text}")
    return value


def _nonnegative(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not (math.isfinite(value) and value >= 0):
        raise argparse.ArgumentTypeError(f"must be finite and >= 0, got {text}")
    return value


def _finite(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"must be finite, got {text}")
    return value


def _count(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 2:
        raise argparse.ArgumentTypeError(f"need at least 2 points, got {value}")
    return value


def _grid(text: str) -> list[float]:
    try:
        values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("grid is empty")
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="clinsig",
        description="Likelihood-based clinical significance (S-values) from a P-value and sample size.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def study_opts(p):
        p.add_argument("--p", type=_probability, required=True, help="two-sided P-value")
        p.add_argument(
            "--n",
            type=_nonnegative,
            required=True,
            help="effective sample size (per group, or events for hazard ratios)",
        )
        p.add_argument("--json", action="store_true", help="machine-readable output")

    def scale_opts(p):
        p.add_argument("--scale", choices=sorted(SCALES), default="raw",
                       help="scale of MCSES values (default: standardized delta)")
        p.add_argument("--base-rate", type=_probability,
                       help="event rate the rate difference is centred on (proportions)")
        p.add_argument("--allocation", type=_probability, default=0.5,
                       help="fraction randomized to one arm (hazard; default 0.5)")
        p.add_argument("--sd", type=_finite, help="pooled standard deviation (means)")
        p.add_argument("--direction", choices=("aligned", "opposed"), default="aligned",
                       help="whether the observed effect points the clinically relevant way")

    p = sub.add_parser("power", help="marginal power at a standardized effect")
    study_opts(p)
    p.add_argument("--delta", type=_nonnegative, required=True)

    p = sub.add_parser("mles", help="most likely effect size")
    study_opts(p)

    p = sub.add_parser("interval", help="95%% likelihood support interval")
    study_opts(p)

    p = sub.add_parser("svalue", help="clinical significance support level")
    study_opts(p)
    p.add_argument("--mcses", type=_finite, required=True)
    scale_opts(p)

    p = sub.add_parser("sweep", help="S-value across a range of MCSES values")
    study_opts(p)
    p.add_argument("--start", type=_finite, required=True)
    p.add_argument("--stop", type=_finite, required=True)
    p.add_argument("--steps", type=_count, default=41)
    p.add_argument("--format", choices=("csv", "svg"), default="csv")
    scale_opts(p)

    p = sub.add_parser("curve", help="likelihood ratio curve over delta")
    study_opts(p)
    p.add_argument("--delta-max", type=_nonnegative, required=True)
    p.add_argument("--count", type=_count, default=201)
    p.add_argument("--format", choices=("csv", "svg"), default="csv")

    p = sub.add_parser("report", help="S-value report for a study file")
    p.add_argument("--in", dest="infile", required=True, help="study file, or - for stdin")
    p.add_argument("--out", dest="outfile", help="output file (default: stdout)")
    p.add_argument("--mcses-grid", type=_grid,
                   help="comma-separated MCSES values on each outcome's own scale")
    p.add_argument("--json", action="store_true")
    return parser


def _mcses(args, value: float) -> McsesSpec:
    scale, param = SCALES[args.scale]
    params = []
    if param is not None:
        given = getattr(args, param)
        if given is None:
            raise UsageError(f"--scale {args.scale} needs --{param.replace('_', '-')}")
        params.append(given)
    try:
        return mcses_from_scale(scale, value, *params)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _human(fields: list[tuple[str, object]]) -> str:
    width = max(len(k) for k, _ in fields)
    lines = []
    for key, value in fields:
        if isinstance(value, float):
            value = f"{value:.6g}"
        elif isinstance(value, bool):
            value = "yes" if value else "no"
        elif value is None:
            value = "-"
        lines.append(f"{key.ljust(width)}  {value}")
    return "\n".join(lines) + "\n"


def _emit(out, payload: dict, human: list[tuple[str, object]], as_json: bool):
    if as_json:
        out.write(json.dumps(payload, indent=2) + "\n")
    else:
        out.write(_human(human))


def _row_human(row: ReportRow, study: StudyInput) -> list[tuple[str, object]]:
    if row.lower_includes_zero:
        lower = "includes zero and negative"
    else:
        lower = row.interval_lower
    return [
        ("P-value", row.p_value),
        ("n", study.n_effective),
        ("MLES", row.mles),
        ("MCSES", None if row.mcses is None else row.mcses.describe()),
        ("interval lower", lower),
        ("interval upper", row.interval_upper),
        ("lambda", row.lam),
        ("K", row.k),
        ("branch", row.branch),
        ("S", f"{row.s_display} (s_raw={row.s_raw:.6f})"),
        ("flags", ", ".join(row.flags) or None),
    ]


def _cmd_power(args, out):
    study = StudyInput(args.p, args.n)
    gamma = marginal_power(args.delta, study)
    payload = {"p_value": study.p_value, "n_effective": study.n_effective,
               "delta": args.delta, "gamma": gamma}
    _emit(out, payload, [("P-value", study.p_value), ("n", study.n_effective),
                         ("delta", args.delta), ("gamma", gamma)], args.json)


def _cmd_mles(args, out):
    study = StudyInput(args.p, args.n)
    result = mles(study)
    payload = {"p_value": study.p_value, "n_effective": study.n_effective,
               "mles": result.mles, "gamma_at_mles": result.gamma_at_mles,
               "degenerate": result.degenerate, "lr_max": result.lr_max}
    _emit(out, payload, [("P-value", study.p_value), ("n", study.n_effective),
                         ("MLES", result.mles), ("gamma at MLES", result.gamma_at_mles),
                         ("degenerate", result.degenerate), ("LR max", result.lr_max)],
          args.json)


def _cmd_interval(args, out):
    study = StudyInput(args.p, args.n)
    iv = support_interval(study)
    payload = {"p_value": study.p_value, "n_effective": study.n_effective,
               "mles": iv.mles.mles,
               "interval_lower": "LT_ZERO" if iv.includes_zero else iv.lower,
               "interval_upper": iv.upper, "threshold_lr": iv.threshold_lr,
               "method": iv.method.value}
    lower = "includes zero and negative" if iv.includes_zero else iv.lower
    _emit(out, payload, [("P-value", study.p_value), ("n", study.n_effective),
                         ("MLES", iv.mles.mles), ("lower", lower), ("upper", iv.upper),
                         ("threshold LR", iv.threshold_lr)], args.json)


def _cmd_svalue(args, out):
    study = StudyInput(args.p, args.n)
    spec = _mcses(args, args.mcses)
    row = evaluate("-", study, spec, opposed=args.direction == "opposed")
    if row.error is not None:
        raise ComputationError(row.error)
    payload = row.as_dict()
    payload["outcome"] = None
    payload["n_effective"] = study.n_effective
    _emit(out, payload, _row_human(row, study), args.json)


def _cmd_sweep(args, out):
    study = StudyInput(args.p, args.n)
    if args.stop <= args.start:
        raise UsageError("--stop must be greater than --start")
    step = (args.stop - args.start) / (args.steps - 1)
    values = [args.start + i * step for i in range(args.steps - 1)] + [args.stop]
    specs = [_mcses(args, v) for v in values]
    deltas = [s.delta for s in specs]
    if all(b > a for a, b in zip(deltas, deltas[1:])):
        results = mcses_sweep(study, specs, opposed=args.direction == "opposed")
    elif all(b < a for a, b in zip(deltas, deltas[1:])):
        results = mcses_sweep(study, specs[::-1], opposed=args.direction == "opposed")[::-1]
    else:
        raise UsageError("the range must map to a monotone set of standardized effects "
                         "(a hazard-ratio range may not straddle 1)")
    if args.json:
        payload = {"p_value": study.p_value, "n_effective": study.n_effective,
                   "scale": specs[0].scale,
                   "points": [{"mcses": spec.value, "mcses_delta": spec.delta,
                               "s_raw": r.s, "lambda": r.lam, "k": r.k,
                               "branch": r.branch.value} for spec, r in results]}
        out.write(json.dumps(payload, indent=2) + "\n")
        return
    out.write(export_curve(results, args.format).decode())


def _cmd_curve(args, out):
    study = StudyInput(args.p, args.n)
    if args.delta_max <= 0:
        raise UsageError("--delta-max must be positive")
    curve = sample_curve(study, args.delta_max, args.count)
    if args.json:
        payload = {"p_value": study.p_value, "n_effective": study.n_effective,
                   "points": [{"delta": d, "lr": v} for d, v in curve.points]}
        out.write(json.dumps(payload, indent=2) + "\n")
        return
    out.write(export_points(curve.points, args.format, "delta", "likelihood_ratio").decode())


def _cmd_report(args, out):
    try:
        if args.infile == "-":
            data = sys.stdin.buffer.read()
        else:
            with open(args.infile, "rb") as fh:
                data = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {args.infile}: {exc.strerror}") from None
    try:
        study = parse_study(data)
    except StudyParseError as exc:
        raise UsageError(f"{args.infile}: {exc}") from None
    rows = build_report(study, args.mcses_grid)
    text = report_json(rows, study.study_name) if args.json else report_csv(rows)
    if args.outfile:
        with open(args.outfile, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        out.write(text)
    failed = [r for r in rows if r.error is not None]
    if failed:
        for r in failed:
            sys.stderr.write(f"clinsig: {r.outcome}: {r.error}\n")
        return 1
    return 0


COMMANDS = {
    "power": _cmd_power,
    "mles": _cmd_mles,
    "interval": _cmd_interval,
    "svalue": _cmd_svalue,
    "sweep": _cmd_sweep,
    "curve": _cmd_curve,
    "report": _cmd_report,
}


def run(argv: Sequence[str] | None = None, out=None) -> int:
    """Run the CLI and return its exit status; output goes to ``out`` (stdout)."""
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        status = COMMANDS[args.command](args, out)
    except UsageError as exc:
        sys.stderr.write(f"clinsig {args.command}: error: {exc}\n")
        return 2
    except (ComputationError, ArithmeticError, ValueError) as exc:
        sys.stderr.write(f"clinsig {args.command}: {exc}\n")
        return 1
    return status or 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
