"""Per-outcome result tables in CSV and JSON form."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from typing import Iterable, Sequence

from .effects import rescale
from .inference import McsesSpec, SupportInterval, s_value, support_interval
from .likelihood import NoSolutionError
from .studies import OutcomeRecord, StudyFile

REPORT_HEADER = (
    "outcome",
    "p_value",
    "mles",
    "interval_lower",
    "interval_upper",
    "lambda",
    "k",
    "s_raw",
    "s_display",
    "flags",
)
LOWER_INCLUDES_ZERO = "LT_ZERO"


def format_percent(s: float) -> str:
    """Whole-percent display with the saturated ``<1%`` and ``>99%`` ends.

    >>> format_percent(0.7008), format_percent(0.0004), format_percent(0.9996)
    ('70%', '<1%', '>99%')
    """
    if s < 0.005:
        return "<1%"
    if s >= 0.995:
        return ">99%"
    pct = (Decimal(repr(s)) * 100).quantize(Decimal(1), rounding=ROUND_HALF_UP)
    return f"{pct}%"


def format_number(x: float | None) -> str:
    if x is None:
        return ""
    return f"{x:.10g}"


@dataclass(frozen=True)
class ReportRow:
    outcome: str
    p_value: float
    mles: float | None = None
    interval_lower: float | None = None
    interval_upper: float | None = None
    lower_includes_zero: bool = False
    lam: float | None = None
    k: float | None = None
    s_raw: float | None = None
    branch: str | None = None
    mcses: McsesSpec | None = None
    flags: tuple[str, ...] = ()
    error: str | None = None

    @property
    def s_display(self) -> str:
        return "" if self.s_raw is None else format_percent(self.s_raw)

    def as_dict(self) -> dict:
        return {
            "outcome": self.outcome,
            "p_value": self.p_value,
            "mles": self.mles,
            "interval_lower": LOWER_INCLUDES_ZERO if self.lower_includes_zero else self.interval_lower,
            "interval_upper": self.interval_upper,
            "lambda": self.lam,
            "k": self.k,
            "s_raw": self.s_raw,
            "s_display": self.s_display,
            "branch": self.branch,
            "mcses": None if self.mcses is None else self.mcses.describe(),
            "mcses_delta": None if self.mcses is None else self.mcses.delta,
            "flags": list(self.flags),
            "error": self.error,
        }

    def csv_fields(self) -> list[str]:
        if self.lower_includes_zero:
            lower = LOWER_INCLUDES_ZERO
        else:
            lower = format_number(self.interval_lower)
        flags = list(self.flags)
        if self.error is not None:
            flags.append(f"error: {self.error}")
        return [
            self.outcome,
            format_number(self.p_value),
            format_number(self.mles),
            lower,
            format_number(self.interval_upper),
            format_number(self.lam),
            format_number(self.k),
            "" if self.s_raw is None else f"{self.s_raw:.6f}",
            self.s_display,
            ";".join(flags),
        ]


def evaluate(
    outcome: str,
    study,
    mcses: McsesSpec,
    opposed: bool = False,
) -> ReportRow:
    """One row for a study input and MCSES; computation errors land in ``error``."""
    try:
        result = s_value(study, mcses, opposed=opposed)
    except (NoSolutionError, ValueError) as exc:
        return ReportRow(outcome, study.p_value, mcses=mcses, error=str(exc))
    interval: SupportInterval | None = None
    flags = list(result.flags)
    try:
        interval = support_interval(study)
    except NoSolutionError:
        flags.append("no-interval")
    return ReportRow(
        outcome=outcome,
        p_value=study.p_value,
        mles=result.mles.mles,
        interval_lower=None if interval is None else interval.lower,
        interval_upper=None if interval is None else interval.upper,
        lower_includes_zero=interval is not None and interval.includes_zero,
        lam=result.lam,
        k=result.k,
        s_raw=result.s,
        branch=result.branch.value,
        mcses=mcses,
        flags=tuple(flags),
    )


def _outcome_row(outcome: OutcomeRecord, mcses: McsesSpec, label: str) -> ReportRow:
    try:
        study = outcome.study_input()
    except ValueError as exc:
        return ReportRow(label, outcome.p_value, mcses=mcses, error=str(exc))
    return evaluate(label, study, mcses, opposed=outcome.opposed)


def build_report(study: StudyFile, mcses_grid: Sequence[float] | None = None) -> list[ReportRow]:
    """One row per outcome, in file order.

    With ``mcses_grid`` each outcome instead gets one row per grid value,
    read on the scale of that outcome's own MCSES and labelled
    ``"<name> [mcses=<value>]"``. A failure in one outcome is reported in
    that row and does not stop the others.
    """
    rows = []
    for outcome in study.outcomes:
        if mcses_grid is None:
            rows.append(_outcome_row(outcome, outcome.mcses, outcome.name))
            continue
        for value in mcses_grid:
            label = f"{outcome.name} [mcses={value:g}]"
            try:
                spec = rescale(outcome.mcses, value)
            except ValueError as exc:
                rows.append(ReportRow(label, outcome.p_value, error=str(exc)))
                continue
            rows.append(_outcome_row(outcome, spec, label))
    return rows


def report_csv(rows: Iterable[ReportRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(REPORT_HEADER)
    for row in rows:
        writer.writerow(row.csv_fields())
    return buf.getvalue()


def report_json(rows: Iterable[ReportRow], study_name: str | None = None) -> str:
    payload = {"study": study_name, "rows": [r.as_dict() for r in rows]}
    return json.dumps(payload, indent=2) + "\n"
