"""Study files: a small line-oriented text format for published trial summaries.

Example::

    # lines starting with a hash are comments
    study RELIEF

    outcome
      name Disability-free survival at 1 year
      p 0.61
      hazard 1.05 536.94
      mcses hazard_ratio 0.8
      direction opposed favours the liberal arm

Keys inside an ``outcome`` block:

``name <text>``
    Unique within the file.
``p <P-value>``
``proportions <p1> <p2> <n_per_group> [total]``
``hazard <hazard_ratio> <events> [allocation]``
``means <m1> <m2> <sd> <n_per_group> [total]``
``raw <delta> <n_effective> [total]``
    Exactly one summary line. A trailing ``total`` marks ``n`` as a
    two-arm trial total, which is halved to a per-group count on parsing.
``mcses <scale> <value> [params...]``
    Scale is one of ``delta``, ``rate_difference <base_rate>``,
    ``hazard_ratio [allocation]`` or ``mean_difference <pooled_sd>``.
``direction aligned|opposed [note]``
    Optional.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from importlib import resources
from typing import Union

from .effects import (
    HazardSummary,
    MeanSummary,
    ProportionSummary,
    mcses_from_scale,
    std_effect_from_hazard,
    std_effect_from_means,
    std_effect_from_proportions,
)
from .inference import McsesSpec
from .likelihood import StudyInput, check_delta
from .numkernel import Probability

DIRECTIONS = ("aligned", "opposed")


class StudyParseError(ValueError):
    def __init__(self, message: str, line: int | None = None, field: str | None = None):
        self.line = line
        self.field = field
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field '{field}'")
        prefix = ", ".join(where)
        super().__init__(f"{prefix}: {message}" if prefix else message)


@dataclass(frozen=True)
class RawSummary:
    delta: float
    n_effective: float

    def __post_init__(self):
        object.__setattr__(self, "delta", check_delta(self.delta))
        n = self.n_effective
        if not (isinstance(n, (int, float)) and math.isfinite(n) and n >= 0):
            raise ValueError(f"n_effective must be finite and >= 0, got {n!r}")
        object.__setattr__(self, "n_effective", float(n))


Summary = Union[ProportionSummary, HazardSummary, MeanSummary, RawSummary]


def summary_effect(summary: Summary) -> tuple[float, float]:
    """Observed standardized effect and effective sample size of a summary."""
    if isinstance(summary, ProportionSummary):
        return std_effect_from_proportions(summary)
    if isinstance(summary, HazardSummary):
        return std_effect_from_hazard(summary)
    if isinstance(summary, MeanSummary):
        return std_effect_from_means(summary)
    return summary.delta, summary.n_effective


@dataclass(frozen=True)
class OutcomeRecord:
    name: str
    p_value: float
    summary: Summary
    mcses: McsesSpec
    direction: str | None = None
    direction_note: str | None = None

    def __post_init__(self):
        if not self.name or self.name != self.name.strip():
            raise ValueError(f"outcome name must be non-empty text, got {self.name!r}")
        object.__setattr__(self, "p_value", float(Probability(self.p_value)))
        if self.direction is not None and self.direction not in DIRECTIONS:
            raise ValueError(f"direction must be one of {DIRECTIONS}, got {self.direction!r}")

    @property
    def opposed(self) -> bool:
        return self.direction == "opposed"

    def study_input(self) -> StudyInput:
        return StudyInput(self.p_value, summary_effect(self.summary)[1])


@dataclass(frozen=True)
class StudyFile:
    study_name: str
    outcomes: tuple[OutcomeRecord, ...]

    def __post_init__(self):
        object.__setattr__(self, "outcomes", tuple(self.outcomes))
        if not self.outcomes:
            raise ValueError("a study file needs at least one outcome")
        seen = set()
        for o in self.outcomes:
            if o.name in seen:
                raise ValueError(f"duplicate outcome name {o.name!r}")
            seen.add(o.name)

    def outcome(self, name: str) -> OutcomeRecord:
        for o in self.outcomes:
            if o.name == name:
                return o
        raise KeyError(name)


# -- parsing ---------------------------------------------------------------

_SUMMARY_KEYS = {
    # key: (field names, may carry a trailing "total")
    "proportions": (("p1", "p2", "n_per_group"), True),
    "hazard": (("hazard_ratio", "events"), False),
    "means": (("m1", "m2", "sd", "n_per_group"), True),
    "raw": (("delta", "n"), True),
}


def _number(token: str, lineno: int, field: str) -> float:
    try:
        value = float(token)
    except ValueError:
        raise StudyParseError(f"expected a number, got {token!r}", lineno, field) from None
    if not math.isfinite(value):
        raise StudyParseError(f"expected a finite number, got {token!r}", lineno, field)
    return value


def _parse_summary(key: str, args: list[str], lineno: int) -> Summary:
    names, halvable = _SUMMARY_KEYS[key]
    halve = False
    if halvable and args and args[-1] == "total":
        halve = True
        args = args[:-1]
    extra_ok = 1 if key == "hazard" else 0
    if not (len(names) <= len(args) <= len(names) + extra_ok):
        usage = " ".join(names) + (" [allocation]" if key == "hazard" else "")
        usage += " [total]" if halvable else ""
        raise StudyParseError(f"expected '{key} {usage}'", lineno, key)
    values = [_number(t, lineno, f"{key}.{n}") for t, n in zip(args, names + ("allocation",))]
    if halve:
        values[len(names) - 1] /= 2.0
    try:
        if key == "proportions":
            return ProportionSummary(*values)
        if key == "hazard":
            return HazardSummary(*values)
        if key == "means":
            return MeanSummary(*values)
        return RawSummary(*values)
    except (TypeError, ValueError) as exc:
        raise StudyParseError(str(exc), lineno, key) from None


def _parse_mcses(args: list[str], lineno: int) -> McsesSpec:
    if len(args) < 2:
        raise StudyParseError("expected 'mcses <scale> <value> [params...]'", lineno, "mcses")
    scale = args[0]
    numbers = [_number(t, lineno, "mcses") for t in args[1:]]
    try:
        return mcses_from_scale(scale, *numbers)
    except (TypeError, ValueError) as exc:
        raise StudyParseError(str(exc), lineno, "mcses") from None


class _Block:
    def __init__(self, lineno: int):
        self.lineno = lineno
        self.fields: dict[str, object] = {}
        self.summary_line: int | None = None

    def set(self, key: str, value, lineno: int):
        if key in self.fields:
            raise StudyParseError("given twice in one outcome", lineno, key)
        self.fields[key] = value

    def build(self) -> OutcomeRecord:
        for key in ("name", "p", "summary", "mcses"):
            if key not in self.fields:
                field = key if key != "summary" else "proportions|hazard|means|raw"
                raise StudyParseError(
                    "missing from outcome block starting here", self.lineno, field
                )
        direction, note = self.fields.get("direction", (None, None))
        try:
            return OutcomeRecord(
                name=self.fields["name"],
                p_value=self.fields["p"],
                summary=self.fields["summary"],
                mcses=self.fields["mcses"],
                direction=direction,
                direction_note=note,
            )
        except (TypeError, ValueError) as exc:
            raise StudyParseError(str(exc), self.lineno, "outcome") from None


def parse_study(data: bytes | str) -> StudyFile:
    """Parse and validate a study file.

    Raises
    ------
    StudyParseError
        With the offending line number and field.
    """
    if isinstance(data, bytes):
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise StudyParseError(f"not UTF-8 text ({exc})") from None
    else:
        text = data

    study_name = None
    blocks: list[_Block] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        # whole-line comments only, so names may contain a hash
        if not line or line.startswith("#"):
            continue
        key, _, rest = line.partition(" ")
        rest = rest.strip()
        args = rest.split()

        if key == "study":
            if study_name is not None:
                raise StudyParseError("only one 'study' line is allowed", lineno, "study")
            if blocks:
                raise StudyParseError("'study' must come before any outcome", lineno, "study")
            if not rest:
                raise StudyParseError("study name is empty", lineno, "study")
            study_name = rest
            continue
        if key == "outcome":
            if study_name is None:
                raise StudyParseError("'study' line must come first", lineno, "study")
            block = _Block(lineno)
            if rest:
                block.set("name", rest, lineno)
            blocks.append(block)
            continue
        if not blocks:
            raise StudyParseError(f"'{key}' outside an outcome block", lineno, key)
        block = blocks[-1]

        if key == "name":
            if not rest:
                raise StudyParseError("outcome name is empty", lineno, "name")
            block.set("name", rest, lineno)
        elif key == "p":
            if len(args) != 1:
                raise StudyParseError("expected 'p <P-value>'", lineno, "p")
            p = _number(args[0], lineno, "p")
            if not 0.0 < p < 1.0:
                raise StudyParseError(f"P-value must lie strictly inside (0, 1), got {p!r}", lineno, "p")
            block.set("p", p, lineno)
        elif key in _SUMMARY_KEYS:
            if "summary" in block.fields:
                raise StudyParseError(
                    f"outcome already has a summary (line {block.summary_line})", lineno, key
                )
            block.set("summary", _parse_summary(key, args, lineno), lineno)
            block.summary_line = lineno
        elif key == "mcses":
            block.set("mcses", _parse_mcses(args, lineno), lineno)
        elif key == "direction":
            if not args or args[0] not in DIRECTIONS:
                raise StudyParseError(
                    "expected 'direction aligned|opposed [note]'", lineno, "direction"
                )
            note = rest[len(args[0]):].strip() or None
            block.set("direction", (args[0], note), lineno)
        else:
            raise StudyParseError(f"unknown key {key!r}", lineno, key)

    if study_name is None:
        raise StudyParseError("no 'study' line found", None, "study")
    if not blocks:
        raise StudyParseError("study has no outcomes", None, "outcome")
    outcomes = [b.build() for b in blocks]
    seen: dict[str, int] = {}
    for b, o in zip(blocks, outcomes):
        if o.name in seen:
            raise StudyParseError(
                f"duplicate outcome name {o.name!r} (first at line {seen[o.name]})",
                b.lineno,
                "name",
            )
        seen[o.name] = b.lineno
    return StudyFile(study_name, tuple(outcomes))


# -- serialization ---------------------------------------------------------


def _fmt(x: float) -> str:
    return repr(float(x))


def _summary_line(s: Summary) -> str:
    if isinstance(s, ProportionSummary):
        return f"proportions {_fmt(s.p1)} {_fmt(s.p2)} {_fmt(s.n_per_group)}"
    if isinstance(s, HazardSummary):
        return f"hazard {_fmt(s.hazard_ratio)} {_fmt(s.total_events)} {_fmt(s.allocation)}"
    if isinstance(s, MeanSummary):
        return f"means {_fmt(s.m1)} {_fmt(s.m2)} {_fmt(s.pooled_sd)} {_fmt(s.n_per_group)}"
    return f"raw {_fmt(s.delta)} {_fmt(s.n_effective)}"


def serialize_study(study: StudyFile) -> str:
    """Write ``study`` back out; ``parse_study`` of the result reproduces it."""
    lines = [f"study {study.study_name}"]
    for o in study.outcomes:
        m = o.mcses
        mcses = " ".join([m.scale, _fmt(m.value)] + [_fmt(v) for v in m.params])
        lines += [
            "",
            "outcome",
            f"  name {o.name}",
            f"  p {_fmt(o.p_value)}",
            f"  {_summary_line(o.summary)}",
            f"  mcses {mcses}",
        ]
        if o.direction is not None:
            note = f" {o.direction_note}" if o.direction_note else ""
            lines.append(f"  direction {o.direction}{note}")
    return "\n".join(lines) + "\n"


def bundled_study(name: str) -> StudyFile:
    """Load one of the shipped fixtures, ``"woman"`` or ``"relief"``."""
    path = resources.files("clinsig").joinpath("data", f"{name}.study")
    return parse_study(path.read_bytes())
