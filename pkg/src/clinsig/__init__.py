"""Likelihood-based clinical significance from a P-value and sample size.

Typical use::

    >>> from clinsig import StudyInput, s_value
    >>> round(s_value(StudyInput(0.32, 1490), 0.0).s, 3)
    0.701
"""

from .inference import (
    Branch,
    McsesSpec,
    SupportInterval,
    SValueResult,
    closed_form_upper,
    lambda_stat,
    mcses_sweep,
    s_value,
    support_interval,
)
from .likelihood import (
    LikelihoodCurve,
    MlesResult,
    NoSolutionError,
    StudyInput,
    likelihood_ratio,
    marginal_power,
    mles,
    mles_closed_form,
    sample_curve,
)
from .report import build_report, report_csv
from .studies import bundled_study, parse_study, serialize_study

__version__ = "0.1.0"

__all__ = [
    "Branch",
    "LikelihoodCurve",
    "McsesSpec",
    "MlesResult",
    "NoSolutionError",
    "StudyInput",
    "SupportInterval",
    "SValueResult",
    "build_report",
    "bundled_study",
    "closed_form_upper",
    "lambda_stat",
    "likelihood_ratio",
    "marginal_power",
    "mcses_sweep",
    "mles",
    "mles_closed_form",
    "parse_study",
    "report_csv",
    "s_value",
    "sample_curve",
    "serialize_study",
    "support_interval",
]
