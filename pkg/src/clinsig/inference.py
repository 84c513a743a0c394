"""Support intervals, the likelihood-ratio statistic and the S-value.

The S-value is the one-sided support the data give to the true effect
exceeding a minimum clinically significant effect size (MCSES). With
``lambda = -2 ln(LR(mcses) / LR(mles))`` and ``K`` the chi-squared(1) CDF at
``lambda``::

    S = K + (1 - K)/2   if mles > mcses
    S = (1 - K)/2       if mles < mcses
    S = 0.5             if mles == mcses
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

from .likelihood import (
    MlesResult,
    NoSolutionError,
    StudyInput,
    check_delta,
    likelihood_ratio,
    log_likelihood_ratio,
    mles,
    upper_search_limit,
)
from .numkernel import DEFAULT_TOL, Bracket, bisect, chi2_1_cdf, normal_cdf

# Fraction of the peak likelihood at the 95% support-interval limits. Kept at
# the printed four-digit value; exp(-3.8415/2) would give 0.14653.
INTERVAL_FRACTION = 0.1465

# |mles - mcses| at or below this selects the "equal" branch.
TIE_TOLERANCE = 1e-9

# Validity region of the closed-form upper limit.
CLOSED_FORM_MAX_P = 0.2
CLOSED_FORM_MIN_N = 30.0
CLOSED_FORM_OFFSET = 1.77

# Heuristic region where the quadratic approximation behind the chi-squared
# reference is poor: a large P-value and a small MCSES relative to 1/sqrt(n).
LOW_REGULARITY_MIN_P = 0.5
LOW_REGULARITY_MAX_SHIFT = 1.0

FLAG_LOW_REGULARITY = "low-regularity"
FLAG_DIRECTION_OPPOSED = "direction-opposed"


class Branch(str, enum.Enum):
    ABOVE = "above"
    BELOW = "below"
    EQUAL = "equal"


class Method(str, enum.Enum):
    NUMERIC = "numeric"
    CLOSED_FORM = "closed_form"


@dataclass(frozen=True)
class McsesSpec:
    """Minimum clinically significant effect, standardized.

    ``scale``, ``value`` and ``params`` record where ``delta`` came from
    (for instance ``"hazard_ratio"``, ``0.8`` and the allocation fraction).
    They are carried through for reporting and serialization only.
    """

    delta: float
    scale: str = "delta"
    value: float | None = None
    params: tuple[float, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "delta", check_delta(self.delta, "MCSES delta"))
        if self.value is None:
            object.__setattr__(self, "value", self.delta)

    def describe(self) -> str:
        if self.scale == "delta":
            return f"delta={self.delta:g}"
        return f"{self.scale}={self.value:g} (delta={self.delta:.6g})"


McsesLike = Union[McsesSpec, float, int]


def as_mcses(mcses: McsesLike) -> McsesSpec:
    if isinstance(mcses, McsesSpec):
        return mcses
    return McsesSpec(mcses)


@dataclass(frozen=True)
class SupportInterval:
    """95% likelihood support interval for the standardized effect.

    ``lower`` is ``None`` when the interval reaches zero, in which case it
    is reported as including zero and negative effects.
    """

    lower: float | None
    upper: float
    threshold_lr: float
    method: Method
    mles: MlesResult

    @property
    def includes_zero(self) -> bool:
        return self.lower is None


@dataclass(frozen=True)
class SValueResult:
    s: float
    lam: float
    k: float
    branch: Branch
    mles: MlesResult
    mcses: McsesSpec
    flags: tuple[str, ...] = ()


def interval_power_limits(fraction: float = INTERVAL_FRACTION) -> tuple[float, float]:
    """Marginal powers at the interval limits, roots of ``g - g**2 = fraction/4``."""
    disc = math.sqrt(1.0 - fraction)
    return (1.0 - disc) / 2.0, (1.0 + disc) / 2.0


def support_interval(study: StudyInput, tol: float = DEFAULT_TOL) -> SupportInterval:
    """Numeric 95% support interval by bisection on each flank of the peak."""
    if study.n_effective == 0:
        raise NoSolutionError("support interval is unbounded when n_effective = 0")
    peak = mles(study)

    def excess(d: float) -> float:
        return likelihood_ratio(d, study) / peak.lr_max - INTERVAL_FRACTION

    upper = bisect(excess, Bracket(peak.mles, upper_search_limit(study), tol))
    lower = None
    if peak.mles > 0 and excess(0.0) < 0:
        lower = bisect(excess, Bracket(0.0, peak.mles, tol))
    return SupportInterval(
        lower=lower,
        upper=upper,
        threshold_lr=INTERVAL_FRACTION * peak.lr_max,
        method=Method.NUMERIC,
        mles=peak,
    )


def closed_form_upper(study: StudyInput) -> float:
    """Upper support limit ``(z_(1-P/2) + 1.77) / sqrt(n)``.

    Only valid for P < 0.2 and n > 30; use :func:`support_interval` elsewhere.
    """
    if not (study.p_value < CLOSED_FORM_MAX_P and study.n_effective > CLOSED_FORM_MIN_N):
        raise ValueError(
            f"closed-form upper limit needs P < {CLOSED_FORM_MAX_P} and "
            f"n > {CLOSED_FORM_MIN_N:g} (got P={study.p_value}, n={study.n_effective:g}); "
            "use support_interval() instead"
        )
    return (study.critical + CLOSED_FORM_OFFSET) / math.sqrt(study.n_effective)


def rule_a_upper(study: StudyInput) -> float:
    """Approximate upper limit for P >= 0.5: ``mles + (2.96 - P)/sqrt(n)``.

    Empirical rule, about 4% high at worst; not used for reporting.
    """
    if study.p_value < 0.5:
        raise ValueError("rule a applies only when P >= 0.5")
    if study.n_effective <= 0:
        raise NoSolutionError("rule a needs n_effective > 0")
    return (2.96 - study.p_value) / math.sqrt(study.n_effective)


def rule_b_upper(study: StudyInput) -> float:
    """Asymptote ``mles + 1.77/sqrt(n)`` of the upper limit for P < 0.5."""
    if study.p_value >= 0.5:
        raise ValueError("rule b applies only when P < 0.5")
    peak = mles(study)
    return peak.mles + CLOSED_FORM_OFFSET / math.sqrt(study.n_effective)


def _lambda(study: StudyInput, peak: MlesResult, delta: float) -> float:
    if delta == peak.mles:
        return 0.0
    lam = -2.0 * (log_likelihood_ratio(delta, study) - math.log(peak.lr_max))
    return max(lam, 0.0)


def lambda_stat(study: StudyInput, mcses: McsesLike) -> float:
    """``-2 ln(LR(mcses) / LR(mles))``, clamped at zero against rounding."""
    return _lambda(study, mles(study), as_mcses(mcses).delta)


def _s_value(
    study: StudyInput, peak: MlesResult, mcses: McsesSpec, opposed: bool
) -> SValueResult:
    lam = _lambda(study, peak, mcses.delta)
    k = chi2_1_cdf(lam)
    flags = []
    if (
        study.p_value > LOW_REGULARITY_MIN_P
        and mcses.delta * math.sqrt(study.n_effective) < LOW_REGULARITY_MAX_SHIFT
    ):
        flags.append(FLAG_LOW_REGULARITY)

    gap = peak.mles - mcses.delta
    if opposed and study.p_value < 0.5:
        flags.append(FLAG_DIRECTION_OPPOSED)
        branch = Branch.BELOW
    elif abs(gap) <= TIE_TOLERANCE:
        branch = Branch.EQUAL
    elif gap > 0:
        branch = Branch.ABOVE
    else:
        branch = Branch.BELOW

    # Phi(+-sqrt(lam)) equals K + (1-K)/2 and (1-K)/2 but keeps the small
    # tail probability instead of rounding 1 - K to zero.
    if branch is Branch.EQUAL:
        s = 0.5
    elif branch is Branch.ABOVE:
        s = normal_cdf(math.sqrt(lam)) if math.isfinite(lam) else 1.0
    else:
        s = normal_cdf(-math.sqrt(lam)) if math.isfinite(lam) else 0.0
    return SValueResult(
        s=s, lam=lam, k=k, branch=branch, mles=peak, mcses=mcses, flags=tuple(flags)
    )


def s_value(study: StudyInput, mcses: McsesLike, opposed: bool = False) -> SValueResult:
    """Clinical significance support level of ``study`` against ``mcses``.

    Parameters
    ----------
    study : StudyInput
    mcses : McsesSpec or float
        Minimum clinically significant effect; a bare number is a
        standardized delta.
    opposed : bool
        Set when the observed effect points away from the clinically
        relevant direction. With P < 0.5 the result is then forced onto the
        below-MCSES branch and flagged ``direction-opposed``.

    Returns
    -------
    SValueResult
        ``flags`` contains ``low-regularity`` when P > 0.5 and
        ``mcses * sqrt(n) < 1``, a heuristic zone where the chi-squared
        reference for lambda is least trustworthy.
    """
    return _s_value(study, mles(study), as_mcses(mcses), opposed)


def mcses_sweep(
    study: StudyInput, grid: Iterable[McsesLike], opposed: bool = False
) -> list[tuple[McsesSpec, SValueResult]]:
    """S-values along a strictly increasing MCSES grid, in grid order."""
    specs: Sequence[McsesSpec] = [as_mcses(g) for g in grid]
    if not specs:
        raise ValueError("MCSES grid is empty")
    for a, b in zip(specs, specs[1:]):
        if not b.delta > a.delta:
            raise ValueError(
                f"MCSES grid must be strictly increasing in delta ({a.delta!r} then {b.delta!r})"
            )
    peak = mles(study)
    return [(spec, _s_value(study, peak, spec, opposed)) for spec in specs]
