"""Map published study summaries onto a standardized effect and sample size.

Conventions
-----------
* Two proportions: ``|p1 - p2| / sqrt(p1(1-p1) + p2(1-p2))``, with ``n`` the
  number of subjects per group.
* Hazard ratio: ``|ln HR| * sqrt(q(1-q))``, with ``n`` the total number of
  events and ``q`` the allocation fraction (``|ln HR| / 2`` at 1:1).
* Two means: ``|m1 - m2| / sd`` with ``n`` per group.

All adapters return magnitudes. Direction is tracked separately by the
caller.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .inference import McsesSpec


def _positive(value, name: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise TypeError(f"{name} must be a real number, got {value!r}")
    if not (math.isfinite(value) and value > 0):
        raise ValueError(f"{name} must be finite and > 0, got {value!r}")
    return float(value)


def _open_unit(value, name: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise TypeError(f"{name} must be a real number, got {value!r}")
    if not (0.0 < value < 1.0):
        raise ValueError(f"{name} must lie strictly inside (0, 1), got {value!r}")
    return float(value)


def _finite(value, name: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise TypeError(f"{name} must be a real number, got {value!r}")
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")
    return float(value)


@dataclass(frozen=True)
class ProportionSummary:
    p1: float
    p2: float
    n_per_group: float

    def __post_init__(self):
        object.__setattr__(self, "p1", _open_unit(self.p1, "p1"))
        object.__setattr__(self, "p2", _open_unit(self.p2, "p2"))
        object.__setattr__(self, "n_per_group", _positive(self.n_per_group, "n_per_group"))


@dataclass(frozen=True)
class HazardSummary:
    hazard_ratio: float
    total_events: float
    allocation: float = 0.5

    def __post_init__(self):
        object.__setattr__(self, "hazard_ratio", _positive(self.hazard_ratio, "hazard_ratio"))
        object.__setattr__(self, "total_events", _positive(self.total_events, "total_events"))
        object.__setattr__(self, "allocation", _open_unit(self.allocation, "allocation"))


@dataclass(frozen=True)
class MeanSummary:
    m1: float
    m2: float
    pooled_sd: float
    n_per_group: float

    def __post_init__(self):
        object.__setattr__(self, "m1", _finite(self.m1, "m1"))
        object.__setattr__(self, "m2", _finite(self.m2, "m2"))
        object.__setattr__(self, "pooled_sd", _positive(self.pooled_sd, "pooled_sd"))
        object.__setattr__(self, "n_per_group", _positive(self.n_per_group, "n_per_group"))


def proportion_delta(p1: float, p2: float) -> float:
    p1 = _open_unit(p1, "p1")
    p2 = _open_unit(p2, "p2")
    return abs(p1 - p2) / math.sqrt(p1 * (1 - p1) + p2 * (1 - p2))


def hazard_delta(hazard_ratio: float, allocation: float = 0.5) -> float:
    hazard_ratio = _positive(hazard_ratio, "hazard_ratio")
    q = _open_unit(allocation, "allocation")
    return abs(math.log(hazard_ratio)) * math.sqrt(q * (1 - q))


def std_effect_from_proportions(s: ProportionSummary) -> tuple[float, float]:
    return proportion_delta(s.p1, s.p2), s.n_per_group


def std_effect_from_hazard(s: HazardSummary) -> tuple[float, float]:
    return hazard_delta(s.hazard_ratio, s.allocation), s.total_events


def std_effect_from_means(s: MeanSummary) -> tuple[float, float]:
    return abs(s.m1 - s.m2) / s.pooled_sd, s.n_per_group


def mcses_from_delta(delta: float) -> McsesSpec:
    return McsesSpec(delta)


def mcses_from_rate_difference(difference: float, base_rate: float) -> McsesSpec:
    """Standardize an absolute rate difference centred on ``base_rate``.

    The two arms are taken as ``base_rate +- difference/2``, so that the
    result does not depend on which arm is called the control.
    """
    difference = abs(_finite(difference, "rate difference"))
    base_rate = _open_unit(base_rate, "base rate")
    if difference == 0:
        return McsesSpec(0.0, "rate_difference", 0.0, (base_rate,))
    hi, lo = base_rate + difference / 2, base_rate - difference / 2
    if not (0.0 < lo and hi < 1.0):
        raise ValueError(
            f"rate difference {difference} does not fit around base rate {base_rate}"
        )
    return McsesSpec(proportion_delta(hi, lo), "rate_difference", difference, (base_rate,))


def mcses_from_hazard_ratio(hazard_ratio: float, allocation: float = 0.5) -> McsesSpec:
    return McsesSpec(
        hazard_delta(hazard_ratio, allocation),
        "hazard_ratio",
        float(hazard_ratio),
        (float(allocation),),
    )


def mcses_from_mean_difference(difference: float, pooled_sd: float) -> McsesSpec:
    difference = _finite(difference, "mean difference")
    pooled_sd = _positive(pooled_sd, "pooled_sd")
    return McsesSpec(abs(difference) / pooled_sd, "mean_difference", difference, (pooled_sd,))


# scale name -> (constructor, names of the extra parameters, their defaults)
MCSES_SCALES = {
    "delta": (mcses_from_delta, (), ()),
    "rate_difference": (mcses_from_rate_difference, ("base_rate",), ()),
    "hazard_ratio": (mcses_from_hazard_ratio, ("allocation",), (0.5,)),
    "mean_difference": (mcses_from_mean_difference, ("pooled_sd",), ()),
}


def mcses_from_scale(scale: str, value: float, *params: float) -> McsesSpec:
    """Build an MCSES from a value on a named scale.

    >>> round(mcses_from_scale("hazard_ratio", 0.8).delta, 4)
    0.1116
    """
    try:
        build, names, defaults = MCSES_SCALES[scale]
    except KeyError:
        raise ValueError(
            f"unknown MCSES scale {scale!r}; expected one of {', '.join(MCSES_SCALES)}"
        ) from None
    required = len(names) - len(defaults)
    if not (required <= len(params) <= len(names)):
        want = " ".join(names) if names else "no extra parameters"
        raise ValueError(f"MCSES scale {scale!r} takes: value {want}")
    return build(value, *params)


def rescale(spec: McsesSpec, value: float) -> McsesSpec:
    """Same scale and parameters as ``spec``, different value."""
    return mcses_from_scale(spec.scale, value, *spec.params)
