"""Normal-distribution special functions and a bisection root finder.

Everything here is a pure function of its arguments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from statistics import NormalDist
from typing import Callable

DEFAULT_TOL = 1e-10

_STD_NORMAL = NormalDist()
_SQRT2 = math.sqrt(2.0)


class BracketError(ValueError):
    """Raised when a bracket does not enclose a sign change."""


@dataclass(frozen=True)
class Probability:
    """A probability strictly inside (0, 1)."""

    value: float

    def __post_init__(self):
        v = self.value
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise TypeError(f"probability must be a real number, got {v!r}")
        if not (0.0 < v < 1.0):
            raise ValueError(f"probability must lie strictly inside (0, 1), got {v!r}")

    def __float__(self):
        return float(self.value)


@dataclass(frozen=True)
class Bracket:
    lo: float
    hi: float
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise ValueError("bracket endpoints must be finite")
        if not self.lo < self.hi:
            raise ValueError(f"bracket requires lo < hi, got [{self.lo}, {self.hi}]")
        if not self.tol > 0:
            raise ValueError(f"tolerance must be positive, got {self.tol}")


def _as_prob(p) -> float:
    if isinstance(p, Probability):
        return p.value
    return Probability(p).value


def normal_cdf(x: float) -> float:
    """Standard normal CDF.

    Computed as ``erfc(-x/sqrt(2))/2`` so that the lower tail keeps full
    relative precision down to about ``x = -38``.
    """
    if not math.isfinite(x):
        raise ValueError(f"normal_cdf requires a finite argument, got {x!r}")
    return 0.5 * math.erfc(-x / _SQRT2)


def normal_quantile(p) -> float:
    """Inverse of :func:`normal_cdf` for ``p`` strictly inside (0, 1)."""
    return _STD_NORMAL.inv_cdf(_as_prob(p))


def upper_critical(p) -> float:
    """Two-sided critical value ``z`` with ``P(|Z| > z) = p``.

    Evaluated as ``-Phi^-1(p/2)`` rather than ``Phi^-1(1 - p/2)``; the two
    agree mathematically but the former does not lose the low bits of small
    ``p`` to the subtraction from one.
    """
    return -_STD_NORMAL.inv_cdf(0.5 * _as_prob(p))


def chi2_1_cdf(x: float) -> float:
    """CDF of the chi-squared distribution with one degree of freedom."""
    if math.isnan(x) or x < 0:
        raise ValueError(f"chi2_1_cdf requires x >= 0, got {x!r}")
    if math.isinf(x):
        return 1.0
    return 2.0 * normal_cdf(math.sqrt(x)) - 1.0


def bisect(f: Callable[[float], float], bracket: Bracket) -> float:
    """Find a root of ``f`` inside ``bracket`` by bisection.

    Returns ``x`` with ``|f(x)| <= bracket.tol``. If the interval collapses
    to adjacent floats first, the endpoint with the smaller residual is
    returned; for the continuous functions used in this package that
    residual is already far below any tolerance we ask for.

    Raises
    ------
    BracketError
        If ``f(lo)`` and ``f(hi)`` share a sign.
    """
    lo, hi, tol = bracket.lo, bracket.hi, bracket.tol
    f_lo = f(lo)
    if abs(f_lo) <= tol:
        return lo
    f_hi = f(hi)
    if abs(f_hi) <= tol:
        return hi
    if (f_lo > 0) == (f_hi > 0):
        side = "lower" if abs(f_lo) < abs(f_hi) else "upper"
        raise BracketError(
            f"no sign change on [{lo!r}, {hi!r}]: f(lo)={f_lo!r}, f(hi)={f_hi!r} "
            f"(the {side} endpoint is nearest a root but does not cross it)"
        )

    while True:
        mid = lo + 0.5 * (hi - lo)
        if mid <= lo or mid >= hi:
            return lo if abs(f_lo) <= abs(f_hi) else hi
        f_mid = f(mid)
        if abs(f_mid) <= tol:
            return mid
        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = mid, f_mid
        else:
            hi, f_hi = mid, f_mid
