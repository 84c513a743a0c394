"""Seeded sweeps shared by the property and acceptance suites.

Each function returns the worst observed deviation so callers can compare
against their own tolerance and report it.
"""

import math
import random

from clinsig.inference import s_value
from clinsig.likelihood import (
    StudyInput,
    likelihood_ratio,
    marginal_power,
    mles,
    upper_search_limit,
)


def random_study(rng, p_low=1e-6, p_high=0.999, n_low=1.0, n_high=1e5):
    p = math.exp(rng.uniform(math.log(p_low), math.log(p_high)))
    n = math.exp(rng.uniform(math.log(n_low), math.log(n_high)))
    return StudyInput(p, n)


def gamma_at_zero(count=1000, seed=1):
    rng = random.Random(seed)
    worst = 0.0
    for _ in range(count):
        study = random_study(rng)
        worst = max(worst, abs(marginal_power(0.0, study) - study.p_value))
    return worst


def lr_at_zero(count=1000, seed=2):
    rng = random.Random(seed)
    worst = 0.0
    for _ in range(count):
        study = random_study(rng)
        worst = max(worst, abs(likelihood_ratio(0.0, study) - 1.0))
    return worst


def grid_maximality(count=200, points=10_000, seed=3):
    """Largest relative amount by which a grid point beats the reported peak."""
    rng = random.Random(seed)
    worst = 0.0
    for _ in range(count):
        study = random_study(rng, p_high=0.4999)
        peak = mles(study).lr_max
        # grid spans the peak with room on both sides
        top = min(upper_search_limit(study), 3 * (study.critical + 3) / math.sqrt(study.n_effective))
        step = top / (points - 1)
        best = max(likelihood_ratio(i * step, study) for i in range(points))
        worst = max(worst, (best - peak) / peak)
    return worst


def s_bounds(count=300, seed=4):
    """Counts of violations of lam >= 0, 0 <= K < 1 and 0 < S < 1.

    Studies are kept where the tails remain representable in doubles. K is
    only held below 1 for lam < 60, since from about 68 on 1 - K is under one ulp.
    """
    rng = random.Random(seed)
    bad = 0
    for _ in range(count):
        study = random_study(rng, n_high=1e4)
        limit = 30 / math.sqrt(study.n_effective)
        for _ in range(5):
            r = s_value(study, rng.uniform(0, limit))
            k_ok = 0 <= r.k < 1 if r.lam < 60 else r.k <= 1
            if not (r.lam >= 0 and k_ok and 0 < r.s < 1):
                bad += 1
    return bad


def crossing_continuity(count=200, seed=5, offset=1e-9):
    """Largest |S - 0.5| just either side of the peak."""
    rng = random.Random(seed)
    worst = 0.0
    for _ in range(count):
        study = random_study(rng, p_high=0.4999)
        m = mles(study).mles
        for d in (m, m * (1 - offset), m * (1 + offset)):
            worst = max(worst, abs(s_value(study, d).s - 0.5))
    return worst


def strictly_decreasing(count=100, seed=6, points=60):
    """Number of studies whose S fails to fall strictly along an MCSES grid."""
    rng = random.Random(seed)
    failures = 0
    for _ in range(count):
        study = random_study(rng, p_low=1e-4, p_high=0.4999, n_high=1e4)
        m = mles(study).mles
        # keep S away from float saturation at either end
        top = m + 6 / math.sqrt(study.n_effective)
        values = [s_value(study, top * i / (points - 1)).s for i in range(points)]
        if any(b >= a for a, b in zip(values, values[1:])):
            failures += 1
    return failures


def sample_size_monotonicity(ps=(0.1, 0.2, 0.4), mcses=0.2):
    """Pairs (p, n1, n2) where doubling n failed to reduce S below MCSES."""
    failures = []
    checked = 0
    for p in ps:
        n = 25
        while n < 6400:
            small, large = StudyInput(p, n), StudyInput(p, 2 * n)
            if mles(small).mles < mcses:
                checked += 1
                if not s_value(large, mcses).s < s_value(small, mcses).s:
                    failures.append((p, n, 2 * n))
            n *= 2
    return checked, failures
