"""End-to-end acceptance checks.

Every test records one PASS or FAIL line through the ``criterion`` fixture;
the lines are repeated in the terminal summary under "acceptance criteria".
"""

import math
import random
import time

from clinsig.inference import (
    INTERVAL_FRACTION,
    closed_form_upper,
    mcses_sweep,
    rule_a_upper,
    s_value,
    support_interval,
)
from clinsig.likelihood import StudyInput, likelihood_ratio, mles
from clinsig.numkernel import chi2_1_cdf
from clinsig.report import build_report, format_percent
from clinsig.studies import bundled_study

import checks

SATURATED = {"<1%": 0.0, ">99%": 1.0}


def published(text):
    if text in SATURATED:
        return SATURATED[text]
    return int(text.rstrip("%")) / 100


def test_null_mcses_from_p_alone(criterion):
    c = criterion(1, "null-MCSES S column from P alone, within 1pp")
    table = {0.02: "99%", 0.048: "97%", 0.1: "92%", 0.32: "70%", 0.001: ">99%"}
    start = time.perf_counter()
    worst_gap = worst_formula = 0.0
    shown = []
    for p, text in table.items():
        s = s_value(StudyInput(p, 1490), 0.0).s
        formula = chi2_1_cdf(2 * math.log(0.25 / (p - p * p))) / 2 + 0.5
        worst_formula = max(worst_formula, abs(s - formula))
        shown.append(format_percent(s))
        if text in SATURATED:
            # a saturated entry only pins the printed form
            worst_gap = max(worst_gap, 0.0 if format_percent(s) == text else 1.0)
        else:
            worst_gap = max(worst_gap, abs(s - published(text)))
    elapsed = time.perf_counter() - start
    ok = worst_gap <= 0.01 and worst_formula <= 1e-12 and elapsed < 0.1
    c.check(ok, f"worst gap {worst_gap * 100:.2f}pp, formula gap {worst_formula:.1e}, "
                f"shown {shown}, {elapsed * 1e3:.1f} ms")


def test_woman_matrix(criterion):
    c = criterion(2, "WOMAN 3x4 S matrix within 5pp")
    table = [
        ["50%", "13%", "1%", "<1%"],
        ["97%", "75%", "23%", "2%"],
        [">99%", "95%", "65%", "22%"],
    ]
    start = time.perf_counter()
    rows = build_report(bundled_study("woman"), [0.0, 0.0025, 0.005, 0.0075])
    elapsed = time.perf_counter() - start
    expected = [published(t) for line in table for t in line]
    gaps = [abs(r.s_raw - e) for r, e in zip(rows, expected)]
    ok = len(rows) == 12 and max(gaps) <= 0.05 and elapsed < 1.0
    shown = " ".join(r.s_display for r in rows)
    c.check(ok, f"worst gap {max(gaps) * 100:.1f}pp, got [{shown}], {elapsed * 1e3:.0f} ms")


def test_relief_primary(criterion):
    c = criterion(3, "RELIEF primary outcome S about 1% within 1pp")
    start = time.perf_counter()
    row = build_report(bundled_study("relief"))[0]
    elapsed = time.perf_counter() - start
    gap = abs(row.s_raw - 0.01)
    c.check(gap <= 0.01 and elapsed < 0.1,
            f"S = {row.s_raw:.4f} ({row.s_display}), gap {gap * 100:.2f}pp, {elapsed * 1e3:.1f} ms")


def test_mles_anchor_and_crossing(criterion):
    c = criterion(4, "MLES(P=0.1, n=100) in [0.163, 0.166] and sweep crosses 0.5 there")
    study = StudyInput(0.1, 100)
    m = mles(study).mles
    step = 0.001
    grid = [i * step for i in range(401)]
    crossing = next(spec.delta for spec, r in mcses_sweep(study, grid) if r.s < 0.5)
    ok = 0.163 <= m <= 0.166 and abs(crossing - m) <= step
    c.check(ok, f"mles {m:.6f}, first grid point below 0.5 at {crossing:.3f} (step {step})")


def test_interval_approximations(criterion):
    c = criterion(5, "upper interval anchor 1%, closed form 2%, rule a 5%")
    anchor = support_interval(StudyInput(0.05, 100)).upper
    anchor_gap = abs(anchor / 0.373 - 1)

    closed_gap = 0.0
    count = 0
    for i in range(15):
        p = 0.001 + i * (0.149 / 14)
        for n in (31, 40, 60, 100, 200, 500, 1000, 5000, 20_000, 1e5):
            study = StudyInput(p, n)
            closed_gap = max(closed_gap, abs(closed_form_upper(study) / support_interval(study).upper - 1))
            count += 1

    rule_gap = 0.0
    for i in range(50):
        p = 0.5 + i * 0.49 / 49
        for n in (5, 30, 100, 1000, 1e5):
            study = StudyInput(p, n)
            rule_gap = max(rule_gap, abs(rule_a_upper(study) / support_interval(study).upper - 1))

    ok = anchor_gap <= 0.01 and count >= 100 and closed_gap <= 0.02 and rule_gap <= 0.05
    c.check(ok, f"anchor {anchor:.5f} ({anchor_gap:.2%}), closed form worst {closed_gap:.2%} "
                f"over {count} points, rule a worst {rule_gap:.2%}")


def test_property_suites(criterion):
    c = criterion(6, "property suites a-f")
    start = time.perf_counter()
    maximal = checks.grid_maximality()
    gamma0 = checks.gamma_at_zero()
    lr0 = checks.lr_at_zero()
    bounds = checks.s_bounds()
    crossing = checks.crossing_continuity()
    decreasing = checks.strictly_decreasing()
    checked, size_failures = checks.sample_size_monotonicity()
    elapsed = time.perf_counter() - start
    parts = {
        "a": maximal <= 1e-6,
        "b": gamma0 <= 1e-12,
        "c": lr0 <= 1e-9,
        "d": bounds == 0 and crossing <= 1e-6,
        "e": decreasing == 0,
        "f": checked > 0 and not size_failures,
    }
    detail = (
        f"a {maximal:.1e}, b {gamma0:.1e}, c {lr0:.1e}, d {bounds} bound violations "
        f"and crossing {crossing:.1e}, e {decreasing} failures, f {len(size_failures)} failures in {checked} doublings, "
        f"{elapsed:.1f} s"
    )
    failed = [k for k, v in parts.items() if not v]
    c.check(not failed and elapsed < 30, detail + (f", failed {failed}" if failed else ""))


def test_interval_endpoints(criterion):
    c = criterion(7, "interval endpoints at 0.1465 of the peak, rule c at zero")
    rng = random.Random(7)
    worst = 0.0
    endpoints = rule_c = rule_c_bad = 0
    for _ in range(300):
        study = checks.random_study(rng, n_low=2.0)
        iv = support_interval(study)
        peak = iv.mles.lr_max
        for end in (iv.lower, iv.upper):
            if end is not None:
                endpoints += 1
                worst = max(worst, abs(likelihood_ratio(end, study) / peak / INTERVAL_FRACTION - 1))
        if iv.lower is None:
            rule_c += 1
            if likelihood_ratio(0.0, study) < INTERVAL_FRACTION * peak:
                rule_c_bad += 1
    ok = worst <= 1e-6 and rule_c_bad == 0 and rule_c > 0
    c.check(ok, f"{endpoints} endpoints, worst relative error {worst:.1e}, "
                f"rule c {rule_c} cases with {rule_c_bad} violations")
