import pytest

from clinsig.effects import HazardSummary, MeanSummary, ProportionSummary
from clinsig.inference import McsesSpec
from clinsig.studies import (
    OutcomeRecord,
    RawSummary,
    StudyFile,
    StudyParseError,
    bundled_study,
    parse_study,
    serialize_study,
)

MINIMAL = b"""\
study Demo
outcome
  name First
  p 0.04
  means 12.5 10 5 40
  mcses mean_difference 1.5 5
"""


class TestBundled:
    def test_woman(self):
        study = bundled_study("woman")
        assert study.study_name == "WOMAN"
        assert len(study.outcomes) == 3
        bleeding = study.outcome("Mortality due to bleeding")
        assert bleeding.p_value == 0.045
        assert bleeding.summary == RawSummary(0.02, 20021 / 2)
        assert bleeding.mcses.scale == "rate_difference"
        assert bleeding.mcses.delta == pytest.approx(0.04, abs=5e-4)

    def test_relief(self):
        study = bundled_study("relief")
        assert len(study.outcomes) == 6
        primary = study.outcomes[0]
        assert isinstance(primary.summary, HazardSummary)
        assert primary.summary.total_events == pytest.approx(0.18 * 2983)
        assert primary.opposed
        assert all(o.mcses.delta == 0.0 for o in study.outcomes[1:])


class TestParse:
    def test_minimal(self):
        study = parse_study(MINIMAL)
        (o,) = study.outcomes
        assert o.summary == MeanSummary(12.5, 10.0, 5.0, 40.0)
        assert o.mcses.delta == pytest.approx(0.3)
        assert o.direction is None

    def test_outcome_name_on_header_line(self):
        study = parse_study("study S\noutcome Alpha\np 0.2\nraw 0.1 50\nmcses delta 0.1\n")
        assert study.outcomes[0].name == "Alpha"

    def test_total_is_halved(self):
        study = parse_study("study S\noutcome\nname A\np 0.2\nproportions 0.1 0.2 300 total\nmcses delta 0\n")
        assert study.outcomes[0].summary == ProportionSummary(0.1, 0.2, 150)

    def test_hazard_allocation(self):
        study = parse_study("study S\noutcome\nname A\np 0.2\nhazard 0.7 80 0.4\nmcses hazard_ratio 0.8 0.4\n")
        o = study.outcomes[0]
        assert o.summary.allocation == 0.4
        assert o.mcses.params == (0.4,)

    def test_direction_note(self):
        text = MINIMAL.decode() + "  direction opposed lower is worse here\n"
        o = parse_study(text).outcomes[0]
        assert o.direction == "opposed" and o.direction_note == "lower is worse here"

    def test_p_of_one_names_field(self):
        bad = MINIMAL.replace(b"p 0.04", b"p 1.0")
        with pytest.raises(StudyParseError) as info:
            parse_study(bad)
        assert info.value.field == "p" and info.value.line == 4
        assert "line 4" in str(info.value) and "'p'" in str(info.value)

    @pytest.mark.parametrize(
        "text,field",
        [
            ("outcome\nname A\n", "study"),
            ("study S\n", "outcome"),
            ("study S\noutcome\nname A\np 0.2\nmcses delta 0\n", "proportions|hazard|means|raw"),
            ("study S\noutcome\nname A\np 0.2\nraw 0.1 10\n", "mcses"),
            ("study S\noutcome\nname A\np 0.2\nraw 0.1 10\nhazard 0.8 10\nmcses delta 0\n", "hazard"),
            ("study S\noutcome\nname A\np 0.2\nraw 0.1 10\nmcses odds 1.1\n", "mcses"),
            ("study S\noutcome\nname A\np 0.2\nbinomial 3 10\nmcses delta 0\n", "binomial"),
            ("study S\noutcome\nname A\np abc\n", "p"),
            ("study S\noutcome\nname A\np 0.2\nraw 0.1\nmcses delta 0\n", "raw"),
            ("study S\noutcome\nname A\np 0.2\nproportions 0 0.1 10\nmcses delta 0\n", "proportions"),
            ("study S\noutcome\nname A\np 0.2\nraw 0.1 10\nmcses delta 0\ndirection sideways\n", "direction"),
            ("study S\np 0.2\n", "p"),
            ("study S\nstudy T\n", "study"),
        ],
    )
    def test_errors_identify_field(self, text, field):
        with pytest.raises(StudyParseError) as info:
            parse_study(text)
        assert info.value.field == field

    def test_duplicate_names(self):
        block = "outcome\nname A\np 0.2\nraw 0.1 10\nmcses delta 0\n"
        with pytest.raises(StudyParseError, match="duplicate"):
            parse_study("study S\n" + block + block)

    def test_not_utf8(self):
        with pytest.raises(StudyParseError):
            parse_study(b"study \xff\n")


class TestRoundTrip:
    @pytest.mark.parametrize("name", ["woman", "relief"])
    def test_bundled(self, name):
        study = bundled_study(name)
        again = parse_study(serialize_study(study))
        assert again == study
        assert serialize_study(again) == serialize_study(study)

    def test_constructed(self):
        study = StudyFile(
            "Constructed",
            (
                OutcomeRecord("a", 0.3, RawSummary(0.1, 33.3), McsesSpec(0.25)),
                OutcomeRecord("b", 1e-7, MeanSummary(-1.5, 2.25, 3.0, 12), McsesSpec(0.0),
                              "aligned", None),
            ),
        )
        assert parse_study(serialize_study(study)) == study


class TestModel:
    def test_empty_study(self):
        with pytest.raises(ValueError):
            StudyFile("x", ())

    def test_unique_names(self):
        o = OutcomeRecord("a", 0.3, RawSummary(0.1, 3), McsesSpec(0.2))
        with pytest.raises(ValueError):
            StudyFile("x", (o, o))

    def test_study_input(self):
        o = OutcomeRecord("a", 0.3, HazardSummary(0.8, 120), McsesSpec(0.2))
        assert o.study_input().n_effective == 120


class TestComments:
    def test_hash_inside_name_is_kept(self):
        study = parse_study("study S\n# note\noutcome\n  # indented note\nname A#1\np 0.2\nraw 0.1 10\nmcses delta 0\n")
        assert study.outcomes[0].name == "A#1"
