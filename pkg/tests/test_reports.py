"""
Tests for django-hyperlab reports and JSON serialization.
"""

import json
from fractions import Fraction

import numpy as np

from django_hyperlab.eisenstein import OMEGA
from django_hyperlab.reports import (
    CheckResult,
    IdentityReport,
    SkippedPoint,
    build_document,
    dumps,
    format_check_line,
    format_text,
    suite_document,
)
from django_hyperlab.settings import SCHEMA_VERSION


class TestIdentityReport:
    """Test residual folding and conversion."""

    def test_record_tracks_maximum(self):
        report = IdentityReport("p81", tol=1e-9, grid_size=3)
        report.record((0.1, 0.1), 1e-15)
        report.record((0.2, 0.2), 3e-15)
        report.record((0.3, 0.3), 2e-15)
        assert report.max_residual == 3e-15
        assert report.argmax == (0.2, 0.2)
        assert report.passed

    def test_nan_residual_fails(self):
        report = IdentityReport("p81", tol=1e-9, grid_size=2)
        report.record((0.1, 0.1), float("nan"))
        report.record((0.2, 0.2), 1e-15)
        assert not report.passed

    def test_nothing_evaluated_fails(self):
        report = IdentityReport("p81", tol=1e-9, grid_size=1)
        report.skipped.append(SkippedPoint((0.6, 0.5), "DIVERGENT_INPUT", "outside"))
        assert report.evaluated == 0
        assert not report.passed

    def test_negative_control_check(self):
        report = IdentityReport(
            "p81", tol=1e-4, grid_size=1, shifted_param="b", shift=Fraction(1, 10)
        )
        report.record((0.25, 0.25), 8e-3)
        check = report.as_check("p81.negative", expect_failure=True)
        assert check.passed
        assert check.details == {
            "shifted_param": "b",
            "shift": Fraction(1, 10),
            "negative_control": True,
        }

    def test_to_dict_lists_shift(self):
        report = IdentityReport("p78", tol=1e-9, shifted_param="c-b-b'", shift=Fraction(1, 10))
        data = report.to_dict()
        assert data["shifted_param"] == "c-b-b'"
        assert "details" not in data


class TestSerialization:
    """Test document construction and the JSON encoder."""

    def test_build_document(self):
        document = build_document("eval", {"value": 1 + 2j})
        assert document["schema"] == SCHEMA_VERSION
        assert document["kind"] == "eval"

    def test_encoder_handles_numeric_types(self):
        text = dumps(
            {
                "c": 1 + 2j,
                "f": Fraction(2, 3),
                "w": OMEGA,
                "arr": np.array([1.0, 2.0]),
                "n": np.float64(0.5),
                "t": (1, 2),
            }
        )
        data = json.loads(text)
        assert data["c"] == [1.0, 2.0]
        assert data["f"] == "2/3"
        assert data["w"]["q_numer"] == 1
        assert data["arr"] == [1.0, 2.0]
        assert data["n"] == 0.5
        assert data["t"] == [1, 2]

    def test_dumps_is_deterministic(self):
        text = dumps({"b": 1, "a": 2})
        assert text.index('"a"') < text.index('"b"')
        assert text.endswith("}\n")

    def test_suite_document(self):
        results = [CheckResult("covers.genus2", True), CheckResult("covers.elliptic", False)]
        document = suite_document("covers", results, seed=7)
        assert document["kind"] == "verify"
        assert document["passed"] is False
        assert document["seed"] == 7
        assert [check["check"] for check in document["checks"]] == [
            "covers.genus2",
            "covers.elliptic",
        ]


class TestTextFormat:
    """Test the human-readable summary."""

    def test_check_line(self):
        result = CheckResult(
            "p81", True, max_residual=1.5e-15, tol=1e-9, argmax=(0.25 + 0j, 0.05 + 0j), grid_size=25
        )
        line = format_check_line(result)
        assert line.startswith("PASS  p81")
        assert "max_residual=1.500e-15" in line
        assert "argmax=(0.25+0j, 0.05+0j)" in line

    def test_failed_line(self):
        assert format_check_line(CheckResult("covers.genus2", False)).startswith("FAIL")

    def test_summary_line(self):
        text = format_text([CheckResult("a", True), CheckResult("b", False)])
        assert text.endswith("1/2 checks passed\n")
