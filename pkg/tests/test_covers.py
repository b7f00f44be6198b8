"""
Tests for django-hyperlab cyclic cover classification.
"""

from fractions import Fraction

import pytest

from django_hyperlab.covers import (
    CURVE_ANNOTATIONS,
    CURVE_EXPONENTS,
    CoverSignature,
    branching_indices,
    classify,
    classify_genus2,
    curve_equation,
    euler_characteristic,
    is_realizable,
    satisfies_index_equation,
)
from django_hyperlab.exceptions import PreconditionViolated


class TestCoverSignature:
    """Test signature construction and parsing."""

    def test_indices_are_sorted(self):
        assert CoverSignature(6, (3, 2, 3, 2)).k == (2, 2, 3, 3)

    def test_parse(self):
        sig = CoverSignature.parse("(6;2,2,3,3)")
        assert sig == CoverSignature(6, (2, 2, 3, 3))
        assert CoverSignature.parse(" 4; 4, 2, 4, 2 ") == CoverSignature(4, (2, 2, 4, 4))

    def test_parse_rejects_garbage(self):
        with pytest.raises(PreconditionViolated, match="Cannot parse"):
            CoverSignature.parse("(6;2,2,3)")

    def test_needs_four_indices(self):
        with pytest.raises(PreconditionViolated, match="four branching indices"):
            CoverSignature(6, (2, 3, 3))

    def test_indices_at_least_two(self):
        with pytest.raises(PreconditionViolated, match=">= 2"):
            CoverSignature(6, (1, 2, 3, 6))

    def test_string_form(self):
        assert str(CoverSignature(3, (3, 3, 3, 3))) == "(3;3,3,3,3)"

    def test_to_dict_carries_curve(self):
        data = CoverSignature(6, (2, 2, 3, 3)).to_dict()
        assert data["signature"] == "(6;2,2,3,3)"
        assert data["curve"] == "S^6 = s^2(1-s)^4(t-s)^3"
        assert "curve" not in CoverSignature(2, (2, 2, 2, 2)).to_dict()


class TestInvariants:
    """Test Euler characteristic, genus and realizability."""

    @pytest.mark.parametrize(
        "sig,chi",
        [
            (CoverSignature(2, (2, 2, 2, 2)), 0),
            (CoverSignature(3, (3, 3, 3, 3)), -2),
            (CoverSignature(4, (2, 2, 4, 4)), -2),
            (CoverSignature(6, (2, 2, 3, 3)), -2),
            (CoverSignature(5, (5, 5, 5, 5)), -6),
        ],
    )
    def test_euler_characteristic(self, sig, chi):
        assert euler_characteristic(sig) == chi
        assert sig.genus == 1 - Fraction(chi, 2)

    def test_index_equation_matches_genus_two(self):
        for sig in CURVE_ANNOTATIONS:
            assert satisfies_index_equation(sig)
        assert not satisfies_index_equation(CoverSignature(2, (2, 2, 2, 2)))

    def test_realizable(self):
        assert is_realizable(CoverSignature(6, (2, 2, 3, 3)))
        assert is_realizable(CoverSignature(3, (3, 3, 3, 3)))

    def test_local_monodromies_cannot_sum_to_zero(self):
        # three elements of order 2 plus one of order 6 never cancel in Z/6
        assert not is_realizable(CoverSignature(6, (2, 2, 2, 6)))

    def test_index_not_dividing_degree(self):
        assert not is_realizable(CoverSignature(6, (2, 2, 4, 4)))


class TestClassification:
    """Test the enumeration of four-point cyclic covers."""

    def test_genus2_list(self):
        assert [str(sig) for sig in classify_genus2(60)] == [
            "(3;3,3,3,3)",
            "(4;2,2,4,4)",
            "(6;2,2,3,3)",
        ]

    def test_annotations_cover_the_list(self):
        assert set(classify_genus2()) == set(CURVE_ANNOTATIONS)

    def test_unrealizable_kept_on_request(self):
        found = classify(60, -2, realizable_only=False)
        assert CoverSignature(6, (2, 2, 2, 6)) in found
        assert len(found) == 4

    def test_small_search(self):
        assert classify(2, 0) == [CoverSignature(2, (2, 2, 2, 2))]

    def test_results_sorted(self):
        found = classify(12, -2)
        assert found == sorted(found)

    def test_max_n_too_small(self):
        with pytest.raises(PreconditionViolated, match="max_n"):
            classify(1, -2)


class TestCurveAnnotations:
    """Test that each annotated curve realizes its signature."""

    @pytest.mark.parametrize("sig", sorted(CURVE_EXPONENTS))
    def test_exponents_give_signature(self, sig):
        assert branching_indices(sig.n, CURVE_EXPONENTS[sig]) == sig.k

    def test_curve_rendering(self):
        assert curve_equation(3, (2, 1, 2)) == "S^3 = s^2(1-s)(t-s)^2"
        assert CURVE_ANNOTATIONS[CoverSignature(4, (2, 2, 4, 4))] == "S^4 = s^2(1-s)^2(t-s)"

    def test_unbranched_point_rejected(self):
        with pytest.raises(PreconditionViolated, match="unbranched"):
            branching_indices(3, (1, 1, 1))
