"""
Tests for django-hyperlab parameter sets and reducibility predicates.
"""

from fractions import Fraction

import pytest

from django_hyperlab.exceptions import ArityMismatch
from django_hyperlab.params import E2_SPECIAL, ParamSet, is_e1_reducible


class TestParamSet:
    """Test the five-parameter container."""

    def test_parse(self):
        params = ParamSet.parse("4/3", "2/3", "0.5", 1, Fraction(5, 6))
        assert params.as_tuple() == (
            Fraction(4, 3),
            Fraction(2, 3),
            Fraction(1, 2),
            Fraction(1),
            Fraction(5, 6),
        )

    def test_parse_arity(self):
        with pytest.raises(ArityMismatch, match="5 parameters, got 4"):
            ParamSet.parse("1", "2", "3", "4")

    def test_constructor_normalizes_strings(self):
        assert ParamSet("1/3", "1/3", "1/3", "2/3", "2/3").a == Fraction(1, 3)

    def test_frozen(self):
        with pytest.raises(AttributeError):
            E2_SPECIAL.a = Fraction(1)

    def test_to_dict(self):
        assert E2_SPECIAL.to_dict() == {
            "a": "4/3",
            "b": "2/3",
            "bp": "2/3",
            "c": "4/3",
            "cp": "4/3",
        }


class TestReducibility:
    """Test the reducibility and genericity predicates."""

    def test_special_parameters(self, special_params):
        assert special_params.reducibility_witnesses() == ["c-a", "c'-a"]
        assert special_params.is_e2_reducible()
        assert special_params.condition_31()

    def test_generic_parameters(self):
        params = ParamSet.parse("1/3", "2/5", "3/7", "7/4", "5/6")
        assert params.reducibility_witnesses() == []
        assert not params.is_e2_reducible()

    def test_integer_b_is_a_witness(self):
        params = ParamSet.parse("1/3", "2", "3/7", "7/4", "5/6")
        assert "b" in params.reducibility_witnesses()
        assert not params.condition_31()

    def test_condition_31_checks_a_minus_c_minus_cp(self):
        params = ParamSet.parse("1/2", "1/3", "1/5", "3/4", "3/4")
        assert not params.condition_31()

    def test_mu_is_exact_for_sixths(self, special_params):
        from django_hyperlab.monodromy import omega_mu

        assert special_params.mu.to_complex() == pytest.approx(omega_mu().to_complex())

    @pytest.mark.parametrize(
        "args,expected",
        [
            (("1/3", "1/3", "2/3", "1"), True),
            (("1/3", "1/4", "1/5", "4/3"), True),
            (("1/3", "1/4", "1/5", "7/4"), False),
            (("2", "1/4", "1/5", "7/4"), True),
        ],
    )
    def test_e1_reducibility(self, args, expected):
        assert is_e1_reducible(*args) is expected
