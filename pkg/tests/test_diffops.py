"""
Tests for django-hyperlab Euler-operator calculus and annihilation certificates.
"""

from fractions import Fraction

import pytest

from django_hyperlab.diffops import (
    SYSTEM_ARITY,
    Euler,
    Scalar,
    Var,
    apply,
    build_system,
    certify_annihilation,
    ex3_a1,
)
from django_hyperlab.exceptions import ArityMismatch, PreconditionViolated
from django_hyperlab.hyperseries import TruncatedSeries, truncate_formal

Q = Fraction

GENERIC = {
    "E": (Q(1, 3), Q(2, 5), Q(7, 4)),
    "E1": (Q(1, 3), Q(2, 5), Q(3, 7), Q(7, 4)),
    "E2": (Q(1, 3), Q(2, 5), Q(3, 7), Q(7, 4), Q(5, 6)),
    "ED3": (Q(1, 3), Q(2, 5), Q(3, 7), Q(-1, 6), Q(7, 4)),
    "EX3": (Q(1, 5), Q(2, 7), Q(1, 3), Q(3, 4), Q(1, 6)),
}
SERIES = {"E": "F", "E1": "F1", "E2": "F2", "ED3": "FD3", "EX3": "FX3"}


class TestOperatorAtoms:
    """Test the action of the basic operators."""

    def test_euler_multiplies_by_exponent(self):
        series = TruncatedSeries(2, 3, {(0, 0): Q(1), (2, 1): Q(5)})
        result = Euler(0).apply(series)
        assert result.coefficient((2, 1)) == 10
        assert result.coefficient((0, 0)) == 0
        assert result.order == 3

    def test_var_shifts_and_lowers_order(self):
        series = TruncatedSeries(2, 3, {(0, 0): Q(1), (1, 2): Q(2)})
        result = Var(1).apply(series)
        assert result.order == 2
        assert result.coefficient((0, 1)) == 1
        # (1, 3) has degree 4 and falls off
        assert len(result) == 1

    def test_var_on_wrong_arity(self):
        with pytest.raises(ArityMismatch):
            Var(2).apply(TruncatedSeries.one(2, 3))

    def test_scalar_scales(self):
        series = TruncatedSeries.monomial(1, 2, (1,), Q(3))
        assert Scalar(Q(1, 3)).apply(series).coefficient((1,)) == 1

    def test_composition_applies_right_factor_first(self):
        series = TruncatedSeries.one(1, 4)
        x, D = Var(0), Euler(0)
        # D x 1 = x, x D 1 = 0
        assert apply(D * x, series).coefficient((1,)) == 1
        assert apply(x * D, series).is_zero()

    def test_number_coercion(self):
        series = TruncatedSeries.monomial(1, 3, (2,))
        op = Q(1, 2) + Euler(0) - 1
        assert apply(op, series).coefficient((2,)) == Q(3, 2)

    def test_variable_depth(self):
        x, y, D = Var(0), Var(1), Euler(0)
        assert (D * (D + 1)).variable_depth() == 0
        assert (x * D - y * x).variable_depth() == 2

    def test_apply_needs_order_one(self):
        with pytest.raises(PreconditionViolated):
            apply(Euler(0), TruncatedSeries.one(1, 0))


class TestBuildSystem:
    """Test operator system construction."""

    @pytest.mark.parametrize(
        "name,count", [("E", 1), ("E1", 3), ("E2", 2), ("ED3", 6), ("EX3", 5)]
    )
    def test_operator_counts(self, name, count):
        system = build_system(name, GENERIC[name])
        assert len(system) == count
        assert system.nvars == {"E": 1, "E1": 2, "E2": 2, "ED3": 3, "EX3": 3}[name]

    def test_labels(self):
        assert build_system("E2", GENERIC["E2"]).labels == ["P2", "Q2"]

    def test_unknown_system(self):
        with pytest.raises(ArityMismatch, match="Unknown system"):
            build_system("E7", (Q(1),))

    def test_wrong_parameter_count(self):
        with pytest.raises(ArityMismatch, match="E2 takes 5 parameters"):
            build_system("E2", GENERIC["E1"])

    def test_unknown_variant(self):
        with pytest.raises(ValueError, match="Q2 variant"):
            build_system("E2", GENERIC["E2"], q2_variant="other")

    def test_inexact_parameters_rejected(self):
        with pytest.raises(PreconditionViolated):
            build_system("E", (0.5, Q(1, 2), Q(3, 2)))

    def test_arity_table(self):
        assert SYSTEM_ARITY == {"E": 3, "E1": 4, "E2": 5, "ED3": 5, "EX3": 5}

    def test_ex3_a1(self):
        assert ex3_a1((Q(1, 2), Q(1, 2), Q(1, 2), Q(1, 2), Q(1, 2))) == Q(1, 2)


class TestCertification:
    """Test exact annihilation certificates."""

    @pytest.mark.parametrize("name", sorted(SYSTEM_ARITY))
    def test_series_annihilated_by_its_system(self, name):
        system = build_system(name, GENERIC[name])
        series = truncate_formal(SERIES[name], GENERIC[name], 6)
        report = certify_annihilation(system, series)
        assert report.passed
        assert report.witness is None
        assert report.max_nonzero_order is None
        assert report.certified_orders == (5,) * len(system)

    def test_reducible_special_parameters(self, special_params):
        system = build_system("E2", special_params.as_tuple())
        series = truncate_formal("F2", special_params.as_tuple(), 8)
        assert certify_annihilation(system, series).passed

    def test_displayed_variant_fails_with_witness(self, special_params):
        system = build_system("E2", special_params.as_tuple(), q2_variant="displayed")
        series = truncate_formal("F2", special_params.as_tuple(), 6)
        report = certify_annihilation(system, series)
        assert not report.passed
        assert report.witness == (0, 2)
        assert report.operator_label == "Q2"
        assert report.operator_index == 1
        assert report.to_dict()["variant"] == "displayed"
        assert report.to_dict()["witness"] == [0, 2]

    def test_wrong_series_fails(self):
        system = build_system("E", GENERIC["E"])
        other = truncate_formal("F", (Q(1, 3), Q(2, 5), Q(5, 4)), 6)
        report = certify_annihilation(system, other)
        assert not report.passed
        assert report.witness == (1,)

    def test_order_too_low(self):
        system = build_system("E", GENERIC["E"])
        with pytest.raises(PreconditionViolated, match="order >= 2"):
            certify_annihilation(system, truncate_formal("F", GENERIC["E"], 1))

    def test_variable_count_mismatch(self):
        system = build_system("E2", GENERIC["E2"])
        with pytest.raises(ArityMismatch, match="acts on 2 variables"):
            certify_annihilation(system, truncate_formal("F", GENERIC["E"], 4))

    def test_report_dict(self):
        system = build_system("E1", GENERIC["E1"])
        report = certify_annihilation(system, truncate_formal("F1", GENERIC["E1"], 4))
        data = report.to_dict()
        assert data["pass"] is True
        assert data["system"] == "E1"
        assert data["certified_orders"] == [3, 3, 3]
