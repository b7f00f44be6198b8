"""
Tests for django-hyperlab intersection and circuit matrices.
"""

from fractions import Fraction

import numpy as np
import pytest

from django_hyperlab.exceptions import ArityMismatch, DegenerateMu
from django_hyperlab.monodromy import (
    CIRCUIT_INDICES,
    MuVector,
    check_pairing_invariance,
    circuit_matrix,
    determinant,
    dual_circuit_matrix,
    eigenstructure_check,
    intersection_determinant_closed_form,
    intersection_matrix,
    match_multisets,
    matrix_to_json,
    max_abs_entry,
    mu_from_params,
    omega_mu,
    random_admissible_mu,
    selector_data,
    square_decomposition,
    square_decomposition_residual,
    structured_vs_explicit,
)
from django_hyperlab.params import ParamSet
from django_hyperlab.verification import PAIRING_CONTROL_FLOOR, PAIRING_CONTROL_MARGIN


class TestMuVector:
    """Test mu vectors and their construction from parameters."""

    def test_requires_five_entries(self):
        with pytest.raises(ArityMismatch, match="5 entries"):
            MuVector((1j, 1j))

    def test_one_based_indexing_and_products(self):
        mu = MuVector((1j, -1 + 0j, -1j, 1j, -1 + 0j))
        assert mu[1] == 1j
        assert mu.prod(1, 3) == pytest.approx(1.0)
        assert not mu.exact

    def test_special_parameters_give_omega_squared(self, special_params):
        assert mu_from_params(special_params, exact=True) == omega_mu()
        numeric = mu_from_params(special_params)
        for value, exact in zip(numeric.to_complex(), omega_mu().to_complex()):
            assert value == pytest.approx(exact)

    def test_integer_exponent_gives_exactly_one(self):
        params = ParamSet.parse("1/3", "2", "1/5", "7/3", "3/4")
        assert mu_from_params(params)[1] == 1 + 0j

    def test_exact_needs_sixths(self):
        from django_hyperlab.exceptions import NonIntegralResult

        with pytest.raises(NonIntegralResult):
            mu_from_params(ParamSet.parse("1/5", "1/3", "1/3", "2/3", "2/3"), exact=True)

    def test_random_draws_are_admissible(self, rng):
        for _ in range(20):
            mu = random_admissible_mu(rng)
            assert mu.unit_modulus_defect() < 1e-12
            assert mu.condition_31()

    def test_condition_31_detects_unit_entry(self):
        mu = MuVector((1 + 0j, 1j, 1j, 1j, 1j))
        assert not mu.condition_31()

    def test_omega_mu_is_exact(self):
        mu = omega_mu()
        assert mu.exact
        assert mu.condition_31()


class TestIntersectionMatrix:
    """Test H^mu and its determinant."""

    def test_determinant_closed_form(self, generic_mu):
        found = determinant(intersection_matrix(generic_mu))
        closed = intersection_determinant_closed_form(generic_mu)
        assert abs(found - closed) / abs(closed) < 1e-10

    def test_exact_determinant_at_omega(self):
        mu = omega_mu()
        assert determinant(intersection_matrix(mu)) == intersection_determinant_closed_form(mu)

    def test_degenerate_mu(self):
        mu = MuVector((1 + 0j, 1j, -1j, 1j, -1j))
        with pytest.raises(DegenerateMu, match="mu_1 = 1"):
            intersection_matrix(mu)

    @pytest.mark.parametrize("which", ["square5", "square6"])
    def test_square_decomposition_agrees_with_intersection_row(self, generic_mu, which):
        assert square_decomposition_residual(which, generic_mu) < 1e-8

    def test_unknown_square(self, generic_mu):
        with pytest.raises(ArityMismatch, match="Unknown square"):
            square_decomposition("square7", generic_mu)

    def test_dual_squares_have_four_coefficients(self, generic_mu):
        assert square_decomposition("dual5", generic_mu).shape == (4,)
        assert square_decomposition("dual6", generic_mu)[1] == 0


class TestCircuitMatrices:
    """Test structured and explicit circuit matrices."""

    def test_structured_matches_explicit(self, generic_mu):
        deviations = structured_vs_explicit(generic_mu)
        assert set(deviations) == {f"{kind}{i}" for kind in ("M", "Mt") for i in CIRCUIT_INDICES}
        assert max(deviations.values()) < 1e-9

    @pytest.mark.parametrize("variant", ["structured", "explicit"])
    def test_pairing_invariance(self, generic_mu, variant):
        result = check_pairing_invariance(generic_mu, variant=variant)
        assert result["max_deviation"] < 1e-9
        assert result["scale"] >= 1.0

    def test_pairing_detects_wrong_dual(self, generic_mu):
        wrong = {1: dual_circuit_matrix(2, generic_mu)}
        result = check_pairing_invariance(generic_mu, replace_dual=wrong)
        assert result["deviations"][1] > 1e-6
        assert result["deviations"][2] < 1e-9

    def test_pairing_detects_identity_dual(self, rng):
        draws = (random_admissible_mu(rng) for _ in range(20))
        mu = next(m for m in draws if abs(m.prod(2, 4, 5) - 1) > PAIRING_CONTROL_MARGIN)
        result = check_pairing_invariance(mu, replace_dual={3: np.eye(4, dtype=complex)})
        # M3 differs from I4 once lambda_3 = mu_245 leaves 1
        assert result["deviations"][3] > PAIRING_CONTROL_FLOOR
        assert result["deviations"][1] < 1e-9

    def test_pairing_exact_at_omega(self):
        result = check_pairing_invariance(omega_mu())
        assert result["max_deviation"] == 0.0

    @pytest.mark.parametrize("i", CIRCUIT_INDICES)
    def test_eigenstructure(self, generic_mu, i):
        result = eigenstructure_check(i, generic_mu)
        assert result.passed, result.details
        assert result.check_id == f"eigen.M{i}"

    def test_selector_eigenvalues(self, generic_mu):
        lambdas = selector_data(generic_mu).lambdas
        assert lambdas[1] == pytest.approx(1 / generic_mu.prod(1, 2))
        assert lambdas[5] == pytest.approx(generic_mu.prod(2, 3, 5))

    def test_bad_index(self, generic_mu):
        with pytest.raises(ArityMismatch, match="1..5"):
            circuit_matrix(6, generic_mu)

    def test_bad_variant(self, generic_mu):
        with pytest.raises(ValueError, match="Unknown variant"):
            circuit_matrix(1, generic_mu, variant="tabulated")

    def test_matrix_to_json(self, generic_mu):
        data = matrix_to_json(circuit_matrix(3, generic_mu))
        assert data["dim"] == 4
        assert len(data["entries"]) == 4


class TestHelpers:
    """Test numeric helpers."""

    def test_match_multisets(self):
        assert match_multisets([1, 2, 1j], [1j, 2, 1]) == 0.0
        assert match_multisets([1, 2], [1, 2.5]) == pytest.approx(0.5)

    def test_max_abs_entry_exact(self):
        from django_hyperlab.eisenstein import EisensteinMatrix

        matrix = EisensteinMatrix.from_rows([[1, (0, 2)], [0, -3]]).entries
        assert max_abs_entry(matrix) == pytest.approx(3.0)

    def test_max_abs_entry_numeric(self):
        assert max_abs_entry(np.array([[1 + 1j, 0], [0, -0.5]])) == pytest.approx(2**0.5)

    def test_fraction_free_parameters(self):
        params = (Fraction(1, 2), Fraction(1, 4), Fraction(1, 3), Fraction(3, 4), Fraction(5, 6))
        mu = mu_from_params(params)
        assert mu.unit_modulus_defect() < 1e-15
