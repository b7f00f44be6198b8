"""
Tests for django-hyperlab exact Eisenstein arithmetic and the omega^2 specialization.
"""

import cmath
from fractions import Fraction

import numpy as np
import pytest

from django_hyperlab.eisenstein import (
    H_PRIME,
    OMEGA,
    ONE,
    P_MATRIX,
    REDUCED_IMAGES,
    SQRT_MINUS_3,
    ZERO,
    ZETA6,
    EisensteinMatrix,
    EisensteinScalar,
    IntMatrix2,
    check_special_invariance,
    conjugate_by_P,
    eis_mul,
    gamma1_3_membership,
    generators,
    hermitian_transform_check,
    is_unitary_for,
    projective_order,
    random_words,
    reduced_block,
    root_of_unity,
    special_h,
    special_table,
    specialize_omega,
    triangle_signature,
)
from django_hyperlab.exceptions import NonIntegralResult, NotUnimodular

SAMPLES = [
    EisensteinScalar(Fraction(1, 2), 3),
    EisensteinScalar(-2, Fraction(5, 7)),
    EisensteinScalar(0, 1),
    EisensteinScalar(4, -1),
]


class TestEisensteinScalar:
    """Test the field Q(omega)."""

    def test_omega_minimal_polynomial(self):
        assert OMEGA * OMEGA + OMEGA + 1 == ZERO
        assert OMEGA**3 == ONE

    def test_sqrt_minus_three(self):
        assert SQRT_MINUS_3 * SQRT_MINUS_3 == -3

    def test_zeta6_has_order_six(self):
        assert ZETA6**6 == ONE
        assert ZETA6**3 == -ONE

    def test_conjugate_of_omega(self):
        assert OMEGA.conjugate() == OMEGA * OMEGA

    def test_norm(self):
        assert EisensteinScalar(2, 1).norm() == 3
        assert OMEGA.norm() == 1

    @pytest.mark.parametrize("x", SAMPLES)
    def test_inverse(self, x):
        assert x * x.inverse() == ONE
        assert x / x == 1

    @pytest.mark.parametrize("x", SAMPLES)
    @pytest.mark.parametrize("y", SAMPLES)
    def test_multiplication_matches_complex(self, x, y):
        assert (x * y).to_complex() == pytest.approx(x.to_complex() * y.to_complex())

    @pytest.mark.parametrize("x", SAMPLES)
    def test_norm_is_modulus_squared(self, x):
        assert float(x.norm()) == pytest.approx(abs(x.to_complex()) ** 2)

    def test_eis_mul_closed_form(self):
        # (2 + w)(1 - w) = 2 - w - w^2 = 3
        assert eis_mul(EisensteinScalar(2, 1), EisensteinScalar(1, -1)) == EisensteinScalar(3)
        assert eis_mul(OMEGA, OMEGA) == OMEGA.conjugate()

    def test_distributive(self):
        x, y, z = SAMPLES[:3]
        assert x * (y + z) == x * y + x * z

    def test_inverse_of_zero(self):
        with pytest.raises(ZeroDivisionError):
            ZERO.inverse()

    def test_negative_power(self):
        assert OMEGA ** -1 == OMEGA * OMEGA

    def test_integrality(self):
        assert EisensteinScalar(2, -3).is_integral()
        assert not EisensteinScalar(Fraction(1, 2), 0).is_integral()
        assert EisensteinScalar(-4).is_rational_integer()
        assert not OMEGA.is_rational_integer()

    def test_mixed_rational_arithmetic(self):
        assert 1 - OMEGA == EisensteinScalar(1, -1)
        assert Fraction(1, 2) * SQRT_MINUS_3 == EisensteinScalar(Fraction(1, 2), 1)

    def test_string_forms(self):
        assert str(OMEGA) == "w"
        assert str(EisensteinScalar(2, -1)) == "2-w"
        assert str(EisensteinScalar(3)) == "3"

    def test_json_form(self):
        assert EisensteinScalar(Fraction(1, 2), -1).to_json() == {
            "p_numer": 1,
            "p_denom": 2,
            "q_numer": -1,
            "q_denom": 1,
        }


class TestRootOfUnity:
    """Test exact sixth roots of unity."""

    @pytest.mark.parametrize(
        "q",
        [Fraction(n, 6) for n in (0, 1, 2, 3, -2, 7)],
    )
    def test_matches_exponential(self, q):
        assert root_of_unity(q).to_complex() == pytest.approx(cmath.exp(2j * cmath.pi * float(q)))

    def test_one_third_is_omega(self):
        assert root_of_unity(Fraction(1, 3)) == OMEGA

    def test_not_a_sixth_root(self):
        with pytest.raises(NonIntegralResult):
            root_of_unity(Fraction(1, 5))


class TestEisensteinMatrix:
    """Test exact matrices over Q(omega)."""

    def test_identity_product(self):
        assert EisensteinMatrix.identity(2) @ P_MATRIX == P_MATRIX

    def test_inverse(self):
        assert P_MATRIX @ P_MATRIX.inverse() == EisensteinMatrix.identity(2)

    def test_inverse_only_two_by_two(self):
        with pytest.raises(ValueError, match="2x2"):
            special_h().inverse()

    def test_conj_transpose(self):
        m = EisensteinMatrix.from_rows([[1, (0, 1)], [0, 2]])
        assert m.conj_transpose()[1, 0] == OMEGA.conjugate()
        assert m.conj_transpose()[0, 1] == 0

    def test_scalar_detection(self):
        assert (EisensteinMatrix.identity(3) * OMEGA).is_scalar()
        assert not P_MATRIX.is_scalar()

    def test_block(self):
        assert special_table(3).block(2).dim == 2


class TestSpecialization:
    """Test the monodromy at mu = omega^2 against the cited tables."""

    @pytest.mark.parametrize("which", ["M", "Mt"])
    @pytest.mark.parametrize("i", [1, 2, 3, 4, 5])
    def test_structured_matches_table(self, i, which):
        assert specialize_omega(i, which) == special_table(i, which)

    def test_bad_kind(self):
        with pytest.raises(ValueError, match="'M' or 'Mt'"):
            specialize_omega(1, "N")

    def test_invariance(self):
        result = check_special_invariance()
        assert result["passed"]
        assert result["h_matches_generic"]
        assert all(result["invariance"].values())
        assert result["det_h"] != 0

    def test_invariance_detects_wrong_dual(self):
        result = check_special_invariance(replace_dual={1: special_table(2, "Mt")})
        assert not result["passed"]
        assert result["invariance"][1] is False

    def test_invariance_detects_identity_dual(self):
        # M3 is unipotent but not I at omega^2 although mu_245 = 1
        assert special_table(3, "M") != EisensteinMatrix.identity(4)
        result = check_special_invariance(replace_dual={3: EisensteinMatrix.identity(4)})
        assert not result["passed"]
        assert result["invariance"][3] is False
        assert result["invariance"][1] is True

    def test_reduced_blocks_coincide(self):
        assert reduced_block(1) == reduced_block(2)
        assert reduced_block(4) == reduced_block(5)

    @pytest.mark.parametrize("i", [1, 3, 5])
    def test_conjugate_by_p(self, i):
        assert conjugate_by_P(i) == REDUCED_IMAGES[i]

    @pytest.mark.parametrize("i", [1, 3, 5])
    def test_reduced_blocks_preserve_h_prime(self, i):
        assert is_unitary_for(reduced_block(i), H_PRIME)

    def test_triangle_signature(self):
        result = triangle_signature()
        assert result["traces"][3] == 2
        assert result["traces"][5] == 2
        assert result["orders"] == {1: 3, 3: None, 5: None}
        assert result["passed"]

    def test_hermitian_transform(self):
        result = hermitian_transform_check()
        assert result == {
            "transform": True,
            "hermitian": True,
            "det_minus_one": True,
            "passed": True,
        }


class TestIntMatrix2:
    """Test integer 2x2 matrices and Gamma_1(3) membership."""

    def test_inverse(self):
        m = IntMatrix2(4, 3, -3, -2)
        assert m @ m.inverse() == IntMatrix2.identity()

    def test_inverse_needs_unit_determinant(self):
        with pytest.raises(NotUnimodular):
            IntMatrix2(2, 0, 0, 1).inverse()

    def test_power(self):
        assert IntMatrix2(1, 1, 0, 1) ** 5 == IntMatrix2(1, 5, 0, 1)
        assert IntMatrix2(1, 1, 0, 1) ** -2 == IntMatrix2(1, -2, 0, 1)

    def test_generators_in_gamma1_3(self):
        for label, matrix in generators().items():
            assert gamma1_3_membership(matrix), label

    def test_non_member(self):
        assert not gamma1_3_membership(IntMatrix2(2, 1, 1, 1))

    def test_membership_needs_determinant_one(self):
        with pytest.raises(NotUnimodular, match="expected 1"):
            gamma1_3_membership(IntMatrix2(1, 1, 1, 1))

    def test_random_words_stay_in_group(self):
        rng = np.random.default_rng(7)
        words = random_words(rng, 30)
        assert len(words) == 30
        for word, product in words:
            assert 1 <= len(word) <= 6
            assert product.det() == 1
            assert gamma1_3_membership(product)

    def test_projective_orders(self):
        assert projective_order(REDUCED_IMAGES[1][0]) == 3
        assert projective_order(REDUCED_IMAGES[3][0]) is None
        assert projective_order(REDUCED_IMAGES[5][0]) is None

    def test_projective_order_of_scalar(self):
        assert projective_order(IntMatrix2(-1, 0, 0, -1)) == 1

    def test_projective_order_exact_matrix(self):
        assert projective_order(EisensteinMatrix.identity(2) * OMEGA) == 1
