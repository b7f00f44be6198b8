"""
Intersection and circuit matrices of the Appell E2 local system.

Every construction is generic over the scalar type of the MuVector:
complex numbers for numeric work, exact EisensteinScalar values for the
specialization at mu = omega^2. Numeric zero tests use HYPERLAB_PIVOT_TOL,
exact zero tests use equality.

Two independent constructions of each circuit matrix are provided: the
structured formulas built from H^mu and the selector data, and the
transcribed explicit tables. Suites compare the two.
"""

import cmath
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .exceptions import ArityMismatch, DegenerateMu, NonIntegralResult, SingularPivot
from .reports import CheckResult
from .settings import hyperlab_settings

logger = logging.getLogger(__name__)

CIRCUIT_INDICES = (1, 2, 3, 4, 5)


# =============================================================================
# Mu vectors
# =============================================================================


@dataclass(frozen=True)
class MuVector:
    """
    The five exponents mu_1..mu_5 (unit complex numbers or exact roots of unity).

    ``mu.prod(1, 2, 5)`` is the product mu_125.
    """

    values: Tuple[Any, ...]

    def __post_init__(self):
        if len(self.values) != 5:
            raise ArityMismatch(f"A mu vector has 5 entries, got {len(self.values)}")

    @property
    def exact(self) -> bool:
        return not any(isinstance(value, (complex, float)) for value in self.values)

    def __getitem__(self, index: int) -> Any:
        return self.values[index - 1]

    def prod(self, *indices: int) -> Any:
        result = self.one
        for index in indices:
            result = result * self[index]
        return result

    @property
    def one(self) -> Any:
        return self.values[0] ** 0 if self.exact else 1 + 0j

    @property
    def zero(self) -> Any:
        return self.one * 0

    def is_zero(self, value: Any, tol: Optional[float] = None) -> bool:
        if self.exact:
            return value == 0
        if tol is None:
            tol = hyperlab_settings.pivot_tol
        return abs(value) < tol

    def to_complex(self) -> Tuple[complex, ...]:
        if self.exact:
            return tuple(value.to_complex() for value in self.values)
        return tuple(complex(value) for value in self.values)

    def unit_modulus_defect(self) -> float:
        return max(abs(abs(value) - 1) for value in self.to_complex())

    def condition_31(self, tol: float = 1e-10) -> bool:
        """True when mu_1..mu_5 and mu_12345 all differ from 1."""
        checks = [self[i] - 1 for i in CIRCUIT_INDICES] + [self.prod(1, 2, 3, 4, 5) - 1]
        if self.exact:
            return all(value != 0 for value in checks)
        return all(abs(value) >= tol for value in checks)

    def to_dict(self) -> Dict[str, Any]:
        return {f"mu{i}": self[i] for i in CIRCUIT_INDICES}


def mu_from_params(params: Any, exact: bool = False) -> MuVector:
    """
    Mu vector of an E2 parameter set.

    mu_1 = e(b), mu_2 = e(c-b), mu_3 = e(b'), mu_4 = e(c'-b'), mu_5 = e(-a)
    with e(q) = exp(2 pi i q). With ``exact`` every exponent must be a
    multiple of 1/6 and the result lives in Q(omega).
    """
    a, b, bp, c, cp = params.as_tuple() if hasattr(params, "as_tuple") else params
    exponents = [b, c - b, bp, cp - bp, -a]
    if exact:
        from .eisenstein import root_of_unity

        return MuVector(tuple(root_of_unity(Fraction(q)) for q in exponents))

    values = []
    for q in exponents:
        if isinstance(q, Fraction):
            # reduce mod 1 exactly so integer exponents give exactly 1
            q = q - math.floor(q)
            values.append(cmath.exp(2j * math.pi * float(q)) if q else 1 + 0j)
        else:
            values.append(cmath.exp(2j * math.pi * complex(q)))
    return MuVector(tuple(values))


def random_admissible_mu(
    rng: np.random.Generator, margin: Optional[float] = None, max_attempts: int = 1000
) -> MuVector:
    """
    Draw a unit-circle mu vector away from the degenerate locus.

    Draws closer than ``margin`` to mu_i = 1 or mu_12345 = 1 are rejected.
    """
    if margin is None:
        margin = hyperlab_settings.admissibility_margin
    for _ in range(max_attempts):
        theta = rng.uniform(0.0, 1.0, size=5)
        mu = MuVector(tuple(complex(value) for value in np.exp(2j * np.pi * theta)))
        if mu.condition_31(tol=margin):
            return mu
    raise DegenerateMu(f"No admissible mu found in {max_attempts} draws")


def omega_mu() -> MuVector:
    """The specialization mu_1 = ... = mu_5 = omega^2."""
    from .eisenstein import OMEGA

    return MuVector((OMEGA * OMEGA,) * 5)


# =============================================================================
# Generic helpers
# =============================================================================


def _array(rows: Sequence[Sequence[Any]], mu: MuVector) -> np.ndarray:
    return np.array(rows, dtype=object if mu.exact else complex)


def _identity(mu: MuVector, n: int = 4) -> np.ndarray:
    return _array([[mu.one if i == j else mu.zero for j in range(n)] for i in range(n)], mu)


def _diffs(mu: MuVector, needed: Sequence[int] = (1, 2, 3, 4, 5)) -> Dict[int, Any]:
    """d_i = mu_i - 1, checked nonzero for the requested indices."""
    diffs = {i: mu[i] - 1 for i in CIRCUIT_INDICES}
    for i in needed:
        if mu.is_zero(diffs[i]):
            raise DegenerateMu(f"mu_{i} = 1 makes a required denominator vanish")
    return diffs


def max_abs_entry(matrix: np.ndarray) -> float:
    """Entrywise max-abs norm, for numeric or exact matrices."""
    matrix = to_complex_matrix(matrix)
    return float(np.max(np.abs(matrix))) if matrix.size else 0.0


def to_complex_matrix(matrix: np.ndarray) -> np.ndarray:
    if matrix.dtype != object:
        return matrix
    convert = np.vectorize(
        lambda entry: entry.to_complex() if hasattr(entry, "to_complex") else complex(entry),
        otypes=[complex],
    )
    return convert(matrix)


# =============================================================================
# Intersection matrix
# =============================================================================


def intersection_matrix(mu: MuVector) -> np.ndarray:
    """
    Intersection matrix H^mu between the cycles Delta_1..Delta_4 and their duals.

    Raises:
        DegenerateMu: If mu_1..mu_5 hits 1 where a denominator needs it not to
    """
    d = _diffs(mu)
    m = mu.prod
    d1, d2, d3, d4, d5 = (d[i] for i in CIRCUIT_INDICES)
    m12, m34 = m(1, 2) - 1, m(3, 4) - 1
    m125, m345 = m(1, 2, 5) - 1, m(3, 4, 5) - 1
    zero = mu.zero

    rows = [
        [
            m12 * m34 / (d1 * d2 * d3 * d4),
            mu.one / (d2 * d4),
            -mu[1] * m34 * m125 / (d1 * d3 * d4),
            -mu[3] * m12 * m345 / (d1 * d2 * d3),
        ],
        [
            m(2, 4) / (d2 * d4),
            (m(2, 4, 5) - 1) / (d2 * d4 * d5),
            zero,
            zero,
        ],
        [
            -m34 / (d1 * d3 * d4),
            zero,
            mu[1] * m34 * (m(2, 5) - 1) / (d1 * d3 * d4),
            mu[3] * m345 / (d1 * d3),
        ],
        [
            -m12 / (d1 * d2 * d3),
            zero,
            mu[1] * m125 / (d1 * d3),
            mu[3] * m12 * (m(4, 5) - 1) / (d1 * d2 * d3),
        ],
    ]
    return _array(rows, mu)


def intersection_determinant_closed_form(mu: MuVector) -> Any:
    """mu_1234 (mu_5 - 1)(mu_12345 - 1) / prod_{i<=4} (mu_i - 1)^2."""
    d = _diffs(mu, needed=(1, 2, 3, 4))
    denominator = (d[1] * d[2] * d[3] * d[4]) ** 2
    return mu.prod(1, 2, 3, 4) * d[5] * (mu.prod(1, 2, 3, 4, 5) - 1) / denominator


def exact_determinant(matrix: np.ndarray) -> Any:
    """Determinant by cofactor expansion; exact for exact entries."""
    n = matrix.shape[0]
    if n == 1:
        return matrix[0, 0]
    if n == 2:
        return matrix[0, 0] * matrix[1, 1] - matrix[0, 1] * matrix[1, 0]
    total = None
    for col in range(n):
        entry = matrix[0, col]
        if entry == 0:
            continue
        minor = np.delete(np.delete(matrix, 0, axis=0), col, axis=1)
        term = entry * exact_determinant(minor)
        term = term if col % 2 == 0 else -term
        total = term if total is None else total + term
    return total if total is not None else matrix[0, 0] * 0


def determinant(matrix: np.ndarray) -> Any:
    if matrix.dtype == object:
        return exact_determinant(matrix)
    return complex(np.linalg.det(matrix))


# =============================================================================
# Selector data
# =============================================================================


@dataclass(frozen=True)
class SelectorData:
    """Eigenvalues and selector vectors entering the structured formulas."""

    lambdas: Dict[int, Any]
    blocks: Dict[int, Tuple[int, int]]
    rows: Dict[int, np.ndarray]
    columns: Dict[int, np.ndarray]


def selector_data(mu: MuVector) -> SelectorData:
    """
    Eigenvalues lambda_i and selectors R_i (i = 1, 2), r_j and r~_j (j = 3, 4, 5).

    R_i are coordinate selectors, so only their index pairs are stored; the
    dual selectors are their transposes.
    """
    d = _diffs(mu, needed=(5,))
    m = mu.prod
    zero, one = mu.zero, mu.one
    d5 = d[5]

    lambdas = {
        1: one / m(1, 2),
        2: one / m(3, 4),
        3: m(2, 4, 5),
        4: m(1, 4, 5),
        5: m(2, 3, 5),
    }
    rows = {
        3: _array([zero, one, zero, zero], mu),
        4: _array([-(m(4, 5) - 1) / d5, one, zero, -(m(3, 4, 5) - 1) / d5], mu),
        5: _array([-(m(2, 5) - 1) / d5, one, -(m(1, 2, 5) - 1) / d5, zero], mu),
    }
    columns = {
        3: _array([zero, one, zero, zero], mu),
        4: _array([-(m(4, 5) - 1) / (mu[4] * d5), one, zero, -one / (m(3, 4) * d5)], mu),
        5: _array([-(m(2, 5) - 1) / (mu[2] * d5), one, -one / (m(1, 2) * d5), zero], mu),
    }
    return SelectorData(lambdas=lambdas, blocks={1: (0, 3), 2: (0, 2)}, rows=rows, columns=columns)


def square_decomposition(which: str, mu: MuVector) -> np.ndarray:
    """
    Coefficients of the squares 5 and 6 (or their regularized duals).

    Args:
        which: "square5" and "square6" in the Delta basis, "dual5" and
            "dual6" in the dual basis
    """
    d = _diffs(mu, needed=(5,))
    m = mu.prod
    zero, one = mu.zero, mu.one
    d5 = d[5]
    table = {
        "square5": [-(m(4, 5) - 1) / d5, zero, zero, -(m(3, 4, 5) - 1) / d5],
        "square6": [-(m(2, 5) - 1) / d5, zero, -(m(1, 2, 5) - 1) / d5, zero],
        "dual5": [-(m(4, 5) - 1) / (mu[4] * d5), zero, zero, -one / (m(3, 4) * d5)],
        "dual6": [-(m(2, 5) - 1) / (mu[2] * d5), zero, -one / (m(1, 2) * d5), zero],
    }
    try:
        return _array(table[which], mu)
    except KeyError:
        raise ArityMismatch(f"Unknown square {which!r}; expected one of {sorted(table)}") from None


def intersection_row(which: str, mu: MuVector) -> np.ndarray:
    """Intersection numbers of square 5 or 6 against the dual basis."""
    d = _diffs(mu)
    m = mu.prod
    d1, d2, d3, d4, d5 = (d[i] for i in CIRCUIT_INDICES)
    zero = mu.zero
    if which == "square5":
        row = [
            -mu[4] * (m(1, 2) - 1) / (d1 * d2 * d4),
            -(m(4, 5) - 1) / (d2 * d4 * d5),
            m(1, 4) * (m(1, 2, 5) - 1) / (d1 * d4),
            zero,
        ]
    elif which == "square6":
        row = [
            -mu[2] * (m(3, 4) - 1) / (d2 * d3 * d4),
            -(m(2, 5) - 1) / (d2 * d4 * d5),
            zero,
            m(2, 3) * (m(3, 4, 5) - 1) / (d2 * d3),
        ]
    else:
        raise ArityMismatch(f"Unknown square {which!r}; expected square5 or square6")
    return _array(row, mu)


# =============================================================================
# Structured circuit matrices
# =============================================================================


def _pivot_weight(i: int, mu: MuVector, H: np.ndarray, lam: Any) -> np.ndarray:
    """
    W_i = (lambda_i - 1) (R_i H R~_i)^{-1}.

    Falls back to the closed form with the mu_12 - 1 (or mu_34 - 1) factor
    cancelled when the pivot is singular because lambda_i = 1.
    """
    p, q = (0, 3) if i == 1 else (0, 2)
    pivot = H[np.ix_([p, q], [p, q])]
    det = pivot[0, 0] * pivot[1, 1] - pivot[0, 1] * pivot[1, 0]
    if not mu.is_zero(det):
        adjugate = _array([[pivot[1, 1], -pivot[0, 1]], [-pivot[1, 0], pivot[0, 0]]], mu)
        return adjugate * ((lam - 1) / det)
    if not mu.is_zero(lam - 1):
        raise SingularPivot(f"Pivot of M_{i} is singular while lambda_{i} != 1")

    logger.debug(f"Using cancelled closed form for the pivot of M_{i}")
    d = _diffs(mu)
    m = mu.prod
    if i == 1:
        k, outer, partner_pair, triple = 4, m(1, 2), m(3, 4), m(3, 4, 5)
        paired, lead = m(4, 5), d[1] * d[2]
    else:
        k, outer, partner_pair, triple = 2, m(3, 4), m(1, 2), m(1, 2, 5)
        paired, lead = m(2, 5), d[3] * d[4]
    dk, d5 = d[k], d[5]
    block = _array(
        [
            [dk * (paired - 1) / (mu[k] * d5), dk * (triple - 1) / (mu[k] * d5)],
            [dk / (partner_pair * d5), (partner_pair - 1) / (partner_pair * d5)],
        ],
        mu,
    )
    return block * (-lead / outer)


def _rank_one_factor(j: int, mu: MuVector, H: np.ndarray, sel: SelectorData) -> Any:
    """
    kappa_j = (1 - lambda_j) / (r_j H r~_j).

    When both vanish the continuous extension -d_a d_b d_5 is used.
    """
    lam = sel.lambdas[j]
    pairing = sel.rows[j] @ H @ sel.columns[j]
    if not mu.is_zero(pairing):
        return (1 - lam) / pairing
    if not mu.is_zero(1 - lam):
        raise SingularPivot(f"r_{j} H r~_{j} vanishes while lambda_{j} != 1")
    d = _diffs(mu)
    first = {3: 2, 4: 1, 5: 2}[j]
    second = {3: 4, 4: 4, 5: 3}[j]
    return -d[first] * d[second] * d[5]


def _check_index(i: int) -> None:
    if i not in CIRCUIT_INDICES:
        raise ArityMismatch(f"Circuit index must be 1..5, got {i}")


def circuit_matrix_structured(i: int, mu: MuVector) -> np.ndarray:
    """
    M_i^mu from H^mu and the selector data.

    M_i = lambda_i I - H R~_i W_i R_i for i = 1, 2 and
    M_j = I - kappa_j H r~_j r_j for j = 3, 4, 5.
    """
    _check_index(i)
    H = intersection_matrix(mu)
    sel = selector_data(mu)
    identity = _identity(mu)
    lam = sel.lambdas[i]
    if i in (1, 2):
        idx = list(sel.blocks[i])
        W = _pivot_weight(i, mu, H, lam)
        selector = _array(
            [[mu.one if col == idx[row] else mu.zero for col in range(4)] for row in range(2)], mu
        )
        return identity * lam - H[:, idx] @ W @ selector
    kappa = _rank_one_factor(i, mu, H, sel)
    column = (H @ sel.columns[i]).reshape(4, 1)
    return identity - (column @ sel.rows[i].reshape(1, 4)) * kappa


def dual_circuit_matrix_structured(i: int, mu: MuVector) -> np.ndarray:
    """
    M~_i^{-mu} from H^mu and the selector data.

    M~_i = (1/lambda_i) I + R~_i (W_i / lambda_i) R_i H for i = 1, 2 and
    M~_j = I + (kappa_j / lambda_j) r~_j r_j H for j = 3, 4, 5.
    """
    _check_index(i)
    H = intersection_matrix(mu)
    sel = selector_data(mu)
    identity = _identity(mu)
    lam = sel.lambdas[i]
    if i in (1, 2):
        idx = list(sel.blocks[i])
        W = _pivot_weight(i, mu, H, lam)
        lifted = _array([[mu.zero, mu.zero] for _ in range(4)], mu)
        lifted[idx, :] = W / lam
        return identity * (mu.one / lam) + lifted @ H[idx, :]
    kappa = _rank_one_factor(i, mu, H, sel)
    row = (sel.rows[i] @ H).reshape(1, 4)
    return identity + (sel.columns[i].reshape(4, 1) @ row) * (kappa / lam)


# =============================================================================
# Explicit tables
# =============================================================================


def _explicit_tables(mu: MuVector) -> Dict[Tuple[str, int], List[List[Any]]]:
    d = _diffs(mu)
    m = mu.prod
    one, zero = mu.one, mu.zero
    d1, d2, d3, d4, d5 = (d[i] for i in CIRCUIT_INDICES)
    m12, m34 = m(1, 2), m(3, 4)
    e45, e25 = m(4, 5) - 1, m(2, 5) - 1
    e125, e345 = m(1, 2, 5) - 1, m(3, 4, 5) - 1

    return {
        ("M", 1): [
            [one, zero, zero, zero],
            [d1 * e45 / (mu[1] * d5), one / m12, zero, d1 * e345 / (mu[1] * d5)],
            [-d2 / m12, zero, one / m12, zero],
            [zero, zero, zero, one],
        ],
        ("M", 2): [
            [one, zero, zero, zero],
            [d3 * e25 / (mu[3] * d5), one / m34, d3 * e125 / (mu[3] * d5), zero],
            [zero, zero, one, zero],
            [-d4 / m34, zero, zero, one / m34],
        ],
        ("M", 3): [
            [one, d5, zero, zero],
            [zero, m(2, 4, 5), zero, zero],
            [zero, zero, one, zero],
            [zero, zero, zero, one],
        ],
        ("M", 4): [
            [1 - mu[1] + m(1, 4, 5), -mu[1] * d5, zero, mu[1] * e345],
            [-d1 * e45 / d5, mu[1], zero, -d1 * e345 / d5],
            [-e45, d5, one, -e345],
            [zero, zero, zero, one],
        ],
        ("M", 5): [
            [1 - mu[3] + m(2, 3, 5), -mu[3] * d5, mu[3] * e125, zero],
            [-d3 * e25 / d5, mu[3], -d3 * e125 / d5, zero],
            [zero, zero, one, zero],
            [-e25, d5, -e125, one],
        ],
        ("Mt", 1): [
            [one, -d1 * e45 / (mu[4] * d5), mu[1] * d2 * e125, zero],
            [zero, m12, zero, zero],
            [zero, zero, m12, zero],
            [zero, -d1 / (m34 * d5), zero, one],
        ],
        ("Mt", 2): [
            [one, -d3 * e25 / (mu[2] * d5), zero, mu[3] * d4 * e345],
            [zero, m34, zero, zero],
            [zero, -d3 / (m12 * d5), one, zero],
            [zero, zero, zero, m34],
        ],
        ("Mt", 3): [
            [one, zero, zero, zero],
            [-d5 / mu[5], one / m(2, 4, 5), zero, zero],
            [zero, zero, one, zero],
            [zero, zero, zero, one],
        ],
        ("Mt", 4): [
            [
                (1 - m(4, 5) + m(1, 4, 5)) / m(1, 4, 5),
                d1 * e45 / (m(1, 4) * d5),
                e45 * e125 / m(4, 5),
                zero,
            ],
            [d5 / m(1, 5), one / mu[1], -d5 * e125 / mu[5], zero],
            [zero, zero, one, zero],
            [-one / (m(1, 3, 4) * mu[5]), d1 / (m(1, 3, 4) * d5), e125 / m(3, 4, 5), one],
        ],
        ("Mt", 5): [
            [
                (1 - m(2, 5) + m(2, 3, 5)) / m(2, 3, 5),
                d3 * e25 / (m(2, 3) * d5),
                zero,
                e25 * e345 / m(2, 5),
            ],
            [d5 / m(3, 5), one / mu[3], zero, -d5 * e345 / mu[5]],
            [-one / (m(1, 2, 3) * mu[5]), d3 / (m(1, 2, 3) * d5), one, e345 / m(1, 2, 5)],
            [zero, zero, zero, one],
        ],
    }


def circuit_matrix_explicit(i: int, mu: MuVector) -> np.ndarray:
    """Transcribed table of M_i^mu."""
    _check_index(i)
    return _array(_explicit_tables(mu)[("M", i)], mu)


def dual_circuit_matrix(i: int, mu: MuVector, variant: str = "structured") -> np.ndarray:
    """
    M~_i^{-mu}, either from the structured formula or the transcribed table.
    """
    _check_index(i)
    if variant == "structured":
        return dual_circuit_matrix_structured(i, mu)
    if variant == "explicit":
        return _array(_explicit_tables(mu)[("Mt", i)], mu)
    raise ValueError(f"Unknown variant {variant!r}; expected structured or explicit")


def circuit_matrix(i: int, mu: MuVector, variant: str = "structured") -> np.ndarray:
    if variant == "structured":
        return circuit_matrix_structured(i, mu)
    if variant == "explicit":
        return circuit_matrix_explicit(i, mu)
    raise ValueError(f"Unknown variant {variant!r}; expected structured or explicit")


# =============================================================================
# Checks
# =============================================================================


def check_pairing_invariance(
    mu: MuVector,
    variant: str = "structured",
    replace_dual: Optional[Dict[int, np.ndarray]] = None,
) -> Dict[str, Any]:
    """
    Deviations ||M_i H M~_i - H||_max for i = 1..5, relative to max(1, ||H||_max).

    ``replace_dual`` substitutes chosen M~_i (negative controls).
    """
    H = intersection_matrix(mu)
    replace_dual = replace_dual or {}
    scale = max(1.0, max_abs_entry(H))
    deviations = {}
    for i in CIRCUIT_INDICES:
        M = circuit_matrix(i, mu, variant)
        Mt = replace_dual.get(i)
        if Mt is None:
            Mt = dual_circuit_matrix(i, mu, variant)
        deviations[i] = max_abs_entry(M @ H @ Mt - H) / scale
    return {"deviations": deviations, "max_deviation": max(deviations.values()), "scale": scale}


def expected_spectrum(i: int, mu: MuVector) -> List[complex]:
    sel = selector_data(mu)
    lam = complex(sel.lambdas[i].to_complex()) if mu.exact else complex(sel.lambdas[i])
    if i in (1, 2):
        return [1 + 0j, 1 + 0j, lam, lam]
    return [1 + 0j, 1 + 0j, 1 + 0j, lam]


def match_multisets(found: Sequence[complex], expected: Sequence[complex]) -> float:
    """Greedy nearest pairing; returns the largest pairing distance."""
    remaining = list(found)
    worst = 0.0
    for target in expected:
        distances = [abs(value - target) for value in remaining]
        best = int(np.argmin(distances))
        worst = max(worst, distances[best])
        remaining.pop(best)
    return worst


def eigenstructure_check(
    i: int, mu: MuVector, tol: float = 1e-9, variant: str = "explicit"
) -> CheckResult:
    """Compare the spectrum of M_i with {1,1,lambda,lambda} or {1,1,1,lambda}."""
    matrix = to_complex_matrix(circuit_matrix(i, mu, variant))
    found = [complex(value) for value in np.linalg.eigvals(matrix)]
    expected = expected_spectrum(i, mu)
    distance = match_multisets(found, expected)
    return CheckResult(
        check_id=f"eigen.M{i}",
        passed=distance < tol,
        max_residual=distance,
        tol=tol,
        details={"expected": expected, "found": sorted(found, key=lambda z: (z.real, z.imag))},
    )


def square_decomposition_residual(which: str, mu: MuVector) -> float:
    """Solve gamma H = row and compare with the displayed coefficients."""
    H = to_complex_matrix(intersection_matrix(mu))
    row = to_complex_matrix(intersection_row(which, mu))
    gamma = np.linalg.solve(H.T, row)
    return float(np.max(np.abs(gamma - to_complex_matrix(square_decomposition(which, mu)))))


def structured_vs_explicit(mu: MuVector) -> Dict[str, float]:
    """
    Entrywise max deviation between the two constructions, per matrix.

    Each deviation is relative to max(1, ||explicit||_max).
    """
    result = {}
    for i in CIRCUIT_INDICES:
        pairs = {
            f"M{i}": (circuit_matrix_structured(i, mu), circuit_matrix_explicit(i, mu)),
            f"Mt{i}": (
                dual_circuit_matrix(i, mu, "structured"),
                dual_circuit_matrix(i, mu, "explicit"),
            ),
        }
        for name, (structured, explicit) in pairs.items():
            scale = max(1.0, max_abs_entry(explicit))
            result[name] = max_abs_entry(structured - explicit) / scale
    return result


def matrix_to_json(matrix: np.ndarray) -> Dict[str, Any]:
    """Dimension plus row-major entries."""
    return {"dim": matrix.shape[0], "entries": [list(row) for row in matrix]}

