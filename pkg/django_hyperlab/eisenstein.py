"""
Exact arithmetic in Q(omega) and the omega^2 specialization of the E2 monodromy.

omega = (-1 + sqrt(-3)) / 2 satisfies omega^2 = -1 - omega. sqrt(-3) is
always represented as 2 omega + 1, so nothing in this module touches
floating point.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .exceptions import (
    BlockMismatch,
    NonIntegralResult,
    NotUnimodular,
    SpecializationMismatch,
)
from .monodromy import (
    CIRCUIT_INDICES,
    circuit_matrix_structured,
    dual_circuit_matrix_structured,
    exact_determinant,
    intersection_matrix,
    omega_mu,
)

logger = logging.getLogger(__name__)

Rational = Union[int, Fraction]


class EisensteinScalar:
    """Element p + q omega of Q(omega) with exact rational p, q."""

    __slots__ = ("_p", "_q")

    def __init__(self, p: Rational = 0, q: Rational = 0):
        self._p = Fraction(p)
        self._q = Fraction(q)

    @property
    def p(self) -> Fraction:
        return self._p

    @property
    def q(self) -> Fraction:
        return self._q

    @classmethod
    def from_rational(cls, value: Rational) -> "EisensteinScalar":
        return cls(value, 0)

    @classmethod
    def _coerce(cls, other: Any) -> Optional["EisensteinScalar"]:
        if isinstance(other, EisensteinScalar):
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return cls.from_rational(other)
        return None

    def __repr__(self) -> str:
        return f"EisensteinScalar({self._p}, {self._q})"

    def __str__(self) -> str:
        if self._q == 0:
            return str(self._p)
        omega_part = {1: "w", -1: "-w"}.get(self._q, f"{self._q}w")
        if self._p == 0:
            return omega_part
        sign = "-" if omega_part.startswith("-") else "+"
        return f"{self._p}{sign}{omega_part.lstrip('-')}"

    def __eq__(self, other: object) -> bool:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self._p == other._p and self._q == other._q

    def __hash__(self) -> int:
        return hash((self._p, self._q))

    def __bool__(self) -> bool:
        return bool(self._p or self._q)

    def __add__(self, other: Any) -> "EisensteinScalar":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return EisensteinScalar(self._p + other._p, self._q + other._q)

    __radd__ = __add__

    def __neg__(self) -> "EisensteinScalar":
        return EisensteinScalar(-self._p, -self._q)

    def __sub__(self, other: Any) -> "EisensteinScalar":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return EisensteinScalar(self._p - other._p, self._q - other._q)

    def __rsub__(self, other: Any) -> "EisensteinScalar":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other: Any) -> "EisensteinScalar":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        p1, q1, p2, q2 = self._p, self._q, other._p, other._q
        # omega^2 = -1 - omega
        return EisensteinScalar(p1 * p2 - q1 * q2, p1 * q2 + q1 * p2 - q1 * q2)

    __rmul__ = __mul__

    def conjugate(self) -> "EisensteinScalar":
        """Complex conjugate: omega maps to omega^2 = -1 - omega."""
        return EisensteinScalar(self._p - self._q, -self._q)

    def norm(self) -> Fraction:
        return self._p * self._p - self._p * self._q + self._q * self._q

    def inverse(self) -> "EisensteinScalar":
        norm = self.norm()
        if norm == 0:
            raise ZeroDivisionError("Inverse of zero in Q(omega)")
        conj = self.conjugate()
        return EisensteinScalar(conj._p / norm, conj._q / norm)

    def __truediv__(self, other: Any) -> "EisensteinScalar":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other: Any) -> "EisensteinScalar":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, exponent: int) -> "EisensteinScalar":
        if exponent < 0:
            return self.inverse() ** -exponent
        result = EisensteinScalar(1)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def is_integral(self) -> bool:
        """True when the element lies in Z[omega]."""
        return self._p.denominator == 1 and self._q.denominator == 1

    def is_rational_integer(self) -> bool:
        return self._q == 0 and self._p.denominator == 1

    def to_complex(self) -> complex:
        return complex(float(self._p) - float(self._q) / 2, float(self._q) * 3**0.5 / 2)

    def to_json(self) -> Dict[str, int]:
        return {
            "p_numer": self._p.numerator,
            "p_denom": self._p.denominator,
            "q_numer": self._q.numerator,
            "q_denom": self._q.denominator,
        }


OMEGA = EisensteinScalar(0, 1)
ONE = EisensteinScalar(1)
ZERO = EisensteinScalar(0)
SQRT_MINUS_3 = EisensteinScalar(1, 2)
# e^{i pi / 3}
ZETA6 = EisensteinScalar(1, 1)


def eis_mul(x: EisensteinScalar, y: EisensteinScalar) -> EisensteinScalar:
    return x * y


def root_of_unity(q: Rational) -> EisensteinScalar:
    """
    exp(2 pi i q) exactly, for q a multiple of 1/6.

    Raises:
        NonIntegralResult: If 6q is not an integer
    """
    sixths = Fraction(q) * 6
    if sixths.denominator != 1:
        raise NonIntegralResult(f"exp(2 pi i {q}) is not a sixth root of unity")
    return ZETA6 ** (sixths.numerator % 6)


# =============================================================================
# Exact matrices
# =============================================================================


def _entry(value: Any) -> EisensteinScalar:
    if isinstance(value, EisensteinScalar):
        return value
    if isinstance(value, tuple):
        return EisensteinScalar(*value)
    return EisensteinScalar.from_rational(value)


@dataclass(frozen=True, eq=False)
class EisensteinMatrix:
    """Square matrix over Q(omega), stored as a numpy object array."""

    entries: np.ndarray

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Any]]) -> "EisensteinMatrix":
        """Build from rows of EisensteinScalar, rationals or (p, q) tuples."""
        array = np.empty((len(rows), len(rows[0])), dtype=object)
        for i, row in enumerate(rows):
            for j, value in enumerate(row):
                array[i, j] = _entry(value)
        return cls(array)

    @classmethod
    def identity(cls, n: int) -> "EisensteinMatrix":
        return cls.from_rows([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def __getitem__(self, index):
        return self.entries[index]

    def __matmul__(self, other: "EisensteinMatrix") -> "EisensteinMatrix":
        return EisensteinMatrix(self.entries @ other.entries)

    def __mul__(self, scalar: Any) -> "EisensteinMatrix":
        return EisensteinMatrix(self.entries * _entry(scalar))

    __rmul__ = __mul__

    def __sub__(self, other: "EisensteinMatrix") -> "EisensteinMatrix":
        return EisensteinMatrix(self.entries - other.entries)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EisensteinMatrix):
            return NotImplemented
        return self.entries.shape == other.entries.shape and all(
            a == b for a, b in zip(self.entries.flat, other.entries.flat)
        )

    def __hash__(self):
        return hash(tuple(self.entries.flat))

    def conj_transpose(self) -> "EisensteinMatrix":
        conj = np.vectorize(lambda entry: entry.conjugate(), otypes=[object])
        return EisensteinMatrix(conj(self.entries).T)

    def det(self) -> EisensteinScalar:
        return _entry(exact_determinant(self.entries))

    def inverse(self) -> "EisensteinMatrix":
        """Inverse of a 2x2 matrix by adjugate division."""
        if self.dim != 2:
            raise ValueError("Only 2x2 inverses are supported")
        det = self.det()
        a, b = self.entries[0]
        c, d = self.entries[1]
        return EisensteinMatrix.from_rows([[d / det, -b / det], [-c / det, a / det]])

    def block(self, size: int) -> "EisensteinMatrix":
        """Top-left size x size block."""
        return EisensteinMatrix(self.entries[:size, :size].copy())

    def is_integral(self) -> bool:
        return all(entry.is_integral() for entry in self.entries.flat)

    def is_scalar(self) -> bool:
        n = self.dim
        first = self.entries[0, 0]
        return all(
            self.entries[i, j] == (first if i == j else 0) for i in range(n) for j in range(n)
        )

    def to_json(self) -> Dict[str, Any]:
        entries = [[entry.to_json() for entry in row] for row in self.entries]
        return {"dim": self.dim, "entries": entries}

    def __str__(self) -> str:
        from .utils import format_matrix

        return format_matrix(self.entries.tolist())


@dataclass(frozen=True)
class IntMatrix2:
    """2x2 integer matrix [[a, b], [c, d]]."""

    a: int
    b: int
    c: int
    d: int

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "IntMatrix2":
        (a, b), (c, d) = rows
        return cls(int(a), int(b), int(c), int(d))

    @classmethod
    def identity(cls) -> "IntMatrix2":
        return cls(1, 0, 0, 1)

    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    def trace(self) -> int:
        return self.a + self.d

    def __matmul__(self, other: "IntMatrix2") -> "IntMatrix2":
        return IntMatrix2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "IntMatrix2":
        det = self.det()
        if det not in (1, -1):
            raise NotUnimodular(f"Determinant {det} is not a unit")
        return IntMatrix2(self.d * det, -self.b * det, -self.c * det, self.a * det)

    def __pow__(self, exponent: int) -> "IntMatrix2":
        if exponent < 0:
            return self.inverse() ** -exponent
        result, base = IntMatrix2.identity(), self
        while exponent:
            if exponent & 1:
                result = result @ base
            base = base @ base
            exponent >>= 1
        return result

    def is_scalar(self) -> bool:
        return self.b == 0 and self.c == 0 and self.a == self.d

    def rows(self) -> List[List[int]]:
        return [[self.a, self.b], [self.c, self.d]]

    def to_json(self) -> List[List[int]]:
        return self.rows()


# =============================================================================
# Cited tables at mu = omega^2
# =============================================================================

# Entries are p + q omega given as (p, q)
W = (0, 1)

SPECIAL_TABLES: Dict[Tuple[str, int], List[List[Any]]] = {
    ("M", 1): [[1, 0, 0, 0], [(-1, -2), (-1, -1), 0, 0], [(-1, -2), 0, (-1, -1), 0], [0, 0, 0, 1]],
    ("M", 2): [[1, 0, 0, 0], [(-1, -2), (-1, -1), 0, 0], [0, 0, 1, 0], [(-1, -2), 0, 0, (-1, -1)]],
    ("M", 3): [[1, (-2, -1), 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]],
    ("M", 4): [
        [(3, 1), (-1, -2), 0, 0],
        [(1, -1), (-1, -1), 0, 0],
        [(1, -1), (-2, -1), 1, 0],
        [0, 0, 0, 1],
    ],
    ("M", 5): [
        [(3, 1), (-1, -2), 0, 0],
        [(1, -1), (-1, -1), 0, 0],
        [0, 0, 1, 0],
        [(1, -1), (-2, -1), 0, 1],
    ],
    ("Mt", 1): [[1, (1, 2), 0, 0], [0, W, 0, 0], [0, 0, W, 0], [0, (1, 1), 0, 1]],
    ("Mt", 2): [[1, (1, 2), 0, 0], [0, W, 0, 0], [0, (1, 1), 1, 0], [0, 0, 0, W]],
    ("Mt", 3): [[1, 0, 0, 0], [(-1, 1), 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]],
    ("Mt", 4): [[(2, -1), (2, 1), 0, 0], [(1, 2), W, 0, 0], [0, 0, 1, 0], [(0, -1), 1, 0, 1]],
    ("Mt", 5): [[(2, -1), (2, 1), 0, 0], [(1, 2), W, 0, 0], [(0, -1), 1, 1, 0], [0, 0, 0, 1]],
}


def special_h() -> EisensteinMatrix:
    """
    H at mu = omega^2.

    (-1/3) [[1, w, 0, 0], [-w-1, 0, 0, 0], [-w-1, 0, s, 0], [-w-1, 0, 0, s]], s = sqrt(-3).
    """
    s = SQRT_MINUS_3
    rows = [
        [1, W, 0, 0],
        [(-1, -1), 0, 0, 0],
        [(-1, -1), 0, s, 0],
        [(-1, -1), 0, 0, s],
    ]
    return EisensteinMatrix.from_rows(rows) * Fraction(-1, 3)


def special_table(i: int, which: str = "M") -> EisensteinMatrix:
    return EisensteinMatrix.from_rows(SPECIAL_TABLES[(which, i)])


# P and the reduced Hermitian form H'
P_MATRIX = EisensteinMatrix.from_rows([[1, 1], [0, (-2, -1)]])
H_PRIME = EisensteinMatrix.from_rows([[-1, (0, -1)], [(1, 1), 0]])

# Integer images of P M'_i P^{-1}, i = 1, 3, 5 (i = 1 up to the scalar omega)
REDUCED_IMAGES: Dict[int, Tuple[IntMatrix2, EisensteinScalar]] = {
    1: (IntMatrix2(-2, -1, 3, 1), OMEGA),
    3: (IntMatrix2(1, 1, 0, 1), ONE),
    5: (IntMatrix2(4, 3, -3, -2), ONE),
}


# =============================================================================
# Specialization checks
# =============================================================================


def specialize_omega(i: int, which: str = "M") -> EisensteinMatrix:
    """
    M_i or M~_i at mu_1 = ... = mu_5 = omega^2 from the structured formulas.

    Raises:
        NonIntegralResult: If an entry falls outside Z[omega]
        SpecializationMismatch: If the result differs from the cited table
    """
    if which not in ("M", "Mt"):
        raise ValueError(f"which must be 'M' or 'Mt', got {which!r}")
    mu = omega_mu()
    if which == "M":
        computed = EisensteinMatrix(circuit_matrix_structured(i, mu))
    else:
        computed = EisensteinMatrix(dual_circuit_matrix_structured(i, mu))

    if not computed.is_integral():
        raise NonIntegralResult(f"{which}_{i} at omega^2 has entries outside Z[omega]")
    expected = special_table(i, which)
    if computed != expected:
        raise SpecializationMismatch(
            f"{which}_{i} at omega^2 differs from the cited table:\n"
            f"{computed}\nexpected\n{expected}"
        )
    return computed


def check_special_invariance(replace_dual: Optional[Dict[int, EisensteinMatrix]] = None) -> Dict:
    """
    Exact check of M_i H M~_i = H at mu = omega^2 for i = 1..5.

    Also confirms H equals the generic H^mu at omega^2 and is invertible.
    """
    H = special_h()
    replace_dual = replace_dual or {}
    generic_h = EisensteinMatrix(intersection_matrix(omega_mu()))
    results = {}
    for i in CIRCUIT_INDICES:
        M = special_table(i, "M")
        Mt = replace_dual.get(i, special_table(i, "Mt"))
        results[i] = (M @ H @ Mt) == H
    det = H.det()
    return {
        "invariance": results,
        "h_matches_generic": generic_h == H,
        "det_h": det,
        "passed": all(results.values()) and det != 0 and generic_h == H,
    }


def reduced_block(i: int) -> EisensteinMatrix:
    """
    Top-left 2x2 block M'_i of the specialized M_i.

    Raises:
        BlockMismatch: If M'_1 != M'_2 or M'_4 != M'_5
    """
    blocks = {k: special_table(k).block(2) for k in CIRCUIT_INDICES}
    if blocks[1] != blocks[2] or blocks[4] != blocks[5]:
        raise BlockMismatch("Expected M'_1 = M'_2 and M'_4 = M'_5")
    return blocks[i]


def is_unitary_for(m: EisensteinMatrix, form: EisensteinMatrix = H_PRIME) -> bool:
    """g H' g* = H'."""
    return (m @ form @ m.conj_transpose()) == form


def _scalar_multiple_integral(m: EisensteinMatrix) -> Tuple[IntMatrix2, EisensteinScalar]:
    for scalar in (ONE, OMEGA, OMEGA * OMEGA, -ONE, -OMEGA, -(OMEGA * OMEGA)):
        candidate = m * scalar.inverse()
        if all(entry.is_rational_integer() for entry in candidate.entries.flat):
            rows = [[int(entry.p) for entry in row] for row in candidate.entries]
            return IntMatrix2.from_rows(rows), scalar
    raise NonIntegralResult(f"Matrix is not a root of unity times an integer matrix:\n{m}")


def conjugate_by_P(i: int) -> Tuple[IntMatrix2, EisensteinScalar]:
    """
    P M'_i P^{-1} written as scalar times an integer matrix.

    Returns:
        (integer matrix, scalar) with the scalar a sixth root of unity
    """
    conjugated = P_MATRIX @ reduced_block(i) @ P_MATRIX.inverse()
    return _scalar_multiple_integral(conjugated)


def gamma1_3_membership(m: IntMatrix2) -> bool:
    """
    Membership in Gamma_1(3): a = d = 1 and c = 0 mod 3.

    Raises:
        NotUnimodular: If det(m) != 1
    """
    if m.det() != 1:
        raise NotUnimodular(f"Determinant of {m.rows()} is {m.det()}, expected 1")
    return m.a % 3 == 1 and m.d % 3 == 1 and m.c % 3 == 0


def hermitian_transform_check() -> Dict[str, bool]:
    """P H' P* = sqrt(-3) [[0, 1], [-1, 0]], with H' Hermitian of determinant -1."""
    target = EisensteinMatrix.from_rows([[0, 1], [-1, 0]]) * SQRT_MINUS_3
    transformed = P_MATRIX @ H_PRIME @ P_MATRIX.conj_transpose()
    result = {
        "transform": transformed == target,
        "hermitian": H_PRIME == H_PRIME.conj_transpose(),
        "det_minus_one": H_PRIME.det() == -1,
    }
    result["passed"] = all(result.values())
    return result


def projective_order(m: Union[IntMatrix2, EisensteinMatrix], max_order: int = 12) -> Optional[int]:
    """Least k >= 1 with m^k scalar, or None up to ``max_order``."""
    power = m
    for k in range(1, max_order + 1):
        if power.is_scalar():
            return k
        power = power @ m
    return None


def triangle_signature() -> Dict[str, Any]:
    """
    Traces and projective orders of the integer images of P M'_i P^{-1}.

    The [3, inf, inf] signature needs the i = 1 image (scalar omega removed)
    to have projective order 3 and the i = 3, 5 images to be parabolic:
    trace 2 and no finite projective order.
    """
    traces, orders = {}, {}
    for i in (1, 3, 5):
        image, _ = conjugate_by_P(i)
        traces[i] = image.trace()
        orders[i] = projective_order(image)
    parabolic = all(traces[i] == 2 and orders[i] is None for i in (3, 5))
    return {"traces": traces, "orders": orders, "passed": orders[1] == 3 and parabolic}


GENERATOR_LABELS = ("A1", "A3", "A5")


def generators() -> Dict[str, IntMatrix2]:
    """Integer images of M'_1 (scalar dropped), M'_3, M'_5 and their inverses."""
    base = {f"A{i}": REDUCED_IMAGES[i][0] for i in (1, 3, 5)}
    base.update({f"{label}^-1": matrix.inverse() for label, matrix in list(base.items())})
    return base


def random_words(
    rng: np.random.Generator, count: int, max_length: int = 6
) -> List[Tuple[Tuple[str, ...], IntMatrix2]]:
    """Random words in the generators and inverses, with their products."""
    table = generators()
    labels = sorted(table)
    words = []
    for _ in range(count):
        length = int(rng.integers(1, max_length + 1))
        word = tuple(labels[int(index)] for index in rng.integers(0, len(labels), size=length))
        product = IntMatrix2.identity()
        for label in word:
            product = product @ table[label]
        words.append((word, product))
    return words
