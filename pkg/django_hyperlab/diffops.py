"""
Euler-operator calculus on truncated power series.

Operators are small expression trees over variable multiplication, Euler
operators x_k d/dx_k, rational scalars, sums and compositions. They act on
TruncatedSeries exactly, so annihilation of a series by a system of
operators can be certified coefficient by coefficient.

Usage:
    >>> system = build_system("E", (Q(1, 3), Q(2, 3), Q(4, 3)))
    >>> series = truncate_formal("F", system.params, 8)
    >>> certify_annihilation(system, series).passed
    True
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .exceptions import ArityMismatch, PreconditionViolated
from .hyperseries import Exponent, TruncatedSeries
from .utils import require_exact

logger = logging.getLogger(__name__)


# =============================================================================
# Expression tree
# =============================================================================


class EulerOperatorExpr:
    """
    Base class of operator expressions.

    ``a * b`` is composition (apply b first), ``a + b`` and ``a - b`` are
    sums, and plain numbers are coerced to scalar operators.
    """

    def apply(self, series: TruncatedSeries) -> TruncatedSeries:
        raise NotImplementedError

    def variable_depth(self) -> int:
        """Largest number of variable multiplications along any branch."""
        raise NotImplementedError

    @staticmethod
    def coerce(value: Any) -> "EulerOperatorExpr":
        if isinstance(value, EulerOperatorExpr):
            return value
        return Scalar(value)

    def __add__(self, other: Any) -> "EulerOperatorExpr":
        return Sum((self, self.coerce(other)))

    def __radd__(self, other: Any) -> "EulerOperatorExpr":
        return Sum((self.coerce(other), self))

    def __neg__(self) -> "EulerOperatorExpr":
        return Compose((Scalar(-1), self))

    def __sub__(self, other: Any) -> "EulerOperatorExpr":
        return self + (-self.coerce(other))

    def __rsub__(self, other: Any) -> "EulerOperatorExpr":
        return self.coerce(other) + (-self)

    def __mul__(self, other: Any) -> "EulerOperatorExpr":
        return Compose((self, self.coerce(other)))

    def __rmul__(self, other: Any) -> "EulerOperatorExpr":
        return Compose((self.coerce(other), self))


@dataclass(frozen=True, eq=False)
class Scalar(EulerOperatorExpr):
    value: Any

    def apply(self, series):
        return series.scale(self.value)

    def variable_depth(self):
        return 0

    def __repr__(self):
        return str(self.value)


@dataclass(frozen=True, eq=False)
class Var(EulerOperatorExpr):
    """Multiplication by the k-th variable; consumes one order of certainty."""

    index: int
    name: str = ""

    def apply(self, series):
        if self.index >= series.nvars:
            raise ArityMismatch(f"Variable {self.index} on a {series.nvars}-variable series")
        order = series.order - 1
        if order < 0:
            raise PreconditionViolated("Cannot multiply an order-0 series by a variable")
        shifted = {}
        for exponent, value in series.items():
            bumped = list(exponent)
            bumped[self.index] += 1
            shifted[tuple(bumped)] = value
        return TruncatedSeries(series.nvars, order, shifted)

    def variable_depth(self):
        return 1

    def __repr__(self):
        return self.name or f"x{self.index}"


@dataclass(frozen=True, eq=False)
class Euler(EulerOperatorExpr):
    """Euler operator x_k d/dx_k: multiplies the coefficient of x^n by n_k."""

    index: int
    name: str = ""

    def apply(self, series):
        if self.index >= series.nvars:
            raise ArityMismatch(f"Euler operator {self.index} on a {series.nvars}-variable series")
        return TruncatedSeries(
            series.nvars,
            series.order,
            {exponent: exponent[self.index] * value for exponent, value in series.items()},
        )

    def variable_depth(self):
        return 0

    def __repr__(self):
        return self.name or f"D{self.index}"


@dataclass(frozen=True, eq=False)
class Sum(EulerOperatorExpr):
    terms: Tuple[EulerOperatorExpr, ...]

    def apply(self, series):
        results = [term.apply(series) for term in self.terms]
        total = results[0]
        for result in results[1:]:
            total = total + result
        return total

    def variable_depth(self):
        return max(term.variable_depth() for term in self.terms)

    def __repr__(self):
        return "(" + " + ".join(repr(term) for term in self.terms) + ")"


@dataclass(frozen=True, eq=False)
class Compose(EulerOperatorExpr):
    """Composition; the rightmost factor acts first."""

    factors: Tuple[EulerOperatorExpr, ...]

    def apply(self, series):
        for factor in reversed(self.factors):
            series = factor.apply(series)
        return series

    def variable_depth(self):
        return sum(factor.variable_depth() for factor in self.factors)

    def __repr__(self):
        return "".join(repr(factor) for factor in self.factors)


def apply(op: EulerOperatorExpr, series: TruncatedSeries) -> TruncatedSeries:
    """
    Apply an operator to a truncated series.

    The result is exact through order ``series.order - op.variable_depth()``.
    """
    if series.order < 1:
        raise PreconditionViolated("Operators need a series of order >= 1")
    return op.apply(series)


# =============================================================================
# Operator systems
# =============================================================================

SYSTEM_ARITY = {"E": 3, "E1": 4, "E2": 5, "ED3": 5, "EX3": 5}
SYSTEM_NVARS = {"E": 1, "E1": 2, "E2": 2, "ED3": 3, "EX3": 3}


@dataclass(frozen=True)
class OperatorSystem:
    """A named system of operators with the parameters it was built from."""

    name: str
    params: Tuple[Fraction, ...]
    operators: Tuple[Tuple[str, EulerOperatorExpr], ...]
    nvars: int
    variant: str = "standard"

    def __len__(self):
        return len(self.operators)

    @property
    def labels(self) -> List[str]:
        return [label for label, _ in self.operators]


def _system_e(p):
    a, b, c = p
    x, D = Var(0, "x"), Euler(0, "D")
    return [("P", D * (c - 1 + D) - x * (a + D) * (b + D))]


def _system_e1(p):
    a, b, bp, c = p
    x, y = Var(0, "x"), Var(1, "y")
    D, Dp = Euler(0, "D"), Euler(1, "D'")
    # P1, Q1, R1 multiplied through by x, y and xy
    return [
        ("xP1", D * (c - 1 + D + Dp) - x * (a + D + Dp) * (b + D)),
        ("yQ1", Dp * (c - 1 + D + Dp) - y * (a + D + Dp) * (bp + Dp)),
        ("xyR1", x * Dp * (D + b) - y * D * (Dp + bp)),
    ]


def _system_e2(p, variant):
    a, b, bp, c, cp = p
    x, y = Var(0, "x"), Var(1, "y")
    D, Dp = Euler(0, "D"), Euler(1, "D'")
    q2_last = bp + D if variant == "displayed" else bp + Dp
    return [
        ("P2", D * (c - 1 + D) - x * (a + D + Dp) * (b + D)),
        ("Q2", Dp * (cp - 1 + Dp) - y * (a + D + Dp) * q2_last),
    ]


def _system_ed3(p):
    a, b1, b2, b3, c = p
    ys = [Var(i, f"y{i + 1}") for i in range(3)]
    deltas = [Euler(i, f"d{i + 1}") for i in range(3)]
    uppers = (b1, b2, b3)
    delta = Sum(tuple(deltas))
    operators = [
        (
            f"diag{i + 1}",
            deltas[i] * (delta + c - 1) - ys[i] * (deltas[i] + uppers[i]) * (delta + a),
        )
        for i in range(3)
    ]
    for i in range(3):
        for j in range(i + 1, 3):
            operators.append(
                (
                    f"mixed{i + 1}{j + 1}",
                    ys[i] * (deltas[i] + uppers[i]) * deltas[j]
                    - ys[j] * (deltas[j] + uppers[j]) * deltas[i],
                )
            )
    return operators


def _system_ex3(p):
    a2, a3, a4, a5, a6 = p
    x1, x3, x4 = Var(0, "x1"), Var(1, "x3"), Var(2, "x4")
    t1, t3, t4 = Euler(0, "t1"), Euler(1, "t3"), Euler(2, "t4")
    theta = Sum((t1, t3, t4))
    lead = theta + (a2 + a3 + a4 - 1)
    return [
        ("L1", lead * t1 - x1 * (t1 + t3 + 1 - a5) * (t1 + a2)),
        ("L3", lead * t3 - x3 * (t1 + t3 + 1 - a5) * (t3 + t4 + a3)),
        ("L4", lead * t4 - x4 * (t4 + 1 - a6) * (t3 + t4 + a3)),
        ("L34", x3 * (t1 + t3 + 1 - a5) * t4 - x4 * (t4 + 1 - a6) * t3),
        ("L13", x1 * (t1 + a2) * t3 - x3 * (t3 + t4 + a3) * t1),
    ]


def build_system(name: str, params: Sequence[Any], q2_variant: str = "standard") -> OperatorSystem:
    """
    Build one of the operator systems E, E1, E2, ED3, EX3.

    Args:
        name: System name
        params: Exact rational parameters (E: a,b,c; E1: a,b,b',c;
            E2: a,b,b',c,c'; ED3: a,b1,b2,b3,c; EX3: a2..a6)
        q2_variant: For E2, "standard" uses (b'+D') in Q2; "displayed"
            uses (b'+D) and serves as a negative control

    Raises:
        ArityMismatch: If the parameter count does not match the system
    """
    key = name.upper()
    if key not in SYSTEM_ARITY:
        raise ArityMismatch(f"Unknown system {name!r}; expected one of {sorted(SYSTEM_ARITY)}")
    if len(params) != SYSTEM_ARITY[key]:
        raise ArityMismatch(f"{key} takes {SYSTEM_ARITY[key]} parameters, got {len(params)}")
    if q2_variant not in ("standard", "displayed"):
        raise ValueError(f"Unknown Q2 variant {q2_variant!r}")

    exact = tuple(require_exact(f"p{i}", value) for i, value in enumerate(params))
    if key == "E":
        operators = _system_e(exact)
    elif key == "E1":
        operators = _system_e1(exact)
    elif key == "E2":
        operators = _system_e2(exact, q2_variant)
    elif key == "ED3":
        operators = _system_ed3(exact)
    else:
        operators = _system_ex3(exact)

    return OperatorSystem(
        name=key,
        params=exact,
        operators=tuple(operators),
        nvars=SYSTEM_NVARS[key],
        variant=q2_variant if key == "E2" else "standard",
    )


def ex3_a1(params: Sequence[Fraction]) -> Fraction:
    """The parameter a1 fixed by a1 + ... + a6 = 3, given (a2, ..., a6)."""
    return 3 - sum(params)


# =============================================================================
# Certification
# =============================================================================


@dataclass(frozen=True)
class CertificationReport:
    """
    Result of applying every operator of a system to a truncated series.

    ``witness`` is the lowest-degree nonzero exponent (lexicographic among
    equal degree) of the first offending operator, or None.
    """

    system: str
    variant: str
    certified_orders: Tuple[int, ...]
    max_nonzero_order: Optional[int]
    witness: Optional[Exponent]
    operator_index: Optional[int]
    operator_label: Optional[str]

    @property
    def passed(self) -> bool:
        return self.witness is None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "system": self.system,
            "variant": self.variant,
            "certified_orders": list(self.certified_orders),
            "max_nonzero_order": self.max_nonzero_order,
            "witness": list(self.witness) if self.witness else None,
            "operator": self.operator_label,
            "pass": self.passed,
        }


def certify_annihilation(system: OperatorSystem, series: TruncatedSeries) -> CertificationReport:
    """
    Certify that every operator of ``system`` annihilates ``series``.

    Args:
        system: Operator system
        series: Exact truncation of a candidate solution

    Returns:
        CertificationReport with no witness iff all operators vanish through
        their certified orders
    """
    if series.order < 2:
        raise PreconditionViolated(f"Certification needs order >= 2, got {series.order}")
    if series.nvars != system.nvars:
        raise ArityMismatch(
            f"{system.name} acts on {system.nvars} variables, series has {series.nvars}"
        )

    orders = []
    max_nonzero: Optional[int] = None
    witness: Optional[Exponent] = None
    offender: Optional[int] = None
    for index, (label, op) in enumerate(system.operators):
        result = apply(op, series)
        orders.append(result.order)
        top = result.max_nonzero_order()
        if top is None:
            continue
        max_nonzero = top if max_nonzero is None else max(max_nonzero, top)
        if witness is None:
            witness = result.items()[0][0]
            offender = index
            logger.debug(f"{system.name}.{label} leaves {len(result)} nonzero terms")

    return CertificationReport(
        system=system.name,
        variant=system.variant,
        certified_orders=tuple(orders),
        max_nonzero_order=max_nonzero,
        witness=witness,
        operator_index=offender,
        operator_label=system.operators[offender][0] if offender is not None else None,
    )
