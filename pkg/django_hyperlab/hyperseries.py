"""
Hypergeometric series of Gauss, Appell, Lauricella and the restricted E(3,6) series.

Every series is described once by a SeriesTemplate: the ratio of consecutive
coefficients c(n + e_k) / c(n). The same template drives exact truncation
(Fraction arithmetic) and numeric summation (complex arithmetic), so the two
paths cannot drift apart.

Multivariate series are summed by total degree. Summation stops when the
largest term of the last completed degree drops below ``tol``.

Usage:
    >>> from fractions import Fraction as Q
    >>> gauss_2f1(Q(1, 2), 1, 1, 0.5)
    (1.414213562373095+0j)
    >>> truncate_formal("F2", (Q(4, 3), Q(2, 3), Q(2, 3), Q(4, 3), Q(4, 3)), 1).coefficient((1, 0))
    Fraction(2, 3)
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Dict, Iterator, List, Optional, Sequence, Tuple

from .exceptions import ArityMismatch, DivergentInput, NoConvergence, PoleParameter
from .settings import hyperlab_settings
from .utils import ParamValue, is_nonpositive_integer, parse_complex, require_exact, to_complex

logger = logging.getLogger(__name__)

# Structured logger for convergence diagnostics
series_logger = logging.getLogger("django_hyperlab.series")

Exponent = Tuple[int, ...]


# =============================================================================
# Options
# =============================================================================


@dataclass(frozen=True)
class SeriesOptions:
    """Stop criteria for numeric summation and the default truncation order."""

    tol: float
    max_terms: int
    trunc_order: int

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError(f"tol must be positive, got {self.tol}")
        if self.max_terms < 1:
            raise ValueError(f"max_terms must be >= 1, got {self.max_terms}")
        if self.trunc_order < 1:
            raise ValueError(f"trunc_order must be >= 1, got {self.trunc_order}")

    @classmethod
    def from_settings(cls, **overrides) -> "SeriesOptions":
        """Build options from HYPERLAB_* settings with keyword overrides."""
        values = {
            "tol": hyperlab_settings.series_tol,
            "max_terms": hyperlab_settings.series_max_terms,
            "trunc_order": hyperlab_settings.trunc_order,
        }
        values.update({key: value for key, value in overrides.items() if value is not None})
        return cls(**values)


# =============================================================================
# Pochhammer symbol
# =============================================================================


def pochhammer(a: Any, n: int) -> ParamValue:
    """
    Rising factorial (a)_n = a(a+1)...(a+n-1).

    Exact when ``a`` is an int or Fraction, complex otherwise.

    Example:
        >>> pochhammer(Fraction(2, 3), 2)
        Fraction(10, 9)
    """
    if n < 0:
        raise ValueError(f"Pochhammer index must be nonnegative, got {n}")
    if isinstance(a, (int, Fraction)) and not isinstance(a, bool):
        result: Any = Fraction(1)
        for i in range(n):
            result *= a + i
        return result
    value = to_complex(a)
    result = 1 + 0j
    for i in range(n):
        result *= value + i
    return result


# =============================================================================
# Truncated formal series
# =============================================================================


class TruncatedSeries:
    """
    Multivariate power series known exactly through total degree ``order``.

    Coefficients are exact (Fraction, or any exact ring element such as
    EisensteinScalar). Absent exponent tuples mean an exactly zero coefficient.
    """

    __slots__ = ("nvars", "order", "_coeffs")

    def __init__(self, nvars: int, order: int, coeffs: Optional[Dict[Exponent, Any]] = None):
        if not 1 <= nvars <= 3:
            raise ValueError(f"nvars must be 1..3, got {nvars}")
        if order < 0:
            raise ValueError(f"order must be nonnegative, got {order}")
        self.nvars = nvars
        self.order = order
        self._coeffs: Dict[Exponent, Any] = {}
        for exponent, value in (coeffs or {}).items():
            exponent = tuple(exponent)
            if len(exponent) != nvars or any(e < 0 for e in exponent):
                raise ValueError(f"Bad exponent {exponent} for {nvars} variables")
            if sum(exponent) <= order and value != 0:
                self._coeffs[exponent] = value

    @classmethod
    def one(cls, nvars: int, order: int) -> "TruncatedSeries":
        return cls(nvars, order, {(0,) * nvars: Fraction(1)})

    @classmethod
    def monomial(
        cls, nvars: int, order: int, exponent: Exponent, coeff: Any = Fraction(1)
    ) -> "TruncatedSeries":
        return cls(nvars, order, {tuple(exponent): coeff})

    def coefficient(self, exponent: Exponent) -> Any:
        return self._coeffs.get(tuple(exponent), Fraction(0))

    def items(self) -> List[Tuple[Exponent, Any]]:
        """Nonzero terms sorted by total degree, then lexicographically."""
        return sorted(self._coeffs.items(), key=lambda item: (sum(item[0]), item[0]))

    def __iter__(self) -> Iterator[Tuple[Exponent, Any]]:
        return iter(self.items())

    def __len__(self) -> int:
        return len(self._coeffs)

    def is_zero(self) -> bool:
        return not self._coeffs

    def truncated(self, order: int) -> "TruncatedSeries":
        return TruncatedSeries(self.nvars, min(order, self.order), self._coeffs)

    def max_nonzero_order(self) -> Optional[int]:
        """Largest total degree carrying a nonzero coefficient, or None."""
        return max((sum(exponent) for exponent in self._coeffs), default=None)

    def _check_compatible(self, other: "TruncatedSeries") -> None:
        if not isinstance(other, TruncatedSeries) or other.nvars != self.nvars:
            raise ValueError("Series must have the same number of variables")

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check_compatible(other)
        order = min(self.order, other.order)
        coeffs = dict(self._coeffs)
        for exponent, value in other._coeffs.items():
            coeffs[exponent] = coeffs.get(exponent, 0) + value
        return TruncatedSeries(self.nvars, order, coeffs)

    def __neg__(self) -> "TruncatedSeries":
        return self.scale(-1)

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        return self + (-other)

    def scale(self, factor: Any) -> "TruncatedSeries":
        return TruncatedSeries(
            self.nvars, self.order, {e: factor * v for e, v in self._coeffs.items()}
        )

    def __mul__(self, factor: Any) -> "TruncatedSeries":
        if isinstance(factor, TruncatedSeries):
            return NotImplemented
        return self.scale(factor)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (
            self.nvars == other.nvars
            and self.order == other.order
            and self._coeffs == other._coeffs
        )

    def __hash__(self):
        return hash((self.nvars, self.order, frozenset(self._coeffs.items())))

    def evaluate(self, point: Sequence[complex]) -> complex:
        """Numeric value of the polynomial part at ``point``."""
        if len(point) != self.nvars:
            raise ArityMismatch(f"Expected {self.nvars} coordinates, got {len(point)}")
        coords = [complex(value) for value in point]
        total = 0j
        for exponent, value in self.items():
            term = to_complex(value)
            for coord, power in zip(coords, exponent):
                term *= coord**power
            total += term
        return total

    def __repr__(self):
        return f"TruncatedSeries(nvars={self.nvars}, order={self.order}, terms={len(self)})"


# =============================================================================
# Series templates
# =============================================================================

Ratio = Tuple[Any, Any]


@dataclass(frozen=True)
class SeriesTemplate:
    """
    Coefficient-ratio description of a hypergeometric series.

    ``ratio(params, n, k)`` returns (numerator, denominator) with
    c(n + e_k) / c(n) = numerator / denominator.
    """

    series_id: str
    nvars: int
    param_names: Tuple[str, ...]
    ratio: Callable[[Sequence[Any], Exponent, int], Ratio]
    pole_params: Callable[[Sequence[Any]], Sequence[Any]]
    in_domain: Callable[[Sequence[complex]], bool]
    domain_text: str

    @property
    def nparams(self) -> int:
        return len(self.param_names)


def _ratio_f(p, n, k):
    a, b, c = p
    i = n[0]
    return (a + i) * (b + i), (c + i) * (i + 1)


def _ratio_f1(p, n, k):
    a, b, bp, c = p
    total = sum(n)
    upper = b if k == 0 else bp
    return (a + total) * (upper + n[k]), (c + total) * (n[k] + 1)


def _ratio_f2(p, n, k):
    a, b, bp, c, cp = p
    total = sum(n)
    upper, lower = (b, c) if k == 0 else (bp, cp)
    return (a + total) * (upper + n[k]), (lower + n[k]) * (n[k] + 1)


def _ratio_fd3(p, n, k):
    a, b1, b2, b3, c = p
    total = sum(n)
    upper = (b1, b2, b3)[k]
    return (a + total) * (upper + n[k]), (c + total) * (n[k] + 1)


def _ratio_fx3(p, n, k):
    # variables are (x1, x3, x4)
    a2, a3, a4, a5, a6 = p
    n1, n3, n4 = n
    total = n1 + n3 + n4
    lower = (a2 + a3 + a4 + total) * (n[k] + 1)
    if k == 0:
        return (1 - a5 + n1 + n3) * (a2 + n1), lower
    if k == 1:
        return (1 - a5 + n1 + n3) * (a3 + n3 + n4), lower
    return (1 - a6 + n4) * (a3 + n3 + n4), lower


TEMPLATES: Dict[str, SeriesTemplate] = {
    "F": SeriesTemplate(
        "F",
        1,
        ("a", "b", "c"),
        _ratio_f,
        lambda p: (p[2],),
        lambda z: abs(z[0]) < 1,
        "|x| < 1",
    ),
    "F1": SeriesTemplate(
        "F1",
        2,
        ("a", "b", "bp", "c"),
        _ratio_f1,
        lambda p: (p[3],),
        lambda z: max(abs(v) for v in z) < 1,
        "|x| < 1 and |y| < 1",
    ),
    "F2": SeriesTemplate(
        "F2",
        2,
        ("a", "b", "bp", "c", "cp"),
        _ratio_f2,
        lambda p: (p[3], p[4]),
        lambda z: abs(z[0]) + abs(z[1]) < 1,
        "|x| + |y| < 1",
    ),
    "FD3": SeriesTemplate(
        "FD3",
        3,
        ("a", "b1", "b2", "b3", "c"),
        _ratio_fd3,
        lambda p: (p[4],),
        lambda z: max(abs(v) for v in z) < 1,
        "|y_i| < 1",
    ),
    "FX3": SeriesTemplate(
        "FX3",
        3,
        ("a2", "a3", "a4", "a5", "a6"),
        _ratio_fx3,
        lambda p: (p[0] + p[1] + p[2],),
        lambda z: max(abs(v) for v in z) < 1,
        "|x_i| < 1",
    ),
}


def get_template(series_id: str) -> SeriesTemplate:
    try:
        return TEMPLATES[series_id.upper()]
    except KeyError:
        raise ArityMismatch(
            f"Unknown series {series_id!r}; expected one of {sorted(TEMPLATES)}"
        ) from None


def _successor_steps(exponent: Exponent, nvars: int) -> range:
    """
    Variables k such that exponent + e_k is reached only from ``exponent``.

    Every tuple m is generated once, from m - e_k with k its first nonzero index.
    """
    first = next((index for index, value in enumerate(exponent) if value), nvars - 1)
    return range(first + 1)


def _bump(exponent: Exponent, k: int) -> Exponent:
    return exponent[:k] + (exponent[k] + 1,) + exponent[k + 1 :]


# =============================================================================
# Numeric evaluation
# =============================================================================


def _sum_series(
    template: SeriesTemplate,
    params: Sequence[Any],
    point: Sequence[Any],
    opts: Optional[SeriesOptions],
) -> complex:
    if len(params) != template.nparams:
        raise ArityMismatch(
            f"{template.series_id} takes {template.nparams} parameters "
            f"{template.param_names}, got {len(params)}"
        )
    if len(point) != template.nvars:
        raise ArityMismatch(
            f"{template.series_id} takes {template.nvars} coordinates, got {len(point)}"
        )

    opts = opts or SeriesOptions.from_settings()
    for lower in template.pole_params(params):
        if is_nonpositive_integer(lower):
            raise PoleParameter(
                f"{template.series_id}: denominator parameter {lower} is a nonpositive integer"
            )

    coords = [parse_complex(value) for value in point]
    if not template.in_domain(coords):
        raise DivergentInput(
            f"{template.series_id} diverges at {coords}; requires {template.domain_text}"
        )

    numeric = [to_complex(value) for value in params]
    nvars = template.nvars
    total = 1 + 0j
    diagonal: Dict[Exponent, complex] = {(0,) * nvars: 1 + 0j}

    for degree in range(1, opts.max_terms + 1):
        successors: Dict[Exponent, complex] = {}
        for exponent, term in diagonal.items():
            for k in _successor_steps(exponent, nvars):
                numer, denom = template.ratio(numeric, exponent, k)
                successors[_bump(exponent, k)] = term * numer / denom * coords[k]
        diagonal = successors
        largest = max(abs(term) for term in diagonal.values())
        total += sum(diagonal.values())
        if largest < opts.tol:
            series_logger.debug(
                f"{template.series_id} converged at degree {degree}",
                extra={
                    "series_data": {
                        "event": "series_converged",
                        "series": template.series_id,
                        "degree": degree,
                        "last_term": largest,
                    }
                },
            )
            return total

    logger.warning(f"{template.series_id} did not converge within {opts.max_terms} degrees")
    raise NoConvergence(
        f"{template.series_id} at {coords}: last term still >= {opts.tol} "
        f"after {opts.max_terms} degrees"
    )


def evaluate(
    series_id: str,
    params: Sequence[Any],
    point: Sequence[Any],
    opts: Optional[SeriesOptions] = None,
) -> complex:
    """
    Evaluate a registered series by id.

    Args:
        series_id: One of F, F1, F2, FD3, FX3
        params: Parameters in template order
        point: Coordinates
        opts: Stop criteria (defaults from settings)

    Returns:
        Complex value of the series
    """
    return _sum_series(get_template(series_id), params, point, opts)


def gauss_2f1(a, b, c, x, opts: Optional[SeriesOptions] = None) -> complex:
    """Gauss series F(a,b,c;x)."""
    return _sum_series(TEMPLATES["F"], (a, b, c), (x,), opts)


def appell_f1(a, b, bp, c, x, y, opts: Optional[SeriesOptions] = None) -> complex:
    """Appell series F1(a,b,b',c;x,y)."""
    return _sum_series(TEMPLATES["F1"], (a, b, bp, c), (x, y), opts)


def appell_f2(a, b, bp, c, cp, x, y, opts: Optional[SeriesOptions] = None) -> complex:
    """Appell series F2(a,b,b',c,c';x,y)."""
    return _sum_series(TEMPLATES["F2"], (a, b, bp, c, cp), (x, y), opts)


def lauricella_fd3(
    a, b1, b2, b3, c, y1, y2, y3, opts: Optional[SeriesOptions] = None
) -> complex:
    """Lauricella series F_D(a,b1,b2,b3,c;y1,y2,y3)."""
    return _sum_series(TEMPLATES["FD3"], (a, b1, b2, b3, c), (y1, y2, y3), opts)


def fx3_series(a2, a3, a4, a5, a6, x1, x3, x4, opts: Optional[SeriesOptions] = None) -> complex:
    """
    Series F_X3(a2,a3,a4,a5,a6;x1,x3,x4) of E(3,6) restricted to x2 = 0.

    Coefficient pattern (1-a5, n1+n3)(1-a6, n4)(a2, n1)(a3, n3+n4) divided by
    (a2+a3+a4, n1+n3+n4) n1! n3! n4!.
    """
    return _sum_series(TEMPLATES["FX3"], (a2, a3, a4, a5, a6), (x1, x3, x4), opts)


# =============================================================================
# Exact truncation
# =============================================================================


def truncate_formal(series_id: str, params: Sequence[Any], order: int) -> TruncatedSeries:
    """
    Exact coefficients of a series through total degree ``order``.

    Args:
        series_id: One of F, F1, F2, FD3, FX3
        params: Exact rational parameters in template order
        order: Truncation order N

    Returns:
        TruncatedSeries of order N

    Raises:
        PoleParameter: If a denominator Pochhammer vanishes within order N
        PreconditionViolated: If a parameter is not exact
    """
    template = get_template(series_id)
    if len(params) != template.nparams:
        raise ArityMismatch(
            f"{template.series_id} takes {template.nparams} parameters, got {len(params)}"
        )
    exact = [require_exact(name, value) for name, value in zip(template.param_names, params)]
    nvars = template.nvars
    zero = (0,) * nvars

    coeffs: Dict[Exponent, Fraction] = {zero: Fraction(1)}
    diagonal: Dict[Exponent, Fraction] = {zero: Fraction(1)}
    for _degree in range(1, order + 1):
        successors: Dict[Exponent, Fraction] = {}
        for exponent, value in diagonal.items():
            for k in _successor_steps(exponent, nvars):
                numer, denom = template.ratio(exact, exponent, k)
                if denom == 0:
                    raise PoleParameter(
                        f"{template.series_id}: denominator vanishes at exponent "
                        f"{_bump(exponent, k)} with parameters {exact}"
                    )
                successors[_bump(exponent, k)] = value * numer / denom
        diagonal = successors
        coeffs.update(successors)

    return TruncatedSeries(nvars, order, coeffs)
