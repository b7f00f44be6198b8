"""
Period integrals on the genus-2 family C_t and the Schwarz maps built on them.

All integrals are products of powers of linear factors integrated along
polygonal paths with Gauss-Jacobi quadrature. The algebraic singularities at
the path ends are absorbed by the Jacobi weight; every other factor is
evaluated with its argument continued along the path from the principal
value at the path midpoint (arc length).

Usage:
    >>> value = abel_jacobi(1, 1.0, 2.0)
    >>> abs(value.value)
    2.6...
"""

import csv
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, TextIO, Tuple

import numpy as np
from scipy.special import beta as beta_function
from scipy.special import roots_jacobi

from .exceptions import (
    BranchCollision,
    DomainViolated,
    HyperlabError,
    NonIntegrableExponent,
    QuadratureError,
)
from .eisenstein import H_PRIME, P_MATRIX
from .monodromy import to_complex_matrix
from .reports import SkippedPoint
from .settings import hyperlab_settings
from .utils import parse_complex, to_complex

logger = logging.getLogger(__name__)

# Structured logger for node-doubling diagnostics
quadrature_logger = logging.getLogger("django_hyperlab.quadrature")

# Dense samples per segment used to continue arguments
TRACKING_POINTS = 512

# Sign of the Hermitian form on the Schwarz image (|v1| > |v2| on the disc)
REFERENCE_SIGN = -1

CSV_COLUMNS = ("t_re", "t_im", "ratio_re", "ratio_im", "sign_witness")

# Cayley frame from the period pair (v1, v2) to the coordinates of P H' P*
CAYLEY_FRAME = np.array([[1j, 1j], [1, -1]], dtype=complex)

OMEGA1_EXPONENTS = (Fraction(-2, 3), Fraction(-1, 3), Fraction(-2, 3))
OMEGA2_EXPONENTS = (Fraction(-1, 3), Fraction(-2, 3), Fraction(-1, 3))

# Parameters of the square integral of psi for the reducible example
SQUARE_DEFAULT_PARAMS = (
    Fraction(1, 3),
    Fraction(2, 3),
    Fraction(2, 3),
    Fraction(4, 3),
    Fraction(4, 3),
)


# =============================================================================
# Integrands
# =============================================================================


@dataclass(frozen=True)
class LinearFactor:
    """(slope * s + offset) ** exponent."""

    slope: complex
    offset: complex
    exponent: float

    def __post_init__(self):
        object.__setattr__(self, "slope", complex(self.slope))
        object.__setattr__(self, "offset", complex(self.offset))
        object.__setattr__(self, "exponent", float(self.exponent))

    @property
    def root(self) -> Optional[complex]:
        if self.slope == 0:
            return None
        return -self.offset / self.slope

    def base(self, s: np.ndarray) -> np.ndarray:
        return self.slope * s + self.offset


@dataclass(frozen=True)
class PowerProduct:
    """scale * prod(factor_i), the integrand of a period."""

    factors: Tuple[LinearFactor, ...]
    scale: complex = 1 + 0j

    @classmethod
    def build(cls, *specs: Tuple[Any, Any, Any], scale: complex = 1 + 0j) -> "PowerProduct":
        """Build from (slope, offset, exponent) triples."""
        return cls(tuple(LinearFactor(*spec) for spec in specs), complex(scale))

    @property
    def branch_points(self) -> List[complex]:
        return [factor.root for factor in self.factors if factor.root is not None]


@dataclass(frozen=True)
class QuadratureSpec:
    """
    Node count, endpoint exponents and the polygonal path.

    ``beta`` is the exponent at ``path[0]`` and ``alpha`` the exponent at
    ``path[-1]``, matching the weight (1 - u)^alpha (1 + u)^beta.
    """

    nodes: int
    alpha: float
    beta: float
    path: Tuple[complex, ...]

    def __post_init__(self):
        if self.nodes < 1:
            raise ValueError(f"nodes must be >= 1, got {self.nodes}")
        if self.alpha <= -1 or self.beta <= -1:
            raise NonIntegrableExponent(
                f"Endpoint exponents (alpha={self.alpha}, beta={self.beta}) must exceed -1"
            )
        if len(self.path) < 2:
            raise DomainViolated("A path needs at least two points")
        for start, end in zip(self.path, self.path[1:]):
            if start == end:
                raise DomainViolated(f"Degenerate segment at {start}")

    @classmethod
    def for_path(
        cls, integrand: PowerProduct, path: Sequence[Any], nodes: Optional[int] = None
    ) -> "QuadratureSpec":
        """Deduce the endpoint exponents from the factors rooted at the path ends."""
        points = tuple(parse_complex(point) for point in path)
        start = sum(f.exponent for f in integrand.factors if _rooted_at(f, points[0]))
        end = sum(f.exponent for f in integrand.factors if _rooted_at(f, points[-1]))
        return cls(nodes or hyperlab_settings.quadrature_nodes, end, start, points)


@dataclass
class PeriodValue:
    """Quadrature value with its node-doubling error estimate."""

    value: complex
    err_estimate: float = 0.0

    def __post_init__(self):
        if not math.isfinite(self.err_estimate):
            raise QuadratureError(f"Non-finite error estimate for value {self.value}")

    def to_json(self) -> Dict[str, Any]:
        return {"value": self.value, "err_estimate": self.err_estimate}


def _rooted_at(factor: LinearFactor, point: complex) -> bool:
    root = factor.root
    return root is not None and abs(root - point) <= 1e-14 * max(1.0, abs(point))


def _distance_to_segment(point: complex, start: complex, end: complex) -> float:
    direction = end - start
    tau = ((point - start) * direction.conjugate()).real / abs(direction) ** 2
    tau = min(1.0, max(0.0, tau))
    return abs(point - (start + tau * direction))


# =============================================================================
# Branch tracking
# =============================================================================


def _path_midpoint(path: Sequence[complex]) -> Tuple[int, float]:
    """Segment index and local parameter of the arc-length midpoint."""
    lengths = [abs(end - start) for start, end in zip(path, path[1:])]
    half = sum(lengths) / 2
    for index, length in enumerate(lengths):
        if half <= length:
            return index, half / length
        half -= length
    return len(lengths) - 1, 1.0


def _tracked_arguments(factor: LinearFactor, path: Sequence[complex]) -> np.ndarray:
    """
    Continuous argument of the factor's base on the dense tracking grid.

    Returns an array of shape (segments, TRACKING_POINTS) with the value at
    the path midpoint equal to its principal argument.
    """
    segments = len(path) - 1
    tau = (np.arange(TRACKING_POINTS) + 0.5) / TRACKING_POINTS
    points = np.concatenate(
        [path[j] + (path[j + 1] - path[j]) * tau for j in range(segments)]
    )
    unwrapped = np.unwrap(np.angle(factor.base(points)))

    index, local = _path_midpoint(path)
    reference = path[index] + (path[index + 1] - path[index]) * local
    principal = _principal_angle(factor.base(reference))
    nearest = index * TRACKING_POINTS + min(TRACKING_POINTS - 1, int(local * TRACKING_POINTS))
    estimate = unwrapped[nearest] + _wrap(principal - float(np.angle(factor.base(points[nearest]))))
    shift = 2 * math.pi * round((principal - estimate) / (2 * math.pi))
    return (unwrapped + shift).reshape(segments, TRACKING_POINTS)


def _principal_angle(z: complex) -> float:
    """Argument in (-pi, pi]."""
    angle = float(np.angle(z))
    return math.pi if angle == -math.pi else angle


def _wrap(angle: float) -> float:
    return (angle + math.pi) % (2 * math.pi) - math.pi


def _check_collisions(integrand: PowerProduct, path: Sequence[complex]) -> None:
    distance = hyperlab_settings.branch_collision_distance
    last = len(path) - 2
    for j, (start, end) in enumerate(zip(path, path[1:])):
        for factor in integrand.factors:
            root = factor.root
            if root is None:
                continue
            if (j == 0 and _rooted_at(factor, start)) or (j == last and _rooted_at(factor, end)):
                continue
            if _distance_to_segment(root, start, end) < distance:
                raise BranchCollision(
                    f"Path segment {start} -> {end} passes within {distance} of branch point {root}"
                )


# =============================================================================
# Quadrature engine
# =============================================================================


def _segment_sum(
    integrand: PowerProduct,
    arguments: Sequence[np.ndarray],
    path: Sequence[complex],
    j: int,
    nodes: int,
) -> complex:
    start, end = path[j], path[j + 1]
    half = (end - start) / 2
    first, last = j == 0, j == len(path) - 2

    at_start = [first and _rooted_at(f, start) for f in integrand.factors]
    at_end = [last and _rooted_at(f, end) for f in integrand.factors]
    beta = sum(f.exponent for f, flag in zip(integrand.factors, at_start) if flag)
    alpha = sum(f.exponent for f, flag in zip(integrand.factors, at_end) if flag)

    u, weights = roots_jacobi(nodes, alpha, beta)
    s = start + half * (1 + u)
    tau = (1 + u) / 2

    log_values = np.zeros_like(s, dtype=complex)
    for factor, theta, rooted_start, rooted_end in zip(
        integrand.factors, arguments, at_start, at_end
    ):
        if rooted_start or rooted_end:
            # arg is constant on a ray from the root
            angle = theta[j, TRACKING_POINTS // 2]
            log_values += factor.exponent * (math.log(abs(factor.slope * half)) + 1j * angle)
            continue
        base = factor.base(s)
        raw = np.angle(base)
        index = np.clip((tau * TRACKING_POINTS).astype(int), 0, TRACKING_POINTS - 1)
        angle = raw + 2 * np.pi * np.round((theta[j, index] - raw) / (2 * np.pi))
        log_values += factor.exponent * (np.log(np.abs(base)) + 1j * angle)

    return complex(half * np.sum(weights * np.exp(log_values)))


def gauss_jacobi_segment(integrand: PowerProduct, spec: QuadratureSpec) -> PeriodValue:
    """
    Integrate a power product along ``spec.path``.

    The value uses 2n nodes per segment and the error estimate is the
    difference from the n-node value.

    Raises:
        NonIntegrableExponent: If an endpoint exponent is <= -1
        BranchCollision: If the path passes within the collision distance
            of a branch point that is not one of its ends
        QuadratureError: If (alpha, beta) disagree with the integrand
    """
    path = tuple(spec.path)
    expected = QuadratureSpec.for_path(integrand, path, spec.nodes)
    if not (
        math.isclose(expected.alpha, spec.alpha, abs_tol=1e-12)
        and math.isclose(expected.beta, spec.beta, abs_tol=1e-12)
    ):
        raise QuadratureError(
            f"Declared endpoint exponents ({spec.alpha}, {spec.beta}) do not match the "
            f"integrand ({expected.alpha}, {expected.beta})"
        )
    _check_collisions(integrand, path)

    arguments = [_tracked_arguments(factor, path) for factor in integrand.factors]
    totals = []
    for nodes in (spec.nodes, 2 * spec.nodes):
        total = sum(
            _segment_sum(integrand, arguments, path, j, nodes) for j in range(len(path) - 1)
        )
        totals.append(integrand.scale * total)

    err = abs(totals[1] - totals[0])
    quadrature_logger.debug(
        f"Quadrature over {len(path) - 1} segment(s): err={err:.3e}",
        extra={
            "quadrature_data": {
                "event": "quadrature",
                "segments": len(path) - 1,
                "nodes": spec.nodes,
                "err_estimate": err,
            }
        },
    )
    return PeriodValue(complex(totals[1]), float(err))


def integrate_path(
    integrand: PowerProduct, path: Sequence[Any], nodes: Optional[int] = None
) -> PeriodValue:
    """Integrate along ``path`` with endpoint exponents deduced from the factors."""
    return gauss_jacobi_segment(integrand, QuadratureSpec.for_path(integrand, path, nodes))


def choose_path(start: complex, end: complex, obstacles: Iterable[complex]) -> Tuple[complex, ...]:
    """
    Straight segment, or a two-segment detour when it passes near an obstacle.

    The detour goes through the apex of the right isosceles triangle on the
    segment, upper side first. Obstacles at the ends are ignored.
    """
    start, end = complex(start), complex(end)
    length = abs(end - start)
    clearance = hyperlab_settings.detour_clearance * length
    blocking = [
        point
        for point in obstacles
        if abs(point - start) > 1e-14 * max(1.0, abs(start))
        and abs(point - end) > 1e-14 * max(1.0, abs(end))
    ]

    def margin(path: Sequence[complex]) -> float:
        if not blocking:
            return math.inf
        return min(
            _distance_to_segment(point, a, b) for point in blocking for a, b in zip(path, path[1:])
        )

    straight = (start, end)
    if margin(straight) >= clearance:
        return straight

    middle = (start + end) / 2
    offset = 1j * (end - start) / 2
    candidates = [(start, middle + offset, end), (start, middle - offset, end)]
    for candidate in candidates:
        if margin(candidate) >= clearance:
            return candidate
    logger.debug(f"No detour clears all branch points between {start} and {end}")
    return max(candidates, key=margin)


# =============================================================================
# Abel-Jacobi integrals and the indefinite solutions
# =============================================================================


def _require_admissible_t(t: complex) -> None:
    if t == 0 or t == 1:
        raise DomainViolated(f"t must avoid 0 and 1, got {t}")


def holomorphic_form(k: int, t: complex) -> PowerProduct:
    """omega_1 or omega_2 on C_t as a power product in s."""
    if k == 1:
        exponents = OMEGA1_EXPONENTS
    elif k == 2:
        exponents = OMEGA2_EXPONENTS
    else:
        raise ValueError(f"k must be 1 or 2, got {k}")
    e0, e1, et = exponents
    return PowerProduct.build((1, 0, e0), (1, -1, e1), (1, -t, et))


def abel_jacobi(
    k: int,
    s: Any,
    t: Any,
    nodes: Optional[int] = None,
    path: Optional[Sequence[Any]] = None,
) -> PeriodValue:
    """
    phi_k(s, t), the integral of omega_k from 0 to s.

    Args:
        k: 1 or 2
        s: Upper limit
        t: Curve parameter, not 0 or 1
        nodes: Gauss-Jacobi nodes per segment
        path: Explicit path from 0 to s; by default the straight segment,
            detoured around 1 and t when it passes near them
    """
    s, t = parse_complex(s), parse_complex(t)
    _require_admissible_t(t)
    if s == 0:
        return PeriodValue(0j, 0.0)
    integrand = holomorphic_form(k, t)
    if path is None:
        path = choose_path(0j, s, (1 + 0j, t))
    return integrate_path(integrand, path, nodes)


def euler_coordinates(x: Any, y: Any) -> Tuple[complex, complex, complex]:
    """X = -x/(1-x), Y = -y/(1-y) and Z = X Y."""
    x, y = parse_complex(x), parse_complex(y)
    if x == 1 or y == 1:
        raise DomainViolated(f"x and y must differ from 1, got ({x}, {y})")
    big_x = -x / (1 - x)
    big_y = -y / (1 - y)
    return big_x, big_y, big_x * big_y


def indefinite_f(
    which: int, a: Any, b: Any, bp: Any, x: Any, y: Any, nodes: Optional[int] = None
) -> PeriodValue:
    """
    The indefinite-integral solutions f_1, f_2 of the reducible E2(a,b,b',a,a).

    f_1 = int_0^X s^(b'-a) (1-s)^(a-b-1) (Z-s)^(-b') ds and
    f_2 = Z^(1-a) int_0^X s^(b'-1) (1-s)^(-b) (Z-s)^(a-b'-1) ds.
    (1-x)^(-b) (1-y)^(-b') f_k solves E2(a,b,b',a,a).
    """
    a, b, bp = (float(to_complex(value).real) for value in (a, b, bp))
    big_x, _big_y, z = euler_coordinates(x, y)
    if big_x == 0:
        return PeriodValue(0j, 0.0)
    path = choose_path(0j, big_x, (1 + 0j, z))

    if which == 1:
        integrand = PowerProduct.build((1, 0, bp - a), (-1, 1, a - b - 1), (-1, z, -bp))
        return integrate_path(integrand, path, nodes)
    if which == 2:
        if z == 0:
            raise DomainViolated("f_2 needs XY != 0")
        integrand = PowerProduct.build(
            (1, 0, bp - 1), (-1, 1, -b), (-1, z, a - bp - 1), scale=z ** (1 - a)
        )
        return integrate_path(integrand, path, nodes)
    raise ValueError(f"which must be 1 or 2, got {which}")


def e2_solution_from_f(which: int, a: Any, b: Any, bp: Any, nodes: Optional[int] = None):
    """u(x, y) = (1-x)^(-b) (1-y)^(-b') f_k(x, y) as a function of (x, y)."""
    b_value, bp_value = float(to_complex(b).real), float(to_complex(bp).real)

    def solution(x: complex, y: complex) -> complex:
        value = indefinite_f(which, a, b, bp, x, y, nodes).value
        return (1 - x) ** (-b_value) * (1 - y) ** (-bp_value) * value

    return solution


# =============================================================================
# Euler integrals over (0,1) and the unit square
# =============================================================================


def euler_integral_fd3(
    a: Any, b1: Any, b2: Any, b3: Any, c: Any, y: Sequence[Any], nodes: Optional[int] = None
) -> PeriodValue:
    """
    Lauricella F_D from its Euler integral.

    int_0^1 t^(a-1) (1-t)^(c-a-1) prod (1 - y_i t)^(-b_i) dt / B(a, c-a),
    valid for a > 0 and c - a > 0.
    """
    a, c = float(to_complex(a).real), float(to_complex(c).real)
    if a <= 0 or c - a <= 0:
        raise NonIntegrableExponent(f"Euler integral needs a > 0 and c - a > 0, got a={a}, c={c}")
    specs = [(1, 0, a - 1), (-1, 1, c - a - 1)]
    for b_i, y_i in zip((b1, b2, b3), y):
        y_i = parse_complex(y_i)
        if y_i != 0:
            specs.append((-y_i, 1, -float(to_complex(b_i).real)))
    result = integrate_path(PowerProduct.build(*specs), (0j, 1 + 0j), nodes)
    norm = float(beta_function(a, c - a))
    return PeriodValue(result.value / norm, result.err_estimate / norm)


def _square_value(params: Sequence[float], x: float, y: float, nodes: int) -> complex:
    a, b, bp, c, cp = params
    axes = []
    for alpha, beta in ((c - b - 1, b - 1), (cp - bp - 1, bp - 1)):
        u, weights = roots_jacobi(nodes, alpha, beta)
        axes.append(((1 + u) / 2, weights * 2.0 ** (-(alpha + beta + 1))))
    (t1, w1), (t2, w2) = axes
    inner = 1 - np.outer(t1, np.ones_like(t2)) * x - np.outer(np.ones_like(t1), t2) * y
    return complex(w1 @ np.power(inner, -a) @ w2)


def e2_square_integral(
    x: Any,
    y: Any,
    params: Sequence[Any] = SQUARE_DEFAULT_PARAMS,
    nodes: Optional[int] = None,
    chamber: str = "square1",
) -> PeriodValue:
    """
    Integral of t1^(b-1)(1-t1)^(c-b-1) t2^(b'-1)(1-t2)^(c'-b'-1)(1-t1 x-t2 y)^(-a) over (0,1)^2.

    With the default parameters the integrand is psi of the reducible
    example. The value is a solution of E2(a,b,b',c,c') and equals
    B(b,c-b) B(b',c'-b') F2(a,b,b',c,c';x,y).

    Raises:
        DomainViolated: Unless x, y are real with 1 - t1 x - t2 y > 0 on the
            closed square, or for chambers other than square1
        NonIntegrableExponent: Unless b, c-b, b', c'-b' are positive
    """
    if chamber != "square1":
        raise DomainViolated(f"Only the bounded chamber square1 is supported, got {chamber!r}")
    x, y = parse_complex(x), parse_complex(y)
    if x.imag or y.imag:
        raise DomainViolated(f"Square integral needs real x, y, got ({x}, {y})")
    x, y = x.real, y.real
    if 1 - max(x, 0.0) - max(y, 0.0) <= 0:
        raise DomainViolated(f"1 - t1 x - t2 y vanishes on the square at ({x}, {y})")

    values = [float(to_complex(value).real) for value in params]
    a, b, bp, c, cp = values
    if min(b, c - b, bp, cp - bp) <= 0:
        raise NonIntegrableExponent(f"Square integral needs b, c-b, b', c'-b' > 0, got {params}")

    n = nodes or hyperlab_settings.quadrature_nodes
    coarse = _square_value(values, x, y, n)
    fine = _square_value(values, x, y, 2 * n)
    return PeriodValue(fine, abs(fine - coarse))


def square_integral_oracle(
    x: Any, y: Any, params: Sequence[Any] = SQUARE_DEFAULT_PARAMS
) -> complex:
    """B(b,c-b) B(b',c'-b') F2(a,b,b',c,c';x,y) from the series."""
    from .hyperseries import appell_f2

    a, b, bp, c, cp = params
    norm = beta_function(float(b), float(c - b)) * beta_function(float(bp), float(cp - bp))
    return complex(norm) * appell_f2(a, b, bp, c, cp, x, y)


# =============================================================================
# Finite-difference E2 residuals
# =============================================================================


def e2_residual(
    func: Callable[[complex, complex], complex],
    params: Sequence[Any],
    x: Any,
    y: Any,
    h: Optional[float] = None,
) -> Dict[str, float]:
    """
    |P2 u| and |Q2 u| at (x, y) by central differences with one Richardson pass.

    P2 = x(1-x) d_xx - xy d_xy + (c - (a+b+1)x) d_x - b y d_y - ab
    Q2 = y(1-y) d_yy - xy d_xy + (c' - (a+b'+1)y) d_y - b' x d_x - ab'
    """
    a, b, bp, c, cp = (to_complex(value) for value in params)
    x, y = parse_complex(x), parse_complex(y)
    h = h or hyperlab_settings.fd_step
    cache: Dict[Tuple[complex, complex], complex] = {}

    def u(dx: float, dy: float) -> complex:
        key = (dx, dy)
        if key not in cache:
            cache[key] = func(x + dx, y + dy)
        return cache[key]

    def derivatives(step: float) -> Dict[str, complex]:
        center = u(0, 0)
        return {
            "x": (u(step, 0) - u(-step, 0)) / (2 * step),
            "y": (u(0, step) - u(0, -step)) / (2 * step),
            "xx": (u(step, 0) - 2 * center + u(-step, 0)) / step**2,
            "yy": (u(0, step) - 2 * center + u(0, -step)) / step**2,
            "xy": (u(step, step) - u(step, -step) - u(-step, step) + u(-step, -step))
            / (4 * step**2),
        }

    coarse, fine = derivatives(h), derivatives(h / 2)
    d = {key: (4 * fine[key] - coarse[key]) / 3 for key in coarse}
    value = u(0, 0)

    p2 = (
        x * (1 - x) * d["xx"]
        - x * y * d["xy"]
        + (c - (a + b + 1) * x) * d["x"]
        - b * y * d["y"]
        - a * b * value
    )
    q2 = (
        y * (1 - y) * d["yy"]
        - x * y * d["xy"]
        + (cp - (a + bp + 1) * y) * d["y"]
        - bp * x * d["x"]
        - a * bp * value
    )
    return {"P2": abs(p2), "Q2": abs(q2)}


# =============================================================================
# Schwarz maps
# =============================================================================


@lru_cache(maxsize=None)
def disc_form() -> np.ndarray:
    """P H' P* as a complex matrix; exactly sqrt(-3) [[0, 1], [-1, 0]]."""
    transformed = P_MATRIX @ H_PRIME @ P_MATRIX.conj_transpose()
    return to_complex_matrix(transformed.entries)


@dataclass
class SchwarzPoint:
    """Image of t (and s) under the Schwarz maps."""

    t: complex
    ratio: complex
    quadruple: Tuple[complex, complex, complex, complex]
    sign_witness: float

    def __post_init__(self):
        if not any(self.quadruple):
            raise DomainViolated(f"Schwarz quadruple vanishes at t={self.t}")

    @classmethod
    def from_periods(
        cls, t: complex, v1: complex, v2: complex, tail: Tuple[complex, complex] = (0j, 0j)
    ) -> "SchwarzPoint":
        """
        Assemble from the period pair; ratio = v2 / v1 lies in the unit disc.

        The witness is -Re(w* K w) for w = CAYLEY_FRAME (v1, v2) and K = P H' P*,
        the transformed Hermitian form; it equals -2 sqrt(3)(|v1|^2 - |v2|^2).
        """
        w = CAYLEY_FRAME @ np.array([v1, v2], dtype=complex)
        witness = -(w.conj() @ disc_form() @ w).real
        return cls(
            t=complex(t),
            ratio=complex(v2 / v1),
            quadruple=(complex(v1), complex(v2), complex(tail[0]), complex(tail[1])),
            sign_witness=float(witness),
        )

    def csv_row(self) -> List[str]:
        values = (self.t.real, self.t.imag, self.ratio.real, self.ratio.imag, self.sign_witness)
        return [repr(float(value)) for value in values]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "t": self.t,
            "ratio": self.ratio,
            "quadruple": list(self.quadruple),
            "sign_witness": self.sign_witness,
        }


def _cube_root_factor(t: complex, branch: int) -> complex:
    """t^(-1/3) on the principal branch, times exp(-2 pi i branch / 3)."""
    return t ** (-1 / 3) * complex(np.exp(-2j * np.pi * branch / 3))


def schwarz_periods(
    t: Any, nodes: Optional[int] = None, branch: int = 0
) -> Tuple[complex, complex]:
    """
    The period pair (phi_1(t,t), t^(-1/3) phi_2(t,t)) over the arc from 0 to t.

    Both are solutions of E(2/3, 2/3, 4/3; t).
    """
    t = parse_complex(t)
    _require_admissible_t(t)
    v1 = abel_jacobi(1, t, t, nodes).value
    v2 = _cube_root_factor(t, branch) * abel_jacobi(2, t, t, nodes).value
    return v1, v2


def schwarz_s1(t: Any, nodes: Optional[int] = None, branch: int = 0) -> SchwarzPoint:
    """S_1(t) = phi_1(0,t) : t^(-1/3) phi_2(0,t) realized by the arc periods."""
    t = parse_complex(t)
    v1, v2 = schwarz_periods(t, nodes, branch)
    return SchwarzPoint.from_periods(t, v1, v2)


def schwarz_s2(s: Any, t: Any, nodes: Optional[int] = None, branch: int = 0) -> SchwarzPoint:
    """S_2(s,t) = (v1 : v2 : phi_1(s,t) : t^(-1/3) phi_2(s,t))."""
    s, t = parse_complex(s), parse_complex(t)
    _require_admissible_t(t)
    if s == 1 or s == t:
        raise DomainViolated(f"s must avoid the branch points 1 and t, got s={s}")
    v1, v2 = schwarz_periods(t, nodes, branch)
    tail = (
        abel_jacobi(1, s, t, nodes).value,
        _cube_root_factor(t, branch) * abel_jacobi(2, s, t, nodes).value,
    )
    return SchwarzPoint.from_periods(t, v1, v2, tail)


def schwarz_wronskian(t: Any, h: Optional[float] = None, nodes: Optional[int] = None) -> complex:
    """v1 w2 - v2 w1 with w the central-difference derivative of the period pair."""
    t = parse_complex(t)
    h = h or hyperlab_settings.fd_step
    v1, v2 = schwarz_periods(t, nodes)
    plus, minus = schwarz_periods(t + h, nodes), schwarz_periods(t - h, nodes)
    w1 = (plus[0] - minus[0]) / (2 * h)
    w2 = (plus[1] - minus[1]) / (2 * h)
    return v1 * w2 - v2 * w1


DEFAULT_OFFSETS = ((0j, 0j), (0.1 + 0j, 0.05 + 0j), (-0.05 + 0j, 0.1 + 0j), (0.05j, -0.05 + 0j))


def period_independence_det(
    s: Any,
    t: Any,
    offsets: Sequence[Tuple[Any, Any]] = DEFAULT_OFFSETS,
    nodes: Optional[int] = None,
) -> complex:
    """Determinant of the S_2 quadruples at (s + ds, t + dt) for four offsets."""
    s, t = parse_complex(s), parse_complex(t)
    if len(offsets) != 4:
        raise ValueError(f"Need exactly 4 offsets, got {len(offsets)}")
    rows = [
        schwarz_s2(s + parse_complex(ds), t + parse_complex(dt), nodes).quadruple
        for ds, dt in offsets
    ]
    return complex(np.linalg.det(np.array(rows, dtype=complex)))


# =============================================================================
# Disc sampling
# =============================================================================


@dataclass
class DiscSample:
    """Rows of a Schwarz sweep plus the points that failed."""

    rows: List[SchwarzPoint] = field(default_factory=list)
    skipped: List[SkippedPoint] = field(default_factory=list)

    @property
    def signs(self) -> List[int]:
        return sorted({int(np.sign(row.sign_witness)) for row in self.rows})

    @property
    def constant_sign(self) -> bool:
        return self.signs == [REFERENCE_SIGN]


def sample_disc_image(
    t_samples: Sequence[Any],
    out: Optional[TextIO] = None,
    svg_path: Optional[str] = None,
    jobs: Optional[int] = None,
    nodes: Optional[int] = None,
) -> DiscSample:
    """
    Evaluate S_1 on each sample, writing CSV rows to ``out`` in input order.

    Points raising a HyperlabError are logged, skipped and reported.
    """
    from .monitoring import get_monitoring_service

    samples = [parse_complex(t) for t in t_samples]
    jobs = jobs or hyperlab_settings.jobs

    def evaluate(t: complex):
        try:
            return schwarz_s1(t, nodes)
        except HyperlabError as e:
            return e

    if jobs > 1 and len(samples) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as executor:
            outcomes = list(executor.map(evaluate, samples))
    else:
        outcomes = [evaluate(t) for t in samples]

    result = DiscSample()
    monitor = get_monitoring_service()
    for t, outcome in zip(samples, outcomes):
        if isinstance(outcome, SchwarzPoint):
            result.rows.append(outcome)
        else:
            monitor.log_skipped_point("schwarz", t, outcome)
            result.skipped.append(SkippedPoint(t, outcome.error_code, outcome.message))

    if out is not None:
        write_disc_csv(result.rows, out)
    if svg_path:
        write_disc_svg(result.rows, svg_path)
    return result


def write_disc_csv(rows: Sequence[SchwarzPoint], out: TextIO) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow(row.csv_row())


def write_disc_svg(rows: Sequence[SchwarzPoint], path: str) -> None:
    """Scatter of the ratio values inside the unit circle."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    plt.rcParams["svg.hashsalt"] = "hyperlab"
    fig, ax = plt.subplots(figsize=(5, 5))
    circle = np.exp(2j * np.pi * np.linspace(0, 1, 361))
    ax.plot(circle.real, circle.imag, color="0.6", linewidth=0.8)
    ax.scatter([row.ratio.real for row in rows], [row.ratio.imag for row in rows], s=8)
    ax.set_aspect("equal")
    ax.set_xlabel("Re ratio")
    ax.set_ylabel("Im ratio")
    try:
        fig.savefig(path, format="svg", metadata={"Date": None})
    finally:
        plt.close(fig)
    logger.info(f"Disc image saved to {path}")
