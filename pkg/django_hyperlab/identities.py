"""
Residual checks for the reduction identities and solution-space inclusions.

Each verify_* function evaluates both sides of an identity over a grid and
returns an IdentityReport. Points where a side is undefined (divergent
series, singular sample) are skipped and listed in the report; they never
abort the sweep.

All powers use the principal branch; the default grids keep every base in
the right half-plane.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Any, Callable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from . import hyperseries as hs
from . import periods
from .exceptions import (
    HyperlabError,
    IntegrabilityViolated,
    PreconditionViolated,
    SingularSample,
)
from .reports import IdentityReport, SkippedPoint
from .settings import hyperlab_settings
from .utils import parse_complex, parse_rational, to_complex

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-9
NEGATIVE_CONTROL_SHIFT = Fraction(1, 10)
NEGATIVE_CONTROL_FLOOR = 1e-4


# =============================================================================
# Grids
# =============================================================================


@dataclass(frozen=True)
class GridSpec:
    """
    Per-variable sample lists; the grid is their cartesian product.

    Example:
        >>> grid = GridSpec.uniform(2, 0.05, 0.25, 5)
        >>> len(grid)
        25
    """

    axes: Tuple[Tuple[complex, ...], ...]
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        object.__setattr__(
            self, "axes", tuple(tuple(parse_complex(v) for v in axis) for axis in self.axes)
        )
        if not self.tol > 0:
            raise ValueError(f"tol must be positive, got {self.tol}")

    @classmethod
    def uniform(cls, nvars: int, low: float, high: float, count: int, tol: float = DEFAULT_TOL):
        axis = tuple(complex(v) for v in np.linspace(low, high, count))
        return cls(axes=(axis,) * nvars, tol=tol)

    @classmethod
    def points(cls, *coords: Any, tol: float = DEFAULT_TOL) -> "GridSpec":
        """Single-point grid."""
        return cls(axes=tuple((coord,) for coord in coords), tol=tol)

    def product(self) -> Iterator[Tuple[complex, ...]]:
        """Grid points in row-major order of the axes."""
        return product(*self.axes)

    def __len__(self) -> int:
        size = 1
        for axis in self.axes:
            size *= len(axis)
        return size

    def with_tol(self, tol: Optional[float]) -> "GridSpec":
        return self if tol is None else GridSpec(self.axes, tol)


DEFAULT_GRID_2D = GridSpec.uniform(2, 0.05, 0.25, 5)
DEFAULT_GRID_3D = GridSpec(
    axes=((0.0, 0.03, 0.05), (0.05, 0.1), (0.05, 0.1)),
)


def _pow(base: complex, exponent: Any) -> complex:
    return complex(base) ** to_complex(exponent)


def _sweep(
    report: IdentityReport,
    points: Sequence[Any],
    residual: Callable[[Any], float],
    jobs: Optional[int] = None,
) -> IdentityReport:
    """Evaluate ``residual`` at every point, in order, folding into ``report``."""
    from .monitoring import get_monitoring_service

    def evaluate(point: Any):
        try:
            return residual(point)
        except HyperlabError as e:
            return e

    jobs = jobs or hyperlab_settings.jobs
    if jobs > 1 and len(points) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as executor:
            outcomes = list(executor.map(evaluate, points))
    else:
        outcomes = [evaluate(point) for point in points]

    monitor = get_monitoring_service()
    report.grid_size = len(points)
    for point, outcome in zip(points, outcomes):
        if isinstance(outcome, HyperlabError):
            monitor.log_skipped_point(report.identity_id, point, outcome)
            report.skipped.append(SkippedPoint(point, outcome.error_code, outcome.message))
        else:
            report.record(point, float(outcome))
    logger.debug(
        f"{report.identity_id}: max_residual={report.max_residual:.3e} "
        f"over {report.evaluated} points"
    )
    return report


def _new_report(identity_id, tol: float, shifted: Optional[str], shift: Any) -> IdentityReport:
    shift = parse_rational(shift)
    return IdentityReport(
        identity_id=identity_id,
        tol=tol,
        shifted_param=shifted if shift else None,
        shift=shift,
    )


# =============================================================================
# Bailey identities
# =============================================================================


def verify_bailey_p78(
    a: Any,
    b: Any,
    bp: Any,
    c: Any,
    grid: GridSpec = DEFAULT_GRID_2D,
    rhs_shift: Any = 0,
    jobs: Optional[int] = None,
) -> IdentityReport:
    """
    F1(a,b,b',c;x,y) = (1-x)^(-a) F1(a,c-b-b',b',c;-x/(1-x),(y-x)/(1-x)).

    ``rhs_shift`` is added to c-b-b' on the right-hand side.
    """
    a, b, bp, c = (parse_rational(v) for v in (a, b, bp, c))
    report = _new_report("p78", grid.tol, "c-b-b'", rhs_shift)
    second = c - b - bp + report.shift

    def residual(point):
        x, y = point
        lhs = hs.appell_f1(a, b, bp, c, x, y)
        rhs = _pow(1 - x, -a) * hs.appell_f1(a, second, bp, c, -x / (1 - x), (y - x) / (1 - x))
        return abs(lhs - rhs)

    return _sweep(report, list(grid.product()), residual, jobs)


def verify_bailey_p80(
    a: Any,
    b: Any,
    bp: Any,
    c: Any,
    grid: GridSpec = DEFAULT_GRID_2D,
    rhs_shift: Any = 0,
    jobs: Optional[int] = None,
) -> IdentityReport:
    """
    (1-y)^(-b') F2(a,b,b',c,a;x,-y/(1-y)) = F1(b,a-b',b',c;x,x(1-y)).

    ``rhs_shift`` is added to a-b' on the right-hand side.
    """
    a, b, bp, c = (parse_rational(v) for v in (a, b, bp, c))
    report = _new_report("p80", grid.tol, "a-b'", rhs_shift)
    second = a - bp + report.shift

    def residual(point):
        x, y = point
        lhs = _pow(1 - y, -bp) * hs.appell_f2(a, b, bp, c, a, x, -y / (1 - y))
        rhs = hs.appell_f1(b, second, bp, c, x, x * (1 - y))
        return abs(lhs - rhs)

    return _sweep(report, list(grid.product()), residual, jobs)


def verify_bailey_p81(
    a: Any,
    b: Any,
    bp: Any,
    grid: GridSpec = DEFAULT_GRID_2D,
    rhs_shift: Any = 0,
    jobs: Optional[int] = None,
) -> IdentityReport:
    """
    F2(a,b,b',a,a;x,y) = (1-x)^(-b) (1-y)^(-b') F(b,b',a;xy/((1-x)(1-y))).

    ``rhs_shift`` is added to the first parameter of the Gauss series.
    """
    a, b, bp = (parse_rational(v) for v in (a, b, bp))
    report = _new_report("p81", grid.tol, "b", rhs_shift)
    gauss_b = b + report.shift

    def residual(point):
        x, y = point
        lhs = hs.appell_f2(a, b, bp, a, a, x, y)
        t = x * y / ((1 - x) * (1 - y))
        rhs = _pow(1 - x, -b) * _pow(1 - y, -bp) * hs.gauss_2f1(gauss_b, bp, a, t)
        return abs(lhs - rhs)

    return _sweep(report, list(grid.product()), residual, jobs)


def verify_theorem_matome(
    a: Any,
    b: Any,
    bp: Any,
    grid: GridSpec = DEFAULT_GRID_2D,
    rhs_shift: Any = 0,
    jobs: Optional[int] = None,
) -> IdentityReport:
    """
    Chain of explicit generators behind the inclusions for E2(a,b,b',a,a).

    Links, each compared with the previous one:
        F2(a,b,b',a,a;x,y)
        (1-y)^(-b') F1(b,a-b',b',a;x,x/(1-y))
        (1-x)^(-b)(1-y)^(-b') F1(b,0,b',a;-x/(1-x),T)
        (1-x)^(-b)(1-y)^(-b') F(b,b',a;T),   T = xy/((1-x)(1-y))

    ``rhs_shift`` is added to the first parameter of the final Gauss series.
    """
    a, b, bp = (parse_rational(v) for v in (a, b, bp))
    report = _new_report("matome", grid.tol, "b", rhs_shift)
    gauss_b = b + report.shift
    link_max = [0.0, 0.0, 0.0]

    def residual(point):
        x, y = point
        t = x * y / ((1 - x) * (1 - y))
        prefactor = _pow(1 - x, -b) * _pow(1 - y, -bp)
        chain = [
            hs.appell_f2(a, b, bp, a, a, x, y),
            _pow(1 - y, -bp) * hs.appell_f1(b, a - bp, bp, a, x, x / (1 - y)),
            prefactor * hs.appell_f1(b, 0, bp, a, -x / (1 - x), t),
            prefactor * hs.gauss_2f1(gauss_b, bp, a, t),
        ]
        links = [abs(chain[k + 1] - chain[k]) for k in range(3)]
        for k, value in enumerate(links):
            link_max[k] = max(link_max[k], value)
        return max(links)

    # link maxima are accumulated by the closure, so evaluate serially
    _sweep(report, list(grid.product()), residual, jobs=1)
    report.details["links"] = {"p80": link_max[0], "p78": link_max[1], "gauss": link_max[2]}
    return report


# =============================================================================
# Appendix identity for the restricted E(3,6) series
# =============================================================================


def verify_appendixA(
    a2: Any,
    a3: Any,
    a4: Any,
    a6: Any,
    grid: GridSpec = DEFAULT_GRID_3D,
    rhs_shift: Any = 0,
    jobs: Optional[int] = None,
) -> IdentityReport:
    """
    F_X3(a2..a6;x1,x3,x4) = (1-x1)^(-a2) F_D(a3,a4,1-a6,a2,1+a3-a5;x3,x4,(x3-x1)/(1-x1)).

    a5 is fixed to 1 - a2 - a4, the condition under which the identity holds.
    ``rhs_shift`` moves a5 away from it on both sides.
    """
    a2, a3, a4, a6 = (parse_rational(v) for v in (a2, a3, a4, a6))
    report = _new_report("appendixA", grid.tol, "a5", rhs_shift)
    a5 = 1 - a2 - a4 + report.shift
    report.details["a5"] = a5

    def residual(point):
        x1, x3, x4 = point
        lhs = hs.fx3_series(a2, a3, a4, a5, a6, x1, x3, x4)
        rhs = _pow(1 - x1, -a2) * hs.lauricella_fd3(
            a3, a4, 1 - a6, a2, 1 + a3 - a5, x3, x4, (x3 - x1) / (1 - x1)
        )
        return abs(lhs - rhs)

    return _sweep(report, list(grid.product()), residual, jobs)


# =============================================================================
# Euler integral of F2
# =============================================================================


def verify_euler_f2(
    a: Any,
    b: Any,
    bp: Any,
    c: Any,
    cp: Any,
    points: Sequence[Tuple[Any, Any]],
    tol: float = 1e-10,
    nodes: Optional[int] = None,
) -> IdentityReport:
    """Square integral against B(b,c-b) B(b',c'-b') F2(a,b,b',c,c';x,y)."""
    params = tuple(parse_rational(v) for v in (a, b, bp, c, cp))
    report = IdentityReport(identity_id="euler_f2", tol=tol)

    def residual(point):
        x, y = point
        integral = periods.e2_square_integral(x, y, params, nodes).value
        return abs(integral - periods.square_integral_oracle(x, y, params))

    return _sweep(report, [tuple(parse_complex(v) for v in p) for p in points], residual, jobs=1)


# =============================================================================
# Lemmas on the indefinite integral
# =============================================================================


def _phi(a, b, c, s: complex, x: complex) -> complex:
    """s^(b-c) (1-s)^(c-a-1) (x-s)^(-b) on principal branches."""
    return _pow(s, b - c) * _pow(1 - s, c - a - 1) * _pow(x - s, -b)


def _require_regular(s: complex, x: complex) -> None:
    for label, distance in (("0", abs(s)), ("1", abs(1 - s)), ("x", abs(x - s))):
        if distance < 1e-12:
            raise SingularSample(f"s={s} hits the branch point {label}")


def lemma_phi_sides(
    a: Any, b: Any, c: Any, s: Any, x: Any, rhs_shift: Any = 0
) -> Tuple[complex, complex]:
    """
    Both sides of P(a,b,c;x) Phi = b x d/ds (s(1-s)/(x-s) Phi).

    The left side comes from the x-logarithmic derivative of Phi, the right
    side from the s-derivative; with q = x - s,
        P Phi / Phi = (1-x)(bxs + b^2x^2)/q^2 - (c-1-x(a+b)) bx/q - xab
        RHS / Phi   = bx[(1+b-c)(1-s)/q - (c-a)s/q + (1+b)s(1-s)/q^2]

    ``rhs_shift`` replaces b by b + shift in the right side only.
    """
    a, b, c = (to_complex(v) for v in (a, b, c))
    rb = b + to_complex(parse_rational(rhs_shift))
    s, x = parse_complex(s), parse_complex(x)
    _require_regular(s, x)
    q = x - s
    phi = _phi(a, b, c, s, x)
    lhs = (
        (1 - x) * (b * x * s + b * b * x * x) / q**2
        - (c - 1 - x * (a + b)) * b * x / q
        - x * a * b
    )
    rhs = rb * x * ((1 + rb - c) * (1 - s) / q - (c - a) * s / q + (1 + rb) * s * (1 - s) / q**2)
    return lhs * phi, rhs * phi


def verify_lemma_phi(
    a: Any,
    b: Any,
    c: Any,
    samples: Sequence[Tuple[Any, Any]],
    tol: float = 1e-10,
    rhs_shift: Any = 0,
) -> IdentityReport:
    """
    Pointwise comparison of the two sides of the lemma at (s, x) samples.

    Residuals are relative to max(1, |lhs|, |rhs|).
    """
    report = _new_report("lemma_phi", tol, "b", rhs_shift)

    def residual(point):
        lhs, rhs = lemma_phi_sides(a, b, c, *point, rhs_shift=report.shift)
        return abs(lhs - rhs) / max(1.0, abs(lhs), abs(rhs))

    return _sweep(report, [tuple(parse_complex(v) for v in p) for p in samples], residual, jobs=1)


def random_lemma_samples(
    rng: np.random.Generator, count: int = 20
) -> List[Tuple[complex, complex]]:
    """(s, x) with s in (0.1, 0.9) and x in (1.5, 3)."""
    s_values = rng.uniform(0.1, 0.9, size=count)
    x_values = rng.uniform(1.5, 3.0, size=count)
    return [(complex(s), complex(x)) for s, x in zip(s_values, x_values)]


DEFAULT_INDEFINITE_SAMPLES = ((0.4, 2.0), (0.3, 1.5), (0.25, 3.0), (0.5, 2.5 + 0.5j))
INDEFINITE_OPERATORS = ("R1", "P1", "Q1")
INDEFINITE_SHIFTED = {"R1": "b", "P1": "c", "Q1": "b"}


def _indefinite_u(a, b, c, s: complex, t: complex, nodes: Optional[int]) -> complex:
    integrand = periods.PowerProduct.build((1, 0, b - c), (-1, 1, c - a - 1), (-1, t, -b))
    path = periods.choose_path(0j, s, (1 + 0j, t))
    return periods.integrate_path(integrand, path, nodes).value


def _require_indefinite_sample(s: complex, t: complex) -> None:
    if s.imag or not 0 < s.real < 1:
        raise PreconditionViolated(f"s must lie in (0, 1), got {s}")
    if t == 1 or (not t.imag and t.real <= s.real):
        raise PreconditionViolated(f"t must avoid 1 and the segment [0, s], got t={t}")


def indefinite_residuals(
    a: Any,
    b: Any,
    c: Any,
    s: Any,
    t: Any,
    h: Optional[float] = None,
    nodes: Optional[int] = None,
    operator_shift: Any = 0,
) -> Tuple[complex, complex, complex]:
    """
    R1 u, P1 u and Q1 u for u(s,t) = int_0^s Phi.

    R1 and P1 only involve u_s, u_ss, u_st, which are closed forms in Phi.
    Q1 needs u, u_t, u_tt, taken from quadrature with central differences
    in t and one Richardson pass.

    ``operator_shift`` moves one coefficient parameter of each operator while
    u keeps the original exponents: b in R1 and Q1, c in P1 (R1 has no c and
    P1 has no b).
    """
    a, b, c = (float(to_complex(v).real) for v in (a, b, c))
    s, t = parse_complex(s), parse_complex(t)
    _require_indefinite_sample(s, t)
    h = h or hyperlab_settings.lemma_fd_step
    delta = float(parse_rational(operator_shift))

    u_s = _phi(a, b, c, s, t)
    u_ss = ((b - c) / s - (c - a - 1) / (1 - s) + b / (t - s)) * u_s
    u_st = -b / (t - s) * u_s

    r1 = (s - t) * u_st - (b + delta) * u_s
    p1 = s * (1 - s) * u_ss + t * (1 - s) * u_st + (c + delta - (a + 1) * s) * u_s

    values = {k: _indefinite_u(a, b, c, s, t + k * h / 2, nodes) for k in (-2, -1, 0, 1, 2)}

    def derivatives(step: int) -> Tuple[complex, complex]:
        width = step * h / 2
        first = (values[step] - values[-step]) / (2 * width)
        second = (values[step] - 2 * values[0] + values[-step]) / width**2
        return first, second

    (coarse_t, coarse_tt), (fine_t, fine_tt) = derivatives(2), derivatives(1)
    u_t = (4 * fine_t - coarse_t) / 3
    u_tt = (4 * fine_tt - coarse_tt) / 3
    u = values[0]
    qb = b + delta
    q1 = (
        t * (1 - t) * u_tt
        + s * (1 - t) * u_st
        + (c - (a + qb + 1) * t) * u_t
        - qb * s * u_s
        - a * qb * u
    )
    return r1, p1, q1


def verify_lemma_indefinite(
    a: Any,
    b: Any,
    c: Any,
    samples: Sequence[Tuple[Any, Any]] = DEFAULT_INDEFINITE_SAMPLES,
    tols: Tuple[float, float, float] = (1e-12, 1e-12, 1e-5),
    nodes: Optional[int] = None,
    rhs_shift: Any = 0,
) -> List[IdentityReport]:
    """
    Reports ``lemma_indefinite.R1``, ``.P1`` and ``.Q1`` for u = int_0^s Phi.

    ``rhs_shift`` is passed to the operators as ``operator_shift``.

    Raises:
        IntegrabilityViolated: If Re(b - c) <= -1, where u diverges at 0
    """
    if (to_complex(b) - to_complex(c)).real <= -1:
        raise IntegrabilityViolated(f"int_0^s Phi diverges at 0 for b - c = {b} - {c}")
    reports = [
        _new_report(f"lemma_indefinite.{name}", tol, INDEFINITE_SHIFTED[name], rhs_shift)
        for name, tol in zip(INDEFINITE_OPERATORS, tols)
    ]
    points = [tuple(parse_complex(v) for v in p) for p in samples]
    for report in reports:
        report.grid_size = len(points)

    from .monitoring import get_monitoring_service

    for point in points:
        try:
            residuals = indefinite_residuals(
                a, b, c, *point, nodes=nodes, operator_shift=reports[0].shift
            )
        except HyperlabError as e:
            get_monitoring_service().log_skipped_point("lemma_indefinite", point, e)
            for report in reports:
                report.skipped.append(SkippedPoint(point, e.error_code, e.message))
            continue
        for report, value in zip(reports, residuals):
            report.record(point, abs(value))
    return reports


# =============================================================================
# Negative controls
# =============================================================================


def _indefinite_control(name: str) -> Callable[..., IdentityReport]:
    index = INDEFINITE_OPERATORS.index(name)

    def verify(a, b, c, samples=DEFAULT_INDEFINITE_SAMPLES, tol=DEFAULT_TOL, rhs_shift=0):
        reports = verify_lemma_indefinite(a, b, c, samples, (tol,) * 3, rhs_shift=rhs_shift)
        return reports[index]

    return verify


GRID_CONTROLS = {
    "p78": verify_bailey_p78,
    "p80": verify_bailey_p80,
    "p81": verify_bailey_p81,
    "appendixA": verify_appendixA,
    "matome": verify_theorem_matome,
}

SAMPLE_CONTROLS = {
    "lemma_phi": verify_lemma_phi,
    **{f"lemma_indefinite.{name}": _indefinite_control(name) for name in INDEFINITE_OPERATORS},
}

NEGATIVE_CONTROLS = {**GRID_CONTROLS, **SAMPLE_CONTROLS}


def negative_control(
    identity_id: str,
    *params: Any,
    grid: Optional[GridSpec] = None,
    samples: Optional[Sequence[Tuple[Any, Any]]] = None,
    jobs: Optional[int] = None,
) -> IdentityReport:
    """
    Rerun an identity with one right-hand-side parameter shifted by 1/10.

    The resulting report fails as required when its max residual stays
    above NEGATIVE_CONTROL_FLOOR; its tol is set to that floor. Grid
    identities take ``grid``; the lemmas take ``samples`` and default to
    DEFAULT_INDEFINITE_SAMPLES.
    """
    verify = NEGATIVE_CONTROLS[identity_id]
    if identity_id in SAMPLE_CONTROLS:
        return verify(
            *params,
            samples if samples is not None else DEFAULT_INDEFINITE_SAMPLES,
            tol=NEGATIVE_CONTROL_FLOOR,
            rhs_shift=NEGATIVE_CONTROL_SHIFT,
        )
    kwargs = {"rhs_shift": NEGATIVE_CONTROL_SHIFT, "jobs": jobs}
    if grid is not None:
        kwargs["grid"] = grid.with_tol(NEGATIVE_CONTROL_FLOOR)
    else:
        default = DEFAULT_GRID_3D if identity_id == "appendixA" else DEFAULT_GRID_2D
        kwargs["grid"] = default.with_tol(NEGATIVE_CONTROL_FLOOR)
    return verify(*params, **kwargs)
