"""
Report containers and serialization for django-hyperlab.

Every check produces a CheckResult. Identity sweeps produce an
IdentityReport, which converts to a CheckResult for suite aggregation.
JSON documents are written with HyperlabJSONEncoder and always carry the
schema version; they never contain timestamps.
"""

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
from django.core.serializers.json import DjangoJSONEncoder

from .settings import hyperlab_settings
from .utils import format_complex


class HyperlabJSONEncoder(DjangoJSONEncoder):
    """
    JSON encoder for numeric report payloads.

    Complex values become [re, im], fractions become "p/q", exact ring
    elements use their ``to_json`` form, numpy values are unwrapped.
    """

    def default(self, o: Any) -> Any:
        if isinstance(o, complex):
            return [o.real, o.imag]
        if isinstance(o, Fraction):
            return str(o)
        if hasattr(o, "to_json"):
            return o.to_json()
        if isinstance(o, np.ndarray):
            return o.tolist()
        if isinstance(o, np.generic):
            return o.item()
        if isinstance(o, (tuple, frozenset, set)):
            return list(o)
        return super().default(o)


@dataclass
class SkippedPoint:
    """A sample point excluded from a sweep, with the reason."""

    point: Any
    error_code: Optional[str]
    message: str

    def to_dict(self) -> Dict[str, Any]:
        return {"point": self.point, "error_code": self.error_code, "message": self.message}


@dataclass
class CheckResult:
    """Outcome of one named check inside a verification suite."""

    check_id: str
    passed: bool
    max_residual: Optional[float] = None
    tol: Optional[float] = None
    argmax: Any = None
    grid_size: int = 0
    details: Dict[str, Any] = field(default_factory=dict)
    skipped: List[SkippedPoint] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "check": self.check_id,
            "pass": self.passed,
            "max_residual": self.max_residual,
            "tol": self.tol,
            "argmax": self.argmax,
            "grid": self.grid_size,
            "details": self.details,
            "skipped": [point.to_dict() for point in self.skipped],
        }


@dataclass
class IdentityReport:
    """
    Residual summary of an identity checked over a grid.

    ``passed`` holds exactly when the max residual is below ``tol`` and at
    least one point was evaluated.
    """

    identity_id: str
    tol: float
    grid_size: int = 0
    max_residual: float = 0.0
    argmax: Any = None
    skipped: List[SkippedPoint] = field(default_factory=list)
    shifted_param: Optional[str] = None
    shift: Fraction = Fraction(0)
    details: Dict[str, Any] = field(default_factory=dict)

    @property
    def evaluated(self) -> int:
        return self.grid_size - len(self.skipped)

    @property
    def passed(self) -> bool:
        return self.evaluated > 0 and math.isfinite(self.max_residual) and (
            self.max_residual < self.tol
        )

    def record(self, point: Any, residual: float) -> None:
        """Fold one evaluated point into the running maximum."""
        if self.argmax is None or residual > self.max_residual or math.isnan(residual):
            self.max_residual = residual
            self.argmax = point

    def to_dict(self) -> Dict[str, Any]:
        data = {
            "identity": self.identity_id,
            "grid": self.grid_size,
            "max_residual": self.max_residual,
            "argmax": self.argmax,
            "pass": self.passed,
            "tol": self.tol,
            "skipped": [point.to_dict() for point in self.skipped],
        }
        if self.shifted_param:
            data["shifted_param"] = self.shifted_param
            data["shift"] = self.shift
        if self.details:
            data["details"] = self.details
        return data

    def as_check(self, check_id: Optional[str] = None, expect_failure: bool = False) -> CheckResult:
        """
        Convert to a suite CheckResult.

        With ``expect_failure`` the check passes when the identity fails,
        which is how negative controls are reported.
        """
        passed = (not self.passed and self.evaluated > 0) if expect_failure else self.passed
        details = dict(self.details)
        if self.shifted_param:
            details.update({"shifted_param": self.shifted_param, "shift": self.shift})
        if expect_failure:
            details["negative_control"] = True
        return CheckResult(
            check_id=check_id or self.identity_id,
            passed=passed,
            max_residual=self.max_residual,
            tol=self.tol,
            argmax=self.argmax,
            grid_size=self.grid_size,
            details=details,
            skipped=list(self.skipped),
        )


def build_document(kind: str, payload: Dict[str, Any]) -> Dict[str, Any]:
    """Wrap a payload with the schema version and document kind."""
    document = {"schema": hyperlab_settings.schema_version, "kind": kind}
    document.update(payload)
    return document


def dumps(document: Dict[str, Any]) -> str:
    """Serialize a document deterministically (sorted keys, fixed indent)."""
    return json.dumps(document, cls=HyperlabJSONEncoder, sort_keys=True, indent=2) + "\n"


def suite_document(suite: str, results: Sequence[CheckResult], seed: Optional[int]) -> Dict:
    return build_document(
        "verify",
        {
            "suite": suite,
            "seed": seed,
            "options": hyperlab_settings.get_options(),
            "passed": all(result.passed for result in results),
            "checks": [result.to_dict() for result in results],
        },
    )


def _format_point(point: Any) -> str:
    if isinstance(point, complex):
        return format_complex(point, digits=6)
    if isinstance(point, (list, tuple)):
        return "(" + ", ".join(_format_point(value) for value in point) + ")"
    return str(point)


def format_check_line(result: CheckResult) -> str:
    """One line per check: status, id, residual, tolerance, argmax."""
    status = "PASS" if result.passed else "FAIL"
    parts = [f"{status:4}", result.check_id]
    if result.max_residual is not None:
        parts.append(f"max_residual={result.max_residual:.3e}")
    if result.tol is not None:
        parts.append(f"tol={result.tol:.1e}")
    if result.grid_size:
        parts.append(f"grid={result.grid_size}")
    if result.argmax is not None:
        parts.append(f"argmax={_format_point(result.argmax)}")
    if result.skipped:
        parts.append(f"skipped={len(result.skipped)}")
    return "  ".join(parts)


def format_text(results: Sequence[CheckResult]) -> str:
    lines = [format_check_line(result) for result in results]
    failed = sum(1 for result in results if not result.passed)
    lines.append(f"{len(results) - failed}/{len(results)} checks passed")
    return "\n".join(lines) + "\n"
