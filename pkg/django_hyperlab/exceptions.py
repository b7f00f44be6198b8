"""Custom exceptions for django-hyperlab."""

from typing import Optional


class HyperlabError(Exception):
    """Base exception for all django-hyperlab errors."""

    default_code: Optional[str] = None

    def __init__(
        self,
        message: str,
        error_code: Optional[str] = None,
        error_group: Optional[str] = None,
    ):
        """
        Initialize hyperlab error.

        Args:
            message: Error message
            error_code: Stable machine-readable code (defaults to the class code)
            error_group: Module group the error belongs to
        """
        self.message = message
        self.error_code = error_code or self.default_code
        self.error_group = error_group
        super().__init__(self.message)

    def __str__(self):
        """Return string representation of error."""
        if self.error_code:
            return f"[{self.error_code}] {self.message}"
        return self.message


# -----------------------------------------------------------------------------
# Series evaluation
# -----------------------------------------------------------------------------


class SeriesError(HyperlabError):
    """Hypergeometric series evaluation error."""

    pass


class DivergentInput(SeriesError):
    """Evaluation point lies outside the convergence domain."""

    default_code = "DIVERGENT_INPUT"


class PoleParameter(SeriesError):
    """A denominator parameter is a nonpositive integer."""

    default_code = "POLE_PARAMETER"


class NoConvergence(SeriesError):
    """Partial sums did not reach tolerance within max_terms."""

    default_code = "NO_CONVERGENCE"


# -----------------------------------------------------------------------------
# Operators
# -----------------------------------------------------------------------------


class OperatorError(HyperlabError):
    """Differential operator construction error."""

    pass


class ArityMismatch(OperatorError):
    """Wrong number of parameters for a system or series."""

    default_code = "ARITY_MISMATCH"


# -----------------------------------------------------------------------------
# Identity verification
# -----------------------------------------------------------------------------


class VerificationError(HyperlabError):
    """Identity verification error."""

    pass


class PreconditionViolated(VerificationError):
    """A sample point or parameter violates the identity's preconditions."""

    default_code = "PRECONDITION_VIOLATED"


class SingularSample(VerificationError):
    """A sample point coincides with a singularity of the integrand."""

    default_code = "SINGULAR_SAMPLE"


class IntegrabilityViolated(VerificationError):
    """Endpoint exponent is not integrable."""

    default_code = "INTEGRABILITY_VIOLATED"


# -----------------------------------------------------------------------------
# Monodromy
# -----------------------------------------------------------------------------


class MonodromyError(HyperlabError):
    """Intersection or circuit matrix construction error."""

    pass


class DegenerateMu(MonodromyError):
    """A required denominator in the mu-vector vanishes."""

    default_code = "DEGENERATE_MU"


class SingularPivot(MonodromyError):
    """The 2x2 pivot block is singular and no cancelled form applies."""

    default_code = "SINGULAR_PIVOT"


# -----------------------------------------------------------------------------
# Eisenstein arithmetic
# -----------------------------------------------------------------------------


class EisensteinError(HyperlabError):
    """Exact arithmetic in Q(omega) error."""

    pass


class SpecializationMismatch(EisensteinError):
    """Specialized matrix differs from the reference table."""

    default_code = "SPECIALIZATION_MISMATCH"


class BlockMismatch(EisensteinError):
    """Reduced 2x2 blocks do not satisfy the expected equalities."""

    default_code = "BLOCK_MISMATCH"


class NonIntegralResult(EisensteinError):
    """Result is not of the expected integral form."""

    default_code = "NON_INTEGRAL_RESULT"


class NotUnimodular(EisensteinError):
    """Integer matrix does not have determinant 1."""

    default_code = "NOT_UNIMODULAR"


# -----------------------------------------------------------------------------
# Quadrature
# -----------------------------------------------------------------------------


class QuadratureError(HyperlabError):
    """Period integral error."""

    pass


class NonIntegrableExponent(QuadratureError):
    """Endpoint exponent is <= -1 or does not match the declared weight."""

    default_code = "NON_INTEGRABLE_EXPONENT"


class BranchCollision(QuadratureError):
    """Integration path passes through or too close to a branch point."""

    default_code = "BRANCH_COLLISION"


class DomainViolated(QuadratureError):
    """Evaluation point lies outside the supported domain."""

    default_code = "DOMAIN_VIOLATED"
