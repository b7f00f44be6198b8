"""Django settings configuration for django-hyperlab."""

import os
from typing import Any, Dict

from django.conf import settings
from django.core.exceptions import ImproperlyConfigured

SCHEMA_VERSION = "hyperlab/1"


def get_setting(name: str, default: Any = None, required: bool = False) -> Any:
    """
    Get a django-hyperlab setting from Django settings.

    Args:
        name: Setting name (without HYPERLAB_ prefix)
        default: Default value if setting not found
        required: Whether the setting is required

    Returns:
        Setting value

    Raises:
        ImproperlyConfigured: If required setting is not found
    """
    setting_name = f"HYPERLAB_{name}"
    value = getattr(settings, setting_name, default)

    if required and value is None:
        raise ImproperlyConfigured(
            f"{setting_name} is required. Please add it to your Django settings."
        )

    return value


def _positive(name: str, value: Any) -> Any:
    if value is None or value <= 0:
        raise ImproperlyConfigured(f"HYPERLAB_{name} must be positive, got {value!r}.")
    return value


class HyperlabSettings:
    """Central configuration for hyperlab numerics."""

    @property
    def series_tol(self) -> float:
        """Term-magnitude stop threshold for series summation."""
        return _positive("SERIES_TOL", get_setting("SERIES_TOL", default=1e-16))

    @property
    def series_max_terms(self) -> int:
        """Maximum number of total-degree sweeps before NoConvergence."""
        return _positive("SERIES_MAX_TERMS", get_setting("SERIES_MAX_TERMS", default=2000))

    @property
    def trunc_order(self) -> int:
        """Default order N for formal truncations."""
        return _positive("TRUNC_ORDER", get_setting("TRUNC_ORDER", default=8))

    @property
    def quadrature_nodes(self) -> int:
        """Gauss-Jacobi node count (the error estimate doubles it)."""
        return _positive("QUADRATURE_NODES", get_setting("QUADRATURE_NODES", default=64))

    @property
    def fd_step(self) -> float:
        """Central-difference step for PDE residuals of period integrals."""
        return _positive("FD_STEP", get_setting("FD_STEP", default=1e-3))

    @property
    def lemma_fd_step(self) -> float:
        """Central-difference step for the indefinite-integral lemma."""
        return _positive("LEMMA_FD_STEP", get_setting("LEMMA_FD_STEP", default=1e-4))

    @property
    def branch_collision_distance(self) -> float:
        """Minimum distance between an integration path and a branch point."""
        return _positive(
            "BRANCH_COLLISION_DISTANCE", get_setting("BRANCH_COLLISION_DISTANCE", default=1e-8)
        )

    @property
    def detour_clearance(self) -> float:
        """
        Relative clearance that triggers a two-segment detour.

        A branch point closer to the straight path than this fraction of the
        path length makes the path bend around it.
        """
        return _positive("DETOUR_CLEARANCE", get_setting("DETOUR_CLEARANCE", default=0.1))

    @property
    def pivot_tol(self) -> float:
        """Absolute threshold below which numeric pivots count as zero."""
        return _positive("PIVOT_TOL", get_setting("PIVOT_TOL", default=1e-12))

    @property
    def admissibility_margin(self) -> float:
        """Rejection margin for random mu draws near integer-valued combinations."""
        return _positive("ADMISSIBILITY_MARGIN", get_setting("ADMISSIBILITY_MARGIN", default=1e-6))

    @property
    def random_draws(self) -> int:
        """Number of random mu draws in monodromy suites."""
        return _positive("RANDOM_DRAWS", get_setting("RANDOM_DRAWS", default=100))

    @property
    def jobs(self) -> int:
        """Worker cap for parallel grid evaluation."""
        return _positive("JOBS", get_setting("JOBS", default=1))

    @property
    def seed(self) -> int:
        """
        Default PRNG seed.

        Falls back to the HYPERLAB_SEED environment variable, then to 0.
        """
        value = get_setting("SEED")
        if value is None:
            env_value = os.environ.get("HYPERLAB_SEED")
            if env_value is None:
                return 0
            try:
                return int(env_value)
            except ValueError:
                raise ImproperlyConfigured(
                    f"HYPERLAB_SEED must be an integer, got {env_value!r}."
                )
        return int(value)

    @property
    def schema_version(self) -> str:
        """Schema string embedded in every JSON document."""
        return get_setting("SCHEMA_VERSION", default=SCHEMA_VERSION)

    def get_options(self) -> Dict[str, Any]:
        """
        Get the numeric options recorded alongside reports.

        Returns:
            Dict of the tunables that influence numeric results
        """
        return {
            "series_tol": self.series_tol,
            "series_max_terms": self.series_max_terms,
            "quadrature_nodes": self.quadrature_nodes,
            "fd_step": self.fd_step,
            "pivot_tol": self.pivot_tol,
        }


# Global settings instance
hyperlab_settings = HyperlabSettings()
