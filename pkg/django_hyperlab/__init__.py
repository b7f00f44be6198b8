"""
django-hyperlab: verification lab for the reducible Appell E2 system
"""

# Only modules without Django app registry dependencies are imported here.
# Use django_hyperlab.verification for the suite runner.

from .covers import CoverSignature, classify, classify_genus2, euler_characteristic
from .exceptions import (
    EisensteinError,
    HyperlabError,
    MonodromyError,
    OperatorError,
    QuadratureError,
    SeriesError,
    VerificationError,
)
from .hyperseries import (
    SeriesOptions,
    appell_f1,
    appell_f2,
    fx3_series,
    gauss_2f1,
    lauricella_fd3,
    truncate_formal,
)
from .params import ParamSet
from .settings import HyperlabSettings, hyperlab_settings
from .signals import check_failed, check_passed, suite_completed, verification_alert

__version__ = "0.1.0"

# Version information
VERSION = (0, 1, 0, "final", 0)


def get_version():
    """Return the version string."""
    return __version__


__all__ = [
    # Version
    "__version__",
    "get_version",
    "VERSION",
    # Series
    "SeriesOptions",
    "gauss_2f1",
    "appell_f1",
    "appell_f2",
    "lauricella_fd3",
    "fx3_series",
    "truncate_formal",
    # Parameters and covers
    "ParamSet",
    "CoverSignature",
    "euler_characteristic",
    "classify",
    "classify_genus2",
    # Settings
    "HyperlabSettings",
    "hyperlab_settings",
    # Exceptions
    "HyperlabError",
    "SeriesError",
    "OperatorError",
    "VerificationError",
    "MonodromyError",
    "EisensteinError",
    "QuadratureError",
    # Signals
    "check_passed",
    "check_failed",
    "suite_completed",
    "verification_alert",
]
