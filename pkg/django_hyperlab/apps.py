"""Django app configuration for django-hyperlab."""

from django.apps import AppConfig
from django.utils.translation import gettext_lazy as _


class HyperlabConfig(AppConfig):
    """App configuration for django-hyperlab."""

    name = "django_hyperlab"
    verbose_name = _("Hyperlab")

    def ready(self):
        """Register the verification suites."""
        from . import verification  # noqa: F401
