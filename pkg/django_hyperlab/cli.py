"""
Command-line entry point.

``hyperlab <subcommand> ...`` runs the ``hyperlab`` management command,
configuring a minimal in-process Django settings object when no project
settings are available.
"""

import logging
import os
import sys
from typing import Optional, Sequence, TextIO

logger = logging.getLogger(__name__)

MINIMAL_SETTINGS = {
    "INSTALLED_APPS": ["django_hyperlab"],
    "CACHES": {"default": {"BACKEND": "django.core.cache.backends.locmem.LocMemCache"}},
    "USE_TZ": True,
    "LOGGING_CONFIG": None,
}


def ensure_django() -> None:
    """Configure Django unless a settings module or configuration already exists."""
    import django
    from django.conf import settings

    if not settings.configured and not os.environ.get("DJANGO_SETTINGS_MODULE"):
        settings.configure(**MINIMAL_SETTINGS)
        logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    django.setup()


def run(
    argv: Sequence[str],
    stdout: Optional[TextIO] = None,
    stderr: Optional[TextIO] = None,
) -> int:
    """
    Run one subcommand and return its exit code.

    Args:
        argv: Arguments after the program name
        stdout: Output stream (defaults to sys.stdout)
        stderr: Diagnostic stream (defaults to sys.stderr)

    Returns:
        0 when every requested check passes, 1 on failed checks, 2 on
        usage or domain errors
    """
    ensure_django()
    from django.core.management.base import CommandError

    from .management.commands.hyperlab import USAGE_ERROR, Command

    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    command = Command(stdout=stdout, stderr=stderr)
    parser = command.create_parser("hyperlab", "")
    parser.prog = "hyperlab"

    try:
        options = parser.parse_args(list(argv))
    except CommandError as e:
        stderr.write(f"{e}\n")
        return USAGE_ERROR

    cmd_options = vars(options)
    args = cmd_options.pop("args", ())
    try:
        command.execute(*args, **cmd_options)
    except CommandError as e:
        stderr.write(f"Error: {e}\n")
        return e.returncode
    return 0


def main() -> None:
    """Console script entry point."""
    sys.exit(run(sys.argv[1:]))
