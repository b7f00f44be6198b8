"""Entry point for ``python -m django_hyperlab``."""

from .cli import main

if __name__ == "__main__":
    main()
