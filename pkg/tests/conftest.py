"""Pytest configuration and fixtures for django-hyperlab tests."""

from fractions import Fraction

import numpy as np
import pytest


@pytest.fixture
def special_params():
    """Fixture providing the parameters (4/3, 2/3, 2/3, 4/3, 4/3) of the reducible example."""
    from django_hyperlab.params import E2_SPECIAL

    return E2_SPECIAL


@pytest.fixture
def third():
    """Fixture providing the rational 1/3."""
    return Fraction(1, 3)


@pytest.fixture
def rng():
    """Fixture providing a seeded numpy generator."""
    return np.random.default_rng(20240611)


@pytest.fixture
def generic_mu(rng):
    """Fixture providing an admissible random mu vector."""
    from django_hyperlab.monodromy import random_admissible_mu

    return random_admissible_mu(rng)


@pytest.fixture
def monitoring_service():
    """Fixture providing a fresh monitoring service with cleared counters."""
    from django.core.cache import cache

    from django_hyperlab import monitoring

    cache.clear()
    monitoring._monitoring_service = None
    service = monitoring.get_monitoring_service()
    yield service
    cache.clear()
    monitoring._monitoring_service = None


@pytest.fixture(autouse=True)
def reset_signal_receivers():
    """
    Reset signal receivers before each test.

    This ensures that signal receivers from one test don't affect others.
    """
    from django_hyperlab import signals

    # Store original receivers
    original_receivers = {}
    signal_list = [
        signals.check_passed,
        signals.check_failed,
        signals.suite_completed,
        signals.verification_alert,
    ]

    for signal in signal_list:
        original_receivers[signal] = list(signal.receivers)

    yield

    # Restore original receivers
    for signal in signal_list:
        signal.receivers = original_receivers[signal]
