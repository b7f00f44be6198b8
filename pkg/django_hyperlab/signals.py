"""
Django signals for django-hyperlab.

Provides signals for verification lifecycle events.
"""

from django.dispatch import Signal

# Check lifecycle signals
check_passed = Signal()  # providing_args=["report"]
check_failed = Signal()  # providing_args=["report"]

# Suite signals
suite_completed = Signal()  # providing_args=["suite", "results", "passed"]

# Monitoring and alerting signals
verification_alert = Signal()  # providing_args=["alert_type", "message", "severity", "data"]
