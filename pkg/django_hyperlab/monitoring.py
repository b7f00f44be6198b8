"""
Monitoring and logging utilities for django-hyperlab.

Provides structured logging of check results, cache-backed counters and
alert hooks for verification runs.

Usage:
    Configure monitoring in your Django settings:

    HYPERLAB_MONITORING = {
        'LOG_CHECKS': True,
        'ALERT_ON_FAILURE': True,
        'FAILURE_RATE_THRESHOLD': 0.0,  # any failed check alerts
    }
"""

import logging
import time
from functools import wraps
from typing import Any, Callable, Dict, Optional, Sequence

from django.conf import settings
from django.core.cache import cache
from django.utils import timezone

logger = logging.getLogger(__name__)

# Structured logger for check events
check_logger = logging.getLogger("django_hyperlab.checks")


class MonitoringService:
    """
    Central monitoring service for django-hyperlab.

    Example:
        >>> monitor = MonitoringService()
        >>> monitor.log_check_result(result)
        >>> monitor.log_suite_summary("p81", results, duration_ms=12.5)
    """

    # Cache keys for metrics
    METRICS_KEY_PREFIX = "hyperlab_metrics_"
    METRIC_NAMES = ("checks_run", "checks_passed", "checks_failed", "points_skipped")

    def __init__(self):
        """Initialize monitoring service."""
        self.config = getattr(settings, "HYPERLAB_MONITORING", {})
        self.log_checks = self.config.get("LOG_CHECKS", True)
        self.alert_on_failure = self.config.get("ALERT_ON_FAILURE", True)
        self.failure_rate_threshold = self.config.get("FAILURE_RATE_THRESHOLD", 0.0)

    # -------------------------------------------------------------------------
    # Check Event Logging
    # -------------------------------------------------------------------------

    def log_check_result(self, result: Any) -> None:
        """
        Log a check result and update counters.

        Args:
            result: CheckResult of a single check.
        """
        self._increment_metric("checks_run")
        self._increment_metric("checks_passed" if result.passed else "checks_failed")

        if not self.log_checks:
            return

        log_data = {
            "event": "check_passed" if result.passed else "check_failed",
            "check": result.check_id,
            "max_residual": result.max_residual,
            "tol": result.tol,
            "grid": result.grid_size,
            "timestamp": timezone.now().isoformat(),
        }
        level = logging.INFO if result.passed else logging.WARNING
        check_logger.log(
            level,
            f"Check {result.check_id}: {'pass' if result.passed else 'FAIL'} "
            f"(max_residual={result.max_residual})",
            extra={"check_data": log_data},
        )

    def log_skipped_point(self, check_id: str, point: Any, error: Exception) -> None:
        """
        Log a sample point that raised a per-point error during a sweep.

        Args:
            check_id: Check the point belongs to.
            point: The offending sample point.
            error: The error raised for it.
        """
        self._increment_metric("points_skipped")
        check_logger.info(
            f"Skipped point {point} in {check_id}: {error}",
            extra={
                "check_data": {
                    "event": "point_skipped",
                    "check": check_id,
                    "point": repr(point),
                    "error_code": getattr(error, "error_code", None),
                    "timestamp": timezone.now().isoformat(),
                }
            },
        )

    def log_suite_summary(
        self,
        suite: str,
        results: Sequence[Any],
        duration_ms: Optional[float] = None,
    ) -> None:
        """
        Log the summary of a finished suite and alert on high failure rates.

        Args:
            suite: Suite name.
            results: CheckResults of the suite.
            duration_ms: Wall time of the suite.
        """
        failed = [result.check_id for result in results if not result.passed]
        log_data = {
            "event": "suite_completed",
            "suite": suite,
            "checks": len(results),
            "failed": failed,
            "duration_ms": duration_ms,
            "timestamp": timezone.now().isoformat(),
        }
        if self.log_checks:
            check_logger.info(
                f"Suite {suite}: {len(results) - len(failed)}/{len(results)} passed",
                extra={"check_data": log_data},
            )

        if self.alert_on_failure and results:
            failure_rate = len(failed) / len(results)
            if failure_rate > self.failure_rate_threshold:
                self._send_alert(
                    "suite_failure",
                    f"Suite {suite} failure rate ({failure_rate:.1%}) exceeds threshold "
                    f"({self.failure_rate_threshold:.1%})",
                    severity="high",
                    data={"suite": suite, "failed": failed, "failure_rate": failure_rate},
                )

    # -------------------------------------------------------------------------
    # Internals
    # -------------------------------------------------------------------------

    def _increment_metric(self, metric_name: str, value: int = 1) -> None:
        """Increment a metric counter."""
        cache_key = f"{self.METRICS_KEY_PREFIX}{metric_name}"
        try:
            current = cache.get(cache_key, 0)
            cache.set(cache_key, current + value, timeout=86400)
        except Exception as e:
            logger.debug(f"Failed to increment metric {metric_name}: {e}")

    def _send_alert(
        self,
        alert_type: str,
        message: str,
        severity: str = "medium",
        data: Optional[Dict] = None,
    ) -> None:
        """
        Send an alert through configured channels.

        Override this method or connect to ``verification_alert`` to route
        alerts elsewhere.
        """
        alert_data = {
            "alert_type": alert_type,
            "message": message,
            "severity": severity,
            "data": data,
            "timestamp": timezone.now().isoformat(),
        }

        logger.warning(
            f"ALERT [{severity.upper()}]: {alert_type} - {message}",
            extra={"alert_data": alert_data},
        )

        from .signals import verification_alert

        verification_alert.send(
            sender=self.__class__,
            alert_type=alert_type,
            message=message,
            severity=severity,
            data=data,
        )

    # -------------------------------------------------------------------------
    # Metrics Retrieval
    # -------------------------------------------------------------------------

    def get_metrics(self) -> Dict[str, Any]:
        """
        Get current metrics snapshot.

        Returns:
            Dictionary with all current counters.
        """
        return {
            name: cache.get(f"{self.METRICS_KEY_PREFIX}{name}", 0) for name in self.METRIC_NAMES
        }

    def reset_metrics(self) -> None:
        """Reset all metrics (useful for testing)."""
        for name in self.METRIC_NAMES:
            cache.delete(f"{self.METRICS_KEY_PREFIX}{name}")


# Global monitoring service instance
_monitoring_service: Optional[MonitoringService] = None


def get_monitoring_service() -> MonitoringService:
    """
    Get the global monitoring service instance.

    Returns:
        MonitoringService singleton instance.
    """
    global _monitoring_service
    if _monitoring_service is None:
        _monitoring_service = MonitoringService()
    return _monitoring_service


def monitor_timing(metric_name: str):
    """
    Decorator to monitor function execution time.

    Args:
        metric_name: Name of the metric to record.

    Example:
        >>> @monitor_timing('suite.p81')
        >>> def run_p81(ctx):
        ...     pass
    """

    def decorator(func: Callable) -> Callable:
        @wraps(func)
        def wrapper(*args, **kwargs):
            start_time = time.perf_counter()
            try:
                return func(*args, **kwargs)
            finally:
                duration_ms = (time.perf_counter() - start_time) * 1000
                logger.debug(f"{metric_name} completed in {duration_ms:.2f}ms")

        return wrapper

    return decorator
