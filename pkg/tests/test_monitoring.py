"""
Tests for django-hyperlab monitoring module.

Tests the MonitoringService class, metrics collection, and logging utilities.
"""

from unittest.mock import patch

import pytest
from django.core.cache import cache
from django.test import TestCase, override_settings

from django_hyperlab.exceptions import DivergentInput
from django_hyperlab.monitoring import MonitoringService, get_monitoring_service, monitor_timing
from django_hyperlab.reports import CheckResult


def _result(check_id="p81", passed=True):
    return CheckResult(check_id=check_id, passed=passed, max_residual=1e-14, tol=1e-9, grid_size=25)


@pytest.mark.django_db
class TestMonitoringService(TestCase):
    """Tests for MonitoringService class."""

    def setUp(self):
        """Set up test fixtures."""
        cache.clear()
        self.service = MonitoringService()

    def tearDown(self):
        """Clean up after tests."""
        cache.clear()

    @override_settings(HYPERLAB_MONITORING={})
    def test_init_default_config(self):
        """Test initialization with default config."""
        service = MonitoringService()

        assert service.log_checks is True
        assert service.alert_on_failure is True
        assert service.failure_rate_threshold == 0.0

    @override_settings(
        HYPERLAB_MONITORING={
            "LOG_CHECKS": False,
            "ALERT_ON_FAILURE": False,
            "FAILURE_RATE_THRESHOLD": 0.25,
        }
    )
    def test_init_custom_config(self):
        """Test initialization with custom config."""
        service = MonitoringService()

        assert service.log_checks is False
        assert service.alert_on_failure is False
        assert service.failure_rate_threshold == 0.25

    # -------------------------------------------------------------------------
    # Check Event Logging Tests
    # -------------------------------------------------------------------------

    def test_log_check_passed(self):
        """Test logging a passing check."""
        with patch("django_hyperlab.monitoring.check_logger") as mock_logger:
            self.service.log_check_result(_result())

            mock_logger.log.assert_called_once()
            call_args = mock_logger.log.call_args
            assert "Check p81: pass" in call_args[0][1]
            assert call_args[1]["extra"]["check_data"]["event"] == "check_passed"

    def test_log_check_failed_uses_warning(self):
        """Test that failing checks log at warning level."""
        import logging

        with patch("django_hyperlab.monitoring.check_logger") as mock_logger:
            self.service.log_check_result(_result(passed=False))

            assert mock_logger.log.call_args[0][0] == logging.WARNING
            assert "FAIL" in mock_logger.log.call_args[0][1]

    @override_settings(HYPERLAB_MONITORING={"LOG_CHECKS": False})
    def test_logging_disabled_still_counts(self):
        """Test that counters update even when logging is disabled."""
        service = MonitoringService()

        with patch("django_hyperlab.monitoring.check_logger") as mock_logger:
            service.log_check_result(_result())

            mock_logger.log.assert_not_called()
        assert service.get_metrics()["checks_run"] == 1

    def test_log_check_result_counts(self):
        """Test that check results update counters."""
        self.service.log_check_result(_result())
        self.service.log_check_result(_result(passed=False))
        self.service.log_check_result(_result())

        metrics = self.service.get_metrics()
        assert metrics["checks_run"] == 3
        assert metrics["checks_passed"] == 2
        assert metrics["checks_failed"] == 1

    def test_log_skipped_point(self):
        """Test logging a skipped sample point."""
        error = DivergentInput("|x| + |y| < 1 violated")

        with patch("django_hyperlab.monitoring.check_logger") as mock_logger:
            self.service.log_skipped_point("p81", (0.6, 0.5), error)

            check_data = mock_logger.info.call_args[1]["extra"]["check_data"]
            assert check_data["error_code"] == "DIVERGENT_INPUT"
            assert check_data["check"] == "p81"
        assert self.service.get_metrics()["points_skipped"] == 1

    # -------------------------------------------------------------------------
    # Suite Summary Tests
    # -------------------------------------------------------------------------

    def test_suite_summary_without_failures(self):
        """Test that a clean suite sends no alert."""
        with patch.object(self.service, "_send_alert") as mock_alert:
            self.service.log_suite_summary("p81", [_result(), _result()], duration_ms=3.0)
            mock_alert.assert_not_called()

    def test_suite_summary_alerts_on_failure(self):
        """Test that a failed check raises an alert above the threshold."""
        results = [_result(), _result("p81.negative", passed=False)]

        with patch.object(self.service, "_send_alert") as mock_alert:
            self.service.log_suite_summary("p81", results)

            mock_alert.assert_called_once()
            call_args = mock_alert.call_args
            assert call_args[0][0] == "suite_failure"
            assert call_args[1]["severity"] == "high"
            assert call_args[1]["data"]["failed"] == ["p81.negative"]

    @override_settings(HYPERLAB_MONITORING={"FAILURE_RATE_THRESHOLD": 0.5})
    def test_suite_summary_below_threshold(self):
        """Test that no alert is sent when below threshold."""
        service = MonitoringService()
        results = [_result(), _result(), _result("x", passed=False)]

        with patch.object(service, "_send_alert") as mock_alert:
            service.log_suite_summary("p81", results)
            mock_alert.assert_not_called()

    @override_settings(HYPERLAB_MONITORING={"ALERT_ON_FAILURE": False})
    def test_suite_summary_alert_disabled(self):
        """Test that alert is not sent when disabled."""
        service = MonitoringService()

        with patch.object(service, "_send_alert") as mock_alert:
            service.log_suite_summary("p81", [_result(passed=False)])
            mock_alert.assert_not_called()

    def test_send_alert_logs_and_signals(self):
        """Test that alerts are logged and sent via signals."""
        with patch("django_hyperlab.monitoring.logger") as mock_logger:
            with patch("django_hyperlab.signals.verification_alert") as mock_signal:
                self.service._send_alert(
                    alert_type="test_alert",
                    message="Test alert message",
                    severity="high",
                    data={"key": "value"},
                )

                mock_logger.warning.assert_called_once()
                assert "ALERT [HIGH]" in mock_logger.warning.call_args[0][0]
                mock_signal.send.assert_called_once()

    # -------------------------------------------------------------------------
    # Metrics Tests
    # -------------------------------------------------------------------------

    def test_increment_metric(self):
        """Test incrementing a metric."""
        self.service._increment_metric("checks_run")
        self.service._increment_metric("checks_run", value=5)

        assert cache.get(f"{self.service.METRICS_KEY_PREFIX}checks_run") == 6

    def test_reset_metrics(self):
        """Test resetting all metrics."""
        self.service._increment_metric("checks_run", 10)
        self.service._increment_metric("points_skipped", 5)

        self.service.reset_metrics()

        metrics = self.service.get_metrics()
        assert metrics == {
            "checks_run": 0,
            "checks_passed": 0,
            "checks_failed": 0,
            "points_skipped": 0,
        }


class TestGetMonitoringService:
    """Tests for get_monitoring_service function."""

    def test_returns_singleton(self):
        """Test that get_monitoring_service returns a singleton."""
        import django_hyperlab.monitoring as monitoring_module

        monitoring_module._monitoring_service = None

        assert get_monitoring_service() is get_monitoring_service()

    def test_creates_instance_on_first_call(self):
        """Test that instance is created on first call."""
        import django_hyperlab.monitoring as monitoring_module

        monitoring_module._monitoring_service = None

        assert isinstance(get_monitoring_service(), MonitoringService)


class TestMonitorTimingDecorator:
    """Tests for monitor_timing decorator."""

    def test_decorator_times_function(self):
        """Test that decorator times function execution."""

        @monitor_timing("suite.p81")
        def run_suite():
            return "done"

        with patch("django_hyperlab.monitoring.logger") as mock_logger:
            assert run_suite() == "done"

            mock_logger.debug.assert_called_once()
            message = mock_logger.debug.call_args[0][0]
            assert "suite.p81" in message
            assert "ms" in message

    def test_decorator_preserves_function_name(self):
        """Test that decorator preserves function metadata."""

        @monitor_timing("test_metric")
        def my_function():
            """My docstring."""

        assert my_function.__name__ == "my_function"
        assert my_function.__doc__ == "My docstring."

    def test_decorator_handles_exceptions(self):
        """Test that decorator re-raises and still logs."""

        @monitor_timing("failing_operation")
        def failing_function():
            raise DivergentInput("outside the disc")

        with patch("django_hyperlab.monitoring.logger") as mock_logger:
            with pytest.raises(DivergentInput, match="outside the disc"):
                failing_function()
            mock_logger.debug.assert_called_once()
