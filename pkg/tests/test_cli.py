"""
Tests for the hyperlab console entry point.
"""

import io
import json

from django_hyperlab import cli


def invoke(*argv):
    stdout, stderr = io.StringIO(), io.StringIO()
    code = cli.run(list(argv), stdout=stdout, stderr=stderr)
    return code, stdout.getvalue(), stderr.getvalue()


class TestRun:
    """Test exit codes and output routing of cli.run."""

    def test_success(self):
        code, out, err = invoke("covers", "--max-n", "12")
        assert code == 0
        assert "(6;2,2,3,3)" in out
        assert err == ""

    def test_json_document(self):
        args = ["--a", "1", "--b", "1", "--c", "2", "--x", "0.5"]
        code, out, _ = invoke("eval", "f", *args, "--format", "json")
        assert code == 0
        assert json.loads(out)["series"] == "F"

    def test_missing_subcommand_is_usage_error(self):
        code, _, err = invoke()
        assert code == 2
        assert "subcommand" in err

    def test_unknown_subcommand_is_usage_error(self):
        code, _, _ = invoke("integrate")
        assert code == 2

    def test_domain_error_exit_code(self):
        code, _, err = invoke("eval", "f", "--a", "1", "--b", "1", "--c", "-1", "--x", "0.5")
        assert code == 2
        assert "POLE_PARAMETER" in err

    def test_failed_check_exit_code(self, monitoring_service):
        from django_hyperlab import verification
        from django_hyperlab.reports import CheckResult

        verification.register_suite("always_fails", in_all=False)(
            lambda ctx: [CheckResult(check_id="always_fails.check", passed=False)]
        )
        try:
            code, out, err = invoke("verify", "always_fails")
        finally:
            verification.SUITES.pop("always_fails")
        assert code == 1
        assert "FAIL  always_fails.check" in out
        assert "1 check(s) failed" in err


class TestEnsureDjango:
    """Test settings bootstrap."""

    def test_configured_settings_are_kept(self, settings):
        cli.ensure_django()
        assert settings.HYPERLAB_RANDOM_DRAWS == 20
