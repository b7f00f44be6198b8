"""
Tests for django-hyperlab suite registration and the verification runner.
"""

import pytest
from django.test import override_settings

from django_hyperlab import verification
from django_hyperlab.exceptions import DegenerateMu
from django_hyperlab.verification import (
    SUITES,
    VerificationContext,
    VerificationRunner,
    suite_names,
)


class TestSuiteRegistry:
    """Test suite selection."""

    def test_all_excludes_opt_in_suites(self):
        names = suite_names("all")
        assert "periods" not in names
        assert names[:3] == ["p78", "p80", "p81"]
        assert names[-1] == "covers"

    def test_single_suite(self):
        assert suite_names("periods") == ["periods"]

    def test_unknown_suite(self):
        with pytest.raises(ValueError, match="Unknown suite 'p99'"):
            suite_names("p99")

    def test_suite_count(self):
        assert len(SUITES) == 17


class TestVerificationContext:
    """Test per-suite random streams."""

    def test_same_seed_same_stream(self):
        first = VerificationContext(seed=7).rng("p81").integers(0, 1000, size=5)
        second = VerificationContext(seed=7).rng("p81").integers(0, 1000, size=5)
        assert list(first) == list(second)

    def test_streams_differ_between_suites(self):
        context = VerificationContext(seed=7)
        first = context.rng("p81").integers(0, 2**32, size=4)
        second = context.rng("lemma_phi").integers(0, 2**32, size=4)
        assert list(first) != list(second)

    def test_identity_tol(self):
        assert VerificationContext(seed=0).identity_tol() == 1e-9
        assert VerificationContext(seed=0, tol=1e-6).identity_tol() == 1e-6


@pytest.mark.django_db
class TestVerificationRunner:
    """Test running suites end to end."""

    def test_defaults_from_settings(self):
        runner = VerificationRunner()
        assert runner.context.draws == 20
        assert runner.context.jobs == 1

    @override_settings(HYPERLAB_SEED=11)
    def test_seed_from_settings(self):
        assert VerificationRunner().seed == 11

    @pytest.mark.parametrize(
        "suite,count",
        [("covers", 3), ("hermitian", 1), ("gamma1_3", 6), ("specialization", 12)],
    )
    def test_exact_suites_pass(self, monitoring_service, suite, count):
        results = VerificationRunner(seed=3).run(suite)
        assert len(results) == count
        assert all(result.passed for result in results), [r.to_dict() for r in results]
        assert monitoring_service.get_metrics()["checks_passed"] == count

    def test_p81_suite(self, monitoring_service):
        results = VerificationRunner(seed=3).run("p81")
        assert [result.check_id for result in results] == ["p81", "p81.random", "p81.negative"]
        assert all(result.passed for result in results)
        assert results[2].details["negative_control"] is True

    @pytest.mark.parametrize(
        "suite,negatives",
        [
            ("lemma_phi", ["lemma_phi.negative"]),
            (
                "lemma_indefinite",
                [f"lemma_indefinite.{name}.negative" for name in ("R1", "P1", "Q1")],
            ),
            ("matome", ["matome.negative"]),
            ("pairing", ["pairing.negative"]),
        ],
    )
    def test_suites_carry_negative_controls(self, monitoring_service, suite, negatives):
        results = VerificationRunner(seed=3, draws=5).run(suite)
        controls = [r for r in results if r.details.get("negative_control")]
        assert [r.check_id for r in controls] == negatives
        assert all(r.passed for r in controls), [r.to_dict() for r in controls]

    def test_monodromy_suites(self, monitoring_service):
        runner = VerificationRunner(seed=3, draws=5)
        for suite in ("intersection_det", "pairing"):
            results = runner.run(suite)
            assert all(result.passed for result in results), suite

    def test_gamma1_3_is_reproducible(self):
        first = VerificationRunner(seed=5).run("gamma1_3")
        second = VerificationRunner(seed=5).run("gamma1_3")
        assert [r.to_dict() for r in first] == [r.to_dict() for r in second]

    def test_aborted_suite_reports_error(self, monitoring_service):
        def broken(ctx):
            raise DegenerateMu("mu_1 = 1")

        verification.register_suite("broken", in_all=False)(broken)
        try:
            results = VerificationRunner(seed=0).run("broken")
        finally:
            SUITES.pop("broken")
        assert len(results) == 1
        assert not results[0].passed
        assert results[0].details["error_code"] == "DEGENERATE_MU"

    @pytest.mark.slow
    def test_periods_suite_samples_both_regions(self, monitoring_service):
        results = {r.check_id: r for r in VerificationRunner(seed=3).run("periods")}
        for check_id in ("periods.disc_sign", "periods.disc_sign_upper"):
            assert results[check_id].passed, results[check_id].to_dict()
            assert results[check_id].grid_size == 20

    @pytest.mark.slow
    def test_annihilation_suite(self, monitoring_service):
        results = VerificationRunner(seed=3).run("annihilation")
        assert all(result.passed for result in results), [r.check_id for r in results]
