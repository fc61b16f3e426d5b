import sys
import os
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..', '..')))
import pytest
from src.cli.metrics import VerificationMetrics

class TestVerificationMetrics:
    def test_init(self):
        metrics = VerificationMetrics()
        assert metrics.total_checks == 0
        assert len(metrics.check_times) == 0

    def test_empty_summary(self):
        assert VerificationMetrics().get_summary() == {
            "total_checks": 0,
            "pass_rate": "0.0%",
            "total_time": "0.00s",
            "slowest_check": "0.00s",
        }

    def test_record_check(self):
        metrics = VerificationMetrics()
        metrics.record_check(True, 0.5)
        metrics.record_check(False, 1.25)
        metrics.record_check(True)
        summary = metrics.get_summary()
        assert summary["total_checks"] == 3
        assert summary["passed_checks"] == 2
        assert summary["failed_checks"] == 1
        assert summary["pass_rate"] == "66.7%"
        assert summary["total_time"] == "1.75s"
        assert summary["slowest_check"] == "1.25s"
