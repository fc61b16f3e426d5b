"""
Timing and pass counts for verification runs.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List


@dataclass
class VerificationMetrics:
    """Metrics for tracking check outcomes and runtime."""
    total_checks: int = 0
    passed_checks: int = 0
    failed_checks: int = 0
    check_times: List[float] = field(default_factory=list)

    def record_check(self, passed: bool, time_seconds: float = 0.0):
        """Record metrics for a single check."""
        self.total_checks += 1
        if passed:
            self.passed_checks += 1
        else:
            self.failed_checks += 1
        self.check_times.append(time_seconds)

    def get_summary(self) -> Dict[str, Any]:
        """Get summary of metrics."""
        if self.total_checks == 0:
            return {
                "total_checks": 0,
                "pass_rate": "0.0%",
                "total_time": "0.00s",
                "slowest_check": "0.00s",
            }

        pass_rate = (self.passed_checks / self.total_checks) * 100
        return {
            "total_checks": self.total_checks,
            "pass_rate": f"{pass_rate:.1f}%",
            "total_time": f"{sum(self.check_times):.2f}s",
            "slowest_check": f"{max(self.check_times):.2f}s",
            "passed_checks": self.passed_checks,
            "failed_checks": self.failed_checks,
        }
