"""
Command reports.

Every command produces one Report value; text and JSON output are both
rendered from `Report.to_dict()`.
"""

from dataclasses import asdict, dataclass, field, is_dataclass
from enum import Enum
from typing import Any, Dict, List, Optional
import hashlib
import json

import numpy as np

from src.cli.metrics import VerificationMetrics
from src.utils.constants import AppMetadata


def to_jsonable(value: Any) -> Any:
    """Plain JSON types for numbers, enums, tuples, arrays and dataclasses."""
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    if is_dataclass(value) and not isinstance(value, type):
        return to_jsonable(asdict(value))
    if isinstance(value, dict):
        return {str(to_jsonable(k)): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = sorted(value) if isinstance(value, (set, frozenset)) else value
        return [to_jsonable(v) for v in items]
    return value


@dataclass
class CheckResult:
    """One verdict with the numbers behind it."""
    id: str
    passed: bool
    numbers: Dict[str, Any] = field(default_factory=dict)
    tolerance: Optional[float] = None
    detail: str = ""
    reference: str = ""
    seconds: float = 0.0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "id": self.id,
            "reference": self.reference,
            "passed": self.passed,
            "tolerance": self.tolerance,
            "numbers": to_jsonable(self.numbers),
            "detail": self.detail,
            "seconds": round(self.seconds, 3),
        }


@dataclass
class Report:
    """Result of one command invocation."""
    command: str
    inputs: Dict[str, Any] = field(default_factory=dict)
    results: List[CheckResult] = field(default_factory=list)
    error: Optional[str] = None
    metrics: VerificationMetrics = field(default_factory=VerificationMetrics)

    def add(self, result: CheckResult) -> CheckResult:
        self.results.append(result)
        self.metrics.record_check(result.passed, result.seconds)
        return result

    @property
    def passed(self) -> bool:
        return self.error is None and all(r.passed for r in self.results)

    @property
    def digest(self) -> str:
        text = json.dumps(to_jsonable(self.inputs), sort_keys=True)
        return hashlib.sha256(text.encode("utf-8")).hexdigest()[:16]

    def first_failure(self) -> Optional[CheckResult]:
        return next((r for r in self.results if not r.passed), None)

    def to_dict(self) -> Dict[str, Any]:
        failure = self.first_failure()
        return {
            "tool": AppMetadata.TITLE,
            "format_version": AppMetadata.FORMAT_VERSION,
            "command": self.command,
            "inputs": to_jsonable(self.inputs),
            "inputs_digest": self.digest,
            "passed": self.passed,
            "error": self.error,
            "first_failure": failure.id if failure else None,
            "results": [r.to_dict() for r in self.results],
            "metrics": self.metrics.get_summary(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def to_text(self) -> str:
        data = self.to_dict()
        lines = [f"{data['tool']} {data['command']}  [inputs {data['inputs_digest']}]"]
        for result in data["results"]:
            mark = "PASS" if result["passed"] else "FAIL"
            head = f"  {mark}  {result['id']}"
            if result["reference"]:
                head += f"  ({result['reference']})"
            lines.append(head)
            for key, value in result["numbers"].items():
                lines.append(f"        {key}: {_short(value)}")
            if result["tolerance"] is not None:
                lines.append(f"        tolerance: {result['tolerance']}")
            if result["detail"]:
                lines.append(f"        {result['detail']}")
        if data["error"]:
            lines.append(f"  ERROR  {data['error']}")
        summary = data["metrics"]
        lines.append(
            f"overall: {'PASS' if data['passed'] else 'FAIL'}"
            f"  ({summary['total_checks']} checks, {summary['total_time']})"
        )
        if data["first_failure"]:
            lines.append(f"first failure: {data['first_failure']}")
        return "\n".join(lines) + "\n"


def _short(value: Any) -> str:
    if isinstance(value, float):
        return f"{value:.10g}"
    return json.dumps(value) if isinstance(value, (list, dict)) else str(value)
