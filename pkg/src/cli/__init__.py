"""
Command-line front end and the verify-paper acceptance suite.
"""

from src.cli.metrics import VerificationMetrics
from src.cli.report import CheckResult, Report, to_jsonable
from src.cli.verify import CRITERIA, criterion_ids, fixture_name, run_verification
