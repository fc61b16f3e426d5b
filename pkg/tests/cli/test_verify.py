import sys
import os
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..', '..')))
from pathlib import Path
import pytest
from unittest.mock import patch
from src.bayesnet.base import BayesNet
from src.cli.report import CheckResult
from src.cli.verify import VerifyContext, criterion_ids, fixture_name, run_verification
from src.utils.config_loader import EngineSettings
from src.utils.constants import CanonicalModelId

MODELS_DIR = Path(__file__).resolve().parents[2] / "data" / "models"


class TestFixtures:
    def test_fixture_names(self):
        assert fixture_name(CanonicalModelId.APPENDIX_A) == "appendix_a.json"
        assert fixture_name("Fig1d") == "fig1d.json"
        assert fixture_name(CanonicalModelId.FIG5_CHANCE) == "fig5chance.json"

    def test_every_canonical_fixture_is_bundled(self):
        for model_id in CanonicalModelId:
            assert (MODELS_DIR / fixture_name(model_id)).exists()

    def test_interpreted_fixture_expands(self):
        ctx = VerifyContext(models_dir=MODELS_DIR, settings=EngineSettings(), seed=0)
        net = ctx.world(CanonicalModelId.FIG3A)
        assert isinstance(net, BayesNet)
        assert net.name == "Fig3a"


class TestRunVerification:
    def test_criterion_order(self):
        assert criterion_ids() == [
            "appendix-a-affiliation",
            "fingerprints",
            "theorem1",
            "theorem5-qualitative",
            "theorem5-numeric",
            "correctness-correlation",
            "ci-uniqueness",
            "interpretation-bound",
            "msr-dichotomy",
            "infrastructure",
        ]

    def test_unknown_criterion(self):
        with pytest.raises(ValueError):
            run_verification(MODELS_DIR, ["theorem9"])

    def test_subset(self):
        report = run_verification(MODELS_DIR, ["fingerprints", "appendix-a-affiliation"])
        assert report.passed
        assert [r.id for r in report.results] == ["appendix-a-affiliation", "fingerprints"]
        assert report.results[0].reference == "disjunction world"
        assert report.results[0].numbers["affiliation"] == "violated"
        assert report.inputs["seed"] == 0

    def test_seed_argument_wins(self):
        report = run_verification(MODELS_DIR, ["appendix-a-affiliation"], seed=5, settings=EngineSettings(seed=2))
        assert report.inputs["seed"] == 5

    def test_raising_criterion_fails_softly(self):
        def boom(ctx):
            raise RuntimeError("boom")

        def fine(ctx):
            return CheckResult(id="", passed=True, numbers={"ok": 1})

        with patch("src.cli.verify.CRITERIA", [("first", "a", boom), ("second", "b", fine)]):
            report = run_verification(MODELS_DIR)
        assert not report.passed
        assert report.first_failure().id == "first"
        assert report.results[0].detail == "RuntimeError: boom"
        assert report.results[1].passed

    def test_missing_models_dir_fails(self, tmp_path):
        report = run_verification(tmp_path, ["appendix-a-affiliation"])
        assert not report.passed
        assert report.results[0].detail.startswith("FileNotFoundError")

    def test_full_suite_passes(self):
        report = run_verification(MODELS_DIR)
        failure = report.first_failure()
        assert report.passed, failure.to_dict() if failure else report.error
        assert len(report.results) == len(criterion_ids())

    def test_settings_reach_criteria(self):
        report = run_verification(MODELS_DIR, ["fingerprints"], settings=EngineSettings(max_joint_states=4))
        assert not report.passed
        assert report.results[0].detail.startswith("EnumerationLimitError")

    def test_ci_uniqueness_finds_configurations(self):
        report = run_verification(MODELS_DIR, ["ci-uniqueness"])
        numbers = report.results[0].numbers
        assert report.passed
        assert numbers["K=2"] == 0
        assert numbers["K=3"] > 0
        assert numbers["and_pair_excluded"] is True

    def test_ci_uniqueness_fails_on_empty_search(self):
        with patch("src.cli.verify.search_ci_outcome_functions", return_value=[]):
            report = run_verification(MODELS_DIR, ["ci-uniqueness"])
        assert not report.passed
        assert "no conditionally independent configuration" in report.results[0].detail

    def test_numeric_curse_covers_noisy_values(self):
        report = run_verification(MODELS_DIR, ["theorem5-numeric"])
        numbers = report.results[0].numbers
        assert report.passed
        assert numbers["curse_at_equilibrium"] == pytest.approx(-3.0 / 44.0)
        assert numbers["noisy_value_curse_at_equilibrium"] == pytest.approx(-3.0 / 188.0)

    def test_qualitative_curse_reports_open_attribute_policy(self):
        report = run_verification(MODELS_DIR, ["theorem5-qualitative"])
        numbers = report.results[0].numbers
        assert report.passed
        assert numbers["fig5_policy_b1"] == "+"
        assert numbers["fig6_policy_b1"] == "?"
        assert numbers["fig6_winners_curse"] is True
