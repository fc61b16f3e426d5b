import sys
import os
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..', '..')))
import pytest
from src.bayesnet.base import EnumerationLimitError
from src.signals.canonical import build_canonical, canonical_interpreted
from src.signals.checks import (
    AffiliationVerdict,
    UnorderedVariableError,
    check_affiliation,
    check_affiliation_pair,
    check_independence,
)
from src.signals.interpreted import to_bayesnet
from src.utils.constants import CanonicalModelId


@pytest.fixture
def appendix_world():
    return build_canonical(CanonicalModelId.APPENDIX_A)


class TestIndependence:
    def test_common_value_signals(self):
        net = build_canonical(CanonicalModelId.FIG1C)
        assert check_independence(net, ["s1"], ["s2"], ["v"]).independent
        report = check_independence(net, ["s1"], ["s2"])
        assert not report.independent
        # Pr(s1=1, s2=1) - Pr(s1=1)·Pr(s2=1) = 0.3125 - 0.25
        assert report.max_deviation == pytest.approx(0.0625)

    def test_explaining_away(self, appendix_world):
        assert check_independence(appendix_world, ["s1"], ["s2"]).independent
        assert not check_independence(appendix_world, ["s1"], ["s2"], ["v"]).independent

    def test_report_keeps_sets(self, appendix_world):
        report = check_independence(appendix_world, ["s1"], ["s2"], ["v"])
        assert (report.x, report.y, report.given) == (("s1",), ("s2",), ("v",))

    def test_overlap_rejected(self, appendix_world):
        with pytest.raises(ValueError):
            check_independence(appendix_world, ["s1"], ["s1"])

    def test_state_limit_is_honoured(self, appendix_world):
        with pytest.raises(EnumerationLimitError):
            check_independence(appendix_world, ["s1"], ["s2"], ["v"], max_states=4)
        assert check_independence(appendix_world, ["s1"], ["s2"], max_states=8).independent


class TestAffiliation:
    def test_disjunction_violates_affiliation(self, appendix_world):
        report = check_affiliation(appendix_world, ("s1", "s2", "v"))
        assert report.verdict == AffiliationVerdict.VIOLATED
        witness = report.witness
        assert witness.point == ("0", "1", "1")
        assert witness.other == ("1", "0", "1")
        assert witness.join == ("1", "1", "1")
        assert witness.meet == ("0", "0", "1")
        assert witness.lattice_product == 0.0
        assert witness.cross_product == 1.0 / 16
        assert witness.gap == 1.0 / 16
        assert "<" in witness.describe()

    def test_pair_given_winning_value(self, appendix_world):
        report = check_affiliation_pair(appendix_world, "s1", "s2", {"v": "1"})
        assert report.verdict == AffiliationVerdict.VIOLATED
        assert report.pair == ("s1", "s2")
        assert report.pairs_checked == 1

    def test_common_value_signals_affiliated(self):
        net = build_canonical(CanonicalModelId.FIG1C)
        report = check_affiliation(net, ("s1", "s2", "v"))
        assert report.verdict == AffiliationVerdict.AFFILIATED
        assert report.witness is None
        assert report.pairs_checked > 0

    def test_zero_probability_conditioning(self, appendix_world):
        report = check_affiliation(appendix_world, ("s2",), {"s1": "1", "v": "0"})
        assert report.verdict == AffiliationVerdict.DEGENERATE
        assert report.pairs_checked == 0

    def test_unordered_variable(self):
        net = build_canonical(CanonicalModelId.FIG2A)
        with pytest.raises(UnorderedVariableError):
            check_affiliation(net, ("omega", "s1"))

    def test_interpretation_labels_are_unordered(self):
        net = to_bayesnet(canonical_interpreted(CanonicalModelId.FIG3A))
        with pytest.raises(UnorderedVariableError):
            check_affiliation(net, ("pi1", "v"))
        assert check_affiliation(net, ("phi1", "v")).pairs_checked > 0
