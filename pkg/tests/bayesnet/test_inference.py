import sys
import os
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..', '..')))
import math
import pytest
from src.bayesnet.base import (
    BayesNet,
    Cpt,
    EnumerationLimitError,
    IncompleteAssignmentError,
    Variable,
    ZeroProbabilityEvidenceError,
)
from src.bayesnet.inference import (
    conditional_mutual_information,
    event_probability,
    joint_probability,
    joint_table,
    query,
)

BINARY = ("0", "1")


@pytest.fixture
def common_value() -> BayesNet:
    """v with two noisy copies of accuracy 0.75."""
    copy = ((0.75, 0.25), (0.25, 0.75))
    return BayesNet.from_cpts(
        [Variable("v", BINARY, True), Variable("s1", BINARY, True), Variable("s2", BINARY, True)],
        [Cpt("v", (), ((0.5, 0.5),)), Cpt("s1", ("v",), copy), Cpt("s2", ("v",), copy)],
        name="common-value",
    )


@pytest.fixture
def disjunction() -> BayesNet:
    """v = s1 OR s2 with uniform independent signals."""
    return BayesNet.from_cpts(
        [Variable("s1", BINARY, True), Variable("s2", BINARY, True), Variable("v", BINARY, True)],
        [
            Cpt("s1", (), ((0.5, 0.5),)),
            Cpt("s2", (), ((0.5, 0.5),)),
            Cpt("v", ("s1", "s2"), ((1.0, 0.0), (0.0, 1.0), (0.0, 1.0), (0.0, 1.0)), deterministic=True),
        ],
    )


class TestJoint:
    def test_joint_sums_to_one(self, common_value):
        assert joint_table(common_value).sum() == pytest.approx(1.0)

    def test_joint_probability_is_product_of_cpts(self, common_value):
        p = joint_probability(common_value, {"v": "1", "s1": "1", "s2": "0"})
        assert p == pytest.approx(0.5 * 0.75 * 0.25)

    def test_incomplete_assignment(self, common_value):
        with pytest.raises(IncompleteAssignmentError):
            joint_probability(common_value, {"v": "1"})

    def test_enumeration_limit(self, common_value):
        with pytest.raises(EnumerationLimitError):
            joint_table(common_value, max_states=4)

    def test_joint_is_read_only(self, common_value):
        with pytest.raises(ValueError):
            joint_table(common_value)[0, 0, 0] = 1.0


class TestQuery:
    def test_posterior_of_value(self, common_value):
        dist = query(common_value, ["v"], {"s1": "1"})
        assert dist.probability({"v": "1"}) == pytest.approx(0.75)
        assert dist.evidence_probability == pytest.approx(0.5)

    def test_signals_correlated(self, common_value):
        dist = query(common_value, ["s2"], {"s1": "1"})
        assert dist.probability({"s2": "1"}) == pytest.approx(0.625)

    def test_target_order_is_kept(self, common_value):
        dist = query(common_value, ["s1", "v"])
        assert dist.values().shape == (2, 2)
        assert dist.probability({"s1": "0", "v": "1"}) == pytest.approx(0.125)

    def test_disjunction_exact(self, disjunction):
        dist = query(disjunction, ["s1", "s2", "v"])
        for key in (("0", "0", "0"), ("1", "0", "1"), ("0", "1", "1"), ("1", "1", "1")):
            assert dist.table[key] == 0.25
        assert sum(dist.table.values()) == 1.0

    def test_zero_probability_evidence(self, disjunction):
        with pytest.raises(ZeroProbabilityEvidenceError):
            query(disjunction, ["s2"], {"s1": "1", "v": "0"})

    def test_overlap_rejected(self, common_value):
        with pytest.raises(ValueError):
            query(common_value, ["v"], {"v": "1"})

    def test_event_probability(self, disjunction):
        assert event_probability(disjunction, {"v": "1"}) == pytest.approx(0.75)

    def test_to_dict(self, common_value):
        data = query(common_value, ["v"]).to_dict()
        assert data["targets"] == ["v"]
        assert [row["probability"] for row in data["table"]] == pytest.approx([0.5, 0.5])


class TestMutualInformation:
    def test_independent_given_value(self, common_value):
        assert conditional_mutual_information(common_value, ["s1"], ["s2"], ["v"]) == pytest.approx(0.0, abs=1e-12)

    def test_dependent_marginally(self, common_value):
        assert conditional_mutual_information(common_value, ["s1"], ["s2"]) > 1e-3

    def test_explaining_away(self, disjunction):
        assert conditional_mutual_information(disjunction, ["s1"], ["s2"]) == pytest.approx(0.0, abs=1e-12)
        cmi = conditional_mutual_information(disjunction, ["s1"], ["s2"], ["v"])
        assert cmi > 0.0
        assert cmi == pytest.approx(_cmi_given_or())


def _cmi_given_or() -> float:
    # given v=1 the pair is uniform on {10, 01, 11}
    joint = {(1, 0): 1 / 3, (0, 1): 1 / 3, (1, 1): 1 / 3}
    ps1 = {0: 1 / 3, 1: 2 / 3}
    ps2 = {0: 1 / 3, 1: 2 / 3}
    total = sum(p * math.log(p / (ps1[a] * ps2[b])) for (a, b), p in joint.items())
    return 0.75 * total
