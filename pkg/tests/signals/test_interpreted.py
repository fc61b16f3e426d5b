import sys
import os
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..', '..')))
import pytest
from src.bayesnet.base import validate
from src.bayesnet.inference import event_probability, query
from src.signals.canonical import appendix_a_model, majority_model
from src.signals.interpreted import (
    AttributeSpace,
    InterpretedModel,
    ModelParameterError,
    TieBreak,
    ZeroProbabilityInterpretationError,
    best_constant_accuracy,
    correctness,
    correctness_correlation,
    outcome_masses,
    predict,
    prediction_table,
    to_bayesnet,
)


@pytest.fixture
def single_attribute_views():
    """Majority of three bits, agents see x1 and x2 respectively."""
    return majority_model([(0,), (1,)])


@pytest.fixture
def overlapping_views():
    return majority_model([(0, 1), (1, 2)])


class TestAttributeSpace:
    def test_uniform_prior(self):
        space = AttributeSpace.uniform(3)
        assert len(space.states) == 8
        assert space.prior == pytest.approx((0.125,) * 8)
        assert space.names == ("x1", "x2", "x3")

    def test_product_order(self):
        space = AttributeSpace.independent([[0.5, 0.5], [0.2, 0.3, 0.5]])
        assert space.states[:3] == ((0, 0), (0, 1), (0, 2))
        assert space.prior[2] == pytest.approx(0.25)

    def test_invalid_prior(self):
        with pytest.raises(ModelParameterError):
            AttributeSpace(domains=(2,), prior=(0.7, 0.7)).validate()
        with pytest.raises(ModelParameterError):
            AttributeSpace(domains=(2, 2), prior=(0.5, 0.5)).validate()


class TestInterpretedModel:
    def test_outcome_length_checked(self):
        with pytest.raises(ModelParameterError):
            InterpretedModel(space=AttributeSpace.uniform(2), outcome=(0, 1, 1), observers=((0,),))

    def test_observer_range_checked(self):
        with pytest.raises(ModelParameterError):
            InterpretedModel(space=AttributeSpace.uniform(2), outcome=(0, 1, 1, 1), observers=((2,),))

    def test_agent_index_checked(self, single_attribute_views):
        with pytest.raises(ModelParameterError):
            predict(single_attribute_views, 2, (0,))


class TestPrediction:
    def test_single_bit_predicts_itself(self, single_attribute_views):
        assert predict(single_attribute_views, 0, (1,)) == 1
        assert predict(single_attribute_views, 0, (0,)) == 0
        masses = outcome_masses(single_attribute_views, 0, (1,))
        assert masses == {0: pytest.approx(0.125), 1: pytest.approx(0.375)}

    def test_tie_break_rule(self, overlapping_views):
        # agent 1 seeing (x1, x2) = (0, 1) has outcome 0 and 1 equally likely
        assert predict(overlapping_views, 0, (0, 1)) == 0
        highest = InterpretedModel(
            space=overlapping_views.space,
            outcome=overlapping_views.outcome,
            observers=overlapping_views.observers,
            tie_break=TieBreak.HIGHEST,
        )
        assert predict(highest, 0, (0, 1)) == 1

    def test_zero_probability_interpretation(self):
        model = InterpretedModel(
            space=AttributeSpace(domains=(2,), prior=(1.0, 0.0)),
            outcome=(0, 1),
            observers=((0,),),
        )
        with pytest.raises(ZeroProbabilityInterpretationError):
            predict(model, 0, (1,))
        assert prediction_table(model, 0) == (0, None)


class TestCorrectness:
    def test_accuracy(self, single_attribute_views):
        report = correctness(single_attribute_views, 0)
        assert report.accuracy == pytest.approx(0.75)
        assert len(report.delta) == 8
        assert best_constant_accuracy(single_attribute_views) == pytest.approx(0.5)

    def test_correlation_is_negative(self, single_attribute_views):
        report = correctness_correlation(single_attribute_views, 0, 1)
        assert report.defined
        # Pr(both correct) = Pr(x1 = x2) = 1/2 against 0.75² for independent errors
        assert report.coefficient == pytest.approx(-1.0 / 3.0)
        assert report.accuracies == pytest.approx((0.75, 0.75))

    def test_correlation_undefined_for_perfect_agent(self):
        model = InterpretedModel(
            space=AttributeSpace.uniform(2),
            outcome=(0, 0, 1, 1),
            observers=((0,), (1,)),
        )
        assert correctness(model, 0).accuracy == pytest.approx(1.0)
        report = correctness_correlation(model, 0, 1)
        assert report.coefficient is None
        assert not report.defined


class TestToBayesNet:
    def test_structure(self, single_attribute_views):
        net = to_bayesnet(single_attribute_views)
        assert validate(net).is_valid
        assert set(net.ids) == {"x1", "x2", "x3", "v", "pi1", "phi1", "pi2", "phi2"}
        assert net.parents("pi1") == ("x1",)
        assert net.parents("phi1") == ("pi1",)

    def test_correctness_nodes(self, single_attribute_views):
        net = to_bayesnet(single_attribute_views, with_correctness=True)
        assert net.parents("delta1") == ("phi1", "v")
        assert event_probability(net, {"delta1": "1"}) == pytest.approx(0.75)
        assert event_probability(net, {"delta1": "1", "delta2": "1"}) == pytest.approx(0.5)

    def test_disjunction_predictions(self):
        net = to_bayesnet(appendix_a_model())
        dist = query(net, ["phi1"], {"x1": "0"})
        # x1 = 0 leaves v = x2, a fair coin; the tie resolves to the lowest outcome
        assert dist.probability({"phi1": "0"}) == pytest.approx(1.0)

    def test_correlated_prior_uses_state_node(self):
        model = InterpretedModel(
            space=AttributeSpace(domains=(2, 2), prior=(0.4, 0.1, 0.1, 0.4)),
            outcome=(0, 1, 1, 1),
            observers=((0,), (1,)),
        )
        net = to_bayesnet(model)
        assert "omega" in net.ids
        assert not net.variable("omega").ordered
        assert event_probability(net, {"x1": "1", "x2": "1"}) == pytest.approx(0.4)
