import sys
import os
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..', '..')))
import math
import numpy as np
import pytest
from src.games.information import (
    SignalInteraction,
    information_value,
    information_value_by_entropy,
    mutual_information,
    signal_interaction,
)
from src.signals.canonical import build_canonical
from src.utils.constants import CanonicalModelId


def _binary_entropy(p: float) -> float:
    return -(p * math.log(p) + (1 - p) * math.log(1 - p))


@pytest.fixture
def disjunction():
    return build_canonical(CanonicalModelId.APPENDIX_A)


@pytest.fixture
def noisy_copies():
    return build_canonical(CanonicalModelId.FIG4A)


class TestInformationValue:
    def test_disjunction_values(self, disjunction):
        # v is 1 w.p. 3/4 and a function of both signals
        assert information_value(disjunction, "v", ["s1", "s2"]) == pytest.approx(_binary_entropy(0.25))
        assert information_value(disjunction, "v", ["s1", "s2"]) == pytest.approx(0.562335, abs=1e-6)
        assert information_value(disjunction, "v", ["s1"]) == pytest.approx(
            _binary_entropy(0.25) - 0.5 * math.log(2)
        )

    def test_noisy_copy(self, noisy_copies):
        assert information_value(noisy_copies, "v", ["s1"]) == pytest.approx(0.130812, abs=1e-6)

    def test_empty_information(self, noisy_copies):
        assert information_value(noisy_copies, "v", []) == 0.0
        assert information_value_by_entropy(noisy_copies, "v", []) == 0.0

    @pytest.mark.parametrize("info", [["s1"], ["s2"], ["s1", "s2"]])
    def test_entropy_route_agrees(self, disjunction, noisy_copies, info):
        for net in (disjunction, noisy_copies):
            assert information_value_by_entropy(net, "v", info) == pytest.approx(
                information_value(net, "v", info), abs=1e-12
            )

    def test_mutual_information_of_product(self):
        assert mutual_information(np.outer([0.3, 0.7], [0.5, 0.5])) == pytest.approx(0.0, abs=1e-12)
        assert mutual_information(np.array([[0.5, 0.0], [0.0, 0.5]])) == pytest.approx(math.log(2))


class TestSignalInteraction:
    def test_complements(self, disjunction):
        report = signal_interaction(disjunction)
        assert report.verdict == SignalInteraction.COMPLEMENTS
        assert report.interaction > 0.0
        assert report.to_dict()["V12"] == pytest.approx(report.v12)

    def test_substitutes(self, noisy_copies):
        report = signal_interaction(noisy_copies)
        assert report.verdict == SignalInteraction.SUBSTITUTES
        assert report.v1 == pytest.approx(report.v2)

    def test_additive(self):
        net = build_canonical(CanonicalModelId.FIG1B)
        report = signal_interaction(net, "v1", ("s1", "s2"))
        assert report.verdict == SignalInteraction.ADDITIVE
        assert report.v2 == pytest.approx(0.0, abs=1e-12)

    def test_two_signals_only(self, disjunction):
        with pytest.raises(ValueError):
            signal_interaction(disjunction, "v", ["s1"])
