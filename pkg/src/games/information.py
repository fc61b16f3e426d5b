"""
Value of information under the logarithmic scoring rule.

The expected log-score gain from reporting the posterior given an
information set instead of the prior equals the mutual information between
the outcome and that set.
"""

from dataclasses import dataclass
from typing import Dict, Sequence, Tuple

import numpy as np
from scipy.stats import entropy

from src.bayesnet.base import BayesNet
from src.bayesnet.inference import joint_table, query
from src.utils.constants import GameDefaults


class SignalInteraction:
    """Interaction verdicts."""
    COMPLEMENTS = "complements"
    SUBSTITUTES = "substitutes"
    ADDITIVE = "additive"


def information_value(net: BayesNet, outcome: str, info: Sequence[str]) -> float:
    """E[log r_post(v) - log r_prior(v)] in nats for the information set `info`."""
    info = tuple(info)
    if not info:
        return 0.0
    prior = query(net, [outcome]).values()
    joint = query(net, list(info) + [outcome]).values()
    p_info = joint.sum(axis=-1, keepdims=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(joint > 0, joint * np.log(joint / (p_info * prior)), 0.0)
    return float(terms.sum())


def mutual_information(joint: np.ndarray) -> float:
    """I(X; Y) = H(X) + H(Y) - H(X, Y) for a two-dimensional joint table."""
    joint = np.asarray(joint, dtype=float)
    return float(entropy(joint.sum(axis=1)) + entropy(joint.sum(axis=0)) - entropy(joint.ravel()))


def information_value_by_entropy(net: BayesNet, outcome: str, info: Sequence[str]) -> float:
    """Same quantity as information_value, from the full joint by entropy differences."""
    info = tuple(info)
    if not info:
        return 0.0
    joint = joint_table(net)
    keep = [net.axis[v] for v in info] + [net.axis[outcome]]
    drop = tuple(ax for ax in range(joint.ndim) if ax not in keep)
    marginal = joint.sum(axis=drop)
    order = sorted(keep)
    marginal = np.transpose(marginal, [order.index(ax) for ax in keep])
    return mutual_information(marginal.reshape(-1, marginal.shape[-1]))


@dataclass(frozen=True)
class InteractionReport:
    """Individual and joint information values of two signals."""
    signals: Tuple[str, str]
    v1: float
    v2: float
    v12: float
    verdict: str

    @property
    def interaction(self) -> float:
        return self.v12 - self.v1 - self.v2

    def to_dict(self) -> Dict[str, object]:
        return {
            "signals": list(self.signals),
            "V1": self.v1,
            "V2": self.v2,
            "V12": self.v12,
            "interaction": self.interaction,
            "verdict": self.verdict,
        }


def signal_interaction(net: BayesNet, outcome: str = "v", signals: Sequence[str] = ("s1", "s2")) -> InteractionReport:
    """
    Classify two signals as complements (V12 > V1 + V2), substitutes
    (V12 < V1 + V2) or additive, with a 1e-12 margin.

    Raises:
        ValueError: if other than two signals are given.
    """
    if len(signals) != 2:
        raise ValueError(f"signal interaction compares exactly two signals, got {list(signals)}")
    a, b = signals
    v1 = information_value(net, outcome, [a])
    v2 = information_value(net, outcome, [b])
    v12 = information_value(net, outcome, [a, b])
    margin = GameDefaults.TIE_TOLERANCE
    if v12 > v1 + v2 + margin:
        verdict = SignalInteraction.COMPLEMENTS
    elif v12 < v1 + v2 - margin:
        verdict = SignalInteraction.SUBSTITUTES
    else:
        verdict = SignalInteraction.ADDITIVE
    return InteractionReport(signals=(a, b), v1=v1, v2=v2, v12=v12, verdict=verdict)
