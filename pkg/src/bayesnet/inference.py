"""
Exact inference by enumeration of the joint state space.

The full joint is materialised once per network as a numpy tensor with one
axis per variable (in declaration order) and cached.
"""

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Dict, Iterable, Optional, Sequence, Tuple
import math

import numpy as np
import pandas as pd
from loguru import logger

from src.bayesnet.base import (
    Assignment,
    BayesNet,
    EnumerationLimitError,
    IncompleteAssignmentError,
    ZeroProbabilityEvidenceError,
)
from src.utils.constants import InferenceDefaults


@dataclass(frozen=True)
class Distribution:
    """Exact distribution over an ordered list of target variables."""
    targets: Tuple[str, ...]
    states: Tuple[Tuple[str, ...], ...]
    table: Dict[Tuple[str, ...], float]
    evidence_probability: float = 1.0

    def probability(self, assignment: Assignment) -> float:
        key = tuple(assignment[t] for t in self.targets)
        return self.table[key]

    def values(self) -> np.ndarray:
        """Probabilities as an array shaped by the target cardinalities."""
        shape = tuple(len(s) for s in self.states)
        return np.array([self.table[k] for k in product(*self.states)]).reshape(shape)

    def to_frame(self) -> pd.DataFrame:
        rows = [list(k) + [p] for k, p in self.table.items()]
        return pd.DataFrame(rows, columns=list(self.targets) + ["probability"])

    def to_dict(self) -> Dict[str, object]:
        return {
            "targets": list(self.targets),
            "evidence_probability": self.evidence_probability,
            "table": [
                {"assignment": dict(zip(self.targets, k)), "probability": p}
                for k, p in self.table.items()
            ],
        }


def joint_table(net: BayesNet, max_states: int = InferenceDefaults.MAX_JOINT_STATES) -> np.ndarray:
    """
    Full joint distribution as a read-only tensor.

    Raises:
        EnumerationLimitError: if the joint state space exceeds max_states.
    """
    count = net.joint_state_count()
    if count > max_states:
        raise EnumerationLimitError(
            f"Joint state space of {count} states exceeds the limit of {max_states}"
        )
    return _cached_joint(net)


@lru_cache(maxsize=128)
def _cached_joint(net: BayesNet) -> np.ndarray:
    shape = tuple(v.cardinality for v in net.variables)
    joint = np.ones(shape, dtype=float)
    for cpt in net.cpts:
        axes = [net.axis[p] for p in cpt.parents] + [net.axis[cpt.child]]
        factor_shape = [net.variable(p).cardinality for p in cpt.parents] + [net.variable(cpt.child).cardinality]
        factor = np.asarray(cpt.rows, dtype=float).reshape(factor_shape)
        order = np.argsort(axes)
        factor = np.transpose(factor, order)
        broadcast = [1] * len(shape)
        for ax in sorted(axes):
            broadcast[ax] = shape[ax]
        joint = joint * factor.reshape(broadcast)
    joint.setflags(write=False)
    logger.debug(f"Materialised joint of '{net.name or 'net'}' with {joint.size} states")
    return joint


def joint_probability(net: BayesNet, full: Assignment) -> float:
    """
    Product of each node's cpt entry under a full assignment.

    Raises:
        IncompleteAssignmentError: if any variable is unbound.
    """
    net.check_assignment(full)
    unbound = [v for v in net.ids if v not in full]
    if unbound:
        raise IncompleteAssignmentError(f"Assignment leaves {unbound} unbound")

    probability = 1.0
    for cpt in net.cpts:
        row = 0
        for parent in cpt.parents:
            var = net.variable(parent)
            row = row * var.cardinality + var.index(full[parent])
        probability *= cpt.rows[row][net.variable(cpt.child).index(full[cpt.child])]
    return probability


def _evidence_slice(net: BayesNet, evidence: Assignment) -> Tuple[slice, ...]:
    index = [slice(None)] * len(net.variables)
    for var_id, state in evidence.items():
        k = net.variable(var_id).index(state)
        index[net.axis[var_id]] = slice(k, k + 1)
    return tuple(index)


def event_probability(net: BayesNet, event: Assignment, max_states: int = InferenceDefaults.MAX_JOINT_STATES) -> float:
    """Pr(event) for a partial assignment."""
    net.check_assignment(event)
    joint = joint_table(net, max_states)
    return float(joint[_evidence_slice(net, event)].sum())


def query(
    net: BayesNet,
    targets: Sequence[str],
    evidence: Optional[Assignment] = None,
    max_states: int = InferenceDefaults.MAX_JOINT_STATES,
) -> Distribution:
    """
    Exact Pr(targets | evidence) by summing the joint over all completions.

    Raises:
        ValueError: if targets repeat or overlap the evidence.
        ZeroProbabilityEvidenceError: if Pr(evidence) = 0.
    """
    evidence = dict(evidence or {})
    targets = tuple(targets)
    if len(set(targets)) != len(targets):
        raise ValueError(f"Targets repeat a variable: {list(targets)}")
    overlap = set(targets) & set(evidence)
    if overlap:
        raise ValueError(f"Targets and evidence share {sorted(overlap)}")
    for t in targets:
        net.variable(t)
    net.check_assignment(evidence)

    joint = joint_table(net, max_states)[_evidence_slice(net, evidence)]
    evidence_probability = float(joint.sum())
    if evidence_probability <= 0.0:
        raise ZeroProbabilityEvidenceError(f"Evidence {evidence} has probability zero")

    target_axes = [net.axis[t] for t in targets]
    drop = tuple(ax for ax in range(joint.ndim) if ax not in target_axes)
    marginal = joint.sum(axis=drop)
    kept = sorted(target_axes)
    marginal = np.transpose(marginal, [kept.index(ax) for ax in target_axes]) if targets else marginal
    marginal = np.asarray(marginal) / evidence_probability

    states = tuple(net.variable(t).states for t in targets)
    table = {}
    for key in product(*states):
        idx = tuple(net.variable(t).index(s) for t, s in zip(targets, key))
        table[key] = float(marginal[idx])
    return Distribution(targets=targets, states=states, table=table, evidence_probability=evidence_probability)


def conditional_mutual_information(
    net: BayesNet,
    x: Iterable[str],
    y: Iterable[str],
    z: Iterable[str] = (),
    max_states: int = InferenceDefaults.MAX_JOINT_STATES,
) -> float:
    """I(X; Y | Z) in nats, computed from the exact joint."""
    x, y, z = tuple(x), tuple(y), tuple(z)
    joint = joint_table(net, max_states)
    keep = [net.axis[v] for v in x + y + z]
    drop = tuple(ax for ax in range(joint.ndim) if ax not in keep)
    marginal = joint.sum(axis=drop)
    order = sorted(keep)
    marginal = np.transpose(marginal, [order.index(ax) for ax in keep])

    nx_, ny_ = len(x), len(y)
    p_xyz = marginal
    p_xz = p_xyz.sum(axis=tuple(range(nx_, nx_ + ny_)), keepdims=True)
    p_yz = p_xyz.sum(axis=tuple(range(nx_)), keepdims=True)
    p_z = p_xz.sum(axis=tuple(range(nx_)), keepdims=True)

    total = 0.0
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = (p_xyz * p_z) / (p_xz * p_yz)
        terms = np.where(p_xyz > 0, p_xyz * np.log(ratio), 0.0)
    total = math.fsum(terms.ravel())
    return max(total, 0.0)
