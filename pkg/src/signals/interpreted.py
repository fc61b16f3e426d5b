"""
Interpreted signals over an attribute state space.

A state is a tuple of attribute values; each agent's interpretation is the
projection of the state onto the attributes it observes, and its prediction
is the most likely outcome given that interpretation.
"""

from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple
import math

import numpy as np
from loguru import logger

from src.bayesnet.base import BayesNet, Cpt, Variable
from src.utils.constants import GameDefaults


State = Tuple[int, ...]


class ModelParameterError(ValueError):
    """Raised when a model is built from invalid parameters."""


class ZeroProbabilityInterpretationError(ValueError):
    """Raised when predicting from an interpretation of prior probability zero."""


class TieBreak(str, Enum):
    """Rule for resolving prediction ties."""
    LOWEST = "lowest-outcome"
    HIGHEST = "highest-outcome"


@dataclass(frozen=True)
class AttributeSpace:
    """
    Attributes x1..xK with finite integer domains 0..d-1 and a prior over
    their product, listed in product order (last attribute fastest).
    """
    domains: Tuple[int, ...]
    prior: Tuple[float, ...]
    marginals: Optional[Tuple[Tuple[float, ...], ...]] = None

    @classmethod
    def independent(cls, marginals: Sequence[Sequence[float]]) -> "AttributeSpace":
        marginals = tuple(tuple(float(p) for p in m) for m in marginals)
        prior = tuple(math.prod(ps) for ps in product(*marginals))
        return cls(domains=tuple(len(m) for m in marginals), prior=prior, marginals=marginals)

    @classmethod
    def uniform(cls, attributes: int, size: int = 2) -> "AttributeSpace":
        return cls.independent([[1.0 / size] * size for _ in range(attributes)])

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(f"x{k + 1}" for k in range(len(self.domains)))

    @cached_property
    def states(self) -> Tuple[State, ...]:
        return tuple(product(*(range(d) for d in self.domains)))

    def validate(self) -> None:
        if not self.domains or any(d < 1 for d in self.domains):
            raise ModelParameterError(f"Attribute domains must be positive: {self.domains}")
        if len(self.prior) != math.prod(self.domains):
            raise ModelParameterError(
                f"Prior has {len(self.prior)} entries, expected {math.prod(self.domains)}"
            )
        if any(p < 0 for p in self.prior) or abs(math.fsum(self.prior) - 1.0) > 1e-9:
            raise ModelParameterError("Prior must be a probability vector")


@dataclass(frozen=True)
class InterpretedModel:
    """
    Deterministic outcome v(ω) plus per-agent attribute observations.

    `outcome` lists v for every state in product order; `observers` holds
    each agent's observed attribute indices (0-based).
    """
    space: AttributeSpace
    outcome: Tuple[int, ...]
    observers: Tuple[Tuple[int, ...], ...]
    tie_break: TieBreak = TieBreak.LOWEST
    name: str = ""

    def __post_init__(self):
        self.space.validate()
        if len(self.outcome) != len(self.space.states):
            raise ModelParameterError(
                f"Outcome table has {len(self.outcome)} entries, expected {len(self.space.states)}"
            )
        k = len(self.space.domains)
        for i, subset in enumerate(self.observers):
            if len(set(subset)) != len(subset) or any(a < 0 or a >= k for a in subset):
                raise ModelParameterError(f"Agent {i} observes invalid attributes {subset}")

    @property
    def agents(self) -> int:
        return len(self.observers)

    @cached_property
    def outcome_values(self) -> Tuple[int, ...]:
        return tuple(sorted(set(self.outcome)))

    def interpretation(self, agent: int, state: State) -> State:
        return tuple(state[a] for a in self.observers[agent])

    def interpretations(self, agent: int) -> Tuple[State, ...]:
        return tuple(product(*(range(self.space.domains[a]) for a in self.observers[agent])))

    def _check_agent(self, agent: int) -> None:
        if agent < 0 or agent >= self.agents:
            raise ModelParameterError(f"Agent index {agent} out of range 0..{self.agents - 1}")


def outcome_masses(m: InterpretedModel, agent: int, interp: State) -> Dict[int, float]:
    """Prior mass of each outcome among states consistent with an interpretation."""
    masses = {o: 0.0 for o in m.outcome_values}
    for state, p, v in zip(m.space.states, m.space.prior, m.outcome):
        if m.interpretation(agent, state) == tuple(interp):
            masses[v] += p
    return masses


def predict(m: InterpretedModel, agent: int, interp: Sequence[int]) -> int:
    """
    Most likely outcome given the agent's interpretation.

    Raises:
        ZeroProbabilityInterpretationError: if the interpretation has prior mass 0.
    """
    m._check_agent(agent)
    interp = tuple(interp)
    masses = outcome_masses(m, agent, interp)
    if math.fsum(masses.values()) <= 0.0:
        raise ZeroProbabilityInterpretationError(
            f"Interpretation {interp} of agent {agent} has zero prior probability"
        )
    best = max(masses.values())
    tied = [o for o, p in masses.items() if p >= best - GameDefaults.TIE_TOLERANCE]
    if len(tied) > 1:
        logger.debug(f"Prediction tie for agent {agent} at {interp}: {tied}")
    return tied[0] if m.tie_break == TieBreak.LOWEST else tied[-1]


def prediction_table(m: InterpretedModel, agent: int) -> Tuple[Optional[int], ...]:
    """φ_i(ω) for every state; None where the interpretation has zero mass."""
    cache: Dict[State, Optional[int]] = {}
    table: List[Optional[int]] = []
    for state in m.space.states:
        interp = m.interpretation(agent, state)
        if interp not in cache:
            try:
                cache[interp] = predict(m, agent, interp)
            except ZeroProbabilityInterpretationError:
                cache[interp] = None
        table.append(cache[interp])
    return tuple(table)


@dataclass(frozen=True)
class CorrectnessReport:
    """Correctness indicator per state and the resulting accuracy."""
    agent: int
    delta: Tuple[int, ...]
    accuracy: float


def correctness(m: InterpretedModel, agent: int) -> CorrectnessReport:
    """δ_i(ω) = 1 iff the prediction equals the outcome; accuracy = Pr(δ_i = 1)."""
    m._check_agent(agent)
    predictions = prediction_table(m, agent)
    delta = tuple(int(phi == v) for phi, v in zip(predictions, m.outcome))
    accuracy = math.fsum(p for p, d in zip(m.space.prior, delta) if d)
    return CorrectnessReport(agent=agent, delta=delta, accuracy=accuracy)


def best_constant_accuracy(m: InterpretedModel) -> float:
    """Accuracy of always predicting the most likely outcome."""
    masses = {o: 0.0 for o in m.outcome_values}
    for p, v in zip(m.space.prior, m.outcome):
        masses[v] += p
    return max(masses.values())


@dataclass(frozen=True)
class CorrelationReport:
    """Pearson correlation of two correctness indicators."""
    agents: Tuple[int, int]
    coefficient: Optional[float]
    accuracies: Tuple[float, float]

    @property
    def defined(self) -> bool:
        return self.coefficient is not None


def correctness_correlation(m: InterpretedModel, i: int, j: int) -> CorrelationReport:
    """Correlation of (δ_i, δ_j) under the prior; undefined when either has zero variance."""
    di, dj = correctness(m, i), correctness(m, j)
    prior = np.asarray(m.space.prior)
    a = np.asarray(di.delta, dtype=float)
    b = np.asarray(dj.delta, dtype=float)
    var_a = di.accuracy * (1.0 - di.accuracy)
    var_b = dj.accuracy * (1.0 - dj.accuracy)
    if var_a <= 1e-15 or var_b <= 1e-15:
        return CorrelationReport(agents=(i, j), coefficient=None, accuracies=(di.accuracy, dj.accuracy))
    cov = float(np.dot(prior, a * b)) - di.accuracy * dj.accuracy
    coefficient = cov / math.sqrt(var_a * var_b)
    return CorrelationReport(agents=(i, j), coefficient=coefficient, accuracies=(di.accuracy, dj.accuracy))


def _label(values: Sequence[int]) -> str:
    return "".join(str(v) for v in values) if values else "-"


def to_bayesnet(m: InterpretedModel, with_correctness: bool = False, name: str = "") -> BayesNet:
    """
    Structured network: attributes → interpretations → predictions, and
    attributes → outcome; optionally correctness nodes δ_i ← (φ_i, v).
    """
    space = m.space
    outcome_states = tuple(str(o) for o in m.outcome_values)
    variables: List[Variable] = []
    cpts: List[Cpt] = []

    attribute_parents: Tuple[str, ...]
    if space.marginals is not None:
        for k, attr in enumerate(space.names):
            variables.append(Variable(id=attr, states=tuple(str(s) for s in range(space.domains[k])), ordered=True))
            cpts.append(Cpt(child=attr, parents=(), rows=(space.marginals[k],)))
        attribute_parents = space.names
        outcome_parents = space.names
    else:
        omega_states = tuple(_label(s) for s in space.states)
        variables.append(Variable(id="omega", states=omega_states, ordered=False))
        cpts.append(Cpt(child="omega", parents=(), rows=(tuple(space.prior),)))
        for k, attr in enumerate(space.names):
            variables.append(Variable(id=attr, states=tuple(str(s) for s in range(space.domains[k])), ordered=True))
            cpts.append(Cpt(
                child=attr, parents=("omega",),
                rows=tuple(_one_hot(space.domains[k], s[k]) for s in space.states),
                deterministic=True,
            ))
        attribute_parents = space.names
        outcome_parents = ("omega",)

    variables.append(Variable(id="v", states=outcome_states, ordered=True))
    # product order of the attributes coincides with the omega state order
    v_rows = tuple(_one_hot(len(outcome_states), m.outcome_values.index(o)) for o in m.outcome)
    cpts.append(Cpt(child="v", parents=outcome_parents, rows=v_rows, deterministic=True))

    for i, subset in enumerate(m.observers):
        pi_id, phi_id = f"pi{i + 1}", f"phi{i + 1}"
        interps = m.interpretations(i)
        variables.append(Variable(id=pi_id, states=tuple(_label(x) for x in interps), ordered=False))
        parents = tuple(attribute_parents[a] for a in subset)
        rows = []
        for parent_values in product(*(range(space.domains[a]) for a in subset)):
            rows.append(_one_hot(len(interps), interps.index(tuple(parent_values))))
        cpts.append(Cpt(child=pi_id, parents=parents, rows=tuple(rows), deterministic=True))

        variables.append(Variable(id=phi_id, states=outcome_states, ordered=True))
        phi_rows = []
        for interp in interps:
            try:
                phi = predict(m, i, interp)
            except ZeroProbabilityInterpretationError:
                phi = m.outcome_values[0]
            phi_rows.append(_one_hot(len(outcome_states), m.outcome_values.index(phi)))
        cpts.append(Cpt(child=phi_id, parents=(pi_id,), rows=tuple(phi_rows), deterministic=True))

        if with_correctness:
            delta_id = f"delta{i + 1}"
            variables.append(Variable(id=delta_id, states=("0", "1"), ordered=True))
            delta_rows = []
            for phi_state, v_state in product(outcome_states, outcome_states):
                delta_rows.append((0.0, 1.0) if phi_state == v_state else (1.0, 0.0))
            cpts.append(Cpt(child=delta_id, parents=(phi_id, "v"), rows=tuple(delta_rows), deterministic=True))

    return BayesNet.from_cpts(variables, cpts, name=name or m.name)


def _one_hot(width: int, index: int) -> Tuple[float, ...]:
    return tuple(1.0 if k == index else 0.0 for k in range(width))
