"""
Exhaustive searches over small interpreted-signal models.

All searches work on uniform binary attribute spaces (or uniform state
spaces for partition search) and return results in a canonical order:
outcome functions by their integer code, observer subsets by size then
lexicographically.
"""

from dataclasses import dataclass, field
from itertools import combinations, combinations_with_replacement, product
from typing import Iterator, List, Optional, Sequence, Tuple
import math

import numpy as np
from loguru import logger

from src.signals.checks import IndependenceReport
from src.signals.interpreted import AttributeSpace, InterpretedModel
from src.utils.constants import GameDefaults, InferenceDefaults, SearchBounds


class SearchBoundError(ValueError):
    """Raised when a search is requested beyond its exhaustive bound."""


@dataclass(frozen=True)
class SignalConfiguration:
    """Binary outcome function over K uniform attributes plus observer subsets."""
    attributes: int
    outcome: Tuple[int, ...]
    observers: Tuple[Tuple[int, ...], ...]
    accuracies: Tuple[float, ...] = ()
    max_deviation: float = 0.0
    coefficient: Optional[float] = None

    @property
    def missing_attributes(self) -> Tuple[Tuple[int, ...], ...]:
        return tuple(tuple(a for a in range(self.attributes) if a not in obs) for obs in self.observers)

    def to_model(self) -> InterpretedModel:
        return InterpretedModel(
            space=AttributeSpace.uniform(self.attributes),
            outcome=self.outcome,
            observers=self.observers,
        )


def _state_matrix(attributes: int) -> np.ndarray:
    return np.array(list(product((0, 1), repeat=attributes)), dtype=int).reshape(-1, attributes)


def _subsets(attributes: int) -> List[Tuple[int, ...]]:
    return [s for r in range(1, attributes + 1) for s in combinations(range(attributes), r)]


def _outcome_functions(attributes: int) -> Iterator[Tuple[int, ...]]:
    n = 2 ** attributes
    for code in range(2 ** n):
        yield tuple((code >> (n - 1 - k)) & 1 for k in range(n))


def _labels(states: np.ndarray, subset: Sequence[int]) -> np.ndarray:
    if not subset:
        return np.zeros(states.shape[0], dtype=int)
    cols = states[:, list(subset)]
    return cols @ (2 ** np.arange(len(subset) - 1, -1, -1))


def _predictions(labels: np.ndarray, outcome: np.ndarray, prior: np.ndarray) -> Tuple[np.ndarray, float]:
    """Per-state argmax prediction (lowest outcome on ties) and its accuracy."""
    masses = np.zeros((int(labels.max()) + 1, 2))
    np.add.at(masses, (labels, outcome), prior)
    best = masses.max(axis=1, keepdims=True)
    choice = np.argmax(masses >= best - GameDefaults.TIE_TOLERANCE, axis=1)
    predictions = choice[labels]
    return predictions, float(prior[predictions == outcome].sum())


def _dependence(prior: np.ndarray, a: np.ndarray, b: np.ndarray, c: Optional[np.ndarray] = None) -> float:
    """Max |Pr(a, b | c) - Pr(a | c)Pr(b | c)| over c of positive mass."""
    c = np.zeros_like(a) if c is None else c
    table = np.zeros((int(a.max()) + 1, int(b.max()) + 1, int(c.max()) + 1))
    np.add.at(table, (a, b, c), prior)
    p_c = table.sum(axis=(0, 1), keepdims=True)
    p_ac = table.sum(axis=1, keepdims=True)
    p_bc = table.sum(axis=0, keepdims=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        deviation = np.where(p_c > 0, table / p_c - (p_ac / p_c) * (p_bc / p_c), 0.0)
    return float(np.abs(deviation).max())


def _varies_jointly(prior: np.ndarray, a: np.ndarray, b: np.ndarray, outcome: np.ndarray) -> bool:
    """Some outcome value of positive mass under which both signals take both values."""
    for value in (0, 1):
        mask = (outcome == value) & (prior > 0)
        if mask.any() and np.unique(a[mask]).size > 1 and np.unique(b[mask]).size > 1:
            return True
    return False


def search_ci_outcome_functions(attributes: int, agents: int = 2) -> List[SignalConfiguration]:
    """
    All (outcome function, observer subsets) whose binary predictions are
    conditionally independent given the outcome.

    Each agent's signal is its argmax prediction from the attributes it
    observes (lowest outcome on ties). Both signals must be informative
    (accuracy above the best constant predictor) and nondegenerate
    (accuracy below 1), and the independence must be non-vacuous: under
    some outcome value both signals vary.

    Raises:
        SearchBoundError: if attributes exceeds the bound or agents != 2.
    """
    if agents != 2:
        raise SearchBoundError(f"Conditional independence search is defined for 2 agents, got {agents}")
    if attributes < 1 or attributes > SearchBounds.MAX_CI_ATTRIBUTES:
        raise SearchBoundError(
            f"Attribute count {attributes} outside 1..{SearchBounds.MAX_CI_ATTRIBUTES}"
        )

    states = _state_matrix(attributes)
    prior = np.full(states.shape[0], 1.0 / states.shape[0])
    subsets = _subsets(attributes)
    labels = {s: _labels(states, s) for s in subsets}
    results: List[SignalConfiguration] = []
    checked = 0

    for outcome in _outcome_functions(attributes):
        v = np.asarray(outcome)
        constant_accuracy = max(float(prior[v == 0].sum()), float(prior[v == 1].sum()))
        usable = {}
        for s in subsets:
            predictions, accuracy = _predictions(labels[s], v, prior)
            if constant_accuracy + GameDefaults.TIE_TOLERANCE < accuracy < 1.0 - GameDefaults.TIE_TOLERANCE:
                usable[s] = (predictions, accuracy)
        for s1, s2 in product(usable, repeat=2):
            checked += 1
            (p1, a1), (p2, a2) = usable[s1], usable[s2]
            if not _varies_jointly(prior, p1, p2, v):
                continue
            deviation = _dependence(prior, p1, p2, v)
            if deviation <= InferenceDefaults.TOLERANCE:
                results.append(SignalConfiguration(
                    attributes=attributes, outcome=outcome, observers=(s1, s2),
                    accuracies=(a1, a2), max_deviation=deviation,
                ))

    logger.info(
        f"CI search over K={attributes}: {checked} informative configurations checked, {len(results)} found"
    )
    return results


def missing_attribute_condition(configurations: Sequence[SignalConfiguration]) -> bool:
    """Each agent misses exactly one attribute, and the missing attributes differ."""
    for config in configurations:
        missing = config.missing_attributes
        if any(len(m) != 1 for m in missing) or len(set(missing)) != len(missing):
            return False
    return True


@dataclass(frozen=True)
class InterpretationWitness:
    """Mutually independent partitions of a uniform state space, as block labels per state."""
    size: int
    partitions: Tuple[Tuple[int, ...], ...]


@dataclass(frozen=True)
class InterpretationSearchResult:
    agents: int
    max_states: int
    minimal_size: Optional[int]
    witness: Optional[InterpretationWitness]
    sizes_without_witness: Tuple[int, ...] = ()


def _integer_partitions(n: int, largest: Optional[int] = None) -> Iterator[Tuple[int, ...]]:
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in _integer_partitions(n - first, first):
            yield (first,) + rest


def _block_labels(sizes: Sequence[int]) -> Tuple[int, ...]:
    return tuple(b for b, size in enumerate(sizes) for _ in range(size))


def _set_partitions(n: int) -> Iterator[Tuple[int, ...]]:
    """Restricted growth strings of length n, lexicographic."""
    labels = [0] * n

    def grow(position: int, top: int) -> Iterator[Tuple[int, ...]]:
        if position == n:
            yield tuple(labels)
            return
        for label in range(top + 2):
            labels[position] = label
            yield from grow(position + 1, max(top, label))

    if n == 0:
        return
    yield from grow(1, 0)


def _mutually_independent(size: int, partitions: Sequence[Tuple[int, ...]]) -> bool:
    """Uniform measure: |∩ blocks|·n^(N-1) = ∏ |block| for every block combination."""
    arrays = [np.asarray(p) for p in partitions]
    shape = tuple(int(a.max()) + 1 for a in arrays)
    counts = np.zeros(shape, dtype=np.int64)
    np.add.at(counts, tuple(arrays), 1)
    expected = np.ones(shape, dtype=np.int64)
    for axis, a in enumerate(arrays):
        sizes = np.bincount(a, minlength=shape[axis])
        broadcast = [1] * len(shape)
        broadcast[axis] = shape[axis]
        expected = expected * sizes.reshape(broadcast)
    return bool(np.array_equal(counts * size ** (len(partitions) - 1), expected))


def find_independent_partitions(agents: int, size: int) -> Optional[InterpretationWitness]:
    """
    First family of `agents` mutually independent nontrivial partitions of a
    uniform space of `size` states, or None.

    The first partition is taken up to relabelling of states (contiguous
    blocks); the others range over all set partitions.
    """
    if size < 2:
        return None
    candidates = [p for p in _set_partitions(size) if max(p) >= 1]
    for sizes in _integer_partitions(size):
        if len(sizes) < 2:
            continue
        first = _block_labels(sizes)
        if agents == 1:
            return InterpretationWitness(size=size, partitions=(first,))
        partners = [p for p in candidates if _mutually_independent(size, (first, p))]
        for family in combinations(partners, agents - 1):
            if all(_mutually_independent(size, pair) for pair in combinations(family, 2)) and \
                    _mutually_independent(size, (first,) + family):
                return InterpretationWitness(size=size, partitions=(first,) + family)
    return None


def search_independent_interpretations(agents: int, max_states: int) -> InterpretationSearchResult:
    """
    Smallest uniform state space admitting `agents` mutually independent
    nontrivial interpretations.

    Raises:
        SearchBoundError: if agents or max_states exceed the exhaustive bounds.
    """
    if agents < 1 or agents > SearchBounds.MAX_INTERPRETATION_AGENTS:
        raise SearchBoundError(f"Agent count {agents} outside 1..{SearchBounds.MAX_INTERPRETATION_AGENTS}")
    if max_states < 1 or max_states > SearchBounds.MAX_INTERPRETATION_STATES:
        raise SearchBoundError(f"State bound {max_states} outside 1..{SearchBounds.MAX_INTERPRETATION_STATES}")

    without: List[int] = []
    for size in range(1, max_states + 1):
        witness = find_independent_partitions(agents, size)
        if witness is not None:
            logger.info(f"Independent interpretations for {agents} agents first appear at |Ω|={size}")
            return InterpretationSearchResult(
                agents=agents, max_states=max_states, minimal_size=size,
                witness=witness, sizes_without_witness=tuple(without),
            )
        without.append(size)
    return InterpretationSearchResult(
        agents=agents, max_states=max_states, minimal_size=None,
        witness=None, sizes_without_witness=tuple(without),
    )


def predictions_independent(witness: InterpretationWitness, outcome: Sequence[int]) -> IndependenceReport:
    """
    Mutual independence of the argmax predictions induced by a witness's
    partitions for the given outcome function, under the uniform measure.
    """
    if len(outcome) != witness.size:
        raise ValueError(f"Outcome has {len(outcome)} entries, witness has {witness.size} states")
    prior = np.full(witness.size, 1.0 / witness.size)
    v = np.asarray(outcome, dtype=int)
    values, v_index = np.unique(v, return_inverse=True)
    predictions = []
    for partition in witness.partitions:
        labels = np.asarray(partition)
        masses = np.zeros((int(labels.max()) + 1, len(values)))
        np.add.at(masses, (labels, v_index), prior)
        best = masses.max(axis=1, keepdims=True)
        choice = np.argmax(masses >= best - GameDefaults.TIE_TOLERANCE, axis=1)
        predictions.append(choice[labels])

    shape = tuple(len(values) for _ in predictions)
    joint = np.zeros(shape)
    np.add.at(joint, tuple(predictions), prior)
    product_form = np.ones(shape)
    for axis in range(len(predictions)):
        marginal = joint.sum(axis=tuple(a for a in range(len(shape)) if a != axis))
        broadcast = [1] * len(shape)
        broadcast[axis] = len(values)
        product_form = product_form * marginal.reshape(broadcast)
    deviation = float(np.abs(joint - product_form).max())
    names = tuple(f"phi{i + 1}" for i in range(len(predictions)))
    return IndependenceReport(
        independent=deviation <= InferenceDefaults.TOLERANCE,
        max_deviation=deviation,
        x=names[:1], y=names[1:],
    )


@dataclass(frozen=True)
class CorrelationSweepReport:
    """Correctness correlation over every model meeting the negative-correlation premises."""
    max_attributes: int
    models_checked: int
    qualifying: int
    undefined: int
    max_coefficient: Optional[float]
    worst: Optional[SignalConfiguration] = None
    examples: Tuple[SignalConfiguration, ...] = field(default=(), compare=False)

    @property
    def all_nonpositive(self) -> bool:
        return self.max_coefficient is None or self.max_coefficient <= GameDefaults.TIE_TOLERANCE


def sweep_correctness_correlation(max_attributes: int = SearchBounds.MAX_SWEEP_ATTRIBUTES) -> CorrelationSweepReport:
    """
    Enumerate binary models with K ≤ max_attributes uniform attributes and
    two agents whose predictions are independent, informative (accuracy
    above 1/2) and balanced (each outcome predicted with probability 1/2);
    report the largest correctness correlation among them.

    Raises:
        SearchBoundError: if max_attributes exceeds the bound.
    """
    if max_attributes < 1 or max_attributes > SearchBounds.MAX_SWEEP_ATTRIBUTES:
        raise SearchBoundError(f"Attribute count {max_attributes} outside 1..{SearchBounds.MAX_SWEEP_ATTRIBUTES}")

    checked = qualifying = undefined = 0
    max_coefficient: Optional[float] = None
    worst: Optional[SignalConfiguration] = None
    examples: List[SignalConfiguration] = []
    tol = InferenceDefaults.TOLERANCE

    for k in range(1, max_attributes + 1):
        states = _state_matrix(k)
        prior = np.full(states.shape[0], 1.0 / states.shape[0])
        subsets = _subsets(k)
        labels = {s: _labels(states, s) for s in subsets}
        for outcome in _outcome_functions(k):
            v = np.asarray(outcome)
            predicted = {s: _predictions(labels[s], v, prior) for s in subsets}
            for s1, s2 in combinations_with_replacement(subsets, 2):
                checked += 1
                (phi1, acc1), (phi2, acc2) = predicted[s1], predicted[s2]
                if acc1 <= 0.5 + tol or acc2 <= 0.5 + tol:
                    continue
                if abs(float(prior[phi1 == 1].sum()) - 0.5) > tol or abs(float(prior[phi2 == 1].sum()) - 0.5) > tol:
                    continue
                if _dependence(prior, phi1, phi2) > tol:
                    continue
                qualifying += 1
                var1, var2 = acc1 * (1 - acc1), acc2 * (1 - acc2)
                if var1 <= 1e-15 or var2 <= 1e-15:
                    undefined += 1
                    continue
                d1, d2 = (phi1 == v).astype(float), (phi2 == v).astype(float)
                coefficient = (float(np.dot(prior, d1 * d2)) - acc1 * acc2) / math.sqrt(var1 * var2)
                config = SignalConfiguration(
                    attributes=k, outcome=outcome, observers=(s1, s2),
                    accuracies=(acc1, acc2), coefficient=coefficient,
                )
                if len(examples) < 5:
                    examples.append(config)
                if max_coefficient is None or coefficient > max_coefficient:
                    max_coefficient, worst = coefficient, config

    logger.info(
        f"Correctness sweep K≤{max_attributes}: {checked} models, {qualifying} qualifying, "
        f"max coefficient {max_coefficient}"
    )
    return CorrelationSweepReport(
        max_attributes=max_attributes, models_checked=checked, qualifying=qualifying,
        undefined=undefined, max_coefficient=max_coefficient, worst=worst, examples=tuple(examples),
    )
