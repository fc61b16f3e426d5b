"""
Builders for the canonical signal structures.

Every model is a small BayesNet over binary ("0"/"1") ordered variables
unless noted. Ids are the canonical model names used throughout the CLI.
"""

from dataclasses import dataclass, field
from enum import Enum
from itertools import product
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union
import re

import networkx as nx
from loguru import logger

from src.bayesnet.base import BayesNet, Cpt, Variable, validate
from src.bayesnet.graph import d_separated
from src.signals.interpreted import (
    AttributeSpace,
    InterpretedModel,
    ModelParameterError,
    to_bayesnet,
)
from src.utils.constants import CanonicalModelId


BINARY = ("0", "1")


@dataclass(frozen=True)
class CanonicalParams:
    """
    Parameters shared by the canonical builders.

    value_accuracy: Pr(v_i = ω) in the interdependent generated model.
    signal_accuracy: Pr(s_i = parent) for noisy-copy signals.
    attributes: K for the attribute-based interpreted models.
    The latent-value weights parameterise Pr(v_i = 1 | s_i, ω0) = base + w_s·s_i + w_ω·ω0.
    """
    n_agents: int = 2
    value_accuracy: float = 0.75
    signal_accuracy: float = 0.75
    attributes: int = 3
    base_rate: float = 0.1
    signal_weight: float = 0.4
    latent_weight: float = 0.4


@dataclass(frozen=True)
class CanonicalModel:
    """A canonical id plus its parameters."""
    id: CanonicalModelId
    params: CanonicalParams = field(default_factory=CanonicalParams)


@dataclass(frozen=True)
class DsepStatement:
    """Expected d-separation verdict for X vs Y given Z."""
    x: Tuple[str, ...]
    y: Tuple[str, ...]
    given: Tuple[str, ...]
    separated: bool


def _binary(var_id: str) -> Variable:
    return Variable(id=var_id, states=BINARY, ordered=True)


def _uniform(var_id: str) -> Cpt:
    return Cpt(child=var_id, parents=(), rows=((0.5, 0.5),))


def _copy(child: str, parent: str, accuracy: float) -> Cpt:
    return Cpt(
        child=child, parents=(parent,),
        rows=((accuracy, 1.0 - accuracy), (1.0 - accuracy, accuracy)),
        deterministic=accuracy in (0.0, 1.0),
    )


def _deterministic(child: str, parents: Sequence[str], fn: Callable[..., int]) -> Cpt:
    rows = []
    for values in product((0, 1), repeat=len(parents)):
        out = fn(*values)
        rows.append((1.0, 0.0) if out == 0 else (0.0, 1.0))
    return Cpt(child=child, parents=tuple(parents), rows=tuple(rows), deterministic=True)


def _check_probability(name: str, value: float) -> None:
    if not 0.0 <= value <= 1.0:
        raise ModelParameterError(f"{name} must lie in [0, 1], got {value}")


def majority(*bits: int) -> int:
    return int(2 * sum(bits) > len(bits))


def disjunction(*bits: int) -> int:
    """x1 + x2 - x1·x2 generalised to any number of bits."""
    return int(any(bits))


def interdependent_values(params: CanonicalParams) -> BayesNet:
    """Latent ω drives each v_i, each v_i drives s_i."""
    variables, cpts = [_binary("omega")], [_uniform("omega")]
    for i in range(1, params.n_agents + 1):
        variables += [_binary(f"v{i}"), _binary(f"s{i}")]
        cpts += [_copy(f"v{i}", "omega", params.value_accuracy), _copy(f"s{i}", f"v{i}", params.signal_accuracy)]
    return BayesNet.from_cpts(variables, cpts)


def private_values(params: CanonicalParams) -> BayesNet:
    variables, cpts = [], []
    for i in range(1, params.n_agents + 1):
        variables += [_binary(f"v{i}"), _binary(f"s{i}")]
        cpts += [_uniform(f"v{i}"), _copy(f"s{i}", f"v{i}", params.signal_accuracy)]
    return BayesNet.from_cpts(variables, cpts)


def common_value(params: CanonicalParams) -> BayesNet:
    variables, cpts = [_binary("v")], [_uniform("v")]
    for i in range(1, params.n_agents + 1):
        variables.append(_binary(f"s{i}"))
        cpts.append(_copy(f"s{i}", "v", params.signal_accuracy))
    return BayesNet.from_cpts(variables, cpts)


def latent_value_signals(params: CanonicalParams) -> BayesNet:
    """Signals and ω0 are independent roots; v_i depends on (s_i, ω0)."""
    total = params.base_rate + params.signal_weight + params.latent_weight
    if min(params.base_rate, params.signal_weight, params.latent_weight) < 0 or total > 1.0:
        raise ModelParameterError(
            f"Latent value weights must be nonnegative and sum to at most 1, got {total}"
        )
    variables, cpts = [_binary("omega0")], [_uniform("omega0")]
    for i in range(1, params.n_agents + 1):
        variables += [_binary(f"s{i}"), _binary(f"v{i}")]
        rows = []
        for s, w in product((0, 1), repeat=2):
            p = params.base_rate + params.signal_weight * s + params.latent_weight * w
            rows.append((1.0 - p, p))
        cpts += [_uniform(f"s{i}"), Cpt(child=f"v{i}", parents=(f"s{i}", "omega0"), rows=tuple(rows))]
    return BayesNet.from_cpts(variables, cpts)


def basic_interpreted() -> BayesNet:
    """ω over two correlated bits; each s_i reads one bit, v is their disjunction."""
    omega_states = ("00", "01", "10", "11")
    variables = [Variable(id="omega", states=omega_states, ordered=False), _binary("s1"), _binary("s2"), _binary("v")]
    bits = [tuple(int(c) for c in s) for s in omega_states]
    cpts = [
        Cpt(child="omega", parents=(), rows=((0.4, 0.1, 0.1, 0.4),)),
        Cpt(child="s1", parents=("omega",), rows=tuple(_bit_row(b[0]) for b in bits), deterministic=True),
        Cpt(child="s2", parents=("omega",), rows=tuple(_bit_row(b[1]) for b in bits), deterministic=True),
        Cpt(child="v", parents=("omega",), rows=tuple(_bit_row(disjunction(*b)) for b in bits), deterministic=True),
    ]
    return BayesNet.from_cpts(variables, cpts)


def _bit_row(bit: int) -> Tuple[float, float]:
    return (1.0, 0.0) if bit == 0 else (0.0, 1.0)


def majority_model(observers: Sequence[Sequence[int]], attributes: int = 3, name: str = "") -> InterpretedModel:
    """Uniform binary attributes with the majority outcome."""
    space = AttributeSpace.uniform(attributes)
    outcome = tuple(majority(*s) for s in space.states)
    return InterpretedModel(space=space, outcome=outcome, observers=tuple(tuple(o) for o in observers), name=name)


def appendix_a_model() -> InterpretedModel:
    """Two uniform independent bits, v = x1 + x2 - x1·x2, agent i observes x_i."""
    space = AttributeSpace.uniform(2)
    outcome = tuple(disjunction(*s) for s in space.states)
    return InterpretedModel(space=space, outcome=outcome, observers=((0,), (1,)), name="AppendixA")


def _disjunction_world(signal_names: Sequence[str]) -> BayesNet:
    variables = [_binary(s) for s in signal_names] + [_binary("v")]
    cpts = [_uniform(s) for s in signal_names] + [_deterministic("v", signal_names, disjunction)]
    return BayesNet.from_cpts(variables, cpts)


def interpreted_common_value() -> BayesNet:
    """Attributes x1, x2 drive v by disjunction; bidder i reads s_i = x_i."""
    variables = [_binary("x1"), _binary("x2"), _binary("v"), _binary("s1"), _binary("s2")]
    cpts = [
        _uniform("x1"), _uniform("x2"),
        _deterministic("v", ("x1", "x2"), disjunction),
        _copy("s1", "x1", 1.0), _copy("s2", "x2", 1.0),
    ]
    return BayesNet.from_cpts(variables, cpts)


def _validate_params(model_id: CanonicalModelId, params: CanonicalParams) -> None:
    if model_id in (CanonicalModelId.FIG1A, CanonicalModelId.FIG1B, CanonicalModelId.FIG1C, CanonicalModelId.FIG1D):
        if params.n_agents < 2:
            raise ModelParameterError(f"{model_id.value} needs at least 2 agents, got {params.n_agents}")
    if params.n_agents < 1:
        raise ModelParameterError(f"Agent count must be positive, got {params.n_agents}")
    _check_probability("value_accuracy", params.value_accuracy)
    _check_probability("signal_accuracy", params.signal_accuracy)
    if model_id in (CanonicalModelId.FIG2B, CanonicalModelId.FIG3A, CanonicalModelId.FIG3B):
        if params.attributes != 3:
            raise ModelParameterError(
                f"{model_id.value} is defined over 3 attributes, got {params.attributes}"
            )


def canonical_interpreted(model_id: Union[CanonicalModelId, str]) -> InterpretedModel:
    """Attribute-level model behind an interpreted-signal world."""
    model_id = CanonicalModelId(model_id)
    if model_id == CanonicalModelId.FIG2B:
        return majority_model([(0, 1), (1, 2)], name=model_id.value)
    if model_id in (CanonicalModelId.FIG3A, CanonicalModelId.FIG3B):
        return majority_model([(0,), (1,)], name=model_id.value)
    if model_id in (CanonicalModelId.APPENDIX_A, CanonicalModelId.FIG6_CHANCE, CanonicalModelId.FIG4B):
        return appendix_a_model()
    raise ModelParameterError(f"{model_id.value} has no attribute-level form")


def build_canonical(
    model: Union[CanonicalModel, CanonicalModelId, str],
    params: Optional[CanonicalParams] = None,
) -> BayesNet:
    """
    Build the network of a canonical model.

    Raises:
        ModelParameterError: if the parameters are invalid for the model.
    """
    if isinstance(model, CanonicalModel):
        model_id, params = model.id, model.params
    else:
        model_id = CanonicalModelId(model)
    params = params or CanonicalParams()
    _validate_params(model_id, params)

    if model_id in (CanonicalModelId.FIG1A, CanonicalModelId.FIG5_CHANCE):
        if model_id == CanonicalModelId.FIG5_CHANCE and params.n_agents != 2:
            raise ModelParameterError("Fig5chance is a two-bidder model")
        net = interdependent_values(params)
    elif model_id == CanonicalModelId.FIG1B:
        net = private_values(params)
    elif model_id in (CanonicalModelId.FIG1C, CanonicalModelId.FIG4A):
        net = common_value(params)
    elif model_id == CanonicalModelId.FIG1D:
        net = latent_value_signals(params)
    elif model_id == CanonicalModelId.FIG2A:
        net = basic_interpreted()
    elif model_id == CanonicalModelId.FIG2B:
        net = to_bayesnet(canonical_interpreted(model_id))
    elif model_id == CanonicalModelId.FIG3A:
        net = to_bayesnet(canonical_interpreted(model_id))
    elif model_id == CanonicalModelId.FIG3B:
        net = to_bayesnet(canonical_interpreted(model_id), with_correctness=True)
    elif model_id in (CanonicalModelId.FIG4B, CanonicalModelId.APPENDIX_A):
        net = _disjunction_world(("s1", "s2"))
    elif model_id == CanonicalModelId.FIG6_CHANCE:
        net = interpreted_common_value()
    else:
        raise ModelParameterError(f"Unknown canonical model {model_id}")

    net = BayesNet(variables=net.variables, dag=net.dag, cpts=net.cpts, name=model_id.value)
    result = validate(net)
    if not result.is_valid:
        raise ModelParameterError(f"{model_id.value} parameters produce an invalid net: {result.error_message}")
    logger.debug(f"Built canonical model {model_id.value} with {len(net.variables)} variables")
    return net


def _s(*ids: str) -> Tuple[str, ...]:
    return tuple(ids)


_GENERATED_INTERDEPENDENT = [
    DsepStatement(_s("s1"), _s("s2"), _s("omega"), True),
    DsepStatement(_s("s1"), _s("s2"), _s(), False),
    DsepStatement(_s("s1"), _s("s2"), _s("v1"), True),
    DsepStatement(_s("v1"), _s("v2"), _s("omega"), True),
]

FINGERPRINTS: Dict[CanonicalModelId, List[DsepStatement]] = {
    CanonicalModelId.FIG1A: _GENERATED_INTERDEPENDENT,
    CanonicalModelId.FIG1B: [
        DsepStatement(_s("s1"), _s("s2"), _s(), True),
        DsepStatement(_s("v1"), _s("v2"), _s(), True),
        DsepStatement(_s("s1"), _s("v2"), _s(), True),
    ],
    CanonicalModelId.FIG1C: [
        DsepStatement(_s("s1"), _s("s2"), _s("v"), True),
        DsepStatement(_s("s1"), _s("s2"), _s(), False),
    ],
    CanonicalModelId.FIG1D: [
        DsepStatement(_s("s1"), _s("s2"), _s(), True),
        DsepStatement(_s("s1"), _s("s2"), _s("v1", "v2"), False),
        DsepStatement(_s("s1"), _s("s2"), _s("omega0"), True),
        DsepStatement(_s("s1"), _s("s2"), _s("v1"), True),
        DsepStatement(_s("v1"), _s("v2"), _s("omega0"), True),
        DsepStatement(_s("v1"), _s("v2"), _s(), False),
    ],
    CanonicalModelId.FIG2A: [
        DsepStatement(_s("s1"), _s("s2"), _s("omega"), True),
        DsepStatement(_s("s1"), _s("s2"), _s("v"), False),
        DsepStatement(_s("s1"), _s("s2"), _s(), False),
    ],
    CanonicalModelId.FIG2B: [
        DsepStatement(_s("phi1"), _s("x3"), _s("v"), False),
        DsepStatement(_s("phi1"), _s("phi2"), _s(), False),
        DsepStatement(_s("phi1"), _s("phi2"), _s("x2"), True),
        DsepStatement(_s("pi1"), _s("pi2"), _s("x1", "x2", "x3"), True),
    ],
    CanonicalModelId.FIG3A: [
        DsepStatement(_s("pi1"), _s("pi2"), _s(), True),
        DsepStatement(_s("phi1"), _s("phi2"), _s(), True),
        DsepStatement(_s("phi1"), _s("phi2"), _s("v"), False),
    ],
    CanonicalModelId.FIG3B: [
        DsepStatement(_s("phi1"), _s("phi2"), _s(), True),
        DsepStatement(_s("delta1"), _s("delta2"), _s(), False),
        DsepStatement(_s("delta1"), _s("phi2"), _s("v"), False),
    ],
    CanonicalModelId.FIG4A: [
        DsepStatement(_s("s1"), _s("s2"), _s("v"), True),
        DsepStatement(_s("s1"), _s("s2"), _s(), False),
    ],
    CanonicalModelId.FIG4B: [
        DsepStatement(_s("s1"), _s("s2"), _s(), True),
        DsepStatement(_s("s1"), _s("s2"), _s("v"), False),
    ],
    CanonicalModelId.FIG5_CHANCE: _GENERATED_INTERDEPENDENT,
    CanonicalModelId.FIG6_CHANCE: [
        DsepStatement(_s("s1"), _s("s2"), _s(), True),
        DsepStatement(_s("s1"), _s("s2"), _s("v"), False),
        DsepStatement(_s("s1"), _s("v"), _s("x1"), True),
    ],
    CanonicalModelId.APPENDIX_A: [
        DsepStatement(_s("s1"), _s("s2"), _s(), True),
        DsepStatement(_s("s1"), _s("s2"), _s("v"), False),
    ],
}


class SignalStructure(str, Enum):
    GENERATED = "generated"
    INTERPRETED = "interpreted"
    MIXED = "mixed"


@dataclass(frozen=True)
class StructureClassification:
    """Per-signal kind, overall structure and the canonical fingerprints the net satisfies."""
    signals: Dict[str, SignalStructure]
    values: Tuple[str, ...]
    structure: SignalStructure
    fingerprints: Tuple[CanonicalModelId, ...] = ()

    def to_dict(self) -> Dict[str, object]:
        return {
            "signals": {s: k.value for s, k in self.signals.items()},
            "values": list(self.values),
            "structure": self.structure.value,
            "fingerprints": [f.value for f in self.fingerprints],
        }


def _matching(ids: Sequence[str], pattern: str) -> Tuple[str, ...]:
    return tuple(i for i in ids if re.fullmatch(pattern, i))


def fingerprint_holds(net: BayesNet, statements: Sequence[DsepStatement]) -> bool:
    """Every statement mentions only variables of `net` and its d-separation verdict matches."""
    known = set(net.ids)
    for st in statements:
        if not set(st.x + st.y + st.given) <= known:
            return False
        if d_separated(net, st.x, st.y, st.given) != st.separated:
            return False
    return True


def classify_structure(
    net: BayesNet,
    signals: Optional[Sequence[str]] = None,
    values: Optional[Sequence[str]] = None,
) -> StructureClassification:
    """
    A signal is generated when it descends from a value variable and
    interpreted when it sits upstream of or parallel to every value.

    Raises:
        ModelParameterError: if no signal or value variables can be found.
    """
    signals = tuple(signals) if signals else (_matching(net.ids, r"s\d+") or _matching(net.ids, r"pi\d+"))
    values = tuple(values) if values else (_matching(net.ids, r"v\d*"))
    if not signals or not values:
        raise ModelParameterError(f"Net '{net.name}' needs signal and value variables to classify")
    graph = net.graph()
    kinds = {}
    for s in signals:
        net.variable(s)
        generated = any(s in nx.descendants(graph, v) for v in values)
        kinds[s] = SignalStructure.GENERATED if generated else SignalStructure.INTERPRETED
    distinct = set(kinds.values())
    structure = distinct.pop() if len(distinct) == 1 else SignalStructure.MIXED
    matches = tuple(mid for mid, statements in FINGERPRINTS.items() if fingerprint_holds(net, statements))
    return StructureClassification(signals=kinds, values=values, structure=structure, fingerprints=matches)
