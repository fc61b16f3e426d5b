"""
Core discrete Bayesian network types.

This module defines variables, conditional probability tables, the DAG and the
network container, plus structural validation that reports every violation
as data.
"""

from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, List, Mapping, Optional, Sequence, Tuple
import math

import networkx as nx
import pandas as pd

from src.utils.constants import InferenceDefaults


Assignment = Mapping[str, str]


class UnknownVariableError(ValueError):
    """Raised when an id or state does not exist in the network."""


class IncompleteAssignmentError(ValueError):
    """Raised when a full assignment leaves variables unbound."""


class ZeroProbabilityEvidenceError(ValueError):
    """Raised when conditioning on an event of probability zero."""


class EnumerationLimitError(RuntimeError):
    """Raised when the joint state space exceeds the configured cap."""


@dataclass(frozen=True)
class Variable:
    """A finite random variable; `ordered` marks states listed low to high."""
    id: str
    states: Tuple[str, ...]
    ordered: bool

    @property
    def cardinality(self) -> int:
        return len(self.states)

    def index(self, state: str) -> int:
        try:
            return self.states.index(state)
        except ValueError:
            raise UnknownVariableError(
                f"State '{state}' is not a state of variable '{self.id}' {list(self.states)}"
            ) from None


@dataclass(frozen=True)
class Cpt:
    """
    Conditional probability table Pr(child | parents).

    Rows are indexed by the joint parent assignment in mixed radix order,
    the last parent varying fastest.
    """
    child: str
    parents: Tuple[str, ...]
    rows: Tuple[Tuple[float, ...], ...]
    deterministic: bool = False


@dataclass(frozen=True)
class Dag:
    """Directed graph over variable ids."""
    nodes: Tuple[str, ...]
    edges: Tuple[Tuple[str, str], ...]

    def parents(self, node: str) -> Tuple[str, ...]:
        return tuple(a for a, b in self.edges if b == node)

    def children(self, node: str) -> Tuple[str, ...]:
        return tuple(b for a, b in self.edges if a == node)

    def to_networkx(self) -> nx.DiGraph:
        graph = nx.DiGraph()
        graph.add_nodes_from(self.nodes)
        graph.add_edges_from(self.edges)
        return graph


@dataclass
class ValidationResult:
    """Result of structural validation."""
    is_valid: bool
    errors: List[str] = field(default_factory=list)
    warnings: List[str] = field(default_factory=list)

    @property
    def error_message(self) -> Optional[str]:
        return "; ".join(self.errors) if self.errors else None


@dataclass(frozen=True)
class BayesNet:
    """
    Discrete Bayesian network.

    Construction never raises; call `validate` to obtain the list of
    violations before running inference.
    """
    variables: Tuple[Variable, ...]
    dag: Dag
    cpts: Tuple[Cpt, ...]
    name: str = ""

    @classmethod
    def from_cpts(cls, variables: Sequence[Variable], cpts: Sequence[Cpt], name: str = "") -> "BayesNet":
        """Build a network whose edges are read off the cpt parent lists."""
        edges = tuple((p, c.child) for c in cpts for p in c.parents)
        dag = Dag(nodes=tuple(v.id for v in variables), edges=edges)
        return cls(variables=tuple(variables), dag=dag, cpts=tuple(cpts), name=name)

    @cached_property
    def _variable_map(self) -> Dict[str, Variable]:
        return {v.id: v for v in self.variables}

    @cached_property
    def _cpt_map(self) -> Dict[str, Cpt]:
        return {c.child: c for c in self.cpts}

    @cached_property
    def ids(self) -> Tuple[str, ...]:
        return tuple(v.id for v in self.variables)

    @cached_property
    def axis(self) -> Dict[str, int]:
        return {v.id: i for i, v in enumerate(self.variables)}

    def variable(self, var_id: str) -> Variable:
        try:
            return self._variable_map[var_id]
        except KeyError:
            raise UnknownVariableError(f"Unknown variable '{var_id}'") from None

    def cpt(self, var_id: str) -> Cpt:
        try:
            return self._cpt_map[var_id]
        except KeyError:
            raise UnknownVariableError(f"No cpt for variable '{var_id}'") from None

    def parents(self, var_id: str) -> Tuple[str, ...]:
        self.variable(var_id)
        return self.dag.parents(var_id)

    def children(self, var_id: str) -> Tuple[str, ...]:
        self.variable(var_id)
        return self.dag.children(var_id)

    def graph(self) -> nx.DiGraph:
        return self.dag.to_networkx()

    def check_assignment(self, assignment: Assignment) -> None:
        """Raise UnknownVariableError for unknown ids or illegal states."""
        for var_id, state in assignment.items():
            self.variable(var_id).index(state)

    def joint_state_count(self) -> int:
        return math.prod(v.cardinality for v in self.variables)

    def cpt_frame(self, var_id: str) -> pd.DataFrame:
        """Render one cpt as a frame, one row per parent assignment."""
        cpt = self.cpt(var_id)
        child = self.variable(var_id)
        parent_states = [self.variable(p).states for p in cpt.parents]
        index = pd.MultiIndex.from_product(parent_states, names=list(cpt.parents)) if cpt.parents else None
        return pd.DataFrame(list(cpt.rows), columns=list(child.states), index=index)


def validate(net: BayesNet, tolerance: float = InferenceDefaults.TOLERANCE) -> ValidationResult:
    """
    Check every structural invariant of a network.

    Returns:
        ValidationResult listing all violations found.
    """
    errors: List[str] = []
    warnings: List[str] = []

    seen_ids = set()
    for var in net.variables:
        if var.id in seen_ids:
            errors.append(f"duplicate variable id '{var.id}'")
        seen_ids.add(var.id)
        if var.cardinality < 1:
            errors.append(f"variable '{var.id}' has no states")
        elif var.cardinality == 1:
            warnings.append(f"variable '{var.id}' is degenerate (one state)")
        if len(set(var.states)) != len(var.states):
            errors.append(f"variable '{var.id}' has duplicate state labels")

    node_set = set(net.dag.nodes)
    if node_set != seen_ids:
        for missing in sorted(seen_ids - node_set):
            errors.append(f"variable '{missing}' is not a dag node")
        for extra in sorted(node_set - seen_ids):
            errors.append(f"dag node '{extra}' has no variable")

    seen_edges = set()
    for a, b in net.dag.edges:
        if a == b:
            errors.append(f"self-edge on '{a}'")
        if (a, b) in seen_edges:
            errors.append(f"duplicate edge {a}->{b}")
        seen_edges.add((a, b))
        for end in (a, b):
            if end not in node_set:
                errors.append(f"edge {a}->{b} references unknown node '{end}'")

    graph = nx.DiGraph()
    graph.add_nodes_from(net.dag.nodes)
    graph.add_edges_from((a, b) for a, b in net.dag.edges if a != b)
    for component in nx.strongly_connected_components(graph):
        if len(component) > 1:
            errors.append(f"cycle among {sorted(component)}")

    cpt_children = [c.child for c in net.cpts]
    for child in sorted(set(cpt_children)):
        if cpt_children.count(child) > 1:
            errors.append(f"more than one cpt for '{child}'")
    for var_id in sorted(seen_ids - set(cpt_children)):
        errors.append(f"missing cpt for '{var_id}'")

    var_map = {v.id: v for v in net.variables}
    for cpt in net.cpts:
        errors.extend(_validate_cpt(cpt, net, var_map, tolerance))

    if errors:
        return ValidationResult(is_valid=False, errors=errors, warnings=warnings)
    return ValidationResult(is_valid=True, warnings=warnings)


def _validate_cpt(cpt: Cpt, net: BayesNet, var_map: Dict[str, Variable], tolerance: float) -> List[str]:
    errors: List[str] = []
    if cpt.child not in var_map:
        return [f"cpt for unknown variable '{cpt.child}'"]

    if set(cpt.parents) != set(net.dag.parents(cpt.child)) or len(set(cpt.parents)) != len(cpt.parents):
        errors.append(
            f"cpt parents of '{cpt.child}' {list(cpt.parents)} do not match dag parents "
            f"{sorted(net.dag.parents(cpt.child))}"
        )

    unknown = [p for p in cpt.parents if p not in var_map]
    if unknown:
        errors.append(f"cpt for '{cpt.child}' names unknown parents {unknown}")
        return errors

    expected_rows = math.prod(var_map[p].cardinality for p in cpt.parents)
    if len(cpt.rows) != expected_rows:
        errors.append(
            f"cpt for '{cpt.child}' has {len(cpt.rows)} rows, expected {expected_rows}"
        )

    width = var_map[cpt.child].cardinality
    for r, row in enumerate(cpt.rows):
        label = f"cpt '{cpt.child}' row {r}"
        if len(row) != width:
            errors.append(f"{label} has {len(row)} entries, expected {width}")
            continue
        if any(p < 0.0 or p > 1.0 for p in row):
            errors.append(f"{label} {list(row)} has entries outside [0, 1]")
        total = math.fsum(row)
        if abs(total - 1.0) > tolerance:
            errors.append(f"{label} {list(row)} sums to {total:.12g}, not 1")
        if cpt.deterministic and sorted(row) != [0.0] * (width - 1) + [1.0]:
            errors.append(f"{label} {list(row)} is not one-hot in a deterministic cpt")
    return errors


def same_structure(a: BayesNet, b: BayesNet, tolerance: float = InferenceDefaults.TOLERANCE) -> bool:
    """Same variables, edge set and cpts, with cpt entries compared within tolerance."""
    if a.variables != b.variables or set(a.dag.edges) != set(b.dag.edges):
        return False
    for var_id in a.ids:
        ca, cb = a.cpt(var_id), b.cpt(var_id)
        if ca.parents != cb.parents or len(ca.rows) != len(cb.rows):
            return False
        for ra, rb in zip(ca.rows, cb.rows):
            if len(ra) != len(rb) or any(abs(x - y) > tolerance for x, y in zip(ra, rb)):
                return False
    return True
