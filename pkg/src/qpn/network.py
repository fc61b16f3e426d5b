"""
Qualitative probabilistic network structure.
"""

from dataclasses import dataclass, field, replace
from enum import Enum
from functools import cached_property
from typing import Dict, List, Optional, Tuple

import networkx as nx
from loguru import logger

from src.qpn.signs import Sign


class QpnStructureError(ValueError):
    """Raised when a network or transform request is structurally invalid."""


class NodeKind(str, Enum):
    CHANCE = "chance"
    DECISION = "decision"
    VALUE = "value"


class EdgeKind(str, Enum):
    INFLUENCE = "influence"
    INFORMATION = "information"


@dataclass(frozen=True)
class QpnNode:
    id: str
    kind: NodeKind = NodeKind.CHANCE


@dataclass(frozen=True)
class QpnEdge:
    """Signed influence edge, or unsigned information edge into a decision."""
    source: str
    target: str
    sign: Optional[Sign] = Sign.PLUS
    kind: EdgeKind = EdgeKind.INFLUENCE


@dataclass(frozen=True)
class SynergyArc:
    """Qualitative synergy of (a, b) on target."""
    a: str
    b: str
    target: str
    sign: Sign


@dataclass
class QpnValidation:
    is_valid: bool
    errors: List[str] = field(default_factory=list)


@dataclass(frozen=True)
class Qpn:
    """Signed influence graph with decision/value nodes and synergy arcs."""
    nodes: Tuple[QpnNode, ...]
    edges: Tuple[QpnEdge, ...]
    synergies: Tuple[SynergyArc, ...] = ()
    name: str = ""

    @cached_property
    def _node_map(self) -> Dict[str, QpnNode]:
        return {n.id: n for n in self.nodes}

    @cached_property
    def influence_graph(self) -> nx.DiGraph:
        """Influence edges only, each carrying its sign as the `sign` attribute."""
        graph = nx.DiGraph()
        graph.add_nodes_from(n.id for n in self.nodes)
        for edge in self.edges:
            if edge.kind == EdgeKind.INFLUENCE:
                graph.add_edge(edge.source, edge.target, sign=edge.sign)
        return graph

    def node(self, node_id: str) -> QpnNode:
        try:
            return self._node_map[node_id]
        except KeyError:
            raise QpnStructureError(f"Unknown node '{node_id}'") from None

    def edge_sign(self, source: str, target: str) -> Sign:
        return self.influence_graph.edges[source, target]["sign"]

    def information_sources(self, decision: str) -> Tuple[str, ...]:
        return tuple(
            e.source for e in self.edges
            if e.kind == EdgeKind.INFORMATION and e.target == decision
        )

    def arc_list(self) -> List[Tuple[str, str, str]]:
        """(source, target, sign-or-'info') sorted; used for golden comparisons."""
        return sorted(
            (e.source, e.target, e.sign.value if e.kind == EdgeKind.INFLUENCE else "info")
            for e in self.edges
        )


def validate_qpn(net: Qpn) -> QpnValidation:
    """Check node/edge kinds, acyclicity and synergy parents."""
    errors: List[str] = []
    ids = [n.id for n in net.nodes]
    if len(set(ids)) != len(ids):
        errors.append("duplicate node ids")
    known = set(ids)
    kinds = {n.id: n.kind for n in net.nodes}

    for edge in net.edges:
        label = f"{edge.source}->{edge.target}"
        if edge.source not in known or edge.target not in known:
            errors.append(f"edge {label} references an unknown node")
            continue
        if edge.kind == EdgeKind.INFLUENCE:
            if edge.sign is None:
                errors.append(f"influence edge {label} has no sign")
            if kinds[edge.source] == NodeKind.VALUE:
                errors.append(f"value node '{edge.source}' has an outgoing influence edge")
        else:
            if edge.sign is not None:
                errors.append(f"information edge {label} carries a sign")
            if kinds[edge.source] != NodeKind.CHANCE or kinds[edge.target] != NodeKind.DECISION:
                errors.append(f"information edge {label} must run from a chance node to a decision node")

    graph = nx.DiGraph()
    graph.add_nodes_from(known)
    graph.add_edges_from((e.source, e.target) for e in net.edges
                         if e.kind == EdgeKind.INFLUENCE and e.source in known and e.target in known)
    if not nx.is_directed_acyclic_graph(graph):
        errors.append(f"influence edges contain a cycle: {nx.find_cycle(graph)}")

    for arc in net.synergies:
        for end in (arc.a, arc.b):
            if end not in known or arc.target not in known:
                errors.append(f"synergy ({arc.a}, {arc.b} -> {arc.target}) references an unknown node")
                break
            if arc.target not in nx.descendants(graph, end):
                errors.append(f"synergy endpoint '{end}' has no path to '{arc.target}'")

    return QpnValidation(is_valid=not errors, errors=errors)


def apply_policy(net: Qpn, decision: str, sign: Sign = Sign.PLUS) -> Qpn:
    """
    Replace a decision node by a chance node whose information edges become
    influence edges carrying the policy sign.

    Raises:
        QpnStructureError: if `decision` is not a decision node.
    """
    if net.node(decision).kind != NodeKind.DECISION:
        raise QpnStructureError(f"'{decision}' is not a decision node")
    nodes = tuple(replace(n, kind=NodeKind.CHANCE) if n.id == decision else n for n in net.nodes)
    edges = tuple(
        QpnEdge(e.source, e.target, sign, EdgeKind.INFLUENCE)
        if e.kind == EdgeKind.INFORMATION and e.target == decision else e
        for e in net.edges
    )
    logger.debug(f"Policy rewrite of '{decision}' with sign {sign.value}")
    return Qpn(nodes=nodes, edges=edges, synergies=net.synergies, name=f"{net.name}+policy({decision})")
