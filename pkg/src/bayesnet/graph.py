"""
Graph-theoretic independence queries: d-separation, active trails and
Markov blankets.
"""

from collections import deque
from typing import Collection, Iterator, List, Optional, Set, Tuple

import networkx as nx

from src.bayesnet.base import BayesNet


Trail = Tuple[str, ...]


def _check_disjoint(x: Set[str], y: Set[str], z: Set[str]) -> None:
    if x & y or x & z or y & z:
        raise ValueError(
            f"Variable sets must be pairwise disjoint: X={sorted(x)} Y={sorted(y)} Z={sorted(z)}"
        )


def reachable(graph: nx.DiGraph, sources: Collection[str], given: Collection[str]) -> Set[str]:
    """
    Nodes connected to `sources` by an active trail given `given`.

    Bayes-ball traversal: a node passes the ball through unless it is
    observed; a collider passes it only when it or a descendant is observed.
    """
    given = set(given)
    observed_ancestors = set(given)
    for node in given:
        observed_ancestors |= nx.ancestors(graph, node)

    visited: Set[Tuple[str, str]] = set()
    found: Set[str] = set()
    frontier = deque((s, "up") for s in sources)
    while frontier:
        node, direction = frontier.popleft()
        if (node, direction) in visited:
            continue
        visited.add((node, direction))
        if node not in given:
            found.add(node)
        if direction == "up" and node not in given:
            frontier.extend((p, "up") for p in graph.predecessors(node))
            frontier.extend((c, "down") for c in graph.successors(node))
        elif direction == "down":
            if node not in given:
                frontier.extend((c, "down") for c in graph.successors(node))
            if node in observed_ancestors:
                frontier.extend((p, "up") for p in graph.predecessors(node))
    return found


def d_separated(net: BayesNet, x: Collection[str], y: Collection[str], z: Collection[str] = ()) -> bool:
    """
    True iff every trail between X and Y is blocked by Z.

    Raises:
        ValueError: if the sets overlap.
        UnknownVariableError: if a node is not in the network.
    """
    x, y, z = set(x), set(y), set(z)
    _check_disjoint(x, y, z)
    for node in x | y | z:
        net.variable(node)
    if not x or not y:
        return True
    return not (reachable(net.graph(), x, z) & y)


def _is_collider(graph: nx.DiGraph, before: str, node: str, after: str) -> bool:
    return graph.has_edge(before, node) and graph.has_edge(after, node)


def iter_active_trails(
    graph: nx.DiGraph,
    source: str,
    target: Optional[str],
    given: Collection[str] = (),
) -> Iterator[Trail]:
    """
    Enumerate simple undirected trails from source to target that are active
    given `given`, in deterministic depth-first order.

    With target None every active trail leaving source is yielded, prefixes
    included, so an end node reached along several trails appears once per trail.
    """
    given = set(given)
    activating = set(given)
    for node in given:
        activating |= nx.ancestors(graph, node)
    neighbours = {
        n: sorted(set(graph.predecessors(n)) | set(graph.successors(n)))
        for n in graph.nodes
    }

    path: List[str] = [source]
    on_path = {source}

    def extend() -> Iterator[Trail]:
        current = path[-1]
        for nxt in neighbours[current]:
            if nxt in on_path:
                continue
            if len(path) >= 2:
                prev = path[-2]
                if _is_collider(graph, prev, current, nxt):
                    if current not in activating:
                        continue
                elif current in given:
                    continue
            if nxt == target:
                yield tuple(path) + (nxt,)
                continue
            if target is None:
                yield tuple(path) + (nxt,)
            path.append(nxt)
            on_path.add(nxt)
            yield from extend()
            path.pop()
            on_path.discard(nxt)

    if source == target:
        return
    yield from extend()


def trail_edges(graph: nx.DiGraph, trail: Trail) -> List[Tuple[str, str]]:
    """Directed edges traversed by a trail, in graph orientation."""
    return [(a, b) if graph.has_edge(a, b) else (b, a) for a, b in zip(trail, trail[1:])]


def markov_blanket(net: BayesNet, node: str) -> Set[str]:
    """Parents, children and co-parents of children, excluding the node."""
    blanket = set(net.parents(node)) | set(net.children(node))
    for child in net.children(node):
        blanket |= set(net.parents(child))
    blanket.discard(node)
    return blanket
