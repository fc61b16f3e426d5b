"""
Qualitative inference: trail signs, sign propagation, policy monotonicity
and the winner's curse test.
"""

from dataclasses import dataclass, field
from itertools import chain, islice
from typing import Collection, Dict, List, Optional, Tuple

import networkx as nx
from loguru import logger

from src.bayesnet.graph import Trail, iter_active_trails, trail_edges
from src.qpn.network import NodeKind, Qpn, QpnStructureError, SynergyArc
from src.qpn.signs import Sign, combine_all, product_of, sign_combine, sign_product
from src.utils.constants import QpnDefaults


class TrailLimitError(RuntimeError):
    """Raised when trail enumeration exceeds the configured cap."""


@dataclass(frozen=True)
class TrailSign:
    """Combined sign between two nodes and the active trails behind it."""
    source: str
    target: str
    sign: Sign
    trails: Tuple[Tuple[Trail, Sign], ...] = ()


def _sign_of(net: Qpn, trail: Trail) -> Sign:
    return product_of(net.edge_sign(a, b) for a, b in trail_edges(net.influence_graph, trail))


def _check_nodes(net: Qpn, *node_ids: str) -> None:
    for node_id in node_ids:
        net.node(node_id)


def trail_sign(
    net: Qpn,
    source: str,
    target: str,
    evidence: Collection[str] = (),
    max_trails: int = QpnDefaults.MAX_TRAILS,
) -> TrailSign:
    """
    ⊕ over active trails of the ⊗ of edge signs; zero with no active trail.
    Information edges are not traversed.

    Raises:
        ValueError: if source equals target or is itself evidence.
        TrailLimitError: if more than max_trails active trails exist.
    """
    evidence = set(evidence)
    _check_nodes(net, source, target, *evidence)
    if source == target:
        raise ValueError("Trail sign needs distinct endpoints")
    if source in evidence:
        raise ValueError(f"Source '{source}' is part of the evidence")
    if target in evidence:
        return TrailSign(source=source, target=target, sign=Sign.ZERO)

    trails: List[Tuple[Trail, Sign]] = []
    for trail in iter_active_trails(net.influence_graph, source, target, evidence):
        trails.append((trail, _sign_of(net, trail)))
        if len(trails) > max_trails:
            raise TrailLimitError(f"More than {max_trails} active trails between '{source}' and '{target}'")
    sign = combine_all(s for _, s in trails)
    return TrailSign(source=source, target=target, sign=sign, trails=tuple(trails))


def propagate(
    net: Qpn,
    perturbed: str,
    direction: Sign,
    evidence: Collection[str] = (),
    max_trails: int = QpnDefaults.MAX_TRAILS,
) -> Dict[str, Sign]:
    """
    Spread a plus/minus change at `perturbed` through the network.

    Sign messages travel along simple active trails, each node combining
    what reaches it by ⊕; evidence nodes stay zero. Every lattice update only
    ascends, so the pass terminates.

    Raises:
        ValueError: if perturbed is evidence or direction is not plus/minus.
    """
    evidence = set(evidence)
    _check_nodes(net, perturbed, *evidence)
    if perturbed in evidence:
        raise ValueError(f"Perturbed node '{perturbed}' is part of the evidence")
    if direction not in (Sign.PLUS, Sign.MINUS):
        raise ValueError(f"Perturbation direction must be plus or minus, got {direction.value}")

    signs = {n.id: Sign.ZERO for n in net.nodes}
    signs[perturbed] = direction
    count = 0
    for trail in iter_active_trails(net.influence_graph, perturbed, None, evidence):
        count += 1
        if count > max_trails:
            raise TrailLimitError(f"More than {max_trails} active trails leave '{perturbed}'")
        end = trail[-1]
        if end in evidence:
            continue
        signs[end] = sign_combine(signs[end], sign_product(direction, _sign_of(net, trail)))
    logger.debug(f"Propagated {direction.value} from '{perturbed}' along {count} trails")
    return signs


@dataclass(frozen=True)
class PolicyMonotonicity:
    """Derived sign of the optimal policy's response to an observation."""
    decision: str
    observation: str
    utility: str
    sign: Sign
    synergy: Optional[SynergyArc] = None
    observation_sign: Optional[Sign] = None
    decision_sign: Optional[Sign] = None
    diagnostic: str = ""


def _directed_factor(net: Qpn, origin: str, node: str, max_trails: int) -> Optional[Sign]:
    """Combined sign of the directed chains joining two nodes in either orientation, None without one."""
    if origin == node:
        return Sign.PLUS
    graph = net.influence_graph
    chains = list(islice(
        chain(nx.all_simple_paths(graph, origin, node), nx.all_simple_paths(graph, node, origin)),
        max_trails + 1,
    ))
    if len(chains) > max_trails:
        raise TrailLimitError(f"More than {max_trails} directed chains join '{origin}' and '{node}'")
    if not chains:
        return None
    return combine_all(product_of(net.edge_sign(a, b) for a, b in zip(path, path[1:])) for path in chains)


def derive_policy_monotonicity(
    net: Qpn,
    decision: str,
    observation: str,
    utility: str,
    max_trails: int = QpnDefaults.MAX_TRAILS,
) -> PolicyMonotonicity:
    """
    Chain synergy with directed-chain signs: for a synergy (X, W → utility)
    of sign σ, the policy sign is σ ⊗ sign(observation ~ X) ⊗ sign(decision ~ W),
    where each factor combines only chains whose edges all point the same way.
    Common-cause and collider trails never establish a factor, and the
    result is ambiguous when no synergy is reached.
    Plus means the optimal decision is nondecreasing in the observation.

    Raises:
        QpnStructureError: if the observation is not informational for the
            decision or utility is not a value node.
    """
    if net.node(decision).kind != NodeKind.DECISION:
        raise QpnStructureError(f"'{decision}' is not a decision node")
    if observation not in net.information_sources(decision):
        raise QpnStructureError(f"No information edge {observation} -> {decision}")
    if net.node(utility).kind != NodeKind.VALUE:
        raise QpnStructureError(f"'{utility}' is not a value node")

    arcs = [arc for arc in net.synergies if arc.target == utility]
    if not arcs:
        return PolicyMonotonicity(
            decision=decision, observation=observation, utility=utility, sign=Sign.AMBIGUOUS,
            diagnostic=f"no synergy arc targets '{utility}'",
        )

    applicable: List[Tuple[Sign, SynergyArc, Sign, Sign]] = []
    for arc in arcs:
        for x, w in ((arc.a, arc.b), (arc.b, arc.a)):
            if x == decision or w == observation:
                continue
            obs_sign = _directed_factor(net, observation, x, max_trails)
            dec_sign = _directed_factor(net, decision, w, max_trails)
            if obs_sign is None or dec_sign is None:
                continue
            applicable.append((product_of((arc.sign, obs_sign, dec_sign)), arc, obs_sign, dec_sign))

    established = [a for a in applicable if a[2] != Sign.ZERO and a[3] != Sign.ZERO]
    if not established:
        return PolicyMonotonicity(
            decision=decision, observation=observation, utility=utility, sign=Sign.AMBIGUOUS,
            diagnostic="no synergy endpoint is joined to both the observation and the decision by a directed chain",
        )
    sign = combine_all(a[0] for a in established)
    first = established[0]
    logger.debug(f"Policy sign of {decision} in {observation}: {sign.value} via {first[1]}")
    return PolicyMonotonicity(
        decision=decision, observation=observation, utility=utility, sign=sign,
        synergy=first[1], observation_sign=first[2], decision_sign=first[3],
    )


@dataclass(frozen=True)
class WinnersCurseReport:
    win: str
    value: str
    evidence: Tuple[str, ...]
    sign: Sign
    trails: Tuple[Tuple[Trail, Sign], ...] = field(default=(), compare=False)

    @property
    def curse(self) -> bool:
        return self.sign == Sign.MINUS


def winners_curse(
    net: Qpn,
    win: str,
    value: str,
    evidence: Collection[str] = (),
    max_trails: int = QpnDefaults.MAX_TRAILS,
) -> WinnersCurseReport:
    """Winning is a curse iff its combined influence on the value is minus."""
    result = trail_sign(net, win, value, evidence, max_trails)
    return WinnersCurseReport(
        win=win, value=value, evidence=tuple(sorted(evidence)), sign=result.sign, trails=result.trails,
    )
