"""
Preset qualitative networks for the two-bidder auction models.
"""

from typing import Callable, Dict, List, Union

from src.qpn.network import EdgeKind, NodeKind, Qpn, QpnEdge, QpnNode, SynergyArc
from src.qpn.signs import Sign
from src.utils.constants import QpnPresetId


P, M, A = Sign.PLUS, Sign.MINUS, Sign.AMBIGUOUS


def _info(source: str, target: str) -> QpnEdge:
    return QpnEdge(source, target, None, EdgeKind.INFORMATION)


def _bidding_block(value_parent: Dict[int, str], rewire_payments: bool = False) -> List[QpnEdge]:
    """Bids, win indicator and utilities shared by the auction presets."""
    edges = [
        _info("s1", "b1"), _info("s2", "b2"),
        QpnEdge("b1", "w", P), QpnEdge("b2", "w", M),
        QpnEdge(value_parent[1], "u1", P), QpnEdge(value_parent[2], "u2", P),
        QpnEdge("w", "u1", A), QpnEdge("w", "u2", A),
    ]
    if rewire_payments:
        # second price: each winner pays the other bid
        edges += [QpnEdge("b2", "u1", M), QpnEdge("b1", "u2", M)]
    else:
        edges += [QpnEdge("b1", "u1", M), QpnEdge("b2", "u2", M)]
    return edges


def _bidder_nodes() -> List[QpnNode]:
    return [
        QpnNode("b1", NodeKind.DECISION), QpnNode("b2", NodeKind.DECISION),
        QpnNode("w"),
        QpnNode("u1", NodeKind.VALUE), QpnNode("u2", NodeKind.VALUE),
    ]


def fig5(independent: bool = False, second_price: bool = False) -> Qpn:
    """
    Two-bidder sealed-bid auction with interdependent values.

    w is the event that bidder 1 wins. `independent` drops the common latent
    state; `second_price` makes each bidder's payment depend on the other bid.
    """
    nodes = [QpnNode("v1"), QpnNode("v2"), QpnNode("s1"), QpnNode("s2")] + _bidder_nodes()
    edges = [QpnEdge("v1", "s1", P), QpnEdge("v2", "s2", P)]
    if not independent:
        nodes.insert(0, QpnNode("omega"))
        edges = [QpnEdge("omega", "v1", P), QpnEdge("omega", "v2", P)] + edges
    edges += _bidding_block({1: "v1", 2: "v2"}, rewire_payments=second_price)
    synergies = (SynergyArc("v1", "w", "u1", P), SynergyArc("v2", "w", "u2", M))
    name = "fig5" + ("-ipv" if independent else "") + ("-spsb" if second_price else "")
    return Qpn(nodes=tuple(nodes), edges=tuple(edges), synergies=synergies, name=name)


def fig6() -> Qpn:
    """Common value from two attributes, each bidder reading one attribute."""
    nodes = [QpnNode("x1"), QpnNode("x2"), QpnNode("v"), QpnNode("s1"), QpnNode("s2")] + _bidder_nodes()
    edges = [
        QpnEdge("x1", "v", P), QpnEdge("x2", "v", P),
        QpnEdge("x1", "s1", P), QpnEdge("x2", "s2", P),
    ] + _bidding_block({1: "v", 2: "v"})
    synergies = (SynergyArc("v", "w", "u1", P), SynergyArc("v", "w", "u2", M))
    return Qpn(nodes=tuple(nodes), edges=tuple(edges), synergies=synergies, name="fig6")


def fig1a(agents: int = 2) -> Qpn:
    """Generated interdependent values with every influence positive."""
    nodes = [QpnNode("omega")]
    edges = []
    for i in range(1, agents + 1):
        nodes += [QpnNode(f"v{i}"), QpnNode(f"s{i}")]
        edges += [QpnEdge("omega", f"v{i}", P), QpnEdge(f"v{i}", f"s{i}", P)]
    return Qpn(nodes=tuple(nodes), edges=tuple(edges), name="fig1a")


PRESETS: Dict[QpnPresetId, Callable[[], Qpn]] = {
    QpnPresetId.FIG1A: fig1a,
    QpnPresetId.FIG5: fig5,
    QpnPresetId.FIG5_IPV: lambda: fig5(independent=True),
    QpnPresetId.FIG5_SPSB: lambda: fig5(second_price=True),
    QpnPresetId.FIG6: fig6,
}


def build_preset(preset: Union[QpnPresetId, str]) -> Qpn:
    return PRESETS[QpnPresetId(preset)]()
