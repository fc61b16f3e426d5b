import sys
import os
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..', '..')))
import pytest
from src.qpn.network import (
    EdgeKind,
    NodeKind,
    Qpn,
    QpnEdge,
    QpnNode,
    QpnStructureError,
    SynergyArc,
    apply_policy,
    validate_qpn,
)
from src.qpn.presets import build_preset, fig1a
from src.qpn.signs import Sign
from src.utils.constants import QpnPresetId


def _qpn(edges, nodes=None, synergies=()):
    ids = nodes or sorted({n for e in edges for n in (e.source, e.target)})
    return Qpn(nodes=tuple(n if isinstance(n, QpnNode) else QpnNode(n) for n in ids), edges=tuple(edges),
               synergies=tuple(synergies))


class TestPresets:
    @pytest.mark.parametrize("preset", list(QpnPresetId))
    def test_presets_are_valid(self, preset):
        result = validate_qpn(build_preset(preset))
        assert result.is_valid, result.errors

    def test_fig5_shape(self):
        net = build_preset("fig5")
        assert net.node("b1").kind == NodeKind.DECISION
        assert net.node("u2").kind == NodeKind.VALUE
        assert net.information_sources("b1") == ("s1",)
        assert net.edge_sign("b2", "w") == Sign.MINUS
        assert ("s1", "b1", "info") in net.arc_list()

    def test_independent_variant_drops_latent_state(self):
        net = build_preset(QpnPresetId.FIG5_IPV)
        with pytest.raises(QpnStructureError):
            net.node("omega")

    def test_second_price_rewires_payments(self):
        arcs = build_preset(QpnPresetId.FIG5_SPSB).arc_list()
        assert ("b2", "u1", "-") in arcs
        assert ("b1", "u1", "-") not in arcs

    def test_agent_count(self):
        assert len(fig1a(3).nodes) == 7


class TestValidateQpn:
    def test_cycle(self):
        result = validate_qpn(_qpn([QpnEdge("a", "b"), QpnEdge("b", "a")]))
        assert not result.is_valid
        assert any("cycle" in e for e in result.errors)

    def test_unknown_node(self):
        net = Qpn(nodes=(QpnNode("a"),), edges=(QpnEdge("a", "ghost"),))
        assert "edge a->ghost references an unknown node" in validate_qpn(net).errors

    def test_value_node_has_no_children(self):
        nodes = [QpnNode("u", NodeKind.VALUE), QpnNode("a")]
        result = validate_qpn(_qpn([QpnEdge("u", "a")], nodes=nodes))
        assert any("value node 'u'" in e for e in result.errors)

    def test_information_edge_rules(self):
        nodes = [QpnNode("s"), QpnNode("d", NodeKind.DECISION), QpnNode("c")]
        signed = QpnEdge("s", "d", Sign.PLUS, EdgeKind.INFORMATION)
        into_chance = QpnEdge("s", "c", None, EdgeKind.INFORMATION)
        errors = validate_qpn(_qpn([signed, into_chance], nodes=nodes)).errors
        assert any("carries a sign" in e for e in errors)
        assert any("must run from a chance node to a decision node" in e for e in errors)

    def test_synergy_needs_paths(self):
        net = _qpn([QpnEdge("a", "u"), QpnEdge("b", "c")], synergies=[SynergyArc("a", "b", "u", Sign.PLUS)])
        assert "synergy endpoint 'b' has no path to 'u'" in validate_qpn(net).errors


class TestApplyPolicy:
    def test_information_edges_become_signed(self):
        net = apply_policy(build_preset(QpnPresetId.FIG5), "b1", Sign.PLUS)
        assert net.node("b1").kind == NodeKind.CHANCE
        assert net.edge_sign("s1", "b1") == Sign.PLUS
        assert validate_qpn(net).is_valid
        assert net.information_sources("b2") == ("s2",)

    def test_only_decisions(self):
        with pytest.raises(QpnStructureError):
            apply_policy(build_preset(QpnPresetId.FIG5), "w")
