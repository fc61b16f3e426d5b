import sys
import os
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..', '..')))
import pytest
from src.bayesnet.base import (
    BayesNet,
    Cpt,
    Dag,
    UnknownVariableError,
    Variable,
    same_structure,
    validate,
)

BINARY = ("0", "1")


def _chain() -> BayesNet:
    variables = [Variable("a", BINARY, True), Variable("b", BINARY, True)]
    cpts = [
        Cpt("a", (), ((0.5, 0.5),)),
        Cpt("b", ("a",), ((0.9, 0.1), (0.2, 0.8))),
    ]
    return BayesNet.from_cpts(variables, cpts, name="chain")


class TestVariable:
    def test_index(self):
        var = Variable("s", ("low", "high"), True)
        assert var.cardinality == 2
        assert var.index("high") == 1

    def test_unknown_state(self):
        with pytest.raises(UnknownVariableError):
            Variable("s", BINARY, True).index("2")

    def test_order_must_be_declared(self):
        with pytest.raises(TypeError):
            Variable("s", BINARY)
        assert not Variable("s", BINARY, False).ordered


class TestBayesNet:
    def test_from_cpts_reads_edges(self):
        net = _chain()
        assert net.dag.edges == (("a", "b"),)
        assert net.parents("b") == ("a",)
        assert net.children("a") == ("b",)
        assert net.joint_state_count() == 4

    def test_unknown_variable(self):
        with pytest.raises(UnknownVariableError):
            _chain().variable("c")

    def test_check_assignment(self):
        net = _chain()
        net.check_assignment({"a": "1"})
        with pytest.raises(UnknownVariableError):
            net.check_assignment({"a": "2"})

    def test_cpt_frame(self):
        frame = _chain().cpt_frame("b")
        assert list(frame.columns) == ["0", "1"]
        assert frame.iloc[1, 1] == pytest.approx(0.8)


class TestValidate:
    def test_valid_network(self):
        result = validate(_chain())
        assert result.is_valid
        assert result.errors == []
        assert result.error_message is None

    def test_row_sum_names_the_row(self):
        net = _chain()
        bad = BayesNet.from_cpts(
            net.variables,
            [net.cpts[0], Cpt("b", ("a",), ((0.9, 0.1), (0.3, 0.8)))],
        )
        result = validate(bad)
        assert not result.is_valid
        assert any("cpt 'b' row 1" in e and "sums to 1.1" in e for e in result.errors)

    def test_cycle_detected(self):
        variables = (Variable("a", BINARY, True), Variable("b", BINARY, True))
        dag = Dag(nodes=("a", "b"), edges=(("a", "b"), ("b", "a")))
        cpts = (Cpt("a", ("b",), ((0.5, 0.5),) * 2), Cpt("b", ("a",), ((0.5, 0.5),) * 2))
        result = validate(BayesNet(variables, dag, cpts))
        assert any("cycle" in e for e in result.errors)

    def test_edge_to_undeclared_variable(self):
        variables = (Variable("a", BINARY, True),)
        dag = Dag(nodes=("a",), edges=(("a", "ghost"),))
        result = validate(BayesNet(variables, dag, (Cpt("a", (), ((0.5, 0.5),)),)))
        assert any("unknown node 'ghost'" in e for e in result.errors)

    def test_missing_cpt(self):
        net = _chain()
        result = validate(BayesNet(net.variables, net.dag, net.cpts[:1]))
        assert "missing cpt for 'b'" in result.errors

    def test_degenerate_variable_warns(self):
        net = BayesNet.from_cpts([Variable("c", ("only",), True)], [Cpt("c", (), ((1.0,),))])
        result = validate(net)
        assert result.is_valid
        assert result.warnings

    def test_deterministic_rows_must_be_one_hot(self):
        net = _chain()
        bad = BayesNet.from_cpts(
            net.variables,
            [net.cpts[0], Cpt("b", ("a",), ((0.9, 0.1), (0.0, 1.0)), deterministic=True)],
        )
        assert any("not one-hot" in e for e in validate(bad).errors)


class TestSameStructure:
    def test_identical(self):
        assert same_structure(_chain(), _chain())

    def test_within_tolerance(self):
        net = _chain()
        close = BayesNet.from_cpts(
            net.variables,
            [net.cpts[0], Cpt("b", ("a",), ((0.9 + 1e-12, 0.1 - 1e-12), (0.2, 0.8)))],
        )
        assert same_structure(net, close)

    def test_different_rows(self):
        net = _chain()
        other = BayesNet.from_cpts(
            net.variables,
            [net.cpts[0], Cpt("b", ("a",), ((0.8, 0.2), (0.2, 0.8)))],
        )
        assert not same_structure(net, other)
