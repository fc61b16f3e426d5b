import sys
import os
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..', '..')))
import json
from pathlib import Path
import pytest
from unittest.mock import patch
from src.bayesnet.base import ValidationResult
from src.cli.commands import CommandError, assignment, load_game, load_qpn, names
from src.cli.main import build_parser, main

MODELS_DIR = Path(__file__).resolve().parents[2] / "data" / "models"


def run_json(capsys, *argv):
    code = main([*argv, "--format", "json", "--log-level", "ERROR"])
    return code, json.loads(capsys.readouterr().out)


def numbers_of(data):
    assert len(data["results"]) == 1
    return data["results"][0]["numbers"]


class TestArgumentHelpers:
    def test_names(self):
        assert names(None) == []
        assert names(" s1, s2 ,,v ") == ["s1", "s2", "v"]

    def test_assignment(self):
        assert assignment("s1=1, v=0") == {"s1": "1", "v": "0"}
        assert assignment("") == {}

    def test_bad_assignment(self):
        with pytest.raises(CommandError):
            assignment("s1")

    def test_loader_kind_mismatch(self):
        args = build_parser().parse_args(["qpn-propagate", "--canonical", "Fig1c", "--node", "v"])
        with pytest.raises(CommandError):
            load_qpn(args)

    def test_world_defaults_to_desk_grid(self):
        args = build_parser().parse_args(["solve-auction", "--canonical", "Fig1d"])
        assert len(load_game(args).grids[0]) == 6

    def test_market_is_not_an_auction(self):
        args = build_parser().parse_args(["solve-auction", "--model", str(MODELS_DIR / "appendix_a_msr.json")])
        with pytest.raises(CommandError):
            load_game(args)


class TestNetworkCommands:
    def test_validate_fixture(self, capsys):
        code, data = run_json(capsys, "validate", "--model", str(MODELS_DIR / "fig1c.json"))
        assert code == 0
        numbers = numbers_of(data)
        assert numbers["kind"] == "bayesnet"
        assert numbers["variables"] == 3
        assert numbers["warnings"] == []

    def test_validate_reports_errors(self, capsys):
        broken = ValidationResult(is_valid=False, errors=["cpt for 'v' does not sum to 1"])
        with patch("src.cli.commands.validate", return_value=broken):
            code, data = run_json(capsys, "validate", "--canonical", "Fig1c")
        assert code == 1
        assert "cpt for 'v' does not sum to 1" in data["error"]

    def test_validate_qpn_fixture(self, capsys):
        _, data = run_json(capsys, "validate", "--model", str(MODELS_DIR / "fig5_qpn.json"))
        assert numbers_of(data)["kind"] == "qpn"

    def test_dsep(self, capsys):
        _, data = run_json(capsys, "dsep", "--canonical", "Fig1c", "--x", "s1", "--y", "s2", "--given", "v")
        numbers = numbers_of(data)
        assert numbers["separated"] is True
        assert numbers["numerically_independent"] is True

    def test_dsep_fixture_empty_given(self, capsys):
        code, data = run_json(capsys, "dsep", "--model", str(MODELS_DIR / "fig1d.json"),
                              "--x", "s1", "--y", "s2", "--given", "")
        assert code == 0
        assert numbers_of(data)["separated"] is True

    def test_dsep_unconditioned(self, capsys):
        _, data = run_json(capsys, "dsep", "--canonical", "Fig1c", "--x", "s1", "--y", "s2")
        assert numbers_of(data)["separated"] is False

    def test_query(self, capsys):
        _, data = run_json(capsys, "query", "--canonical", "AppendixA", "--targets", "v", "--evidence", "s1=0")
        numbers = numbers_of(data)
        assert numbers["evidence_probability"] == pytest.approx(0.5)
        table = {row["assignment"]["v"]: row["probability"] for row in numbers["table"]}
        assert table == pytest.approx({"0": 0.5, "1": 0.5})

    def test_classify(self, capsys):
        _, data = run_json(capsys, "classify", "--canonical", "Fig1a")
        assert numbers_of(data)["structure"] == "generated"

    def test_affiliation_witness(self, capsys):
        _, data = run_json(capsys, "affiliation", "--canonical", "AppendixA", "--pair", "s1,s2,v")
        numbers = numbers_of(data)
        assert numbers["verdict"] == "violated"
        assert numbers["witness"] is not None

    def test_interaction(self, capsys):
        _, data = run_json(capsys, "interaction", "--canonical", "Fig4a")
        assert numbers_of(data)["verdict"] == "substitutes"


class TestInterpretedCommands:
    def test_predict(self, capsys):
        _, data = run_json(capsys, "predict", "--canonical", "Fig3a", "--agent", "1", "--interp", "1")
        assert numbers_of(data)["prediction"] == 1

    def test_accuracy(self, capsys):
        _, data = run_json(capsys, "accuracy", "--canonical", "Fig3a")
        numbers = numbers_of(data)
        assert numbers["accuracy"] == pytest.approx({"1": 0.75, "2": 0.75})
        assert numbers["correctness_correlation_1_2"] == pytest.approx(-1.0 / 3.0)

    def test_agent_out_of_range(self, capsys):
        code, data = run_json(capsys, "predict", "--canonical", "Fig3a", "--agent", "3")
        assert code == 1
        assert data["error"].startswith("CommandError")


class TestQpnCommands:
    def test_propagate(self, capsys):
        _, data = run_json(capsys, "qpn-propagate", "--preset", "fig1a", "--node", "omega")
        assert set(numbers_of(data)["signs"].values()) == {"+"}

    def test_policy(self, capsys):
        _, data = run_json(capsys, "qpn-policy", "--preset", "fig5",
                           "--decision", "b1", "--observation", "s1", "--utility", "u1")
        assert numbers_of(data)["sign"] == "+"

    def test_qpn_curse_needs_nodes(self, capsys):
        code, data = run_json(capsys, "curse", "--preset", "fig5")
        assert code == 1
        assert "needs --win and --value" in data["error"]


class TestGameCommands:
    def test_solve_desk_auction(self, capsys):
        _, data = run_json(capsys, "solve-auction", "--model", str(MODELS_DIR / "desk_auction.json"))
        numbers = numbers_of(data)
        assert numbers["auction"] == "FPSB"
        assert numbers["symmetric"] == [[[0.0, 0.4], [0.0, 0.4]]]

    def test_curse_on_game(self, capsys):
        _, data = run_json(capsys, "curse", "--model", str(MODELS_DIR / "desk_auction.json"))
        numbers = numbers_of(data)
        assert numbers["cases"] == 21 * 36 * 2
        assert numbers["max_difference"] <= 1e-12
        assert numbers["at_equilibrium"]["1"] == pytest.approx(-3.0 / 44.0)

    def test_theorem1_on_grid(self, capsys):
        _, data = run_json(capsys, "theorem1", "--canonical", "Fig1d", "--grid", "0,0.5,1")
        numbers = numbers_of(data)
        assert numbers["equivalent"] is True
        assert numbers["exhaustive"] is True

    def test_market(self, capsys):
        _, data = run_json(capsys, "msr", "--canonical", "AppendixA", "--stages", "0")
        numbers = numbers_of(data)
        assert numbers["stages"] == [0]
        assert numbers["bluff_gain"] == pytest.approx(0.0, abs=1e-12)
