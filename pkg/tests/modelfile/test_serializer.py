import sys
import os
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..', '..')))
import json
from pathlib import Path
import pytest
from src.bayesnet.base import same_structure
from src.games.msr import MsrGame
from src.modelfile.parser import parse_document, parse_model
from src.modelfile.serializer import dump_document, format_probability, serialize, to_document
from src.qpn.presets import build_preset
from src.signals.canonical import build_canonical, canonical_interpreted
from src.utils.constants import CanonicalModelId, QpnPresetId

MODELS_DIR = Path(__file__).resolve().parents[2] / "data" / "models"


class TestFormatProbability:
    @pytest.mark.parametrize("p, text", [(0.5, "0.5"), (0.1, "0.1"), (1.0, "1.0"), (1e-9, "1e-09"), (1 / 3, "0.3333333333333333")])
    def test_shortest_round_trip_text(self, p, text):
        assert format_probability(p) == text
        assert float(text) == p


class TestCanonicalOutput:
    @pytest.mark.parametrize("path", sorted(MODELS_DIR.glob("*.json")), ids=lambda p: p.name)
    def test_bundled_files_are_canonical(self, path):
        text = path.read_text(encoding="utf-8")
        assert dump_document(parse_document(text)) == text

    def test_builder_output_matches_fixture(self):
        text = (MODELS_DIR / "fig1c.json").read_text(encoding="utf-8")
        description = json.loads(text)["description"]
        assert serialize(build_canonical(CanonicalModelId.FIG1C), description=description) == text

    def test_layout(self):
        text = serialize(build_canonical(CanonicalModelId.FIG1C))
        lines = text.splitlines()
        assert lines[0] == "{"
        assert lines[1] == '  "format_version": 1,'
        assert '        "states": ["0", "1"],' in lines
        assert text.endswith("}\n")


class TestToDocument:
    def test_bayesnet_survives_text(self):
        net = build_canonical(CanonicalModelId.FIG2A)
        assert same_structure(parse_model(serialize(net)), net)

    def test_interpreted_with_marginals(self):
        model = canonical_interpreted(CanonicalModelId.FIG2B)
        doc = to_document(model, name="majority")
        assert doc.body.prior is None
        assert doc.body.marginals == [["0.5", "0.5"]] * 3
        assert parse_model(serialize(model)).observers == model.observers

    def test_qpn_keeps_information_edges(self):
        net = build_preset(QpnPresetId.FIG5)
        doc = to_document(net)
        info = [e for e in doc.body.edges if e.kind == "information"]
        assert {(e.source, e.target) for e in info} == {("s1", "b1"), ("s2", "b2")}
        assert all(e.sign is None for e in info)
        assert parse_model(serialize(net)).arc_list() == net.arc_list()

    def test_games_are_not_serialised(self):
        with pytest.raises(ValueError):
            to_document(MsrGame(build_canonical(CanonicalModelId.APPENDIX_A)), name="market")
