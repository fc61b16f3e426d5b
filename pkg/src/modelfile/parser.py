"""
Model file parsing: JSON text to validated document to in-memory model.
"""

from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import List, Optional, Union
import json

from loguru import logger
from pydantic import ValidationError

from src.bayesnet.base import BayesNet, Cpt, Dag, Variable, validate
from src.games.auction import make_auction
from src.games.base import BayesianGame
from src.games.msr import MsrGame
from src.modelfile.schemas import (
    DOCUMENT_ADAPTER,
    BayesNetDocument,
    GameDocument,
    InterpretedDocument,
    MsrDocument,
    QpnDocument,
    WorldRef,
)
from src.qpn.network import EdgeKind, Qpn, QpnEdge, QpnNode, SynergyArc, validate_qpn
from src.qpn.signs import Sign
from src.signals.canonical import CanonicalParams, build_canonical
from src.signals.interpreted import AttributeSpace, InterpretedModel

Model = Union[BayesNet, InterpretedModel, Qpn, BayesianGame, MsrGame]


@dataclass(frozen=True)
class ModelIssue:
    """One problem found in a model file, with its location."""
    location: str
    message: str

    def __str__(self) -> str:
        return f"{self.location}: {self.message}"


class ModelFileError(ValueError):
    """Raised when a model file fails to parse or validate."""

    def __init__(self, issues: List[ModelIssue], source: str = ""):
        self.issues = issues
        self.source = source
        head = f"{source}: " if source else ""
        super().__init__(head + "; ".join(str(i) for i in issues))


def _location(loc: tuple) -> str:
    parts = list(loc)
    if parts and parts[0] in ("bayesnet", "interpreted", "qpn", "game", "msr"):
        parts = parts[1:]
    text = ""
    for part in parts:
        text += f"[{part}]" if isinstance(part, int) else (f".{part}" if text else str(part))
    return text or "document"


def _read_source(source: Union[str, Path]) -> tuple:
    """(text, label, base directory) for a path or inline JSON text."""
    if isinstance(source, Path) or not str(source).lstrip().startswith("{"):
        path = Path(source)
        return path.read_text(encoding="utf-8"), str(path), path.parent
    return str(source), "<text>", None


def parse_document(source: Union[str, Path]):
    """
    Parse and schema-validate a model file.

    Raises:
        ModelFileError: with the JSON line and column, or the failing field path.
    """
    text, label, _ = _read_source(source)
    return _parse_text(text, label)


def _parse_text(text: str, label: str):
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise ModelFileError([ModelIssue(f"line {e.lineno}, column {e.colno}", e.msg)], label) from None
    try:
        return DOCUMENT_ADAPTER.validate_python(raw)
    except ValidationError as e:
        issues = [ModelIssue(_location(err["loc"]), err["msg"]) for err in e.errors()]
        raise ModelFileError(issues, label) from None


def _bayesnet(doc: BayesNetDocument, label: str) -> BayesNet:
    body = doc.body
    variables = tuple(Variable(v.id, tuple(v.states), v.ordered) for v in body.variables)
    cpts = tuple(
        Cpt(
            child=c.child,
            parents=tuple(c.parents),
            rows=tuple(tuple(float(p) for p in row) for row in c.rows),
            deterministic=c.deterministic,
        )
        for c in body.cpts
    )
    dag = Dag(nodes=tuple(v.id for v in variables), edges=tuple(tuple(e) for e in body.edges))
    net = BayesNet(variables=variables, dag=dag, cpts=cpts, name=doc.name)
    result = validate(net)
    if not result.is_valid:
        raise ModelFileError([ModelIssue("body", msg) for msg in result.errors], label)
    for warning in result.warnings:
        logger.warning(f"{label}: {warning}")
    return net


def _interpreted(doc: InterpretedDocument, label: str) -> InterpretedModel:
    body = doc.body
    try:
        if body.marginals is not None:
            space = AttributeSpace.independent([[float(p) for p in m] for m in body.marginals])
            if list(space.domains) != body.domains:
                raise ValueError(f"marginals imply domains {list(space.domains)}, declared {body.domains}")
        else:
            space = AttributeSpace(domains=tuple(body.domains), prior=tuple(float(p) for p in body.prior))
        return InterpretedModel(
            space=space,
            outcome=tuple(body.outcome),
            observers=tuple(tuple(o) for o in body.observers),
            tie_break=body.tie_break,
            name=doc.name,
        )
    except ValueError as e:
        raise ModelFileError([ModelIssue("body", str(e))], label) from None


def _qpn(doc: QpnDocument, label: str) -> Qpn:
    body = doc.body
    net = Qpn(
        nodes=tuple(QpnNode(n.id, n.kind) for n in body.nodes),
        edges=tuple(
            QpnEdge(e.source, e.target, Sign(e.sign) if e.sign is not None else None, EdgeKind(e.kind))
            for e in body.edges
        ),
        synergies=tuple(SynergyArc(s.a, s.b, s.target, Sign(s.sign)) for s in body.synergies),
        name=doc.name,
    )
    result = validate_qpn(net)
    if not result.is_valid:
        raise ModelFileError([ModelIssue("body", msg) for msg in result.errors], label)
    return net


_INTEGER_PARAMS = {"n_agents", "attributes"}


def resolve_world(ref: WorldRef, base_dir: Optional[Path], label: str = "") -> BayesNet:
    """
    Load the world a game or market document refers to.

    Raises:
        ModelFileError: if the reference cannot be resolved to a valid bayesnet.
    """
    if ref.canonical is not None:
        known = {f.name for f in fields(CanonicalParams)}
        unknown = sorted(set(ref.params) - known)
        if unknown:
            raise ModelFileError([ModelIssue("body.world.params", f"unknown parameters {unknown}")], label)
        overrides = {k: int(v) if k in _INTEGER_PARAMS else float(v) for k, v in ref.params.items()}
        try:
            return build_canonical(ref.canonical, replace(CanonicalParams(), **overrides))
        except ValueError as e:
            raise ModelFileError([ModelIssue("body.world", str(e))], label) from None

    path = Path(ref.path)
    if not path.is_absolute() and base_dir is not None:
        path = base_dir / path
    if not path.exists():
        raise ModelFileError([ModelIssue("body.world.path", f"world file '{path}' not found")], label)
    world = parse_model(path)
    if not isinstance(world, BayesNet):
        raise ModelFileError([ModelIssue("body.world.path", f"'{path}' is not a bayesnet model")], label)
    return world


def _game(doc: GameDocument, base_dir: Optional[Path], label: str) -> BayesianGame:
    body = doc.body
    world = resolve_world(body.world, base_dir, label)
    try:
        return make_auction(
            body.auction, world, [float(b) for b in body.grid],
            signals=body.signals, values=body.values, name=doc.name,
        )
    except ValueError as e:
        raise ModelFileError([ModelIssue("body", str(e))], label) from None


def _msr(doc: MsrDocument, base_dir: Optional[Path], label: str) -> MsrGame:
    body = doc.body
    world = resolve_world(body.world, base_dir, label)
    try:
        return MsrGame(
            world=world, outcome=body.outcome, signals=tuple(body.signals), stages=tuple(body.stages),
            grid_points=body.grid_points, log_floor=float(body.log_floor),
        )
    except ValueError as e:
        raise ModelFileError([ModelIssue("body", str(e))], label) from None


def build_model(doc, base_dir: Optional[Path] = None, label: str = "") -> Model:
    """Turn a validated document into its in-memory model."""
    if isinstance(doc, BayesNetDocument):
        return _bayesnet(doc, label)
    if isinstance(doc, InterpretedDocument):
        return _interpreted(doc, label)
    if isinstance(doc, QpnDocument):
        return _qpn(doc, label)
    if isinstance(doc, GameDocument):
        return _game(doc, base_dir, label)
    return _msr(doc, base_dir, label)


def parse_model(source: Union[str, Path]) -> Model:
    """
    Parse a model file path or inline JSON text into a validated model.

    Raises:
        ModelFileError: listing every schema or semantic issue found.
    """
    text, label, base_dir = _read_source(source)
    doc = _parse_text(text, label)
    model = build_model(doc, base_dir, label)
    logger.debug(f"Parsed {doc.kind} model '{doc.name}' from {label}")
    return model
