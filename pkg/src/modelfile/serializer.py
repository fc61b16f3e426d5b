"""
Canonical model file output.

Keys follow schema order, nesting is indented by two spaces and lists of
scalars stay on one line, so parse followed by dump reproduces a canonical
file byte for byte.
"""

from typing import Any, Dict, Union
import json

from src.bayesnet.base import BayesNet
from src.modelfile.schemas import (
    DOCUMENT_FIELDS,
    BayesNetBody,
    BayesNetDocument,
    CptSpec,
    InterpretedBody,
    InterpretedDocument,
    QpnBody,
    QpnDocument,
    QpnEdgeSpec,
    QpnNodeSpec,
    SynergySpec,
    VariableSpec,
)
from src.qpn.network import Qpn
from src.signals.interpreted import InterpretedModel
from src.utils.constants import AppMetadata


def format_probability(p: float) -> str:
    """Shortest decimal text that reads back to the same double."""
    return repr(float(p))


def _bayesnet_document(net: BayesNet, name: str, description: str) -> BayesNetDocument:
    body = BayesNetBody(
        variables=[VariableSpec(id=v.id, states=list(v.states), ordered=v.ordered) for v in net.variables],
        edges=[tuple(e) for e in net.dag.edges],
        cpts=[
            CptSpec(
                child=c.child,
                parents=list(c.parents),
                rows=[[format_probability(p) for p in row] for row in c.rows],
                deterministic=c.deterministic,
            )
            for c in net.cpts
        ],
    )
    return BayesNetDocument(
        format_version=AppMetadata.FORMAT_VERSION, kind="bayesnet", name=name, description=description, body=body,
    )


def _interpreted_document(m: InterpretedModel, name: str, description: str) -> InterpretedDocument:
    space = m.space
    body = InterpretedBody(
        domains=list(space.domains),
        prior=None if space.marginals is not None else [format_probability(p) for p in space.prior],
        marginals=(
            [[format_probability(p) for p in marginal] for marginal in space.marginals]
            if space.marginals is not None else None
        ),
        outcome=list(m.outcome),
        observers=[list(o) for o in m.observers],
        tie_break=m.tie_break,
    )
    return InterpretedDocument(
        format_version=AppMetadata.FORMAT_VERSION, kind="interpreted", name=name, description=description, body=body,
    )


def _qpn_document(net: Qpn, name: str, description: str) -> QpnDocument:
    body = QpnBody(
        nodes=[QpnNodeSpec(id=n.id, kind=n.kind) for n in net.nodes],
        edges=[
            QpnEdgeSpec(
                source=e.source, target=e.target,
                sign=e.sign.value if e.sign is not None else None, kind=e.kind.value,
            )
            for e in net.edges
        ],
        synergies=[SynergySpec(a=s.a, b=s.b, target=s.target, sign=s.sign.value) for s in net.synergies],
    )
    return QpnDocument(
        format_version=AppMetadata.FORMAT_VERSION, kind="qpn", name=name, description=description, body=body,
    )


def to_document(model: Union[BayesNet, InterpretedModel, Qpn], name: str = None, description: str = ""):
    """
    Document form of a self-contained model.

    Raises:
        ValueError: for games and markets, which reference their world by file.
    """
    name = model.name if name is None else name
    if isinstance(model, BayesNet):
        return _bayesnet_document(model, name, description)
    if isinstance(model, InterpretedModel):
        return _interpreted_document(model, name, description)
    if isinstance(model, Qpn):
        return _qpn_document(model, name, description)
    raise ValueError(f"{type(model).__name__} documents are written by hand around a world reference")


def _is_scalar(value: Any) -> bool:
    return value is None or isinstance(value, (str, int, float, bool))


def _render(value: Any, indent: int) -> str:
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [f"{inner}{json.dumps(k)}: {_render(v, indent + 1)}" for k, v in value.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(value, list):
        if not value:
            return "[]"
        if all(_is_scalar(v) for v in value):
            return "[" + ", ".join(json.dumps(v) for v in value) + "]"
        items = [f"{inner}{_render(v, indent + 1)}" for v in value]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    return json.dumps(value)


def dump_document(doc) -> str:
    data: Dict[str, Any] = doc.model_dump(mode="json")
    ordered = {key: data[key] for key in DOCUMENT_FIELDS}
    return _render(ordered, 0) + "\n"


def serialize(model: Union[BayesNet, InterpretedModel, Qpn], name: str = None, description: str = "") -> str:
    """Canonical JSON text of a self-contained model."""
    return dump_document(to_document(model, name, description))
