"""
Pydantic schemas of the JSON model file format.

Every document carries `format_version`, `kind`, `name`, `description` and
a kind-specific `body`. Probabilities are written as decimal strings.
"""

from decimal import Decimal, InvalidOperation
from typing import Annotated, Dict, List, Literal, Optional, Tuple, Union

from pydantic import AfterValidator, BaseModel, ConfigDict, Field, TypeAdapter, model_validator

from src.qpn.network import NodeKind
from src.qpn.signs import Sign
from src.signals.interpreted import TieBreak
from src.utils.constants import AuctionKind


def _decimal_text(text: str) -> str:
    try:
        value = Decimal(text)
    except InvalidOperation:
        raise ValueError(f"'{text}' is not a decimal number") from None
    if not value.is_finite():
        raise ValueError(f"'{text}' is not finite")
    return text


def _sign_text(text: str) -> str:
    try:
        return Sign.parse(text).value
    except ValueError:
        raise ValueError(f"'{text}' is not a sign (+, -, 0, ?)") from None


DecimalText = Annotated[str, AfterValidator(_decimal_text)]
SignText = Annotated[str, AfterValidator(_sign_text)]


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class VariableSpec(_Strict):
    id: str = Field(..., min_length=1)
    states: List[str] = Field(..., min_length=1)
    ordered: bool = True


class CptSpec(_Strict):
    child: str
    parents: List[str] = Field(default_factory=list)
    rows: List[List[DecimalText]]
    deterministic: bool = False


class BayesNetBody(_Strict):
    variables: List[VariableSpec]
    edges: List[Tuple[str, str]] = Field(default_factory=list)
    cpts: List[CptSpec]


class InterpretedBody(_Strict):
    """Attribute domains with either a full prior or independent marginals."""
    domains: List[int] = Field(..., min_length=1)
    prior: Optional[List[DecimalText]] = None
    marginals: Optional[List[List[DecimalText]]] = None
    outcome: List[int]
    observers: List[List[int]]
    tie_break: TieBreak = TieBreak.LOWEST

    @model_validator(mode="after")
    def _one_prior(self) -> "InterpretedBody":
        if (self.prior is None) == (self.marginals is None):
            raise ValueError("give exactly one of 'prior' or 'marginals'")
        return self


class QpnNodeSpec(_Strict):
    id: str = Field(..., min_length=1)
    kind: NodeKind = NodeKind.CHANCE


class QpnEdgeSpec(_Strict):
    source: str
    target: str
    sign: Optional[SignText] = None
    kind: Literal["influence", "information"] = "influence"


class SynergySpec(_Strict):
    a: str
    b: str
    target: str
    sign: SignText


class QpnBody(_Strict):
    nodes: List[QpnNodeSpec]
    edges: List[QpnEdgeSpec] = Field(default_factory=list)
    synergies: List[SynergySpec] = Field(default_factory=list)


class WorldRef(_Strict):
    """
    A bayesnet model file relative to the referencing document, or a
    canonical id with optional parameter overrides.
    """
    path: Optional[str] = None
    canonical: Optional[str] = None
    params: Dict[str, DecimalText] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _one_source(self) -> "WorldRef":
        if (self.path is None) == (self.canonical is None):
            raise ValueError("give exactly one of 'path' or 'canonical'")
        return self


class GameBody(_Strict):
    world: WorldRef
    auction: AuctionKind = AuctionKind.FPSB
    grid: List[DecimalText] = Field(..., min_length=1)
    signals: Optional[List[str]] = None
    values: Optional[List[str]] = None


class MsrBody(_Strict):
    world: WorldRef
    outcome: str = "v"
    signals: List[str] = Field(default_factory=lambda: ["s1", "s2"])
    stages: List[int] = Field(default_factory=lambda: [0, 1, 0])
    grid_points: int = 21
    log_floor: DecimalText = "1e-09"


class _Document(_Strict):
    format_version: Literal[1]
    name: str = ""
    description: str = ""


class BayesNetDocument(_Document):
    kind: Literal["bayesnet"]
    body: BayesNetBody


class InterpretedDocument(_Document):
    kind: Literal["interpreted"]
    body: InterpretedBody


class QpnDocument(_Document):
    kind: Literal["qpn"]
    body: QpnBody


class GameDocument(_Document):
    kind: Literal["game"]
    body: GameBody


class MsrDocument(_Document):
    kind: Literal["msr"]
    body: MsrBody


ModelDocument = Annotated[
    Union[BayesNetDocument, InterpretedDocument, QpnDocument, GameDocument, MsrDocument],
    Field(discriminator="kind"),
]

DOCUMENT_ADAPTER: TypeAdapter = TypeAdapter(ModelDocument)

# canonical key order for serialized documents
DOCUMENT_FIELDS = ("format_version", "kind", "name", "description", "body")
