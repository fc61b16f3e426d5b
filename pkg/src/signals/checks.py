"""
Numeric structure checks: conditional independence and affiliation.
"""

from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations, product
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger

from src.bayesnet.base import Assignment, BayesNet, ZeroProbabilityEvidenceError
from src.bayesnet.inference import joint_table, query
from src.utils.constants import InferenceDefaults


AFFILIATION_TOLERANCE = 1e-12


class UnorderedVariableError(ValueError):
    """Raised when an order-dependent check is asked about an unordered variable."""


@dataclass(frozen=True)
class IndependenceReport:
    """Verdict of a numeric conditional independence check."""
    independent: bool
    max_deviation: float
    x: Tuple[str, ...] = ()
    y: Tuple[str, ...] = ()
    given: Tuple[str, ...] = ()


def check_independence(
    net: BayesNet,
    x: Sequence[str],
    y: Sequence[str],
    z: Sequence[str] = (),
    tolerance: float = InferenceDefaults.TOLERANCE,
    max_states: int = InferenceDefaults.MAX_JOINT_STATES,
) -> IndependenceReport:
    """
    Verify Pr(X, Y | z) = Pr(X | z)·Pr(Y | z) for every z of positive probability.

    Raises:
        ValueError: if the sets overlap.
    """
    x, y, z = tuple(x), tuple(y), tuple(z)
    if set(x) & set(y) or set(x) & set(z) or set(y) & set(z):
        raise ValueError(f"Variable sets must be pairwise disjoint: {x} {y} {z}")
    for var in x + y + z:
        net.variable(var)

    joint = joint_table(net, max_states)
    keep = [net.axis[v] for v in x + y + z]
    drop = tuple(ax for ax in range(joint.ndim) if ax not in keep)
    marginal = joint.sum(axis=drop)
    order = sorted(keep)
    p_xyz = np.transpose(marginal, [order.index(ax) for ax in keep])

    nx_, ny_ = len(x), len(y)
    p_xz = p_xyz.sum(axis=tuple(range(nx_, nx_ + ny_)), keepdims=True)
    p_yz = p_xyz.sum(axis=tuple(range(nx_)), keepdims=True)
    p_z = p_xz.sum(axis=tuple(range(nx_)), keepdims=True)

    with np.errstate(divide="ignore", invalid="ignore"):
        conditional = np.where(p_z > 0, p_xyz / p_z, 0.0)
        product_form = np.where(p_z > 0, (p_xz / p_z) * (p_yz / p_z), 0.0)
    deviation = float(np.max(np.abs(conditional - product_form))) if conditional.size else 0.0
    return IndependenceReport(
        independent=deviation <= tolerance,
        max_deviation=deviation,
        x=x, y=y, given=z,
    )


class AffiliationVerdict(str, Enum):
    AFFILIATED = "affiliated"
    VIOLATED = "violated"
    DEGENERATE = "degenerate"


@dataclass(frozen=True)
class AffiliationWitness:
    """
    One lattice inequality instance f(p∨q)·f(p∧q) ≥ f(p)·f(q), points given
    as state labels in variable order.
    """
    point: Tuple[str, ...]
    other: Tuple[str, ...]
    join: Tuple[str, ...]
    meet: Tuple[str, ...]
    lattice_product: float
    cross_product: float

    @property
    def gap(self) -> float:
        return self.cross_product - self.lattice_product

    def describe(self) -> str:
        return (
            f"Pr{self.meet}·Pr{self.join} = {self.lattice_product:.6g} < "
            f"{self.cross_product:.6g} = Pr{self.point}·Pr{self.other}"
        )


@dataclass(frozen=True)
class AffiliationReport:
    """Outcome of an affiliation check over ordered variables."""
    variables: Tuple[str, ...]
    conditioning: Dict[str, str]
    verdict: AffiliationVerdict
    witness: Optional[AffiliationWitness] = None
    pairs_checked: int = 0

    @property
    def pair(self) -> Tuple[str, ...]:
        return self.variables


def check_affiliation(
    net: BayesNet,
    variables: Sequence[str],
    given: Optional[Assignment] = None,
) -> AffiliationReport:
    """
    Lattice affiliation of the listed ordered variables under the conditioning
    event; the witness is the violated instance with the largest gap.

    Raises:
        UnorderedVariableError: if any listed variable is unordered.
    """
    variables = tuple(variables)
    given = dict(given or {})
    for var_id in variables:
        if not net.variable(var_id).ordered:
            raise UnorderedVariableError(f"Variable '{var_id}' has no state order")

    try:
        dist = query(net, variables, given)
    except ZeroProbabilityEvidenceError:
        logger.warning(f"Affiliation of {variables} conditioned on zero-probability event {given}")
        return AffiliationReport(variables=variables, conditioning=given, verdict=AffiliationVerdict.DEGENERATE)

    f = dist.values()
    states = [net.variable(v).states for v in variables]
    points = list(product(*(range(len(s)) for s in states)))

    def label(point: Tuple[int, ...]) -> Tuple[str, ...]:
        return tuple(states[k][i] for k, i in enumerate(point))

    witness: Optional[AffiliationWitness] = None
    checked = 0
    for p, q in combinations(points, 2):
        join = tuple(max(a, b) for a, b in zip(p, q))
        meet = tuple(min(a, b) for a, b in zip(p, q))
        if join in (p, q):
            continue
        checked += 1
        lattice_product = float(f[join] * f[meet])
        cross_product = float(f[p] * f[q])
        gap = cross_product - lattice_product
        if gap > AFFILIATION_TOLERANCE and (witness is None or gap > witness.gap + AFFILIATION_TOLERANCE):
            witness = AffiliationWitness(
                point=label(p), other=label(q), join=label(join), meet=label(meet),
                lattice_product=lattice_product, cross_product=cross_product,
            )

    verdict = AffiliationVerdict.VIOLATED if witness else AffiliationVerdict.AFFILIATED
    logger.debug(f"Affiliation of {variables} given {given}: {verdict.value} over {checked} pairs")
    return AffiliationReport(
        variables=variables, conditioning=given, verdict=verdict, witness=witness, pairs_checked=checked,
    )


def check_affiliation_pair(
    net: BayesNet,
    a: str,
    b: str,
    given: Optional[Assignment] = None,
) -> AffiliationReport:
    """Two-variable affiliation: the 2×2 inequality over every comparable pair of points."""
    return check_affiliation(net, (a, b), given)
