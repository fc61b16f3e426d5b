"""
Qualitative probabilistic networks.
"""

from src.qpn.inference import (
    PolicyMonotonicity,
    TrailLimitError,
    TrailSign,
    WinnersCurseReport,
    derive_policy_monotonicity,
    propagate,
    trail_sign,
    winners_curse,
)
from src.qpn.network import (
    EdgeKind,
    NodeKind,
    Qpn,
    QpnEdge,
    QpnNode,
    QpnStructureError,
    QpnValidation,
    SynergyArc,
    apply_policy,
    validate_qpn,
)
from src.qpn.presets import PRESETS, build_preset, fig1a, fig5, fig6
from src.qpn.signs import Sign, combine_all, product_of, sign_combine, sign_product
