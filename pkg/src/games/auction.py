"""
Sealed-bid auction payoffs in value-action separable form.
"""

from typing import Optional, Sequence, Tuple, Union

from loguru import logger

from src.bayesnet.base import BayesNet
from src.games.base import Bids, BayesianGame, GameDefinitionError, PayoffDecomposition
from src.utils.constants import AuctionKind, GameDefaults


def win_share(own_bid: float, other_bids: Bids) -> float:
    """1 if highest, 1/k when tied with k-1 others at the top, else 0."""
    if not other_bids:
        return 1.0
    top = max(other_bids)
    if own_bid > top + GameDefaults.TIE_TOLERANCE:
        return 1.0
    if own_bid < top - GameDefaults.TIE_TOLERANCE:
        return 0.0
    tied = sum(1 for b in other_bids if abs(b - top) <= GameDefaults.TIE_TOLERANCE)
    return 1.0 / (1 + tied)


def _value(value: float, own_bid: float) -> float:
    return value


def _pay_own_bid(own_bid: float, other_bids: Bids) -> float:
    return -own_bid * win_share(own_bid, other_bids)


def _pay_second_price(own_bid: float, other_bids: Bids) -> float:
    price = max(other_bids) if other_bids else 0.0
    return -price * win_share(own_bid, other_bids)


FPSB_PAYOFF = PayoffDecomposition(f=_value, g=win_share, h=_pay_own_bid)
SPSB_PAYOFF = PayoffDecomposition(f=_value, g=win_share, h=_pay_second_price)


def auction_payoff(kind: AuctionKind, value: float, own_bid: float, other_bids: Bids) -> float:
    """Direct (undecomposed) sealed-bid payoff."""
    share = win_share(own_bid, other_bids)
    price = own_bid if kind == AuctionKind.FPSB else (max(other_bids) if other_bids else 0.0)
    return (value - price) * share


def _default_players(world: BayesNet) -> int:
    count = 0
    while f"s{count + 1}" in world.ids:
        count += 1
    return count


def make_auction(
    kind: Union[AuctionKind, str],
    world: BayesNet,
    grids: Union[Sequence[float], Sequence[Sequence[float]]],
    signals: Optional[Sequence[str]] = None,
    values: Optional[Sequence[str]] = None,
    name: str = "",
) -> BayesianGame:
    """
    Sealed-bid auction over a signal world.

    Signals default to s1..sN; values default to v1..vN, or a shared v for a
    common-value world. A flat grid is used for every player.

    Raises:
        GameDefinitionError: if the world lacks a signal or value variable.
    """
    kind = AuctionKind(kind)
    players = len(signals) if signals else _default_players(world)
    if players < 1:
        raise GameDefinitionError(f"world '{world.name}' exposes no signal variables s1..sN")
    signals = tuple(signals) if signals else tuple(f"s{i}" for i in range(1, players + 1))
    if values is None:
        per_player = tuple(f"v{i}" for i in range(1, players + 1))
        if all(v in world.ids for v in per_player):
            values = per_player
        elif "v" in world.ids:
            values = ("v",) * players
        else:
            raise GameDefinitionError(f"world '{world.name}' has no value variables v1..v{players} or v")
    values = tuple(values)
    for var_id in signals + values:
        if var_id not in world.ids:
            raise GameDefinitionError(f"world '{world.name}' has no variable '{var_id}'")

    if grids and isinstance(grids[0], (int, float)):
        grid_tuple = tuple(tuple(float(b) for b in grids) for _ in range(players))
    else:
        grid_tuple = tuple(tuple(float(b) for b in g) for g in grids)

    decomposition = FPSB_PAYOFF if kind == AuctionKind.FPSB else SPSB_PAYOFF

    def general(player: int, vals: Tuple[float, ...], actions: Tuple[float, ...]) -> float:
        others = tuple(a for j, a in enumerate(actions) if j != player)
        return auction_payoff(kind, vals[player], actions[player], others)

    logger.debug(f"Auction {kind.value} over '{world.name}' with {players} bidders")
    return BayesianGame(
        world=world, signals=signals, values=values, grids=grid_tuple,
        decomposition=decomposition, payoff=general, kind=kind,
        name=name or f"{kind.value}:{world.name}",
    )
