"""
Strategic comparisons on auction games: private-value counterparts, best
response equivalence, the decomposition identity, winner's curse and bid
depression.
"""

from dataclasses import dataclass
from itertools import combinations_with_replacement, product
from typing import List, Optional, Sequence, Tuple, Union
import math

import numpy as np
from loguru import logger

from src.bayesnet.base import BayesNet, Cpt, Variable
from src.bayesnet.inference import query
from src.games.auction import make_auction, win_share
from src.games.base import (
    Bids,
    BayesianGame,
    GameDefinitionError,
    NonMonotoneProfileError,
    StrategyProfile,
)
from src.games.solver import best_responses, find_pure_equilibria, symmetric_equilibria
from src.utils.constants import AuctionKind, GameDefaults, VerificationDefaults


def ipv_counterpart(
    world: BayesNet,
    signals: Sequence[str],
    values: Sequence[str],
    name: str = "",
) -> Tuple[BayesNet, Tuple[str, ...], Tuple[str, ...]]:
    """
    Private-value world with each signal an independent root carrying its
    marginal and each value depending only on its own signal through
    Pr(v_i | s_i) of the original world.

    Returns:
        (network, signal ids, value ids); repeated value ids become v1..vN.
    """
    signals = tuple(signals)
    values = tuple(values)
    new_values = values if len(set(values)) == len(values) else tuple(f"v{i + 1}" for i in range(len(values)))
    variables: List[Variable] = []
    cpts: List[Cpt] = []
    for s_id, v_id, new_v in zip(signals, values, new_values):
        s_var, v_var = world.variable(s_id), world.variable(v_id)
        marginal = query(world, [s_id])
        v_prior = query(world, [v_id])
        rows = []
        for state in s_var.states:
            if marginal.table[(state,)] > 0.0:
                cond = query(world, [v_id], {s_id: state})
                rows.append(tuple(cond.table[(vs,)] for vs in v_var.states))
            else:
                rows.append(tuple(v_prior.table[(vs,)] for vs in v_var.states))
        variables += [Variable(s_id, s_var.states, s_var.ordered), Variable(new_v, v_var.states, v_var.ordered)]
        cpts += [
            Cpt(child=s_id, parents=(), rows=(tuple(marginal.table[(st,)] for st in s_var.states),)),
            Cpt(child=new_v, parents=(s_id,), rows=tuple(rows)),
        ]
    net = BayesNet.from_cpts(variables, cpts, name=name or f"{world.name}-ipv")
    return net, signals, new_values


def _require_decomposition(game: BayesianGame) -> None:
    if game.decomposition is None:
        raise GameDefinitionError(
            f"game '{game.name}' has no value-action separable payoff decomposition"
        )


def _opponent_profiles(game: BayesianGame, player: int) -> List[Tuple[Bids, ...]]:
    pools = [
        list(product(game.grids[j], repeat=len(game.signal_states(j))))
        for j in range(game.players) if j != player
    ]
    return list(product(*pools))


def _with_opponents(game: BayesianGame, player: int, opponents: Tuple[Bids, ...]) -> StrategyProfile:
    strategies = list(opponents)
    strategies.insert(player, (game.grids[player][0],) * len(game.signal_states(player)))
    return StrategyProfile(tuple(strategies))


@dataclass(frozen=True)
class BestResponseDifference:
    player: int
    opponents: Tuple[Bids, ...]
    argmax: Tuple[Bids, ...]
    counterpart_argmax: Tuple[Bids, ...]


@dataclass(frozen=True)
class EquivalenceReport:
    """Best-response comparison between a game and a counterpart."""
    equivalent: bool
    profiles_checked: int
    exhaustive: bool
    differences: int
    first_difference: Optional[BestResponseDifference] = None
    max_table_gap: float = 0.0


def compare_best_responses(
    game: BayesianGame,
    counterpart: BayesianGame,
    max_profiles: int = GameDefaults.MAX_PROFILES,
    seed: int = VerificationDefaults.SEED,
) -> EquivalenceReport:
    """
    Compare best-response sets for every opponent profile (a seeded sample
    when the count exceeds max_profiles).

    Raises:
        GameDefinitionError: if either payoff is not in decomposed form or the
            games differ in players, grids or signal spaces.
    """
    _require_decomposition(game)
    _require_decomposition(counterpart)
    if game.players != counterpart.players or game.grids != counterpart.grids:
        raise GameDefinitionError("games must share players and bid grids")
    for i in range(game.players):
        if game.signal_states(i) != counterpart.signal_states(i):
            raise GameDefinitionError(f"signal spaces of player {i + 1} differ")

    checked = differences = 0
    exhaustive = True
    first: Optional[BestResponseDifference] = None
    gap = 0.0
    rng = np.random.default_rng(seed)
    for player in range(game.players):
        opponents_list = _opponent_profiles(game, player)
        if len(opponents_list) > max_profiles:
            exhaustive = False
            picks = sorted(rng.choice(len(opponents_list), size=max_profiles, replace=False))
            opponents_list = [opponents_list[k] for k in picks]
        for opponents in opponents_list:
            profile = _with_opponents(game, player, opponents)
            ours = best_responses(game, profile, player)
            theirs = best_responses(counterpart, profile, player)
            checked += 1
            gap = max(gap, float(np.abs(ours.table - theirs.table).max()))
            if ours.argmax != theirs.argmax:
                differences += 1
                if first is None:
                    first = BestResponseDifference(player, opponents, ours.argmax, theirs.argmax)

    logger.info(f"Best-response comparison: {checked} opponent profiles, {differences} differences")
    return EquivalenceReport(
        equivalent=differences == 0, profiles_checked=checked, exhaustive=exhaustive,
        differences=differences, first_difference=first, max_table_gap=gap,
    )


def check_theorem1(
    world: BayesNet,
    counterpart: BayesNet,
    kind: Union[AuctionKind, str],
    grid: Sequence[float],
    signals: Optional[Sequence[str]] = None,
    values: Optional[Sequence[str]] = None,
    counterpart_values: Optional[Sequence[str]] = None,
    max_profiles: int = GameDefaults.MAX_PROFILES,
) -> EquivalenceReport:
    """Strategic equivalence of an auction on `world` and on its private-value counterpart."""
    game = make_auction(kind, world, grid, signals=signals, values=values)
    other = make_auction(kind, counterpart, grid, signals=signals, values=counterpart_values)
    return compare_best_responses(game, other, max_profiles=max_profiles)


def decomposition_gap(game: BayesianGame, profile: StrategyProfile, player: int) -> float:
    """
    max over own signals of |E[f·g + h | s_i] - (E[f | s_i]·E[g | s_i] + E[h | s_i])|.

    Raises:
        GameDefinitionError: if the game has no payoff decomposition.
    """
    _require_decomposition(game)
    game.check_profile(profile)
    d = game.decomposition
    out = game.outcomes
    n_states = len(game.signal_states(player))
    mass = np.zeros(n_states)
    e_u = np.zeros(n_states)
    e_f = np.zeros(n_states)
    e_g = np.zeros(n_states)
    e_h = np.zeros(n_states)
    for p, sig, vals in zip(out.probabilities, out.signal_index, out.values):
        k = int(sig[player])
        own = profile.bid(player, k)
        others = tuple(profile.bid(j, int(sig[j])) for j in range(game.players) if j != player)
        f, g, h = d.f(vals[player], own), d.g(own, others), d.h(own, others)
        mass[k] += p
        e_u[k] += p * (f * g + h)
        e_f[k] += p * f
        e_g[k] += p * g
        e_h[k] += p * h
    gap = 0.0
    for k in range(n_states):
        if mass[k] <= 0.0:
            continue
        lhs = e_u[k] / mass[k]
        rhs = (e_f[k] / mass[k]) * (e_g[k] / mass[k]) + e_h[k] / mass[k]
        gap = max(gap, abs(lhs - rhs))
    return gap


def is_monotone(strategy: Sequence[float]) -> bool:
    return all(a <= b + GameDefaults.TIE_TOLERANCE for a, b in zip(strategy, strategy[1:]))


def monotone_strategies(grid: Sequence[float], n_states: int) -> List[Bids]:
    """All nondecreasing maps from n ordered signal states into the grid."""
    return [tuple(c) for c in combinations_with_replacement(sorted(grid), n_states)]


def strong_set_ascending(argmax: Sequence[Bids]) -> bool:
    """Argmax sets ascend in the strong set order along the signal order."""
    for lower, upper in zip(argmax, argmax[1:]):
        for a in lower:
            for b in upper:
                if not any(abs(max(a, b) - c) <= GameDefaults.TIE_TOLERANCE for c in upper):
                    return False
                if not any(abs(min(a, b) - c) <= GameDefaults.TIE_TOLERANCE for c in lower):
                    return False
    return True


@dataclass(frozen=True)
class MonotonicityReport:
    player: int
    profiles_checked: int
    all_ascending: bool
    counterexample: Optional[Tuple[Tuple[Bids, ...], Tuple[Bids, ...]]] = None


def best_responses_monotone(game: BayesianGame, player: int) -> MonotonicityReport:
    """Strong-set ascent of best responses against every monotone opponent profile."""
    pools = [
        monotone_strategies(game.grids[j], len(game.signal_states(j)))
        for j in range(game.players) if j != player
    ]
    checked = 0
    for opponents in product(*pools):
        br = best_responses(game, _with_opponents(game, player, opponents), player)
        checked += 1
        if not strong_set_ascending(br.argmax):
            return MonotonicityReport(player, checked, False, (opponents, br.argmax))
    return MonotonicityReport(player, checked, True)


@dataclass(frozen=True)
class WinnersCurseMeasure:
    """E[v | s, win] - E[v | s] for one player and signal."""
    player: int
    signal: str
    difference: Optional[float]
    conditional_value: Optional[float]
    unconditional_value: float
    win_probability: float

    @property
    def defined(self) -> bool:
        return self.difference is not None


def measure_winners_curse(
    game: BayesianGame,
    player: int,
    signal: Union[str, int],
    profile: StrategyProfile,
) -> WinnersCurseMeasure:
    """
    Value shortfall conditional on winning, with ties counted by win share.
    The player's own bid is read from `profile`.

    Raises:
        NonMonotoneProfileError: if an opponent strategy decreases in its signal.
    """
    game.check_profile(profile)
    for j in range(game.players):
        if j != player and not is_monotone(profile.strategies[j]):
            raise NonMonotoneProfileError(f"strategy of player {j + 1} is not monotone: {profile.strategies[j]}")
    states = game.signal_states(player)
    k = signal if isinstance(signal, int) else game.world.variable(game.signals[player]).index(signal)
    share_of = game.decomposition.g if game.decomposition is not None else win_share

    out = game.outcomes
    own = profile.bid(player, k)
    mass = won = value_mass = won_value = 0.0
    for p, sig, vals in zip(out.probabilities, out.signal_index, out.values):
        if int(sig[player]) != k:
            continue
        others = tuple(profile.bid(j, int(sig[j])) for j in range(game.players) if j != player)
        share = share_of(own, others)
        mass += p
        value_mass += p * vals[player]
        won += p * share
        won_value += p * share * vals[player]
    if mass <= 0.0:
        raise GameDefinitionError(f"signal {states[k]} of player {player + 1} has zero probability")
    unconditional = value_mass / mass
    if won <= 0.0:
        return WinnersCurseMeasure(player, states[k], None, None, unconditional, 0.0)
    conditional = won_value / won
    return WinnersCurseMeasure(player, states[k], conditional - unconditional, conditional, unconditional, won / mass)


@dataclass(frozen=True)
class CurseSweep:
    """Winner's curse over every monotone opponent profile and every own bid."""
    player: int
    cases: int
    max_difference: float
    undefined: int


def sweep_winners_curse(game: BayesianGame, player: int) -> CurseSweep:
    pools = [
        monotone_strategies(game.grids[j], len(game.signal_states(j)))
        for j in range(game.players) if j != player
    ]
    n_states = len(game.signal_states(player))
    cases = undefined = 0
    worst = -math.inf
    for opponents in product(*pools):
        for own in product(game.grids[player], repeat=n_states):
            strategies = list(opponents)
            strategies.insert(player, own)
            profile = StrategyProfile(tuple(strategies))
            for k in range(n_states):
                measure = measure_winners_curse(game, player, k, profile)
                cases += 1
                if measure.defined:
                    worst = max(worst, measure.difference)
                else:
                    undefined += 1
    return CurseSweep(player=player, cases=cases, max_difference=worst, undefined=undefined)


@dataclass(frozen=True)
class BidDepressionReport:
    """Pointwise-maximal symmetric equilibrium bids in two games."""
    bids: Optional[Bids]
    counterpart_bids: Optional[Bids]
    equilibria: int
    counterpart_equilibria: int
    depressed: bool
    strict_signals: Tuple[int, ...] = ()
    grid_step: float = 0.0


def _envelope(equilibria: Sequence[StrategyProfile]) -> Optional[Bids]:
    if not equilibria:
        return None
    first = equilibria[0].strategies[0]
    return tuple(max(e.strategies[0][k] for e in equilibria) for k in range(len(first)))


def compare_equilibrium_bids(
    game: BayesianGame,
    counterpart: BayesianGame,
    epsilon: float = 0.0,
    max_profiles: int = GameDefaults.MAX_PROFILES,
    tolerance: float = GameDefaults.TIE_TOLERANCE,
) -> BidDepressionReport:
    """
    Bids are depressed when the game's symmetric equilibrium envelope is
    pointwise at most the counterpart's and strictly lower at some signal.
    """
    ours = symmetric_equilibria(find_pure_equilibria(game, epsilon, max_profiles, tolerance))
    theirs = symmetric_equilibria(find_pure_equilibria(counterpart, epsilon, max_profiles, tolerance))
    grid = game.grids[0]
    step = min((b - a for a, b in zip(grid, grid[1:])), default=0.0)
    bids, other_bids = _envelope(ours), _envelope(theirs)
    if bids is None or other_bids is None:
        logger.warning("No symmetric pure equilibrium in one of the games; bid depression undefined")
        return BidDepressionReport(bids, other_bids, len(ours), len(theirs), False, grid_step=step)
    below = all(a <= b + GameDefaults.TIE_TOLERANCE for a, b in zip(bids, other_bids))
    strict = tuple(k for k, (a, b) in enumerate(zip(bids, other_bids)) if a < b - GameDefaults.TIE_TOLERANCE)
    return BidDepressionReport(
        bids=bids, counterpart_bids=other_bids, equilibria=len(ours), counterpart_equilibria=len(theirs),
        depressed=below and bool(strict), strict_signals=strict, grid_step=step,
    )
