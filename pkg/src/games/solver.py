"""
Exact expected utilities, best responses and pure equilibria by enumeration.
"""

from dataclasses import dataclass, field
from itertools import product
from typing import Dict, Iterator, List, Optional, Sequence, Tuple
import math

import numpy as np
from loguru import logger

from src.bayesnet.inference import joint_table
from src.games.base import (
    Bids,
    BayesianGame,
    StrategyProfile,
    StrategySpaceLimitError,
)
from src.utils.constants import GameDefaults


def expected_utility(game: BayesianGame, profile: StrategyProfile, player: int) -> float:
    """E[u_player] under the profile, summing over positive-probability outcomes."""
    game.check_profile(profile)
    out = game.outcomes
    terms = []
    for p, sig, vals in zip(out.probabilities, out.signal_index, out.values):
        actions = tuple(profile.bid(j, int(sig[j])) for j in range(game.players))
        terms.append(p * game.utility(player, tuple(vals), actions))
    return math.fsum(terms)


def expected_utility_by_enumeration(game: BayesianGame, profile: StrategyProfile, player: int) -> float:
    """
    Same expectation computed by walking every cell of the world's full joint
    and using the general payoff when one is given.
    """
    game.check_profile(profile)
    world = game.world
    joint = joint_table(world)
    terms = []
    for cell in np.ndindex(joint.shape):
        p = float(joint[cell])
        if p == 0.0:
            continue
        signals = [cell[world.axis[s]] for s in game.signals]
        values = tuple(float(world.variable(v).states[cell[world.axis[v]]]) for v in game.values)
        actions = tuple(profile.bid(j, signals[j]) for j in range(game.players))
        if game.payoff is not None:
            u = game.general_payoff(player, values, actions)
        else:
            u = game.utility(player, values, actions)
        terms.append(p * u)
    return math.fsum(terms)


def payoff_table(game: BayesianGame, profile: StrategyProfile, player: int) -> np.ndarray:
    """
    T[k, b] = E[u_player · 1{own signal = k}] when bidding grid[b] at signal k
    against the other players' strategies in `profile`.
    """
    out = game.outcomes
    grid = game.grids[player]
    table = np.zeros((len(game.signal_states(player)), len(grid)))
    for p, sig, vals in zip(out.probabilities, out.signal_index, out.values):
        actions = [profile.bid(j, int(sig[j])) for j in range(game.players)]
        k = int(sig[player])
        for b, bid in enumerate(grid):
            actions[player] = bid
            table[k, b] += p * game.utility(player, tuple(vals), tuple(actions))
    return table


def argmax_sets(table: np.ndarray, grid: Bids, tolerance: float = GameDefaults.TIE_TOLERANCE) -> Tuple[Bids, ...]:
    sets = []
    for row in table:
        best = row.max()
        sets.append(tuple(grid[b] for b in range(len(grid)) if row[b] >= best - tolerance))
    return tuple(sets)


@dataclass(frozen=True)
class BestResponse:
    """All maximising pure strategies of one player and the maximum value."""
    player: int
    value: float
    argmax: Tuple[Bids, ...]
    table: np.ndarray = field(compare=False, repr=False)

    @property
    def count(self) -> int:
        return math.prod(len(s) for s in self.argmax)

    def strategies(self) -> Iterator[Bids]:
        return product(*self.argmax)

    def contains(self, strategy: Sequence[float]) -> bool:
        return all(
            any(abs(b - a) <= GameDefaults.TIE_TOLERANCE for a in allowed)
            for b, allowed in zip(strategy, self.argmax)
        )


def strategy_space_size(game: BayesianGame, player: int) -> int:
    return len(game.grids[player]) ** len(game.signal_states(player))


def best_responses(
    game: BayesianGame,
    profile: StrategyProfile,
    player: int,
    max_strategies: int = GameDefaults.MAX_STRATEGIES,
    tolerance: float = GameDefaults.TIE_TOLERANCE,
) -> BestResponse:
    """
    Best responses over B^S, optimising each own signal separately since the
    expectation is additive across own-signal events.

    Raises:
        StrategySpaceLimitError: if |B|^|S| exceeds max_strategies.
    """
    size = strategy_space_size(game, player)
    if size > max_strategies:
        raise StrategySpaceLimitError(
            f"Player {player + 1} has {size} pure strategies, above the limit of {max_strategies}"
        )
    table = payoff_table(game, profile, player)
    value = math.fsum(float(row.max()) for row in table)
    return BestResponse(player=player, value=value, argmax=argmax_sets(table, game.grids[player], tolerance), table=table)


def profile_count(game: BayesianGame) -> int:
    return math.prod(strategy_space_size(game, i) for i in range(game.players))


def _player_strategies(game: BayesianGame, player: int) -> List[Bids]:
    return list(product(game.grids[player], repeat=len(game.signal_states(player))))


def find_pure_equilibria(
    game: BayesianGame,
    epsilon: float = 0.0,
    max_profiles: int = GameDefaults.MAX_PROFILES,
    tolerance: float = GameDefaults.TIE_TOLERANCE,
) -> List[StrategyProfile]:
    """
    Every pure profile in which no player gains more than epsilon by a
    unilateral deviation, sorted.

    Raises:
        StrategySpaceLimitError: if the profile count exceeds max_profiles.
    """
    total = profile_count(game)
    if total > max_profiles:
        raise StrategySpaceLimitError(
            f"{total} pure profiles exceed the limit of {max_profiles}; "
            f"use iterated_best_response instead"
        )

    strategies = [_player_strategies(game, i) for i in range(game.players)]
    grid_index = [{b: k for k, b in enumerate(g)} for g in game.grids]
    tables: List[Dict[Tuple[Bids, ...], Tuple[np.ndarray, float]]] = [dict() for _ in range(game.players)]

    def lookup(player: int, combo: Tuple[Bids, ...]) -> Tuple[np.ndarray, float]:
        key = combo[:player] + combo[player + 1:]
        cached = tables[player].get(key)
        if cached is None:
            table = payoff_table(game, StrategyProfile(combo), player)
            cached = (table, math.fsum(float(row.max()) for row in table))
            tables[player][key] = cached
        return cached

    equilibria = []
    for combo in product(*strategies):
        stable = True
        for player in range(game.players):
            table, best = lookup(player, combo)
            own = math.fsum(float(table[k, grid_index[player][b]]) for k, b in enumerate(combo[player]))
            if own < best - epsilon - tolerance:
                stable = False
                break
        if stable:
            equilibria.append(StrategyProfile(combo))

    equilibria.sort(key=lambda prof: prof.strategies)
    logger.info(f"Game '{game.name}': {len(equilibria)} pure equilibria among {total} profiles (epsilon={epsilon})")
    return equilibria


def symmetric_equilibria(equilibria: Sequence[StrategyProfile]) -> List[StrategyProfile]:
    return [e for e in equilibria if e.symmetric]


@dataclass(frozen=True)
class EquilibriumCheck:
    """Result of scanning every unilateral pure deviation."""
    is_equilibrium: bool
    max_gain: float
    deviation: Optional[Tuple[int, Bids]] = None


def verify_equilibrium(
    game: BayesianGame,
    profile: StrategyProfile,
    epsilon: float = 0.0,
    max_strategies: int = GameDefaults.MAX_STRATEGIES,
) -> EquilibriumCheck:
    """Independent deviation scan through expected_utility."""
    max_gain = -math.inf
    best_deviation = None
    for player in range(game.players):
        if strategy_space_size(game, player) > max_strategies:
            raise StrategySpaceLimitError(f"Player {player + 1} strategy space exceeds {max_strategies}")
        base = expected_utility(game, profile, player)
        for strategy in product(game.grids[player], repeat=len(game.signal_states(player))):
            gain = expected_utility(game, profile.with_strategy(player, strategy), player) - base
            if gain > max_gain:
                max_gain, best_deviation = gain, (player, tuple(strategy))
    ok = max_gain <= epsilon + GameDefaults.TIE_TOLERANCE
    return EquilibriumCheck(is_equilibrium=ok, max_gain=max_gain, deviation=None if ok else best_deviation)


def iterated_best_response(
    game: BayesianGame,
    start: Optional[StrategyProfile] = None,
    max_rounds: int = 100,
) -> Optional[StrategyProfile]:
    """
    Round-robin best-response dynamics, each player moving to its lowest
    maximiser; returns the fixed point reached or None on a cycle.
    """
    profile = start or StrategyProfile(tuple(
        (game.grids[i][0],) * len(game.signal_states(i)) for i in range(game.players)
    ))
    seen = {profile.strategies}
    for round_index in range(max_rounds):
        changed = False
        for player in range(game.players):
            br = best_responses(game, profile, player)
            if br.contains(profile.strategies[player]):
                continue
            profile = profile.with_strategy(player, tuple(s[0] for s in br.argmax))
            changed = True
        if not changed:
            logger.debug(f"Best-response dynamics converged after {round_index + 1} rounds")
            return profile
        if profile.strategies in seen:
            logger.warning("Best-response dynamics entered a cycle")
            return None
        seen.add(profile.strategies)
    return None
