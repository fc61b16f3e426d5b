"""
Finite Bayesian games over a signal world.

A game binds each player to a signal variable and a value variable of a
BayesNet world, gives each a finite sorted bid grid, and defines payoffs
either generally or in value-action separable form u = f·g + h.
"""

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger

from src.bayesnet.base import BayesNet
from src.bayesnet.inference import query
from src.utils.constants import AuctionKind


Bids = Tuple[float, ...]
GeneralPayoff = Callable[[int, Tuple[float, ...], Tuple[float, ...]], float]


class GameDefinitionError(ValueError):
    """Raised when a game is malformed or lacks a required payoff form."""


class StrategySpaceLimitError(RuntimeError):
    """Raised when an exhaustive strategy or profile enumeration exceeds its cap."""


class NonMonotoneProfileError(ValueError):
    """Raised when an operation needs monotone opponent strategies."""


@dataclass(frozen=True)
class PayoffDecomposition:
    """
    Value-action separable payoff:
    u_i = f(v_i, b_i)·g(b_i, b_-i) + h(b_i, b_-i).
    """
    f: Callable[[float, float], float]
    g: Callable[[float, Bids], float]
    h: Callable[[float, Bids], float]

    def payoff(self, value: float, own_bid: float, other_bids: Bids) -> float:
        return self.f(value, own_bid) * self.g(own_bid, other_bids) + self.h(own_bid, other_bids)


@dataclass(frozen=True)
class StrategyProfile:
    """Pure strategies: for each player, one bid per signal state (in state order)."""
    strategies: Tuple[Bids, ...]

    def bid(self, player: int, signal_index: int) -> float:
        return self.strategies[player][signal_index]

    def with_strategy(self, player: int, strategy: Sequence[float]) -> "StrategyProfile":
        strategies = list(self.strategies)
        strategies[player] = tuple(strategy)
        return StrategyProfile(tuple(strategies))

    @property
    def symmetric(self) -> bool:
        return all(s == self.strategies[0] for s in self.strategies)

    def to_dict(self) -> Dict[str, List[float]]:
        return {f"player{i + 1}": list(s) for i, s in enumerate(self.strategies)}


@dataclass(frozen=True)
class Outcomes:
    """Positive-probability configurations of (signals, values)."""
    probabilities: np.ndarray
    signal_index: np.ndarray
    values: np.ndarray


@dataclass(frozen=True)
class BayesianGame:
    """
    Finite Bayesian game.

    `signals[i]` and `values[i]` name player i's signal and value variables in
    `world`; a common value repeats the same id. Value labels are read as
    numbers.
    """
    world: BayesNet
    signals: Tuple[str, ...]
    values: Tuple[str, ...]
    grids: Tuple[Bids, ...]
    decomposition: Optional[PayoffDecomposition] = None
    payoff: Optional[GeneralPayoff] = field(default=None, compare=False)
    kind: Optional[AuctionKind] = None
    name: str = ""

    def __post_init__(self):
        if len(self.signals) != len(self.values) or len(self.signals) != len(self.grids):
            raise GameDefinitionError("signals, values and grids must list one entry per player")
        if not self.signals:
            raise GameDefinitionError("a game needs at least one player")
        for i, grid in enumerate(self.grids):
            if not grid:
                raise GameDefinitionError(f"bid grid of player {i + 1} is empty")
            if list(grid) != sorted(set(grid)):
                raise GameDefinitionError(f"bid grid of player {i + 1} must be strictly increasing")
        if self.decomposition is None and self.payoff is None:
            raise GameDefinitionError("a game needs a general payoff or a payoff decomposition")
        for var_id in set(self.signals) | set(self.values):
            self.world.variable(var_id)
        for var_id in set(self.values):
            try:
                [float(s) for s in self.world.variable(var_id).states]
            except ValueError:
                raise GameDefinitionError(f"value variable '{var_id}' has non-numeric states") from None

    @property
    def players(self) -> int:
        return len(self.signals)

    def signal_states(self, player: int) -> Tuple[str, ...]:
        return self.world.variable(self.signals[player]).states

    def value_levels(self, player: int) -> Tuple[float, ...]:
        return tuple(float(s) for s in self.world.variable(self.values[player]).states)

    def utility(self, player: int, values: Sequence[float], actions: Sequence[float]) -> float:
        """Payoff of one player given realised values and all actions."""
        others = tuple(a for j, a in enumerate(actions) if j != player)
        if self.decomposition is not None:
            return self.decomposition.payoff(values[player], actions[player], others)
        return self.payoff(player, tuple(values), tuple(actions))

    def general_payoff(self, player: int, values: Sequence[float], actions: Sequence[float]) -> float:
        if self.payoff is None:
            raise GameDefinitionError("game has no general payoff form")
        return self.payoff(player, tuple(values), tuple(actions))

    @cached_property
    def outcomes(self) -> Outcomes:
        """Joint of signals and values, restricted to positive probability."""
        targets = list(dict.fromkeys(self.signals + self.values))
        dist = query(self.world, targets)
        probabilities, signal_rows, value_rows = [], [], []
        for key, p in dist.table.items():
            if p <= 0.0:
                continue
            bound = dict(zip(targets, key))
            probabilities.append(p)
            signal_rows.append([self.world.variable(s).index(bound[s]) for s in self.signals])
            value_rows.append([float(bound[v]) for v in self.values])
        logger.debug(f"Game '{self.name}' has {len(probabilities)} positive outcomes")
        return Outcomes(
            probabilities=np.asarray(probabilities),
            signal_index=np.asarray(signal_rows, dtype=int).reshape(len(probabilities), self.players),
            values=np.asarray(value_rows, dtype=float).reshape(len(probabilities), self.players),
        )

    def check_profile(self, profile: StrategyProfile) -> None:
        if len(profile.strategies) != self.players:
            raise GameDefinitionError(f"profile has {len(profile.strategies)} strategies, expected {self.players}")
        for i, strategy in enumerate(profile.strategies):
            if len(strategy) != len(self.signal_states(i)):
                raise GameDefinitionError(
                    f"strategy of player {i + 1} has {len(strategy)} bids, expected {len(self.signal_states(i))}"
                )
