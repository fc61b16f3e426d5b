"""
Sequential logarithmic market scoring rule game.

Agents take turns moving the market distribution over an outcome. A move
from r to r' pays log r'(v) - log r(v) once v realises. Reports come from a
finite menu holding the prior, every exact posterior reachable from a subset
of the signals and a uniform simplex grid.
"""

from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Dict, List, Sequence, Tuple
import math

import numpy as np
from loguru import logger

from src.bayesnet.base import BayesNet
from src.bayesnet.inference import query
from src.utils.constants import GameDefaults, MsrDefaults

Report = Tuple[float, ...]


class MsrConfigError(ValueError):
    """Raised for an unsupported stage order or malformed market game."""


@dataclass(frozen=True)
class MsrGame:
    """
    Market game over `world`. `stages[t]` is the index of the agent moving at
    stage t; agent i observes `signals[i]`. The first mover may move again
    later; any other agent moves at most once after the opening stage.
    """
    world: BayesNet
    outcome: str = "v"
    signals: Tuple[str, ...] = ("s1", "s2")
    stages: Tuple[int, ...] = MsrDefaults.STAGES
    grid_points: int = MsrDefaults.GRID_POINTS
    log_floor: float = MsrDefaults.LOG_FLOOR

    def __post_init__(self):
        if not self.stages:
            raise MsrConfigError("a market game needs at least one stage")
        for agent in self.stages:
            if not 0 <= agent < len(self.signals):
                raise MsrConfigError(f"stage agent {agent} has no signal among {list(self.signals)}")
        later = self.stages[1:]
        if len(set(later)) != len(later):
            raise MsrConfigError(
                f"stage order {list(self.stages)} repeats a mover after the opening stage"
            )
        if self.grid_points < 2:
            raise MsrConfigError(f"grid_points must be at least 2, got {self.grid_points}")
        if not 0.0 < self.log_floor < 1.0:
            raise MsrConfigError(f"log_floor must lie in (0, 1), got {self.log_floor}")
        for var_id in (self.outcome,) + tuple(self.signals):
            self.world.variable(var_id)

    @property
    def menu_tolerance(self) -> float:
        return 1.0 / (self.grid_points - 1)


def _simplex_grid(size: int, points: int) -> List[Report]:
    steps = points - 1
    grid = []
    for cut in combinations(range(steps + size - 1), size - 1):
        bounds = (-1,) + cut + (steps + size - 1,)
        grid.append(tuple((bounds[k + 1] - bounds[k] - 1) / steps for k in range(size)))
    return grid


def _dedupe(reports: Sequence[Report]) -> List[Report]:
    kept: List[Report] = []
    for r in reports:
        if not any(max(abs(a - b) for a, b in zip(r, k)) <= GameDefaults.TIE_TOLERANCE for k in kept):
            kept.append(r)
    return kept


def report_menu(game: MsrGame) -> List[Report]:
    """Prior first, then exact posteriors, then the simplex grid."""
    net, v = game.world, game.outcome
    prior = tuple(query(net, [v]).values().tolist())
    entries: List[Report] = [prior]
    for size in range(1, len(game.signals) + 1):
        for subset in combinations(game.signals, size):
            states = [net.variable(s).states for s in subset]
            for assignment in product(*states):
                evidence = dict(zip(subset, assignment))
                try:
                    dist = query(net, [v], evidence)
                except ValueError:
                    continue
                entries.append(tuple(dist.values().tolist()))
    entries += _simplex_grid(net.variable(v).cardinality, game.grid_points)
    return _dedupe(entries)


@dataclass(frozen=True)
class MsrSolution:
    """Opening-stage optimum against sequentially rational later movers."""
    stages: Tuple[int, ...]
    best_value: float
    truthful_value: float
    bluff_gain: float
    best_strategy: Dict[str, Report]
    truthful_strategy: Dict[str, Report]
    menu_size: int
    menu_tolerance: float
    maps_checked: int
    clamp_count: int
    stage_note: str = field(default=MsrDefaults.STAGE_NOTE)

    @property
    def bluffs(self) -> bool:
        return self.bluff_gain > GameDefaults.TIE_TOLERANCE

    def to_dict(self) -> Dict[str, object]:
        return {
            "stages": list(self.stages),
            "best_value": self.best_value,
            "truthful_value": self.truthful_value,
            "bluff_gain": self.bluff_gain,
            "best_strategy": {k: list(r) for k, r in self.best_strategy.items()},
            "truthful_strategy": {k: list(r) for k, r in self.truthful_strategy.items()},
            "menu_size": self.menu_size,
            "menu_tolerance": self.menu_tolerance,
            "maps_checked": self.maps_checked,
            "clamp_count": self.clamp_count,
            "stage_note": self.stage_note,
        }


class _Market:
    """Joint over (signal profile, outcome) plus clamped log scores of the menu."""

    def __init__(self, game: MsrGame, menu: List[Report]):
        self.game = game
        self.menu = menu
        joint = query(game.world, list(game.signals) + [game.outcome]).values()
        self.joint = joint.reshape(-1, joint.shape[-1])
        self.profiles = [p for p in product(*(range(n) for n in joint.shape[:-1]))]
        self.positive = [k for k in range(len(self.profiles)) if self.joint[k].sum() > 0.0]
        floor = math.log(game.log_floor)
        with np.errstate(divide="ignore"):
            raw = np.log(np.asarray(menu, dtype=float))
        self.clamped = raw < floor
        self.log_scores = np.maximum(raw, floor)

    def respond(self, weights: np.ndarray) -> int:
        """Menu index maximising expected clamped log score; lowest index on ties."""
        scores = self.log_scores @ weights
        best = scores.max()
        return int(np.flatnonzero(scores >= best - GameDefaults.TIE_TOLERANCE)[0])

    def play(self, opening: Sequence[int]) -> Tuple[float, int]:
        """
        First mover's expected score and clamp count when it opens with
        opening[own signal] and every later mover best-responds.
        """
        stages = self.game.stages
        first = stages[0]
        history: Dict[int, Tuple[int, ...]] = {k: (opening[self.profiles[k][first]],) for k in self.positive}
        for agent in stages[1:]:
            groups: Dict[Tuple[int, Tuple[int, ...]], np.ndarray] = {}
            for k in self.positive:
                key = (self.profiles[k][agent], history[k])
                groups[key] = groups.get(key, 0.0) + self.joint[k]
            choice = {key: self.respond(w) for key, w in groups.items()}
            for k in self.positive:
                history[k] = history[k] + (choice[(self.profiles[k][agent], history[k])],)

        prior_index = 0
        value = 0.0
        clamps = 0
        for k in self.positive:
            previous = prior_index
            for t, agent in enumerate(stages):
                current = history[k][t]
                if agent == first:
                    gain = self.log_scores[current] - self.log_scores[previous]
                    value += float(self.joint[k] @ gain)
                    clamps += int((self.clamped[current] & (self.joint[k] > 0)).sum())
                previous = current
        return value, clamps


def solve_msr(game: MsrGame, max_maps: int = GameDefaults.MAX_STRATEGIES) -> MsrSolution:
    """
    Optimise the opening report map over all pure maps from the first
    mover's signal states into the menu, later movers answering with the
    best menu report given their signal and the public history.

    Raises:
        MsrConfigError: if the number of opening maps exceeds max_maps.
    """
    menu = report_menu(game)
    market = _Market(game, menu)
    first = game.stages[0]
    signal = game.signals[first]
    states = game.world.variable(signal).states
    count = len(menu) ** len(states)
    if count > max_maps:
        raise MsrConfigError(f"{count} opening report maps exceed the limit of {max_maps}")

    truthful = []
    for state in states:
        try:
            posterior = tuple(query(game.world, [game.outcome], {signal: state}).values().tolist())
        except ValueError:
            posterior = menu[0]
        truthful.append(min(range(len(menu)), key=lambda m: max(abs(a - b) for a, b in zip(menu[m], posterior))))
    truthful_value, _ = market.play(truthful)

    best_value, best_map, best_clamps = -math.inf, tuple(truthful), 0
    for opening in product(range(len(menu)), repeat=len(states)):
        value, clamps = market.play(opening)
        if value > best_value + GameDefaults.TIE_TOLERANCE:
            best_value, best_map, best_clamps = value, opening, clamps
    best_value = max(best_value, truthful_value)
    gain = best_value - truthful_value

    if best_clamps:
        logger.warning(f"Market solution used the log floor {best_clamps} times")
    logger.info(f"Market game on '{game.world.name}': bluff gain {gain:.6f} over {count} opening maps")
    return MsrSolution(
        stages=tuple(game.stages),
        best_value=best_value,
        truthful_value=truthful_value,
        bluff_gain=gain,
        best_strategy={s: menu[m] for s, m in zip(states, best_map)},
        truthful_strategy={s: menu[m] for s, m in zip(states, truthful)},
        menu_size=len(menu),
        menu_tolerance=game.menu_tolerance,
        maps_checked=count,
        clamp_count=best_clamps,
    )
