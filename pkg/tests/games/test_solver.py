import sys
import os
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..', '..')))
import pytest
from src.bayesnet.base import BayesNet, Cpt, Variable
from src.games.auction import make_auction
from src.games.base import BayesianGame, StrategyProfile, StrategySpaceLimitError
from src.games.solver import (
    best_responses,
    expected_utility,
    expected_utility_by_enumeration,
    find_pure_equilibria,
    iterated_best_response,
    profile_count,
    strategy_space_size,
    symmetric_equilibria,
    verify_equilibrium,
)
from src.signals.canonical import CanonicalParams, build_canonical
from src.utils.constants import AuctionKind, CanonicalModelId, GameDefaults

DESK = GameDefaults.DESK_GRID


@pytest.fixture(scope="module")
def desk_game():
    """Two bidders share one value, each sees a 0.75-accurate copy."""
    world = build_canonical(CanonicalModelId.FIG1A, CanonicalParams(value_accuracy=1.0))
    return make_auction(AuctionKind.FPSB, world, DESK)


@pytest.fixture
def lone_bidder():
    world = BayesNet.from_cpts([Variable("v1", ("0", "1"), True), Variable("s1", ("0", "1"), True)], [
        Cpt("v1", (), ((0.5, 0.5),)),
        Cpt("s1", ("v1",), ((1.0, 0.0), (0.0, 1.0)), deterministic=True),
    ])
    return make_auction(AuctionKind.FPSB, world, (0.0, 0.5))


@pytest.fixture(scope="module")
def private_values_game():
    """Independent values uniform on a coarse grid, each bidder observing its own exactly."""
    levels = ("0", "0.2", "0.4", "0.6", "0.8", "1")
    uniform = ((1.0 / len(levels),) * len(levels),)
    copy = tuple(tuple(1.0 if i == j else 0.0 for j in range(len(levels))) for i in range(len(levels)))
    variables, cpts = [], []
    for i in (1, 2):
        variables += [Variable(f"v{i}", levels, True), Variable(f"s{i}", levels, True)]
        cpts += [Cpt(f"v{i}", (), uniform), Cpt(f"s{i}", (f"v{i}",), copy, deterministic=True)]
    world = BayesNet.from_cpts(variables, cpts, name="ipv-uniform")
    return make_auction(AuctionKind.FPSB, world, (0.0, 0.2, 0.4, 0.6, 0.8, 1.0))


@pytest.fixture
def matching_pennies():
    """Player 1 wants to match the other's action, player 2 wants to mismatch."""
    world = BayesNet.from_cpts(
        [Variable("s1", ("0",), True), Variable("s2", ("0",), True)],
        [Cpt("s1", (), ((1.0,),)), Cpt("s2", (), ((1.0,),))],
    )

    def payoff(player, values, actions):
        match = 1.0 if actions[0] == actions[1] else -1.0
        return match if player == 0 else -match

    return BayesianGame(
        world=world, signals=("s1", "s2"), values=("s1", "s2"),
        grids=((0.0, 1.0), (0.0, 1.0)), payoff=payoff, name="pennies",
    )


class TestExpectedUtility:
    def test_lone_bidder(self, lone_bidder):
        profile = StrategyProfile(((0.0, 0.5),))
        # half the time v=1 and the bid 0.5 is paid
        assert expected_utility(lone_bidder, profile, 0) == pytest.approx(0.25)

    def test_two_paths_agree(self, desk_game):
        for strategies in (((0.0, 0.4), (0.0, 0.4)), ((0.2, 0.2), (0.0, 1.0)), ((1.0, 0.0), (0.4, 0.6))):
            profile = StrategyProfile(strategies)
            for player in range(2):
                assert expected_utility(desk_game, profile, player) == pytest.approx(
                    expected_utility_by_enumeration(desk_game, profile, player), abs=1e-12
                )


class TestBestResponses:
    def test_lone_bidder_bids_zero(self, lone_bidder):
        br = best_responses(lone_bidder, StrategyProfile(((0.5, 0.5),)), 0)
        assert br.argmax == ((0.0,), (0.0,))
        assert br.value == pytest.approx(0.5)
        assert br.count == 1
        assert list(br.strategies()) == [(0.0, 0.0)]
        assert br.contains((0.0, 0.0))
        assert not br.contains((0.5, 0.0))

    def test_tied_maximisers_all_kept(self, desk_game):
        # against a bidder who always bids 1.0, every bid below 1.0 earns nothing
        br = best_responses(desk_game, StrategyProfile(((0.0, 0.0), (1.0, 1.0))), 0)
        assert br.argmax[0] == DESK[:-1]
        assert br.count == 25

    def test_strategy_cap(self, desk_game):
        assert strategy_space_size(desk_game, 0) == 36
        with pytest.raises(StrategySpaceLimitError):
            best_responses(desk_game, StrategyProfile(((0.0, 0.0), (0.0, 0.0))), 0, max_strategies=10)


class TestEquilibria:
    def test_desk_symmetric_equilibrium(self, desk_game):
        equilibria = find_pure_equilibria(desk_game)
        symmetric = symmetric_equilibria(equilibria)
        assert [e.strategies for e in symmetric] == [((0.0, 0.4), (0.0, 0.4))]
        assert equilibria == sorted(equilibria, key=lambda e: e.strategies)

    def test_equilibria_survive_deviation_scan(self, desk_game):
        for profile in find_pure_equilibria(desk_game):
            assert verify_equilibrium(desk_game, profile).is_equilibrium

    def test_non_equilibrium_reports_deviation(self, desk_game):
        check = verify_equilibrium(desk_game, StrategyProfile(((1.0, 1.0), (1.0, 1.0))))
        assert not check.is_equilibrium
        assert check.max_gain > 0.0
        assert check.deviation is not None

    def test_epsilon_admits_more_profiles(self, desk_game):
        exact = find_pure_equilibria(desk_game)
        loose = find_pure_equilibria(desk_game, epsilon=0.05)
        assert len(loose) >= len(exact)
        assert set(e.strategies for e in exact) <= set(e.strategies for e in loose)

    def test_profile_cap(self, desk_game):
        assert profile_count(desk_game) == 36 * 36
        with pytest.raises(StrategySpaceLimitError):
            find_pure_equilibria(desk_game, max_profiles=100)

    def test_best_response_dynamics(self, lone_bidder):
        profile = iterated_best_response(lone_bidder, StrategyProfile(((0.5, 0.5),)))
        assert profile.strategies == ((0.0, 0.0),)

    def test_no_pure_equilibrium(self, matching_pennies):
        assert profile_count(matching_pennies) == 4
        assert find_pure_equilibria(matching_pennies) == []

    def test_private_values_shade_to_half(self, private_values_game):
        # 6^12 pure profiles rule out the exhaustive search
        profile = iterated_best_response(private_values_game)
        assert profile is not None
        assert profile.strategies == ((0.0, 0.0, 0.2, 0.2, 0.4, 0.4),) * 2
        values = private_values_game.value_levels(0)
        for value, bid in zip(values, profile.strategies[0]):
            assert bid <= value
            assert abs(bid - value / 2) <= 0.2 + 1e-9
        for player in range(2):
            assert best_responses(private_values_game, profile, player).contains(profile.strategies[player])
