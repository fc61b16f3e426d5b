"""
Finite Bayesian games: sealed-bid auctions and the market scoring rule game.
"""

from src.games.analysis import (
    BidDepressionReport,
    CurseSweep,
    EquivalenceReport,
    MonotonicityReport,
    WinnersCurseMeasure,
    best_responses_monotone,
    check_theorem1,
    compare_best_responses,
    compare_equilibrium_bids,
    decomposition_gap,
    ipv_counterpart,
    measure_winners_curse,
    monotone_strategies,
    strong_set_ascending,
    sweep_winners_curse,
)
from src.games.auction import FPSB_PAYOFF, SPSB_PAYOFF, auction_payoff, make_auction, win_share
from src.games.base import (
    BayesianGame,
    GameDefinitionError,
    NonMonotoneProfileError,
    PayoffDecomposition,
    StrategyProfile,
    StrategySpaceLimitError,
)
from src.games.information import (
    InteractionReport,
    SignalInteraction,
    information_value,
    information_value_by_entropy,
    mutual_information,
    signal_interaction,
)
from src.games.msr import MsrConfigError, MsrGame, MsrSolution, report_menu, solve_msr
from src.games.solver import (
    BestResponse,
    EquilibriumCheck,
    best_responses,
    expected_utility,
    expected_utility_by_enumeration,
    find_pure_equilibria,
    iterated_best_response,
    symmetric_equilibria,
    verify_equilibrium,
)
