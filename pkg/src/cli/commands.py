"""
Command handlers.

Each handler takes the parsed arguments and resolved settings and returns a
Report; library errors propagate to the dispatcher in `main`.
"""

from argparse import Namespace
from typing import Callable, Dict, List, Optional

from loguru import logger

from src.bayesnet.base import BayesNet, validate
from src.bayesnet.graph import d_separated
from src.bayesnet.inference import query
from src.cli.report import CheckResult, Report
from src.cli.verify import run_verification
from src.games.analysis import (
    compare_best_responses,
    ipv_counterpart,
    measure_winners_curse,
    sweep_winners_curse,
)
from src.games.auction import make_auction
from src.games.base import BayesianGame
from src.games.information import signal_interaction
from src.games.msr import MsrGame, solve_msr
from src.games.solver import find_pure_equilibria, symmetric_equilibria
from src.modelfile.parser import Model, parse_model
from src.qpn.inference import derive_policy_monotonicity, propagate, winners_curse
from src.qpn.network import Qpn, validate_qpn
from src.qpn.presets import build_preset
from src.qpn.signs import Sign
from src.signals.canonical import build_canonical, canonical_interpreted, classify_structure
from src.signals.checks import check_affiliation, check_independence
from src.signals.interpreted import (
    InterpretedModel,
    best_constant_accuracy,
    correctness,
    correctness_correlation,
    predict,
    prediction_table,
    to_bayesnet,
)
from src.utils.config_loader import EngineSettings
from src.utils.constants import AuctionKind, GameDefaults, ModelKind


class CommandError(ValueError):
    """Raised when a command's arguments do not fit the loaded model."""


def names(text: Optional[str]) -> List[str]:
    """'a,b' -> ['a', 'b']; empty or missing text is the empty list."""
    if not text:
        return []
    return [part.strip() for part in text.split(",") if part.strip()]


def assignment(text: Optional[str]) -> Dict[str, str]:
    """'a=1,b=0' -> {'a': '1', 'b': '0'}."""
    result = {}
    for part in names(text):
        if "=" not in part:
            raise CommandError(f"expected var=state, got '{part}'")
        key, value = part.split("=", 1)
        result[key.strip()] = value.strip()
    return result


def load_model(args: Namespace) -> Model:
    """Model selected by --model, --canonical or --preset."""
    if getattr(args, "model", None):
        return parse_model(args.model)
    if getattr(args, "canonical", None):
        return build_canonical(args.canonical)
    if getattr(args, "preset", None):
        return build_preset(args.preset)
    raise CommandError("select a model with --model, --canonical or --preset")


def load_network(args: Namespace) -> BayesNet:
    model = load_model(args)
    if isinstance(model, BayesNet):
        return model
    if isinstance(model, InterpretedModel):
        return to_bayesnet(model)
    if isinstance(model, (BayesianGame, MsrGame)):
        return model.world
    raise CommandError(f"command needs a probabilistic model, got {type(model).__name__}")


def load_interpreted(args: Namespace) -> InterpretedModel:
    if getattr(args, "canonical", None):
        return canonical_interpreted(args.canonical)
    model = load_model(args)
    if not isinstance(model, InterpretedModel):
        raise CommandError(f"command needs an interpreted model, got {type(model).__name__}")
    return model


def load_qpn(args: Namespace) -> Qpn:
    model = load_model(args)
    if not isinstance(model, Qpn):
        raise CommandError(f"command needs a qpn model, got {type(model).__name__}")
    return model


def load_game(args: Namespace) -> BayesianGame:
    """Game file as is; a plain world becomes an auction over --auction and --grid."""
    model = load_model(args)
    if isinstance(model, BayesianGame):
        return model
    if isinstance(model, MsrGame):
        raise CommandError("a market model is not an auction")
    if isinstance(model, Qpn):
        raise CommandError("a qpn model is not a quantified game")
    world = to_bayesnet(model) if isinstance(model, InterpretedModel) else model
    grid = [float(b) for b in names(args.grid)] if args.grid else list(GameDefaults.DESK_GRID)
    return make_auction(args.auction, world, grid)


def _agent(args: Namespace, count: int) -> int:
    """1-based --agent to a 0-based index."""
    agent = args.agent if args.agent is not None else 1
    if not 1 <= agent <= count:
        raise CommandError(f"--agent must lie in 1..{count}, got {agent}")
    return agent - 1


def _single(command: str, args: Namespace, numbers: Dict, detail: str = "") -> Report:
    report = Report(command=command, inputs=_inputs(args))
    report.add(CheckResult(id=command, passed=True, numbers=numbers, detail=detail))
    return report


def _inputs(args: Namespace) -> Dict:
    skip = {"handler", "out", "format", "log_level"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip and v is not None}


def _kind(model: Model) -> ModelKind:
    if isinstance(model, BayesNet):
        return ModelKind.BAYESNET
    if isinstance(model, InterpretedModel):
        return ModelKind.INTERPRETED
    if isinstance(model, Qpn):
        return ModelKind.QPN
    if isinstance(model, BayesianGame):
        return ModelKind.GAME
    return ModelKind.MSR


def cmd_validate(args: Namespace, settings: EngineSettings) -> Report:
    model = load_model(args)
    numbers: Dict = {"kind": _kind(model), "name": getattr(model, "name", "")}
    warnings: List[str] = []
    if isinstance(model, BayesNet):
        result = validate(model, settings.tolerance)
        if not result.is_valid:
            raise CommandError(result.error_message)
        warnings = result.warnings
        numbers.update(variables=len(model.variables), edges=len(model.dag.edges),
                       joint_states=model.joint_state_count())
    elif isinstance(model, Qpn):
        result = validate_qpn(model)
        if not result.is_valid:
            raise CommandError("; ".join(result.errors))
        numbers.update(nodes=len(model.nodes), edges=len(model.edges), synergies=len(model.synergies))
    elif isinstance(model, InterpretedModel):
        numbers.update(attributes=len(model.space.domains), agents=model.agents)
    elif isinstance(model, BayesianGame):
        numbers.update(players=model.players, auction=model.kind, grid=model.grids[0])
    else:
        numbers.update(stages=model.stages, grid_points=model.grid_points)
    numbers["warnings"] = warnings
    return _single("validate", args, numbers)


def cmd_dsep(args: Namespace, settings: EngineSettings) -> Report:
    net = load_network(args)
    x, y, z = names(args.x), names(args.y), names(args.given)
    if not x or not y:
        raise CommandError("dsep needs --x and --y")
    separated = d_separated(net, x, y, z)
    numeric = check_independence(net, x, y, z, settings.tolerance, settings.max_joint_states)
    return _single("dsep", args, {
        "separated": separated,
        "numerically_independent": numeric.independent,
        "max_deviation": numeric.max_deviation,
    })


def cmd_query(args: Namespace, settings: EngineSettings) -> Report:
    net = load_network(args)
    targets = names(args.targets)
    if not targets:
        raise CommandError("query needs --targets")
    dist = query(net, targets, assignment(args.evidence), settings.max_joint_states)
    return _single("query", args, dist.to_dict())


def cmd_classify(args: Namespace, settings: EngineSettings) -> Report:
    net = load_network(args)
    result = classify_structure(net, names(args.signals) or None, names(args.values) or None)
    return _single("classify", args, result.to_dict())


def cmd_affiliation(args: Namespace, settings: EngineSettings) -> Report:
    net = load_network(args)
    variables = names(args.pair)
    if len(variables) < 2:
        raise CommandError("affiliation needs --pair with at least two variables")
    result = check_affiliation(net, variables, assignment(args.given) or None)
    return _single("affiliation", args, {
        "verdict": result.verdict,
        "witness": result.witness.describe() if result.witness else None,
        "pairs_checked": result.pairs_checked,
    })


def cmd_predict(args: Namespace, settings: EngineSettings) -> Report:
    m = load_interpreted(args)
    agent = _agent(args, m.agents)
    if args.interp:
        interp = [int(v) for v in names(args.interp)]
        numbers = {"agent": agent + 1, "interpretation": interp, "prediction": predict(m, agent, interp)}
    else:
        numbers = {"agent": agent + 1, "predictions": prediction_table(m, agent)}
    return _single("predict", args, numbers)


def cmd_accuracy(args: Namespace, settings: EngineSettings) -> Report:
    m = load_interpreted(args)
    reports = [correctness(m, i) for i in range(m.agents)]
    numbers: Dict = {
        "accuracy": {str(r.agent + 1): r.accuracy for r in reports},
        "best_constant_accuracy": best_constant_accuracy(m),
    }
    if m.agents >= 2:
        corr = correctness_correlation(m, 0, 1)
        numbers["correctness_correlation_1_2"] = corr.coefficient
    return _single("accuracy", args, numbers)


def cmd_qpn_propagate(args: Namespace, settings: EngineSettings) -> Report:
    net = load_qpn(args)
    if not args.node:
        raise CommandError("qpn-propagate needs --node")
    direction = Sign.parse(args.direction or "+")
    signs = propagate(net, args.node, direction, names(args.evidence), settings.max_trails)
    return _single("qpn-propagate", args, {"signs": {k: s.value for k, s in signs.items()}})


def cmd_qpn_policy(args: Namespace, settings: EngineSettings) -> Report:
    net = load_qpn(args)
    if not (args.decision and args.observation and args.utility):
        raise CommandError("qpn-policy needs --decision, --observation and --utility")
    result = derive_policy_monotonicity(net, args.decision, args.observation, args.utility, settings.max_trails)
    return _single("qpn-policy", args, {
        "sign": result.sign,
        "synergy": result.synergy,
        "observation_sign": result.observation_sign,
        "decision_sign": result.decision_sign,
    }, detail=result.diagnostic)


def cmd_curse(args: Namespace, settings: EngineSettings) -> Report:
    """Qualitative curse on a qpn, numeric curse on a game."""
    model = load_model(args)
    if isinstance(model, Qpn):
        if not (args.win and args.value):
            raise CommandError("curse on a qpn needs --win and --value")
        result = winners_curse(model, args.win, args.value, names(args.evidence), settings.max_trails)
        return _single("curse", args, {"sign": result.sign, "curse": result.curse, "trails": len(result.trails)})

    game = load_game(args)
    player = _agent(args, game.players)
    sweep = sweep_winners_curse(game, player)
    numbers: Dict = {
        "player": player + 1, "cases": sweep.cases,
        "max_difference": sweep.max_difference, "undefined": sweep.undefined,
    }
    equilibria = symmetric_equilibria(find_pure_equilibria(game, args.epsilon, settings.max_profiles))
    if equilibria:
        top = equilibria[-1]
        numbers["equilibrium"] = top.strategies
        numbers["at_equilibrium"] = {
            state: measure_winners_curse(game, player, state, top).difference
            for state in game.signal_states(player)
        }
    return _single("curse", args, numbers)


def cmd_solve_auction(args: Namespace, settings: EngineSettings) -> Report:
    game = load_game(args)
    equilibria = find_pure_equilibria(game, args.epsilon, settings.max_profiles, settings.tie_tolerance)
    symmetric = symmetric_equilibria(equilibria)
    return _single("solve-auction", args, {
        "auction": game.kind,
        "players": game.players,
        "grid": game.grids[0],
        "epsilon": args.epsilon,
        "equilibria": [e.strategies for e in equilibria],
        "symmetric": [e.strategies for e in symmetric],
    })


def cmd_theorem1(args: Namespace, settings: EngineSettings) -> Report:
    """Best-response equivalence between the game and its private-value counterpart."""
    game = load_game(args)
    counterpart, signals, values = ipv_counterpart(game.world, game.signals, game.values)
    other = make_auction(game.kind or AuctionKind.FPSB, counterpart, game.grids, signals, values)
    result = compare_best_responses(game, other, max_profiles=settings.max_profiles,
                                    seed=settings.seed if args.seed is None else args.seed)
    first = result.first_difference
    return _single("theorem1", args, {
        "equivalent": result.equivalent,
        "exhaustive": result.exhaustive,
        "profiles_checked": result.profiles_checked,
        "differences": result.differences,
        "max_payoff_table_gap": result.max_table_gap,
        "first_difference": first,
    })


def cmd_msr(args: Namespace, settings: EngineSettings) -> Report:
    model = load_model(args)
    if isinstance(model, MsrGame):
        game = model
    else:
        net = load_network(args)
        stages = tuple(int(s) for s in names(args.stages)) if args.stages else settings.msr_stages
        game = MsrGame(
            net, outcome=args.value or "v", signals=tuple(names(args.signals) or ("s1", "s2")),
            stages=stages, grid_points=settings.msr_grid_points, log_floor=settings.msr_log_floor,
        )
    solution = solve_msr(game, settings.max_strategies)
    return _single("msr", args, solution.to_dict())


def cmd_interaction(args: Namespace, settings: EngineSettings) -> Report:
    net = load_network(args)
    result = signal_interaction(net, args.value or "v", names(args.signals) or ("s1", "s2"))
    return _single("interaction", args, result.to_dict())


def cmd_verify_paper(args: Namespace, settings: EngineSettings) -> Report:
    report = run_verification(args.models_dir, names(args.only) or None, args.seed, settings)
    logger.info(f"verify-paper finished: {'pass' if report.passed else 'fail'}")
    return report


Handler = Callable[[Namespace, EngineSettings], Report]

COMMANDS: Dict[str, Handler] = {
    "validate": cmd_validate,
    "dsep": cmd_dsep,
    "query": cmd_query,
    "classify": cmd_classify,
    "affiliation": cmd_affiliation,
    "predict": cmd_predict,
    "accuracy": cmd_accuracy,
    "qpn-propagate": cmd_qpn_propagate,
    "qpn-policy": cmd_qpn_policy,
    "curse": cmd_curse,
    "solve-auction": cmd_solve_auction,
    "theorem1": cmd_theorem1,
    "msr": cmd_msr,
    "interaction": cmd_interaction,
    "verify-paper": cmd_verify_paper,
}
