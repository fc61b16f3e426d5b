"""
sigstruct command line.

Usage:
    python -m src.cli.main <command> [--model PATH | --canonical ID | --preset ID] [options]

Exit status is 0 when the report passes, 1 when a check fails or a command
raises, and 2 on usage errors.
"""

import argparse
import sys
from pathlib import Path
from typing import List, Optional

from dotenv import load_dotenv
from loguru import logger

from src.cli.commands import COMMANDS
from src.cli.report import Report
from src.utils.config_loader import ConfigLoader
from src.utils.constants import AppMetadata, AuctionKind, CanonicalModelId, QpnPresetId, VerificationDefaults


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    source = common.add_mutually_exclusive_group()
    source.add_argument("--model", help="Model file (JSON)")
    source.add_argument("--canonical", choices=[m.value for m in CanonicalModelId], help="Built-in signal world")
    source.add_argument("--preset", choices=[p.value for p in QpnPresetId], help="Built-in qpn")
    common.add_argument("--out", help="Also write the report as JSON to this path")
    common.add_argument("--format", choices=["text", "json"], default="text", help="Standard output format")
    common.add_argument("--epsilon", type=float, default=0.0, help="Equilibrium slack")
    common.add_argument("--seed", type=int, default=None, help="Seed for sampled sweeps")
    common.add_argument("--log-level", default=None, help="Log level for stderr")
    common.add_argument("--config", default=None, help="Settings file (default config/settings.yaml)")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_options()
    parser = argparse.ArgumentParser(prog=AppMetadata.TITLE, description=AppMetadata.DESCRIPTION)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, help_text: str) -> argparse.ArgumentParser:
        return sub.add_parser(name, parents=[common], help=help_text)

    add("validate", "Parse and validate a model")

    p = add("dsep", "d-separation of X and Y given Z, with the numeric check")
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--given", default="", help="Comma-separated conditioning set")

    p = add("query", "Exact posterior marginal")
    p.add_argument("--targets", required=True)
    p.add_argument("--evidence", default="", help="var=state,...")

    p = add("classify", "Generated versus interpreted signal structure")
    p.add_argument("--signals")
    p.add_argument("--values")

    p = add("affiliation", "Lattice affiliation of ordered variables")
    p.add_argument("--pair", required=True, help="Comma-separated variables, e.g. s1,s2,v")
    p.add_argument("--given", default="", help="var=state,...")

    for name, text in (("predict", "Agent prediction for an interpretation"),
                       ("accuracy", "Prediction accuracy and correctness correlation")):
        p = add(name, text)
        p.add_argument("--agent", type=int, help="1-based agent")
        p.add_argument("--interp", help="Comma-separated interpretation values")

    p = add("qpn-propagate", "Sign propagation from a perturbed node")
    p.add_argument("--node", required=True)
    p.add_argument("--direction", default="+")
    p.add_argument("--evidence", default="")

    p = add("qpn-policy", "Derived monotonicity of an optimal policy")
    p.add_argument("--decision", required=True)
    p.add_argument("--observation", required=True)
    p.add_argument("--utility", required=True)

    for name, text in (("curse", "Winner's curse (qualitative on a qpn, numeric on a game)"),
                       ("solve-auction", "Pure equilibria of a grid auction"),
                       ("theorem1", "Best-response equivalence with the private-value counterpart")):
        p = add(name, text)
        p.add_argument("--auction", choices=[k.value for k in AuctionKind], default=AuctionKind.FPSB.value)
        p.add_argument("--grid", help="Comma-separated bids for worlds without a game file")
        p.add_argument("--agent", type=int, help="1-based bidder")
        p.add_argument("--win")
        p.add_argument("--value")
        p.add_argument("--evidence", default="")

    for name, text in (("msr", "Market scoring rule bluffing"),
                       ("interaction", "Complements or substitutes")):
        p = add(name, text)
        p.add_argument("--value", help="Outcome variable (default v)")
        p.add_argument("--signals", help="Comma-separated signals (default s1,s2)")
        p.add_argument("--stages", help="Comma-separated 0-based movers")

    p = add("verify-paper", "Run the acceptance suite")
    p.add_argument("--only", help="Comma-separated criterion ids")
    p.add_argument("--models-dir", default=VerificationDefaults.MODELS_DIR)
    return parser


def configure_logging(level: str) -> None:
    logger.remove()
    logger.add(sys.stderr, level=level.upper())


def write_report(report: Report, fmt: str, out: Optional[str]) -> None:
    sys.stdout.write(report.to_json() if fmt == "json" else report.to_text())
    if out:
        path = Path(out)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(report.to_json(), encoding="utf-8")
        logger.info(f"Report written to {path}")


def main(argv: Optional[List[str]] = None) -> int:
    load_dotenv()
    parser = build_parser()
    args = parser.parse_args(argv)

    settings = ConfigLoader.load_settings(args.config)
    configure_logging(args.log_level or settings.log_level)
    handler = COMMANDS[args.command]

    try:
        report = handler(args, settings)
    except Exception as e:
        logger.error(f"{args.command} failed: {type(e).__name__}: {e}")
        report = Report(command=args.command, error=f"{type(e).__name__}: {e}")

    write_report(report, args.format, args.out)
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
