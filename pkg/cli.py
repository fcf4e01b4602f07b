import argparse
import logging
import os
import sys
from typing import Any, Dict, List, Optional

from dotenv import load_dotenv
from pydantic import ValidationError

from controllers.extremal_controller import cmd_extremal
from controllers.lq_controller import cmd_lq
from controllers.pointset_controller import cmd_eval, cmd_gen, cmd_identity
from controllers.sweep_controller import cmd_sweep
from controllers.verify_controller import cmd_verify
from core.errors import ConfigError, DiscrepancyError
from dao.report_dao import ReportDAO
from generators.factory import PointSetFactory
from models.config import RunConfig, load_config

logger = logging.getLogger("cli")

COMMANDS = {
    "gen": cmd_gen,
    "eval": cmd_eval,
    "identity": cmd_identity,
    "extremal": cmd_extremal,
    "lq": cmd_lq,
    "verify": cmd_verify,
    "sweep": cmd_sweep,
}

EXIT_USAGE = 2


def _split(values: Optional[List[str]]) -> Optional[List[str]]:
    """Flatten "--q 1,2 --q 4" style lists"""
    if values is None:
        return None
    return [item.strip() for value in values for item in value.split(",") if item.strip()]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=str, default=None, help="YAML/JSON run configuration")
    common.add_argument("--input", type=str, default=None, help="Point set JSON file")
    common.add_argument("--generator", type=str, default=None,
                        help='Generator spec, e.g. "korobov:n=13,a=5,d=2", or a YAML/JSON file holding one')
    common.add_argument("--q", type=str, action="append", default=None, help="Exponents, e.g. 1,2,4 or 1/2")
    common.add_argument("--inequalities", type=str, action="append", default=None,
                        help="Inequality ids (comma separated)")
    common.add_argument("--budget", type=int, default=None, help="Shift evaluations of the Lq* search")
    common.add_argument("--escalations", type=int, default=None, help="Budget escalations before INCONCLUSIVE")
    common.add_argument("--seed", type=int, default=None, help="Seed of random generators and sampling")
    common.add_argument("--jobs", type=int, default=None, help="Worker processes for sweep")
    common.add_argument("--out", type=str, default=None, help="Output file (default stdout)")
    common.add_argument("--format", type=str, choices=["json", "csv"], default=None, help="Output format")
    common.add_argument("--timing", action="store_true", default=None, help="Record runtimes")
    common.add_argument("--debug", action="store_true", help="Enable debug logging")

    parser = argparse.ArgumentParser(
        prog="torus-discrepancy",
        description="Exact periodic discrepancy of point sets on the torus",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("gen", parents=[common], help="Generate a point set")
    evaluate = sub.add_parser("eval", parents=[common], help="Local discrepancy at given anchors")
    evaluate.add_argument("--anchor", type=str, action="append", default=None,
                          help='Anchor such as "1/2,1/3+" (repeatable)')
    identity = sub.add_parser("identity", parents=[common], help="Check the Main Identity on random anchors")
    identity.add_argument("--anchors", type=int, default=None, help="Number of anchors")
    identity.add_argument("--inject-fault", action="store_true", default=None, help="Perturb one rhs value")
    sub.add_parser("extremal", parents=[common], help="L_inf, L_inf* and lambda*_J")
    lq = sub.add_parser("lq", parents=[common], help="Lq discrepancies")
    lq.add_argument("--mc-samples", type=int, default=None, help="Monte Carlo sample count")
    sub.add_parser("verify", parents=[common], help="Verify the inequality chain")
    sub.add_parser("sweep", parents=[common], help="Sweep a generator family (needs --config)")
    return parser


def build_config(args: argparse.Namespace) -> RunConfig:
    """
    Merge the config file (if any) with command-line flags; flags win

    Raises:
        ConfigError: invalid or unreadable configuration
    """
    data: Dict[str, Any] = load_config(args.config) if args.config else {}
    data["command"] = args.command

    generator = args.generator or data.get("generator")
    if isinstance(generator, str):
        if PointSetFactory.is_spec_file(generator):
            data["generator"] = PointSetFactory.parse_file(generator)
        else:
            data["generator"] = PointSetFactory.parse_spec(generator)

    flags = {
        "input": args.input,
        "q": _split(args.q),
        "inequalities": _split(args.inequalities),
        "seed": args.seed,
        "jobs": args.jobs,
        "out": args.out,
        "format": args.format,
        "timing": args.timing,
        "anchor": getattr(args, "anchor", None),
        "anchors": getattr(args, "anchors", None),
        "inject_fault": getattr(args, "inject_fault", None),
        "mc_samples": getattr(args, "mc_samples", None),
    }
    data.update({key: value for key, value in flags.items() if value is not None})

    # --seed reaches generator mappings that do not fix their own seed
    generator = data.get("generator")
    if isinstance(generator, dict) and "seed" not in generator and data.get("seed") is not None:
        data["generator"] = {**generator, "seed": data["seed"]}

    budget = dict(data.get("budget") or {})
    if args.budget is not None:
        budget["shift_evaluations"] = args.budget
    if args.escalations is not None:
        budget["escalations"] = args.escalations
    data["budget"] = budget

    try:
        return RunConfig(**data)
    except ValidationError as e:
        raise ConfigError(f"Invalid configuration: {e}") from e


def main(argv: Optional[List[str]] = None) -> int:
    load_dotenv()
    args = build_parser().parse_args(argv)

    level_name = os.getenv("DISCREPANCY_LOG_LEVEL", "INFO").upper()
    logging.basicConfig(
        level=getattr(logging, level_name, logging.INFO),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
    )
    if args.debug:
        logging.getLogger().setLevel(logging.DEBUG)

    try:
        config = build_config(args)
        logger.info(f"Running {config.command}")
        report = COMMANDS[config.command](config)
        ReportDAO.save(report, config.out, config.format)
    except (DiscrepancyError, OSError, ValueError) as e:
        logger.error(f"{args.command} failed: {e}")
        return EXIT_USAGE

    if report.warnings:
        logger.warning(f"{report.warnings} INCONCLUSIVE verdicts")
    logger.info(f"{config.command} finished with exit code {report.exit_code}")
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
