#!/usr/bin/env python3
"""
Firewire link-layer checker CLI

Pick a catalog scenario, explore its state space and run the requested checks.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from pydantic import ValidationError
from rich.console import Console
from rich.table import Table

from src.config import RunConfig, load_config, setup_logging
from src.engine.explorer import ExplorationLimits
from src.errors import FirewireError
from src.orchestrator import EXIT_USAGE, Orchestrator
from src.protocol.catalog import load_catalog

logger = logging.getLogger("src.cli")

VERBOSITY = {0: None, 1: "INFO", 2: "DEBUG"}


def list_scenarios() -> Table:
    """The scenario catalog as a table, one row per composed system."""
    table = Table(title="Scenario catalog")
    for column in ("name", "scenario", "n", "budget", "variant", "faults"):
        table.add_column(column)
    for row in load_catalog():
        table.add_row(*row.to_line().split())
    return table


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="firewire-check",
        description="Explore and verify the composed Firewire link-layer model",
    )
    parser.add_argument("--scenario", help="Catalog scenario name (see --list)")
    parser.add_argument("--list", action="store_true", help="List catalog scenarios and exit")
    parser.add_argument("--variant", choices=["ok", "ko"], help="Override the catalog variant")
    parser.add_argument("--no-faults", action="store_true", help="Disable every bus fault")
    parser.add_argument("--hide-upper", action="store_true", default=None, help="Hide LD*/TD* gates")
    parser.add_argument("--aut", type=Path, help="Write the explored (or minimized) LTS in AUT format")
    parser.add_argument("--trace", type=Path, help="Write a counterexample trace, one label per line")
    parser.add_argument("--report", type=Path, help="Write the exploration report")
    group = parser.add_mutually_exclusive_group()
    group.add_argument(
        "--check",
        default="deadlock",
        metavar="deadlock|FILE",
        help="Deadlock check (default) or a formula file",
    )
    group.add_argument("--formulas", metavar="FILE", help="Same as --check FILE")
    parser.add_argument("--minimize", action="store_true", help="Minimize modulo strong bisimulation")
    parser.add_argument(
        "--compare", type=Path, metavar="PATH", help="Check strong bisimilarity with an AUT file"
    )
    parser.add_argument("--max-states", type=int, help="State cap (default 2000000)")
    parser.add_argument("--max-transitions", type=int, help="Transition cap (default 20000000)")
    parser.add_argument("--workers", type=int, help="Successor computation threads (default 1)")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v info, -vv debug logging")
    return parser


def _pick(cli_value, config, key):
    return cli_value if cli_value is not None else config[key]


def main(argv: Optional[List[str]] = None, console: Optional[Console] = None) -> int:
    console = console or Console()
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        settings = load_config()
    except (OSError, ValueError) as e:
        setup_logging()
        logger.error("cannot read configuration: %s", e)
        return EXIT_USAGE
    setup_logging(VERBOSITY.get(min(args.verbose, 2)) or str(settings["log_level"]))

    if args.list:
        console.print(list_scenarios())
        return 0
    if not args.scenario:
        logger.error("--scenario is required (use --list to see the catalog)")
        return EXIT_USAGE

    try:
        config = RunConfig(
            scenario=args.scenario,
            variant=args.variant,
            no_faults=args.no_faults,
            hide_upper=_pick(args.hide_upper, settings, "hide_upper"),
            aut=args.aut,
            trace=args.trace,
            report=args.report,
            check=args.formulas or args.check,
            minimize=args.minimize,
            compare=args.compare,
            limits=ExplorationLimits(
                max_states=_pick(args.max_states, settings, "max_states"),
                max_transitions=_pick(args.max_transitions, settings, "max_transitions"),
                workers=_pick(args.workers, settings, "workers"),
            ),
            output_dir=settings["output_dir"],
        )
    except ValidationError as e:
        logger.error("invalid configuration:\n%s", e)
        return EXIT_USAGE

    console.print("=" * 80)
    try:
        outcome = Orchestrator(config, console).run()
    except (FirewireError, OSError) as e:
        logger.error("%s", e)
        return EXIT_USAGE
    finally:
        console.print("=" * 80)
    return outcome.exit_code


if __name__ == "__main__":
    sys.exit(main())
