"""
Command-line entry point
------------------------

    decohere <evolve|figure1|sweep|validate> [--config PATH] [--out PATH]
             [--log-level LEVEL] [--jobs N] [key=value ...]

``evolve``, ``figure1`` and ``sweep`` load a scenario file (``--config``,
falling back to ``DECOHERE_CONFIG`` and then to the shipped default for
the subcommand), apply the ``key=value`` overrides and write one CSV
table.  ``validate`` runs the oracle-equivalence suite and writes its
report in the same format.

Logs go to standard error so the CSV on standard output stays clean.
Exit status: 0 on success, 1 for configuration errors, 2 for numerical
failures or a failed validation.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path
from typing import List, Optional

from dotenv import load_dotenv

from . import __version__
from .errors import EXIT_CONFIG, EXIT_NUMERICAL, EXIT_OK, DecohereError
from .models.scenario import load_scenario
from .runners.scenarios import run_scenario, write_csv
from .runners.validation import run_validation

logger = logging.getLogger(__name__)

CONFIG_DIR = Path(__file__).resolve().parent / "config"


def default_config(command: str) -> Path:
    env_path = os.getenv("DECOHERE_CONFIG")
    if env_path:
        return Path(env_path)
    return CONFIG_DIR / f"{command}.yaml"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="decohere",
        description="Vacuum-induced decoherence of a free charge: scenario tables and validation.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default=None, help="CSV output path (default: standard output)")
    common.add_argument(
        "--log-level",
        default=None,
        help="logging level (default: $DECOHERE_LOG_LEVEL or WARNING)",
    )

    for name, text in (
        ("evolve", "evolve a wave packet's reduced density matrix over a tau grid"),
        ("figure1", "|Gamma_vac(tau)| of the partially correlated state for several Q"),
        ("sweep", "decoherence exponent and overlap magnitude over a list of Q values"),
    ):
        sub = commands.add_parser(name, parents=[common], help=text, description=text)
        sub.add_argument("--config", default=None, help="scenario YAML file")
        sub.add_argument("--jobs", type=int, default=1, help="worker threads for sweep")
        sub.add_argument("overrides", nargs="*", metavar="key=value",
                         help="override a scenario key, e.g. packet.n=16")

    commands.add_parser(
        "validate", parents=[common], help="run the oracle-equivalence suite",
        description="run the oracle-equivalence suite",
    )
    return parser


def configure_logging(level: Optional[str]) -> None:
    name = (level or os.getenv("DECOHERE_LOG_LEVEL") or "WARNING").upper()
    logging.basicConfig(
        level=getattr(logging, name, logging.WARNING),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )


def main(argv: Optional[List[str]] = None) -> int:
    load_dotenv()
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level)

    try:
        if args.command == "validate":
            report = run_validation()
            write_csv(report.to_frame(), args.out)
            if not report.passed:
                failed = [r.name for r in report.results if not r.passed]
                print(f"decohere: validation failed: {', '.join(failed)}", file=sys.stderr)
                return EXIT_NUMERICAL
            return EXIT_OK

        if args.jobs < 1:
            print("decohere: --jobs must be >= 1", file=sys.stderr)
            return EXIT_CONFIG
        path = Path(args.config) if args.config else default_config(args.command)
        config = load_scenario(path, args.overrides)
        write_csv(run_scenario(args.command, config, jobs=args.jobs), args.out)
        return EXIT_OK
    except DecohereError as exc:
        logger.debug("%s failed", args.command, exc_info=True)
        print(f"decohere: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
