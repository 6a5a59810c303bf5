# -*- coding: utf-8 -*-
"""
@author:XuMing(xuming624@qq.com)
@description: CLI entry point
"""
import argparse
import os
import sys
from typing import List, Optional

from loguru import logger

from chiraltalbot.commands import COMMANDS
from chiraltalbot.config import CLI_VERSION, default_threads, load_config, resolve_output_dir
from chiraltalbot.errors import ChiralTalbotError

COMMAND_HELP = {
    "fringe": "transmission fringes of both enantiomers",
    "visibility": "fringe visibility over the velocity range",
    "sweep": "enantiomer metrics over rotatory strength and electric anisotropy",
    "oracle-check": "compare the engine with explicit wave propagation",
    "potential": "tabulate the wall potentials and forces",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="chiraltalbot",
                                     description="Talbot-Lau interferometry of chiral molecules near chiral gratings")
    parser.add_argument("--version", "-v", action="store_true", help="Show version information")
    sub = parser.add_subparsers(dest="command")
    for name, text in COMMAND_HELP.items():
        p = sub.add_parser(name, help=text)
        p.add_argument("config", type=str, help="Config file (JSON) or preset name, e.g. fig2i")
        p.add_argument("--output", "-o", type=str, help="Output directory, overrides output_dir")
        p.add_argument("--threads", type=int, help="Worker processes, overrides CHIRALTALBOT_THREADS")
        p.add_argument("--debug", action="store_true", help="Verbose logging")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point for the CLI, returns the process exit code"""
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.version:
        print(f"chiraltalbot v{CLI_VERSION}")
        return 0
    if not args.command:
        parser.print_help()
        return 2

    # Configure logging
    logger.remove()
    logger.add(sys.stderr, level="DEBUG" if args.debug else "INFO")

    file_sink = None
    try:
        config = load_config(args.config)
        out_dir = resolve_output_dir(config, args.output)
        os.makedirs(out_dir, exist_ok=True)
        file_sink = logger.add(os.path.join(out_dir, "run.log"), rotation="10 MB")
        threads = args.threads if args.threads else default_threads()
        files = COMMANDS[args.command](config, out_dir, max(1, threads))
        logger.info(f"Wrote {', '.join(os.path.basename(f) for f in files)} to {out_dir}")
    except ChiralTalbotError as e:
        print(f"ERROR {e.code}: {e}", file=sys.stderr)
        return e.exit_code
    finally:
        if file_sink is not None:
            logger.remove(file_sink)
    return 0


if __name__ == "__main__":
    sys.exit(main())
