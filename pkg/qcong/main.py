"""
qcong command-line entry point.
Exact verification of q-supercongruences, Carlitz's identity and the proof steps behind them.
"""

import argparse
import logging
import sys
from typing import List, Optional

from pydantic import ValidationError

from qcong.commands import inspect, proof_chain, verify
from qcong.config import settings
from qcong.errors import DomainError, ParseError, UsageError
from qcong.services.cache_store import load_cache, save_cache

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qcong",
        description="Exact checks of q-supercongruences modulo powers of cyclotomic polynomials",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    verify.register(subparsers)
    proof_chain.register(subparsers)
    inspect.register(subparsers)
    return parser


def configure_logging() -> None:
    level = logging.getLevelName(settings.LOG_LEVEL)
    if not isinstance(level, int):
        level = logging.WARNING
    logging.basicConfig(
        stream=sys.stderr,
        level=level,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    if logging.getLevelName(level) != settings.LOG_LEVEL:
        logger.warning(f"Unknown QCONG_LOG_LEVEL {settings.LOG_LEVEL!r}, using WARNING")


def main(argv: Optional[List[str]] = None) -> int:
    """
    Run one sub-command.

    Returns:
        0 when every check holds, 1 when any fails, 2 for usage or domain errors
    """
    configure_logging()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE

    cache = load_cache()
    try:
        code = args.handler(args, cache)
    except (UsageError, DomainError, ParseError, ValidationError) as e:
        print(f"qcong: error: {e}", file=sys.stderr)
        return EXIT_USAGE

    save_cache(cache)
    return code


if __name__ == "__main__":
    sys.exit(main())
