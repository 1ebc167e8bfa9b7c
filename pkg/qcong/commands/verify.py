"""
`qcong verify` - run named checks over a range of n.
"""

import argparse
import logging
import re
from typing import Optional, Tuple

from qcong.config import settings
from qcong.errors import UsageError
from qcong.models.schemas import OutputFormat, RunConfig
from qcong.services.cyclotomic import CyclotomicCache
from qcong.services.registry import check_names, expand_tasks
from qcong.services.report import render, write_report
from qcong.services.runner import run_tasks

logger = logging.getLogger(__name__)

_RANGE = re.compile(r"^\s*(\d+)\s*(?:\.\.(=?)\s*(\d+))?\s*$")


def parse_range(text: str) -> Tuple[int, int]:
    """
    Parse `A..=B` (inclusive), `A..B` (exclusive) or `A`.

    Returns:
        (first, last), both inclusive

    Raises:
        UsageError: If the text is malformed or the range is empty
    """
    match = _RANGE.match(text or "")
    if not match:
        raise UsageError(f"bad range {text!r}; expected A..=B, A..B or A")
    start = int(match.group(1))
    if match.group(3) is None:
        return start, start
    end = int(match.group(3)) - (0 if match.group(2) else 1)
    if end < start:
        raise UsageError(f"range {text!r} is empty")
    return start, end


def register(subparsers) -> None:
    parser = subparsers.add_parser("verify", help="Run named checks over a range of n")
    parser.add_argument("checks", nargs="*", help="Check names, see --list")
    parser.add_argument("--n", help="Range A..=B, A..B or a single A (primes p for classical checks)")
    parser.add_argument("--power", type=int, choices=(1, 2), help="Modulus power override")
    parser.add_argument("--d", type=int, help="Wang-Yu parameter (default: every |d| <= 5)")
    parser.add_argument("--k", type=int, help="Index k for k-quantified proof steps")
    parser.add_argument("--s", type=int, help="Exponent s for qpow-lemma")
    parser.add_argument("--r", type=int, default=1, help="Exponent r for classical checks")
    parser.add_argument("--a", metavar="MONOMIAL", help="Carlitz parameter a, e.g. q^3; pass negatives as --a=-q")
    parser.add_argument("--b", metavar="MONOMIAL", help="Carlitz parameter b; pass negatives as --b=-q^2")
    parser.add_argument("--base-power", type=int, help="Carlitz base Q = q^s")
    parser.add_argument("--count", type=int, help="Random specialisation count")
    parser.add_argument("--seed", type=int, help="Random specialisation seed")
    parser.add_argument("--format", choices=[f.value for f in OutputFormat], default=OutputFormat.TEXT.value)
    parser.add_argument("--out", help="Report file (default: stdout)")
    parser.add_argument("--parallelism", type=int, default=settings.DEFAULT_PARALLELISM)
    parser.add_argument("--fail-fast", action="store_true", help="Stop after the first failure")
    parser.add_argument("--no-timing", action="store_true", help="Drop elapsed times from the report")
    parser.add_argument("--list", action="store_true", help="List check names and exit")
    parser.set_defaults(handler=run)


def build_config(args: argparse.Namespace) -> RunConfig:
    if not args.checks:
        raise UsageError("no checks given; use --list to see the registered names")
    if not args.n:
        raise UsageError("--n is required")
    n_start, n_end = parse_range(args.n)
    return RunConfig(
        checks=args.checks,
        n_start=n_start,
        n_end=n_end,
        power=args.power,
        d=args.d,
        k=args.k,
        s=args.s,
        r=args.r,
        a=args.a,
        b=args.b,
        base_power=args.base_power,
        count=args.count,
        seed=args.seed,
        format=args.format,
        out=args.out,
        parallelism=args.parallelism,
        fail_fast=args.fail_fast,
        timing=not args.no_timing,
    )


def run(args: argparse.Namespace, cache: Optional[CyclotomicCache] = None) -> int:
    """Exit code 0 when every result holds, 1 otherwise."""
    if args.list:
        write_report("".join(name + "\n" for name in check_names()))
        return 0

    config = build_config(args)
    tasks = expand_tasks(config)
    if cache is None:
        cache = CyclotomicCache()
    if config.parallelism > 1:
        # workers receive a frozen snapshot, so fill it first
        cache.warm_up(config.n_end)
    results = run_tasks(tasks, config.parallelism, cache, config.fail_fast)
    write_report(render(results, config.format, config.timing), config.out)

    failed = [r for r in results if not r.holds]
    if failed:
        logger.warning(f"{len(failed)} of {len(results)} results failed")
    return 1 if failed else 0
