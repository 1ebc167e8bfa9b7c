"""
Inspection commands: print a cyclotomic polynomial or both sides of Carlitz's identity.
"""

import argparse
from typing import Optional

from qcong.errors import UsageError
from qcong.services.carlitz import carlitz_sides
from qcong.services.cyclotomic import CyclotomicCache, cyclotomic, cyclotomic_oracle
from qcong.services.polyring import render
from qcong.services.qseries import MonomialParam
from qcong.services.report import write_report


def register(subparsers) -> None:
    parser = subparsers.add_parser("cyclotomic", help="Print Φn(q)")
    parser.add_argument("--n", type=int, required=True)
    parser.add_argument("--oracle", action="store_true", help="Use the Moebius product instead of the cache")
    parser.set_defaults(handler=run_cyclotomic)

    parser = subparsers.add_parser("carlitz", help="Print both sides of Carlitz's identity times (Q;Q)_n")
    parser.add_argument("--n", type=int, required=True)
    parser.add_argument(
        "--a", required=True, metavar="MONOMIAL", help="Monomial a, e.g. q^3; pass negatives as --a=-q"
    )
    parser.add_argument(
        "--b", required=True, metavar="MONOMIAL", help="Monomial b, e.g. -1; pass negatives as --b=-q^2"
    )
    parser.add_argument("--base-power", type=int, default=1, help="Q = q^s")
    parser.set_defaults(handler=run_carlitz)


def run_cyclotomic(args: argparse.Namespace, cache: Optional[CyclotomicCache] = None) -> int:
    if args.n < 1:
        raise UsageError(f"--n must be positive, got {args.n}")
    poly = cyclotomic_oracle(args.n) if args.oracle else cyclotomic(args.n, cache)
    write_report(render(poly) + "\n")
    return 0


def run_carlitz(args: argparse.Namespace, cache: Optional[CyclotomicCache] = None) -> int:
    a, b = MonomialParam.parse(args.a), MonomialParam.parse(args.b)
    lhs, rhs = carlitz_sides(args.n, a, b, args.base_power)
    holds = lhs == rhs
    write_report(f"LHS: {render(lhs)}\nRHS: {render(rhs)}\nholds: {str(holds).lower()}\n")
    return 0 if holds else 1
