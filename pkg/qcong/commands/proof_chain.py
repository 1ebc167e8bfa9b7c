"""
`qcong proof-chain` - replay the proof steps for one n.
"""

import argparse
from typing import Optional

from qcong.models.schemas import OutputFormat, ProofSection
from qcong.services.cyclotomic import CyclotomicCache
from qcong.services.proof_steps import proof_chain
from qcong.services.report import render, write_report


def register(subparsers) -> None:
    parser = subparsers.add_parser("proof-chain", help="Check every step of a proof for one odd n")
    parser.add_argument("--n", type=int, required=True, help="Odd n")
    parser.add_argument("--section", choices=[s.value for s in ProofSection], default=ProofSection.BOTH.value)
    parser.add_argument("--format", choices=[f.value for f in OutputFormat], default=OutputFormat.TEXT.value)
    parser.add_argument("--out", help="Report file (default: stdout)")
    parser.add_argument("--no-timing", action="store_true", help="Drop elapsed times from the report")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace, cache: Optional[CyclotomicCache] = None) -> int:
    results = proof_chain(args.n, ProofSection(args.section), cache)
    write_report(render(results, OutputFormat(args.format), not args.no_timing), args.out)
    return 0 if all(r.holds for r in results) else 1
