"""Batch cross-check tool: symbolic reduction/closed-form verification and
stencil-dump validation, with JSON pass/fail reports."""

from __future__ import annotations

import argparse
import json
import sys


def _emit(report: dict, out: str | None) -> int:
    text = json.dumps(report, indent=1)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    print("PASS" if report.get("passed") else "FAIL")
    if not out:
        print(text)
    return 0 if report.get("passed") else 2


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="symverify", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("reduction-table",
                       help="verify the printed fourth-derivative table")
    p.add_argument("--out", default=None)

    p = sub.add_parser("closed-forms",
                       help="verify the printed fourth-order blocks to O(h^6)")
    p.add_argument("--out", default=None)

    p = sub.add_parser("crosscheck", help="validate a stencil dump file")
    p.add_argument("dump", help="JSON dump from the solver")
    p.add_argument("--out", default=None)

    args = parser.parse_args(argv)
    if args.command == "reduction-table":
        from .reduction import verify_printed_xi40
        return _emit(verify_printed_xi40(), args.out)
    if args.command == "closed-forms":
        from .closedforms import verify_closed_forms
        return _emit(verify_closed_forms(), args.out)
    from .crosscheck import crosscheck_stencil_dump
    return _emit(crosscheck_stencil_dump(args.dump), args.out)


if __name__ == "__main__":
    sys.exit(main())
