"""Command line interface.

Exit codes: 0 when every selected check passes, 1 when one fails or its
mathematical preconditions do not hold, 2 for input errors (including a
command that needs a triple or metric the document does not have).
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from nilgeo import catalog
from nilgeo.document import emit_document, from_entry, load
from nilgeo.errors import DocumentError, NilgeoError
from nilgeo.report import GROUPS, run_report

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

HELP = {
    "check": "Jacobi, nilpotency, structure validation, integrability, abelian",
    "canonical": "closedness of the canonical form and the trace lemma",
    "salamon": "Salamon coframe for each structure",
    "obata": "Obata connection, Ricci, traces, holonomy",
    "hkt": "quaternionic Hermitian metric, Omega, HKT condition",
    "lee": "Bismut connection and Lee forms",
    "lefschetz": "theta form and Lefschetz maps",
    "report": "every check in dependency order",
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="nilgeo", description="Exact checks for structures on nilpotent Lie algebras.")
    parser.add_argument("--json", action="store_true", help="emit machine-readable records")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, text in HELP.items():
        p = sub.add_parser(name, help=text)
        p.add_argument("file", help="document path, '-' for stdin, or catalog:NAME")
        p.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
    cat = sub.add_parser("catalog", help="list or emit catalog entries")
    cat_sub = cat.add_subparsers(dest="action", required=True, parser_class=_Parser)
    cat_list = cat_sub.add_parser("list", help="list entry names")
    cat_list.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
    emit = cat_sub.add_parser("emit", help="print an entry as a document")
    emit.add_argument("name")
    return parser


def _catalog(args, out) -> int:
    if args.action == "list":
        if args.json:
            rows = [{"name": n, "description": catalog.get(n).description} for n in catalog.names()]
            out.write(json.dumps(rows, indent=2) + "\n")
        else:
            for n in catalog.names():
                out.write(f"{n:<10} {catalog.get(n).description}\n")
        return EXIT_OK
    try:
        entry = catalog.get(args.name)
    except KeyError:
        sys.stderr.write(f"nilgeo: unknown catalog entry {args.name!r}; try 'nilgeo catalog list'\n")
        return EXIT_INPUT
    out.write(emit_document(from_entry(entry)))
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out if out is not None else sys.stdout
    args = build_parser().parse_args(argv)
    if args.command == "catalog":
        return _catalog(args, out)
    try:
        doc = load(args.file)
    except DocumentError as exc:
        sys.stderr.write(f"nilgeo: {exc}\n")
        return EXIT_INPUT
    checks = None if args.command == "report" else GROUPS[args.command]
    try:
        report = run_report(doc, checks)
    except NilgeoError as exc:
        # structurally malformed input the parser could not see, e.g. brackets on a bad basis
        sys.stderr.write(f"nilgeo: {exc}\n")
        return EXIT_INPUT
    out.write((report.to_json() if args.json else report.to_text()) + "\n")
    if not report.applicable:
        sys.stderr.write(f"nilgeo: '{args.command}' does not apply to this document\n")
        return EXIT_INPUT
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
