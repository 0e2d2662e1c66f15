"""Command-line driver.

Exit codes: 0 success, 1 input error, 2 inconsistent input data, 3 resource cap.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from dtorsion.closure import ModuleSet, find_violation, generate_minimal
from dtorsion.combinatorics import Context, build_universe
from dtorsion.enumeration import MAX_CLASSES, enumerate_ainf, enumerate_classes
from dtorsion.errors import DTorsionError, DomainError, InconsistentDataError, UsageError
from dtorsion.homext import ext_dim, ext_middle_terms, hom_dim
from dtorsion.lattice import MAX_TRIPLE_SCAN, build_hasse, property_report
from dtorsion.serialize import (
    ResultDocument, collection_from_document, document_from_ainf, document_from_collection, to_dot)


def parse_tuple(text: str) -> tuple:
    try:
        return tuple(int(c) for c in text.split(","))
    except ValueError:
        raise UsageError(f"malformed tuple {text!r}; expected comma-separated integers") from None


def parse_tuples(text: str) -> list:
    text = text.strip()
    if not text:
        return []
    return [parse_tuple(part.strip()) for part in text.split(";")]


def context_from_args(args) -> Context:
    if args.d is None:
        raise UsageError("--d is required")
    if (args.n is None) == (args.kupisch is None):
        raise UsageError("give exactly one of --n or --kupisch")
    if args.n is not None:
        if args.ainf:
            raise UsageError("--ainf needs --kupisch")
        return Context.auslander(args.n, args.d)
    values = parse_tuple(args.kupisch)
    if args.ainf:
        return Context.ainf(values, args.d, args.offset)
    return Context.nakayama(values, args.d)


def _check_tuples(tuples, context):
    for t in tuples:
        if len(t) != context.d + 1:
            raise DomainError(f"{t} has length {len(t)}, expected d+1 = {context.d + 1}")


def _emit(text: str, path):
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_document(path) -> ResultDocument:
    try:
        with open(path) as fh:
            return ResultDocument.from_json(fh.read())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None


def _load_lattice(path):
    coll = collection_from_document(_load_document(path))
    for i, mask in enumerate(coll.masks):
        if find_violation(coll.universe, mask) is not None:
            raise InconsistentDataError(f"class #{i} of {path} is not a d-torsion class")
    return build_hasse(coll)


# -- subcommands -----------------------------------------------------------------

def cmd_enumerate(args):
    context = context_from_args(args)
    if context.kind == "ainf":
        result = enumerate_ainf(context, args.algorithm, args.workers, args.max_classes)
        if args.count_only:
            print(result.count)
        elif args.stream:
            for choice in result.iter_index_tuples():
                print(json.dumps(list(choice), separators=(",", ":")))
        else:
            _emit(document_from_ainf(result).to_json(), args.out)
        return 0
    coll = enumerate_classes(context, args.algorithm, args.workers, args.max_classes)
    if args.count_only:
        print(len(coll))
        return 0
    lattice = build_hasse(coll) if args.hasse or args.properties else None
    props = property_report(lattice) if args.properties else None
    doc = document_from_collection(coll, lattice if args.hasse else None, props)
    _emit(doc.to_json(), args.out)
    return 0


def cmd_closure(args):
    context = context_from_args(args)
    gens = parse_tuples(args.gens)
    _check_tuples(gens, context)
    u = build_universe(context)
    result = generate_minimal(gens, u, method=args.method)
    print(json.dumps([list(t) for t in result.tuples()], separators=(",", ":")))
    return 0


def cmd_check(args):
    context = context_from_args(args)
    if (args.class_file is None) == (args.members is None):
        raise UsageError("give exactly one of --class-file or --members")
    if args.class_file is not None:
        try:
            with open(args.class_file) as fh:
                raw = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read {args.class_file}: {exc}") from None
        if not isinstance(raw, list) or not all(isinstance(t, list) for t in raw):
            raise UsageError("class file must be a JSON array of integer arrays")
        members = [tuple(t) for t in raw]
    else:
        members = parse_tuples(args.members)
    _check_tuples(members, context)
    u = build_universe(context)
    witness = find_violation(u, ModuleSet.from_tuples(u, members).mask)
    if witness is None:
        print("true")
    else:
        print("false")
        print(json.dumps(witness.as_dict(), separators=(",", ":")))
    return 0


def cmd_hasse(args):
    lattice = _load_lattice(args.infile)
    if args.format == "dot":
        _emit(to_dot(lattice, args.labels), args.out)
    else:
        _emit(document_from_collection(lattice.collection, lattice).to_json(), args.out)
    return 0


def cmd_props(args):
    lattice = _load_lattice(args.infile)
    report = property_report(lattice, args.max_nodes, args.force)
    if not report["is_lattice"]:
        raise InconsistentDataError("collection is not closed under meets and joins")
    print(json.dumps(report, separators=(",", ":")))
    return 0


def cmd_hom(args):
    context = context_from_args(args)
    u = build_universe(context)
    print(hom_dim(parse_tuple(args.x), parse_tuple(args.y), u))
    return 0


def cmd_ext(args):
    context = context_from_args(args)
    u = build_universe(context)
    x, y = parse_tuple(args.x), parse_tuple(args.y)
    out = {"ext_dim": ext_dim(y, x, u)}
    if out["ext_dim"]:
        out["layers"] = ext_middle_terms(x, y, u).as_dict()["layers"]
    print(json.dumps(out, separators=(",", ":")))
    return 0


def _add_context(p):
    p.add_argument("--n", type=int, help="number of vertices of A_n^d")
    p.add_argument("--d", type=int, help="cluster-tilting degree")
    p.add_argument("--kupisch", help="Kupisch series, e.g. 1,2,2,3")
    p.add_argument("--ainf", action="store_true", help="read --kupisch as a finite A-infinity series")
    p.add_argument("--offset", type=int, default=0, help="position of the first --ainf entry")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dtorsion", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", help="list every d-torsion class")
    _add_context(p)
    p.add_argument("--algorithm", choices=["incremental", "paper"], default="incremental")
    p.add_argument("--count-only", action="store_true")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--max-classes", type=int, default=MAX_CLASSES)
    p.add_argument("--hasse", action="store_true", help="include cover relations")
    p.add_argument("--properties", action="store_true", help="include the lattice property report")
    p.add_argument("--stream", action="store_true", help="A-infinity: one block-index tuple per line")
    p.add_argument("--out", help="output file (default stdout)")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("closure", help="smallest d-torsion class containing some tuples")
    _add_context(p)
    p.add_argument("--gens", required=True, help='tuples, e.g. "0,0,0;1,1,1"')
    p.add_argument("--method", choices=["auto", "paper", "fixpoint"], default="auto")
    p.set_defaults(func=cmd_closure)

    p = sub.add_parser("check", help="decide whether a set is a d-torsion class")
    _add_context(p)
    p.add_argument("--class-file")
    p.add_argument("--members")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("hasse", help="Hasse diagram of an enumerated collection")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--format", choices=["dot", "json"], default="dot")
    p.add_argument("--labels", choices=["count", "full"], default="count")
    p.add_argument("--out")
    p.set_defaults(func=cmd_hasse)

    p = sub.add_parser("props", help="lattice property report")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--max-nodes", type=int, default=MAX_TRIPLE_SCAN)
    p.add_argument("--force", action="store_true")
    p.set_defaults(func=cmd_props)

    for name, func, text in (("hom", cmd_hom, "dim Hom(M_x, M_y)"),
                             ("ext", cmd_ext, "dim Ext^d(M_y, M_x) and middle terms")):
        p = sub.add_parser(name, help=text)
        _add_context(p)
        p.add_argument("--x", required=True)
        p.add_argument("--y", required=True)
        p.set_defaults(func=func)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except DTorsionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except BrokenPipeError:
        # reader went away (e.g. piped into head); silence the flush at exit too
        sys.stdout = open(os.devnull, "w")
        return 0


if __name__ == "__main__":
    sys.exit(main())
