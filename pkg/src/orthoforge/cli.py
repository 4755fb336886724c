"""Command-line frontend and the on-disk file formats.

Lattice files are UTF-8 JSON: {"elements": [...], "covers": [[lo, hi], ...]}.
The element order in "elements" seeds the linear extension, so a file is a
deterministic seed for every downstream output.  Rationals are serialized
as strings ("3/4", or "2" when integral); no output ever contains a float.

Exit codes: 0 ok, 1 malformed input, 2 not a lattice, 3 pivot cap hit,
4 method disagreement, 5 verification failure.
"""

import argparse
import json
import sys

from .incidence import (
    delta,
    linearized_join,
    linearized_meet,
    moebius_matrix,
    rat_str,
    zeta_matrix,
)
from .lattice import (
    NotALatticeError,
    PosetParseError,
    build_lattice,
    generate,
    parse_poset,
    poset_from_spec,
)
from .polytope import build_polytope
from .search import (
    SUPPORTED_SIZE,
    Orthocomplementation,
    SearchAborted,
    brute_force_orthos,
    lp_orthos,
    verify_ortho,
)

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_NOT_LATTICE = 2
EXIT_PIVOT_CAP = 3
EXIT_DISAGREEMENT = 4
EXIT_VERIFY_FAIL = 5


def dump_spec(spec):
    """Canonical byte-stable document for a PosetSpec."""
    doc = {
        "elements": list(spec.elements),
        "covers": [list(c) for c in spec.covers],
    }
    return json.dumps(doc, indent=2) + "\n"


def _read(path):
    try:
        with open(path, "rb") as fh:
            return fh.read().decode("utf-8")
    except OSError as exc:
        raise PosetParseError("cannot read %s: %s" % (path, exc))
    except UnicodeDecodeError as exc:
        raise PosetParseError("%s is not UTF-8: %s" % (path, exc))


def _emit(text, out_path):
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_spec(path):
    spec = parse_poset(_read(path))
    for w in spec.warnings:
        print("warning: %s" % w, file=sys.stderr)
    return spec


def _reorder(matrix, extension):
    return [[matrix[p][q] for q in extension] for p in extension]


def _matrix_doc(matrix, poset, fmt):
    ordered = _reorder(matrix, poset.extension)
    if fmt == "json":
        return (
            json.dumps([[str(v) for v in row] for row in ordered], indent=2)
            + "\n"
        )
    labels = [poset.labels[p] for p in poset.extension]
    width = max(max(len(str(v)) for row in ordered for v in row), 1)
    lines = ["  ".join(labels)]
    for row in ordered:
        lines.append("  ".join(str(v).rjust(width) for v in row))
    return "\n".join(lines) + "\n"


def cmd_check(args):
    spec = _load_spec(args.input)
    try:
        lattice = build_lattice(spec)
    except NotALatticeError as exc:
        print(str(exc))
        return EXIT_NOT_LATTICE
    print(
        "lattice, n=%d, bottom=%s, top=%s"
        % (lattice.n, lattice.labels[lattice.bottom], lattice.labels[lattice.top])
    )
    return EXIT_OK


def cmd_matrix(args, which):
    spec = _load_spec(args.input)
    poset = poset_from_spec(spec)
    matrix = zeta_matrix(poset) if which == "zeta" else moebius_matrix(poset)
    _emit(_matrix_doc(matrix, poset, args.format), args.output)
    return EXIT_OK


def _ortho_doc(ortho, lattice):
    return {
        "map": ortho.as_label_map(lattice),
        "certificate": {
            "involution": ortho.involution,
            "order_reversing": ortho.order_reversing,
            "all_disjoint": ortho.all_disjoint,
            "all_conjoint": ortho.all_conjoint,
            "disjointness_trace": rat_str(ortho.disjointness),
            "conjointness_trace": rat_str(ortho.conjointness),
        },
    }


def cmd_find(args):
    spec = _load_spec(args.input)
    try:
        lattice = build_lattice(spec)
    except NotALatticeError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_NOT_LATTICE
    if lattice.n > SUPPORTED_SIZE:
        print(
            "warning: n=%d exceeds the supported envelope (%d); "
            "the pivot cap may trigger" % (lattice.n, SUPPORTED_SIZE),
            file=sys.stderr,
        )

    reports = {}
    try:
        if args.method in ("brute", "both"):
            reports["brute"] = brute_force_orthos(lattice)
        if args.method in ("lp", "both"):
            reports["lp"] = lp_orthos(
                lattice,
                objective=args.objective,
                workers=args.workers,
                pivot_cap=args.pivot_cap,
            )
    except SearchAborted as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_PIVOT_CAP

    if args.method == "both":
        brute_set = [o.sigma for o in reports["brute"].orthos]
        lp_set = [o.sigma for o in reports["lp"].orthos]
        if brute_set != lp_set:
            print(
                "method disagreement: brute found %d, lp found %d"
                % (len(brute_set), len(lp_set)),
                file=sys.stderr,
            )
            return EXIT_DISAGREEMENT

    primary = reports.get("lp") or reports["brute"]
    doc = {
        "n": lattice.n,
        "method": args.method,
        "objective": args.objective if "lp" in reports else None,
        "orthocomplementations": [
            _ortho_doc(o, lattice) for o in primary.orthos
        ],
        "nonexistence": None,
        "stats": {},
    }
    cert = getattr(primary, "nonexistence", None)
    if cert is not None:
        doc["nonexistence"] = {"kind": cert.kind}
        if cert.optimum is not None:
            doc["nonexistence"]["optimum"] = rat_str(cert.optimum)
    for name, rep in reports.items():
        doc["stats"][name] = {
            "lp_solves": rep.stats.lp_solves,
            "branch_nodes": rep.stats.branch_nodes,
            "elapsed_ms": rep.stats.elapsed_ms,
        }

    if args.format == "json":
        _emit(json.dumps(doc, indent=2) + "\n", args.output)
    else:
        lines = ["%d orthocomplementation(s)" % len(primary.orthos)]
        for o in primary.orthos:
            pairs = o.as_label_map(lattice)
            lines.append(
                "  " + ", ".join("%s->%s" % kv for kv in pairs.items())
            )
        if doc["nonexistence"]:
            lines.append("nonexistence: %s" % doc["nonexistence"])
        _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK


def cmd_verify(args):
    spec = _load_spec(args.input)
    try:
        lattice = build_lattice(spec)
    except NotALatticeError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_NOT_LATTICE
    try:
        mapping = json.loads(_read(args.map_file))
    except json.JSONDecodeError as exc:
        raise PosetParseError("map file is not valid JSON: %s" % exc)
    if not isinstance(mapping, dict) or set(mapping) != set(lattice.labels):
        raise PosetParseError("map file must assign every element exactly once")
    for target in mapping.values():
        if target not in lattice.labels:
            raise PosetParseError("unknown element label: %r" % (target,))
    sigma = [0] * lattice.n
    for src, dst in mapping.items():
        sigma[lattice.index(src)] = lattice.index(dst)

    result = verify_ortho(lattice, sigma)
    if isinstance(result, Orthocomplementation):
        doc = _ortho_doc(result, lattice)
        _emit(json.dumps(doc, indent=2) + "\n", args.output)
        return EXIT_OK
    doc = {"failed": result.condition, "witness": list(result.witness)}
    _emit(json.dumps(doc, indent=2) + "\n", args.output)
    return EXIT_VERIFY_FAIL


def cmd_polytope(args):
    spec = _load_spec(args.input)
    try:
        lattice = build_lattice(spec)
    except NotALatticeError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_NOT_LATTICE
    system = build_polytope(lattice)
    n = lattice.n
    names = [
        "x_%s_%s" % (lattice.labels[p], lattice.labels[q])
        for p in range(n)
        for q in range(n)
    ]

    def row_doc(terms, rhs):
        return {
            "terms": [[c, names[v]] for v, c in terms],
            "rhs": rhs,
        }

    doc = {
        "n": n,
        "variables": names,
        "equalities": {
            name: [row_doc(*row) for row in rows]
            for name, rows in system.families()
        },
        "nonnegative": True,
        "costs": {
            "disjointness": list(system.cl),
            "conjointness": list(system.cu),
        },
    }
    _emit(json.dumps(doc, indent=2) + "\n", args.output)
    return EXIT_OK


def cmd_linearized(args, kind):
    spec = _load_spec(args.input)
    poset = poset_from_spec(spec)
    p = poset.index(args.p)
    q = poset.index(args.q)
    op = linearized_meet if kind == "meet" else linearized_join
    result = op(poset, delta(poset.n, p), delta(poset.n, q))
    doc = {
        poset.labels[i]: rat_str(v)
        for i, v in enumerate(result)
        if v != 0
    }
    _emit(json.dumps(doc, indent=2) + "\n", args.output)
    return EXIT_OK


def cmd_generate(args):
    spec = generate(args.family, args.k)
    _emit(dump_spec(spec), args.output)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="orthoforge",
        description="Find all orthocomplementations of a finite lattice "
        "via exact linear programming.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_input=True):
        if needs_input:
            p.add_argument("input", help="lattice/poset JSON file")
        p.add_argument("--format", choices=("json", "text"), default="json")
        p.add_argument("-o", "--output", default=None, help="write here instead of stdout")

    common(sub.add_parser("check", help="validate a poset and the lattice axioms"))
    common(sub.add_parser("zeta", help="dump the incidence (zeta) matrix"))
    common(sub.add_parser("moebius", help="dump the Moebius matrix"))

    find = sub.add_parser("find", help="enumerate all orthocomplementations")
    common(find)
    find.add_argument("--method", choices=("lp", "brute", "both"), default="both")
    find.add_argument(
        "--objective", choices=("conjoint", "disjoint"), default="conjoint"
    )
    find.add_argument("--workers", type=int, default=1)
    find.add_argument("--pivot-cap", type=int, default=1_000_000)

    verify = sub.add_parser("verify", help="certify a candidate label map")
    common(verify)
    verify.add_argument("map_file", help="JSON object label -> label")

    common(sub.add_parser("polytope", help="dump the precomplement constraint system"))

    for kind in ("linmeet", "linjoin"):
        p = sub.add_parser(kind, help="linearized %s of two delta functions" % kind[3:])
        common(p)
        p.add_argument("p")
        p.add_argument("q")

    gen = sub.add_parser("generate", help="emit a canonical family member")
    gen.add_argument(
        "family", choices=("chain", "boolean", "m", "mo", "n5", "hexagon")
    )
    gen.add_argument("k", type=int, nargs="?", default=None)
    gen.add_argument("-o", "--output", default=None)
    gen.add_argument("--format", choices=("json", "text"), default="json")

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "check":
            return cmd_check(args)
        if args.command == "zeta":
            return cmd_matrix(args, "zeta")
        if args.command == "moebius":
            return cmd_matrix(args, "moebius")
        if args.command == "find":
            return cmd_find(args)
        if args.command == "verify":
            return cmd_verify(args)
        if args.command == "polytope":
            return cmd_polytope(args)
        if args.command == "linmeet":
            return cmd_linearized(args, "meet")
        if args.command == "linjoin":
            return cmd_linearized(args, "join")
        if args.command == "generate":
            return cmd_generate(args)
    except PosetParseError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_PARSE
    except ValueError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_PARSE
    raise AssertionError("unreachable")


def entry():
    sys.exit(main())
