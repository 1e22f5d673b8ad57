"""Command line interface.

Exit codes: 0 success, 1 a verification or certification failed, 2 bad
input, 3 a Hom window audit failed.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from typing import Sequence

from . import __version__
from .invpoly import CASE_ALIASES, InvertiblePolynomial, case_matrix, classify, grading_data, milnor_number, transpose
from .stablehom import WindowAuditError

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_AUDIT = 0, 1, 2, 3

CASES = (
    "1-chain",
    "2-split",
    "2-chain",
    "2-loop",
    "3-split-a",
    "3-split-b",
    "3-split-c",
    "3-chain",
    "3-chain-nonstrong",
    "3-loop",
)


class InputError(ValueError):
    pass


# Input parsing


_TERM = re.compile(r"^([xyzt])(?:\^(\d+))?$")


def parse_shorthand(text: str) -> InvertiblePolynomial:
    """``x^3*y + y^2`` style input in the variables x, y, z, t."""
    terms = [t.strip() for t in text.replace("-", "+").split("+") if t.strip()]
    rows = []
    used = set()
    parsed = []
    for t in terms:
        exps = {}
        for f in t.replace(" ", "").split("*"):
            m = _TERM.match(f)
            if not m:
                raise InputError(f"cannot parse factor {f!r} in {t!r}")
            v = "xyzt".index(m.group(1))
            exps[v] = exps.get(v, 0) + int(m.group(2) or 1)
            used.add(v)
        parsed.append(exps)
    n = max(used) + 1 if used else 0
    if len(parsed) != n:
        raise InputError(f"expected {n} monomials for {n} variables, got {len(parsed)}")
    for exps in parsed:
        rows.append([exps.get(i, 0) for i in range(n)])
    return InvertiblePolynomial(rows)


def load_poly(text: str) -> InvertiblePolynomial:
    if os.path.exists(text):
        with open(text) as fh:
            text = fh.read()
    text = text.strip()
    if text.startswith("{"):
        try:
            return InvertiblePolynomial.from_json(json.loads(text))
        except (json.JSONDecodeError, KeyError) as exc:
            raise InputError(f"malformed polynomial JSON: {exc}") from exc
    return parse_shorthand(text)


def parse_exponents(text: str | None) -> tuple[int, ...]:
    if not text:
        raise InputError("--exponents is required")
    try:
        vals = tuple(int(v) for v in text.split(","))
    except ValueError as exc:
        raise InputError(f"bad exponents {text!r}") from exc
    if any(v < 2 for v in vals):
        raise InputError("exponents must be at least 2")
    return vals


def resolve_case(args) -> tuple[str, tuple[int, ...]]:
    """Case name and exponents from ``--case/--exponents`` or ``--poly``."""
    if args.case:
        if args.case not in CASES:
            raise InputError(f"unknown case {args.case!r}")
        exps = parse_exponents(args.exponents)
        need = int(args.case[0])
        if len(exps) != need:
            raise InputError(f"case {args.case} needs {need} exponents")
        return args.case, exps
    if args.poly:
        w = load_poly(args.poly)
        d = classify(w)
        if d.case is None:
            raise InputError("only n <= 3 polynomials have a named case")
        if tuple(d.permutation) != tuple(range(w.n)) or InvertiblePolynomial(case_matrix(d.case, d.exponents)) != w:
            raise InputError(f"polynomial is a variable permutation of {d.case} {d.exponents}; pass --case")
        return d.case, tuple(d.exponents)
    raise InputError("give --case and --exponents, or --poly")


def resolve_poly(args) -> InvertiblePolynomial:
    if args.poly:
        return load_poly(args.poly)
    case, exps = resolve_case(args)
    return InvertiblePolynomial(case_matrix(CASE_ALIASES.get(case, case), exps))


# Output


def emit(args, text: str) -> None:
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def as_json(data) -> str:
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def _fmt(args, allowed: Sequence[str]) -> str:
    fmt = args.format or allowed[0]
    if fmt not in allowed:
        raise InputError(f"format {fmt!r} not available here; use one of {', '.join(allowed)}")
    return fmt


# Subcommands


def cmd_classify(args) -> int:
    w = resolve_poly(args)
    d = classify(w)
    data = {
        "polynomial": str(w),
        "case": d.case,
        "atoms": [{"type": a.kind, "variables": list(a.variables), "exponents": list(a.exponents)} for a in d.parts],
        "weights": [str(q) for q in w.weights],
        "milnor_number": milnor_number(w),
        "transpose_milnor_number": milnor_number(transpose(w)),
    }
    emit(args, as_json(data))
    return EXIT_OK


def cmd_group(args) -> int:
    from .stablehom import nice_coords

    w = resolve_poly(args)
    g = grading_data(w)
    data = {
        "polynomial": str(w),
        "free_rank": g.group.free_rank,
        "torsion": list(g.group.invariant_factors),
        "reduced_order": g.reduced_group.order(),
        "reduced_torsion": list(g.reduced_group.invariant_factors),
        "variable_weights": list(g.var_weights),
        "potential_weight": g.potential_weight,
        "reduced_elements": [list(nice_coords(g, g.element(e.coords))) for e in g.reduced_elements()],
    }
    emit(args, as_json(data))
    return EXIT_OK


def cmd_homs(args) -> int:
    from . import gralg
    from .mf import mf_for_kind
    from .stablehom import stable_hom

    w = resolve_poly(args)
    g = grading_data(w)
    x = mf_for_kind(gralg.kind_from_label(args.source, w.n), w, g)
    y = mf_for_kind(gralg.kind_from_label(args.target, w.n), w, g)
    t = stable_hom(x, y, args.window_margin)
    fmt = _fmt(args, ("tsv", "json"))
    emit(args, t.to_tsv() if fmt == "tsv" else as_json(t.to_json()))
    return EXIT_OK


def _collection(args):
    from .collections import build_collection

    case, exps = resolve_case(args)
    return build_collection(case, exps, strong=not getattr(args, "nonstrong", False))


def cmd_collection(args) -> int:
    c = _collection(args)
    fmt = _fmt(args, ("json", "dot"))
    emit(args, as_json(c.to_json()) if fmt == "json" else c.to_dot())
    return EXIT_OK


def cmd_verify(args) -> int:
    from .verify import check_collection

    c = _collection(args)
    r = check_collection(c, args.window_margin, args.jobs)
    fmt = _fmt(args, ("json", "tsv"))
    emit(args, as_json(r.to_json()) if fmt == "json" else r.to_tsv())
    print(r.summary(), file=sys.stderr)
    return EXIT_OK if r.ok else EXIT_FAIL


def cmd_fullness(args) -> int:
    from .fullness import certify_fullness

    c = _collection(args)
    cert = certify_fullness(c)
    emit(args, as_json(cert.to_json()))
    print(f"full={cert.full} classes={cert.reached}/{cert.goal} steps={len(cert.trace)}", file=sys.stderr)
    return EXIT_OK if cert.full else EXIT_FAIL


def cmd_blocks(args) -> int:
    from .blocks import antidiagonal_blocks, format_trace, internally_orthogonal, quiver_from_collection, reduce_blocks
    from .verify import check_collection

    c = _collection(args)
    r = check_collection(c, args.window_margin, args.jobs)
    if not r.ok:
        print(r.summary(), file=sys.stderr)
        return EXIT_FAIL
    q = quiver_from_collection(c, r)
    bd = antidiagonal_blocks(c)
    start = len([b for b in bd.blocks if b])
    q2, bd2, trace = reduce_blocks(q, bd, c.n)
    ok = len(bd2) <= c.n + 1 and internally_orthogonal(q2, bd2) and q2.all_strong()
    fmt = _fmt(args, ("json", "dot"))
    if fmt == "dot":
        emit(args, q.to_dot(bd, "before") + q2.to_dot(bd2, "after"))
    else:
        emit(
            args,
            as_json(
                {
                    "schema": "singcat.blocks/1",
                    "case": c.case,
                    "exponents": list(c.exponents),
                    "initial_blocks": [[r.labels[v] for v in b] for b in bd.blocks],
                    "trace": trace,
                    "summary": format_trace(start, trace),
                    "final_blocks": [[r.labels[v] for v in b] for b in bd2.blocks],
                }
            ),
        )
    print(format_trace(start, trace), file=sys.stderr)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_conjecture(args) -> int:
    from .collections import conjectural_collection, expected_count

    exps = parse_exponents(args.exponents)
    if len(exps) != 4:
        raise InputError("the n = 4 candidates need four exponents")
    c = conjectural_collection(4, args.type, exps)
    fmt = _fmt(args, ("json", "dot"))
    if fmt == "dot":
        emit(args, c.to_dot())
        return EXIT_OK
    data = c.to_json()
    data["kind_counts"] = c.kind_counts()
    data["count"] = len(c)
    data["formula_count"] = expected_count(f"4-{args.type}", exps)
    data["milnor_number_of_transpose"] = milnor_number(transpose(c.poly))
    emit(args, as_json(data))
    return EXIT_OK


def cmd_oracle(args) -> int:
    from . import oracle

    if args.what == "group-order":
        case, exps = resolve_case(args)
        data = oracle.case_group_orders(CASE_ALIASES.get(case, case), exps)
    elif args.what == "milnor":
        w = resolve_poly(args)
        data = {"jacobian_dimension": oracle.milnor_by_groebner(w), "transpose": oracle.milnor_by_groebner(transpose(w))}
    elif args.what == "one-variable":
        (p,) = parse_exponents(args.exponents)
        data = [{"l": l, "parity": e, "dim": d} for (l, e), d in sorted(oracle.one_variable_table(p).items())]
    elif args.what == "layers":
        from .collections import build_collection

        case, exps = resolve_case(args)
        data = oracle.lattice_layers([o.position for o in build_collection(case, exps).objects])
    else:
        (p, q, r, s) = parse_exponents(args.exponents)
        data = {k: oracle.conjecture_counts(k, (p, q, r, s)) for k in ("chain", "loop")}
    emit(args, as_json(data))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--poly", help="polynomial as JSON, a JSON file, or shorthand like 'x^3 + x*y^2'")
    common.add_argument("--case", help="one of: " + ", ".join(CASES))
    common.add_argument("--exponents", help="comma separated exponents, e.g. 3,2,2")
    common.add_argument("--window-margin", type=int, default=None, help="extra weight margin for Hom windows")
    common.add_argument("--format", choices=("json", "tsv", "dot"), default=None)
    common.add_argument("--out", help="write output to this file")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for Hom tables")

    p = argparse.ArgumentParser(prog="singcat", description="Exceptional collections in graded singularity categories.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("classify", parents=[common], help="chain/loop decomposition and Milnor numbers")
    sub.add_parser("group", parents=[common], help="grading group and its reduced quotient")
    h = sub.add_parser("homs", parents=[common], help="graded Hom table between two module kinds")
    h.add_argument("--source", required=True, help="module kind, e.g. k, M_y, M_xy, M_xyz")
    h.add_argument("--target", required=True)
    for name, helptext in (
        ("collection", "build a collection"),
        ("verify", "check exceptionality, strongness and the arrow pattern"),
        ("fullness", "certify generation of every twist of k"),
        ("blocks", "reduce the block decomposition by mutations"),
    ):
        s = sub.add_parser(name, parents=[common], help=helptext)
        s.add_argument("--nonstrong", action="store_true", help="use the non-strong 3-chain variant")
    c = sub.add_parser("conjecture", parents=[common], help="candidate collections for n = 4")
    c.add_argument("--type", choices=("chain", "loop"), required=True)
    o = sub.add_parser("oracle", parents=[common], help="brute-force reference values")
    o.add_argument("what", choices=("group-order", "milnor", "one-variable", "layers", "conjecture-counts"))
    return p


COMMANDS = {
    "classify": cmd_classify,
    "group": cmd_group,
    "homs": cmd_homs,
    "collection": cmd_collection,
    "verify": cmd_verify,
    "fullness": cmd_fullness,
    "blocks": cmd_blocks,
    "conjecture": cmd_conjecture,
    "oracle": cmd_oracle,
}


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args)
    except WindowAuditError as exc:
        print(f"window audit failed: {exc}", file=sys.stderr)
        return EXIT_AUDIT
    except (InputError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main() -> None:
    sys.exit(run())
