"""grothcat command line.

Exit codes: 0 ok, 1 parse error, 2 no stabilization within the bound,
3 invalid functor, 4 verification failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from .congruence import FinPresCategory
from .errors import BoundError, GrothcatError, InductionError, InfiniteDimensionError, InputError, NonStabilizingError
from .functor import validate_functor
from .grothendieck import diagonal_presentation, verify_diagonal_iso
from .path_algebra import format_lincomb
from .problem import ProblemFile, lincomb_json, load, parse_problem, path_json, to_document
from .quiver import export_dot, format_path
from .scalars import Field
from .synth import Connecting, GrQuiver, GrRelationSet, build_qprime, build_relations, simplify_presentation, verify_presentation

EXIT_OK, EXIT_PARSE, EXIT_BOUND, EXIT_INVALID, EXIT_VERIFY = 0, 1, 2, 3, 4


class CommandError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _dump_json(doc) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


# -- quotient -----------------------------------------------------------------

def quotient_text(c: FinPresCategory) -> str:
    # identities print as "e" unless an arrow is itself called e
    clash = any(a.id == "e" for a in c.quiver.arrows)

    def rep(p) -> str:
        return format_path(p, identity=None if clash else "e")

    status = "certified" if c.certified else "NOT certified (possibly infinite)"
    lines = [f"saturation bound {c.bound}, {status}"]
    for i in c.objects():
        for j in c.objects():
            homs = c.hom(i, j)
            if homs:
                lines.append(f"I({i},{j}): " + ", ".join(rep(m.rep) for m in homs) + f" ({len(homs)} classes)")
    if c.certified:
        products = [
            f"  {rep(g.rep)} o {rep(f.rep)} = {rep(gf.rep)}"
            for (g, f), gf in c.table.items()
            if not (g.rep.is_trivial or f.rep.is_trivial)
        ]
        if products:
            lines.append("composition (g o f):")
            lines.extend(products)
    return "\n".join(lines) + "\n"


def quotient_json(p: ProblemFile, c: FinPresCategory) -> dict:
    homs = []
    for i in c.objects():
        for j in c.objects():
            cls = c.hom(i, j)
            if cls:
                homs.append({"source": i, "target": j, "classes": [path_json(m.rep) for m in cls]})
    section = {"bound": c.bound, "certified": c.certified, "homs": homs}
    if c.certified:
        section["composition"] = [
            [path_json(g.rep), path_json(f.rep), path_json(gf.rep)] for (g, f), gf in c.table.items()
        ]
    return {**to_document(p), "quotient": section}


def cmd_quotient(p: ProblemFile, args) -> tuple:
    """Prints the partial data too when saturation does not stabilize."""
    try:
        c = p.index_category(args.bound)
        code, warnings = EXIT_OK, ()
    except NonStabilizingError as exc:
        if exc.partial is None:
            raise CommandError(EXIT_BOUND, str(exc)) from None
        c, code, warnings = exc.partial, EXIT_BOUND, (str(exc),)
    if args.format == "json":
        return _dump_json(quotient_json(p, c)), code, *warnings
    if args.format == "dot":
        return export_dot(p.index, name="I"), code, *warnings
    return quotient_text(c), code, *warnings


# -- gr-pres ------------------------------------------------------------------

def _index_category(p: ProblemFile, args) -> FinPresCategory:
    try:
        return p.index_category(args.bound)
    except NonStabilizingError as exc:
        raise CommandError(EXIT_BOUND, str(exc)) from None


def _functor(p: ProblemFile, args, i_cat: FinPresCategory):
    try:
        x = p.functor(args.bound)
    except InductionError as exc:
        raise CommandError(EXIT_INVALID, f"invalid functor: {exc}") from None
    violations = validate_functor(x, i_cat)
    if violations:
        raise CommandError(EXIT_INVALID, "invalid functor:\n" + "\n".join(f"  {v}" for v in violations))
    return x


def presentation_text(gq: GrQuiver, rels: GrRelationSet) -> str:
    q = gq.quiver
    lines = [f"Q' vertices ({len(q.vertices)}): " + " ".join(q.vertices)]
    lines.append(f"Q' arrows ({len(q.arrows)}):")
    for a in q.arrows:
        kind = "connecting" if gq.is_connecting(a.id) else "inner"
        lines.append(f"  {a.id}: {a.tail} -> {a.head}  [{kind}]")
    lines.append(f"relations ({len(rels)}):")
    for r in rels:
        lines.append(f"  {r.family}  {format_lincomb(r.element)}")
    return "\n".join(lines) + "\n"


def presentation_json(p: ProblemFile, gq: GrQuiver, rels: GrRelationSet, simplified: bool) -> dict:
    arrows = []
    for a in gq.quiver.arrows:
        t = gq.tag[a.id]
        entry = {"id": a.id, "tail": a.tail, "head": a.head}
        if isinstance(t, Connecting):
            entry.update(kind="connecting", index_arrow=t.arrow, object=t.obj)
        else:
            entry.update(kind="inner", index=t.index, fiber_arrow=t.arrow)
        arrows.append(entry)
    section = {
        "simplified": simplified,
        "vertices": [
            {"id": v, "index": gq.vertex_of[v].index, "object": gq.vertex_of[v].fiber_object} for v in gq.quiver.vertices
        ],
        "arrows": arrows,
        "relations": [{"family": r.family, "terms": lincomb_json(r.element)} for r in rels],
    }
    return {**to_document(p), "presentation": section}


def presentation_dot(gq: GrQuiver, rels: GrRelationSet) -> str:
    head = [f"// {r.family}: {format_lincomb(r.element)}" for r in rels]
    return "\n".join(head + [gq.to_dot()]) if head else gq.to_dot()


def cmd_gr_pres(p: ProblemFile, args) -> tuple[str, int]:
    i_cat = _index_category(p, args)
    x = _functor(p, args, i_cat)
    gq = build_qprime(x)
    rels = build_relations(x, i_cat, gq, p.lifts)
    if args.simplify:
        gq, rels = simplify_presentation(gq, rels, x.field)
    if args.format == "json":
        return _dump_json(presentation_json(p, gq, rels, args.simplify)), EXIT_OK
    if args.format == "dot":
        return presentation_dot(gq, rels), EXIT_OK
    return presentation_text(gq, rels), EXIT_OK


# -- gr-diag ------------------------------------------------------------------

def cmd_gr_diag(p: ProblemFile, args) -> tuple[str, int]:
    d = diagonal_presentation(p.index, p.index_relations)
    if args.format == "dot":
        return export_dot(p.index, name="Q"), EXIT_OK
    if args.format == "json":
        section = {
            "presentation": d.text(),
            "tensor_form": d.tensor_form(),
            "generators": [[path_json(g), path_json(h)] for g, h in d.generators],
        }
        if p.algebra is not None:
            section["algebra"] = p.algebra_value().name
        return _dump_json({**to_document(p), "diagonal": section}), EXIT_OK
    lines = [d.text(), d.tensor_form()]
    if p.algebra is not None:
        lines.append(f"where A = {p.algebra_value().name}")
    return "\n".join(lines) + "\n", EXIT_OK


# -- verify -------------------------------------------------------------------

def cmd_verify(p: ProblemFile, args) -> tuple[str, int]:
    i_cat = _index_category(p, args)
    reports = []
    if p.has_functor:
        x = _functor(p, args, i_cat)
        reports.append(verify_presentation(x, i_cat, lifts=p.lifts or None))
    if args.with_diagonal or not p.has_functor:
        reports.append(verify_diagonal_iso(p.algebra_value(), i_cat))
    ok = all(r.passed for r in reports)
    if args.format == "json":
        doc = {
            "passed": ok,
            "reports": [
                {"title": r.title, "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in r.checks]}
                for r in reports
            ],
        }
        out = _dump_json(doc)
    else:
        out = "\n".join(r.text() for r in reports) + "\n" + ("all checks passed\n" if ok else "verification FAILED\n")
    return out, EXIT_OK if ok else EXIT_VERIFY


COMMANDS = {"quotient": cmd_quotient, "gr-pres": cmd_gr_pres, "gr-diag": cmd_gr_diag, "verify": cmd_verify}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="grothcat", description="Grothendieck constructions of finitely presented functors.")
    parser.add_argument("command", choices=list(COMMANDS))
    parser.add_argument("--input", required=True, help="JSON problem file")
    parser.add_argument("--bound", type=int, default=None, help="maximum saturation bound (default 12)")
    parser.add_argument("--field", default=None, help="rational or fp:P; overrides the file")
    parser.add_argument("--format", choices=("text", "json", "dot"), default="text")
    parser.add_argument("--simplify", action="store_true", help="gr-pres: eliminate arrows defined by relations")
    parser.add_argument("--with-diagonal", action="store_true", help="verify: also check the diagonal isomorphism")
    return parser


def run(argv: Sequence[str] | None = None) -> tuple[str, str, int]:
    """Run one command; returns (stdout, stderr, exit code)."""
    args = build_parser().parse_args(argv)
    if args.bound is not None and args.bound < 1:
        return "", "grothcat: --bound must be positive\n", EXIT_PARSE
    try:
        p = load(args.input)
        if args.field is not None:
            p = _with_field(p, Field.parse(args.field))
    except OSError as exc:
        return "", f"grothcat: {exc}\n", EXIT_PARSE
    except InputError as exc:
        return "", f"grothcat: parse error: {exc}\n", EXIT_PARSE
    try:
        out, code, *warnings = COMMANDS[args.command](p, args)
    except CommandError as exc:
        return "", f"grothcat: {exc}\n", exc.code
    except (InfiniteDimensionError, BoundError) as exc:
        return "", f"grothcat: {exc}\n", EXIT_BOUND
    except InputError as exc:
        return "", f"grothcat: invalid input: {exc}\n", EXIT_PARSE
    except GrothcatError as exc:
        return "", f"grothcat: {exc}\n", EXIT_INVALID
    return out, "".join(f"grothcat: {w}\n" for w in warnings), code


def _with_field(p: ProblemFile, fld: Field) -> ProblemFile:
    doc = to_document(p)
    doc["field"] = str(fld)
    return parse_problem(doc)


def main(argv: Sequence[str] | None = None) -> int:
    out, err, code = run(argv)
    # the diagonal display is not ASCII; do not depend on the locale
    stream = getattr(sys.stdout, "buffer", None)
    if stream is not None:
        sys.stdout.flush()
        stream.write(out.encode("utf-8"))
        stream.flush()
    else:
        sys.stdout.write(out)
    sys.stderr.write(err)
    return code


if __name__ == "__main__":
    sys.exit(main())
