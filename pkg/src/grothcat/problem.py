"""JSON problem files.

A problem file is one JSON document::

    {
      "schema": "grothcat/1",
      "field": "rational" | "fp:P",
      "index":   {"vertices": [...], "arrows": [{"id", "tail", "head"}...],
                  "relations": [[path, path], ...]},
      "fibers":  {i: {"vertices", "arrows", "relations": [[[coef, path], ...], ...]}},
      "actions": {a: {"vertex_map": {...}} | {"object_map": {...}, "arrow_map": {alpha: [[coef, path], ...]}}},
      "lifts":   {a: {alpha: [[coef, path], ...]}},
      "algebra": "k" | "dual_numbers" | "upper_triangular_2" | {"basis", "table", "unit"},
      "bounds":  {"index": N, "fiber": N}
    }

Paths are lists of arrow ids written right to left (``["b", "a"]`` is b
after a); a trivial path is ``{"e": vertex}``.  Coefficients are integers
or strings such as ``"-1/2"``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Mapping

from .congruence import DEFAULT_MAX_BOUND, FinPresCategory, PairRelation, saturate
from .errors import CompositionError, InputError
from .functor import ArrowAction, FiberPresentation, FunctorAssignment, induce_from_vertex_map
from .path_algebra import Algebra, LinComb, split_homogeneous
from .quiver import Path, Quiver
from .scalars import Field

SCHEMA = "grothcat/1"
PRESETS = ("k", "dual_numbers", "upper_triangular_2")


class ParseError(InputError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        where = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(where + message)
        self.line = line
        self.column = column


@dataclass(frozen=True)
class ActionSpec:
    vertex_map: Mapping[str, str] | None = None
    object_map: Mapping[str, str] | None = None
    arrow_map: Mapping[str, LinComb] | None = None


@dataclass(frozen=True)
class FiberSpec:
    quiver: Quiver
    relations: tuple[LinComb, ...] = ()


@dataclass
class ProblemFile:
    field: Field
    index: Quiver
    index_relations: tuple[PairRelation, ...] = ()
    fibers: dict[str, FiberSpec] = field(default_factory=dict)
    actions: dict[str, ActionSpec] = field(default_factory=dict)
    lifts: dict[tuple[str, str], LinComb] = field(default_factory=dict)
    algebra: str | Algebra | None = None
    bounds: dict[str, int] = field(default_factory=dict)

    @property
    def has_functor(self) -> bool:
        return bool(self.fibers)

    def index_bound(self, override: int | None = None) -> int:
        return override or self.bounds.get("index", DEFAULT_MAX_BOUND)

    def fiber_bound(self, override: int | None = None) -> int:
        return override or self.bounds.get("fiber", DEFAULT_MAX_BOUND)

    def index_category(self, bound: int | None = None) -> FinPresCategory:
        return saturate(self.index, self.index_relations, self.index_bound(bound))

    def functor(self, bound: int | None = None) -> FunctorAssignment:
        if not self.fibers:
            raise InputError("the file has no fibers section")
        fibers = {
            i: FiberPresentation(i, spec.quiver, spec.relations, self.field, self.fiber_bound(bound))
            for i, spec in self.fibers.items()
        }
        actions = {}
        for a in self.index.arrows:
            spec = self.actions.get(a.id)
            if spec is None:
                continue
            if a.tail not in fibers or a.head not in fibers:
                continue
            if spec.vertex_map is not None:
                actions[a.id] = induce_from_vertex_map(fibers[a.tail], fibers[a.head], spec.vertex_map)
            else:
                actions[a.id] = ArrowAction(dict(spec.object_map), dict(spec.arrow_map))
        return FunctorAssignment(self.index, fibers, actions, self.field)

    def algebra_value(self) -> Algebra:
        if self.algebra is None:
            return Algebra.ground(self.field)
        if isinstance(self.algebra, str):
            return Algebra.preset(self.algebra, self.field)
        return self.algebra


# -- parsing -----------------------------------------------------------------

def _scalar(value, where: str, fld: Field):
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise InputError(f"{where}: coefficient must be an integer or a string like '1/2'")
    try:
        return fld(Fraction(value))
    except (ValueError, ZeroDivisionError):
        raise InputError(f"{where}: bad coefficient {value!r}") from None


def _require(obj: Mapping, key: str, where: str, kind=None):
    if not isinstance(obj, Mapping) or key not in obj:
        raise InputError(f"{where}: missing {key!r}")
    value = obj[key]
    if kind is not None and not isinstance(value, kind):
        raise InputError(f"{where}.{key}: expected {kind.__name__}")
    return value


def _quiver(doc: Mapping, where: str) -> Quiver:
    vertices = _require(doc, "vertices", where, list)
    arrows = doc.get("arrows", [])
    if not isinstance(arrows, list):
        raise InputError(f"{where}.arrows: expected list")
    triples = []
    for n, a in enumerate(arrows):
        w = f"{where}.arrows[{n}]"
        triples.append((str(_require(a, "id", w)), str(_require(a, "tail", w)), str(_require(a, "head", w))))
    try:
        return Quiver.build([str(v) for v in vertices], triples)
    except InputError as exc:
        raise InputError(f"{where}: {exc}") from None


def _path(q: Quiver, value, where: str) -> Path:
    if isinstance(value, Mapping):
        v = str(_require(value, "e", where))
        if not q.has_vertex(v):
            raise InputError(f"{where}: unknown vertex {v!r}")
        return Path(v, v)
    if not isinstance(value, list) or not value:
        raise InputError(f"{where}: a path is a nonempty list of arrow ids or {{'e': vertex}}")
    try:
        return q.path([str(a) for a in reversed(value)])
    except (InputError, CompositionError) as exc:
        raise InputError(f"{where}: {exc}") from None


def _terms(q: Quiver, value, where: str, fld: Field) -> list[tuple[Path, Any]]:
    if not isinstance(value, list):
        raise InputError(f"{where}: expected a list of [coefficient, path] terms")
    out = []
    for n, term in enumerate(value):
        w = f"{where}[{n}]"
        if not isinstance(term, list) or len(term) != 2:
            raise InputError(f"{w}: expected [coefficient, path]")
        out.append((_path(q, term[1], w), _scalar(term[0], w, fld)))
    return out


def _lincomb(q: Quiver, value, where: str, fld: Field, tail: str | None = None, head: str | None = None) -> LinComb:
    terms = _terms(q, value, where, fld)
    if not terms:
        if tail is None:
            raise InputError(f"{where}: empty combination")
        return LinComb.zero(tail, head)
    t, h = terms[0][0].tail, terms[0][0].head
    try:
        return LinComb(t, h, terms)
    except InputError as exc:
        raise InputError(f"{where}: {exc}") from None


def _algebra(value, fld: Field) -> str | Algebra:
    if isinstance(value, str):
        if value not in PRESETS:
            raise InputError(f"algebra: unknown preset {value!r} (expected one of {', '.join(PRESETS)})")
        return value
    basis = [str(b) for b in _require(value, "basis", "algebra", list)]
    table = {}
    for n, entry in enumerate(_require(value, "table", "algebra", list)):
        w = f"algebra.table[{n}]"
        if not isinstance(entry, list) or len(entry) != 3:
            raise InputError(f"{w}: expected [left, right, {{label: coefficient}}]")
        left, right, prod = entry
        table[str(left), str(right)] = {str(k): _scalar(c, w, fld) for k, c in prod.items()}
    unit = {str(k): _scalar(c, "algebra.unit", fld) for k, c in _require(value, "unit", "algebra", dict).items()}
    alg = Algebra(tuple(basis), table, unit, fld, str(value.get("name", "A")))
    alg.validate()
    return alg


def parse_problem(doc: Mapping) -> ProblemFile:
    if not isinstance(doc, Mapping):
        raise InputError("top level must be a JSON object")
    schema = doc.get("schema", SCHEMA)
    if schema != SCHEMA:
        raise InputError(f"unsupported schema {schema!r} (expected {SCHEMA!r})")
    fld = Field.parse(str(doc.get("field", "rational")))
    index_doc = _require(doc, "index", "document", dict)
    index = _quiver(index_doc, "index")
    relations = []
    for n, pair in enumerate(index_doc.get("relations", [])):
        w = f"index.relations[{n}]"
        if not isinstance(pair, list) or len(pair) != 2:
            raise InputError(f"{w}: expected [path, path]")
        lhs, rhs = _path(index, pair[0], w), _path(index, pair[1], w)
        if (lhs.tail, lhs.head) != (rhs.tail, rhs.head):
            raise InputError(f"{w}: the two paths are not parallel")
        relations.append((lhs, rhs))

    fibers = {}
    for i, fdoc in doc.get("fibers", {}).items():
        w = f"fibers.{i}"
        if not index.has_vertex(i):
            raise InputError(f"{w}: {i!r} is not a vertex of the index quiver")
        q = _quiver(fdoc, w)
        rels = []
        for n, r in enumerate(fdoc.get("relations", [])):
            rels.extend(split_homogeneous(_terms(q, r, f"{w}.relations[{n}]", fld)))
        fibers[i] = FiberSpec(q, tuple(rels))

    actions = {}
    for a, adoc in doc.get("actions", {}).items():
        w = f"actions.{a}"
        try:
            arrow = index.arrow(a)
        except (InputError, KeyError):
            raise InputError(f"{w}: {a!r} is not an arrow of the index quiver") from None
        if "vertex_map" in adoc:
            actions[a] = ActionSpec(vertex_map={str(k): str(v) for k, v in adoc["vertex_map"].items()})
            continue
        omap = {str(k): str(v) for k, v in _require(adoc, "object_map", w, dict).items()}
        src, dst = fibers.get(arrow.tail), fibers.get(arrow.head)
        if src is None or dst is None:
            raise InputError(f"{w}: fibers over {arrow.tail} and {arrow.head} are required")
        amap = {}
        for alpha, img in adoc.get("arrow_map", {}).items():
            try:
                src_arrow = src.quiver.arrow(alpha)
            except (InputError, KeyError):
                raise InputError(f"{w}.arrow_map: unknown arrow {alpha!r}") from None
            amap[alpha] = _lincomb(
                dst.quiver, img, f"{w}.arrow_map.{alpha}", fld,
                omap.get(src_arrow.tail), omap.get(src_arrow.head),
            )
        actions[a] = ActionSpec(object_map=omap, arrow_map=amap)

    lifts = {}
    for a, per_arrow in doc.get("lifts", {}).items():
        arrow = index.arrow(a)
        src, dst, spec = fibers.get(arrow.tail), fibers.get(arrow.head), actions.get(a)
        if src is None or dst is None or spec is None:
            raise InputError(f"lifts.{a}: needs fibers over both ends and an action")
        omap = spec.vertex_map if spec.vertex_map is not None else spec.object_map
        for alpha, img in per_arrow.items():
            src_arrow = src.quiver.arrow(alpha)
            lifts[a, alpha] = _lincomb(
                dst.quiver, img, f"lifts.{a}.{alpha}", fld,
                omap.get(src_arrow.tail), omap.get(src_arrow.head),
            )

    algebra = _algebra(doc["algebra"], fld) if doc.get("algebra") is not None else None
    bounds = {}
    for k, v in doc.get("bounds", {}).items():
        if k not in ("index", "fiber") or not isinstance(v, int) or v < 1:
            raise InputError(f"bounds.{k}: expected 'index' or 'fiber' with a positive integer")
        bounds[k] = v
    return ProblemFile(fld, index, tuple(relations), fibers, actions, lifts, algebra, bounds)


def loads(text: str) -> ProblemFile:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    return parse_problem(doc)


def load(path) -> ProblemFile:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


# -- serialization -----------------------------------------------------------

def scalar_json(c):
    f = Fraction(int(c.value)) if hasattr(c, "p") else Fraction(c)
    return f.numerator if f.denominator == 1 else str(f)


def path_json(p: Path):
    return {"e": p.tail} if p.is_trivial else list(reversed(p.arrows))


def lincomb_json(v: LinComb) -> list:
    return [[scalar_json(c), path_json(p)] for p, c in v.terms.items()]


def quiver_json(q: Quiver) -> dict:
    return {
        "vertices": list(q.vertices),
        "arrows": [{"id": a.id, "tail": a.tail, "head": a.head} for a in q.arrows],
    }


def _algebra_json(alg):
    if alg is None or isinstance(alg, str):
        return alg
    return {
        "name": alg.name,
        "basis": list(alg.labels),
        "table": [[l, r, {k: scalar_json(c) for k, c in prod.items()}] for (l, r), prod in alg.table.items()],
        "unit": {k: scalar_json(c) for k, c in alg.unit.items()},
    }


def to_document(p: ProblemFile) -> dict:
    doc: dict = {"schema": SCHEMA, "field": str(p.field)}
    doc["index"] = quiver_json(p.index)
    doc["index"]["relations"] = [[path_json(g), path_json(h)] for g, h in p.index_relations]
    if p.fibers:
        doc["fibers"] = {
            i: {**quiver_json(f.quiver), "relations": [lincomb_json(r) for r in f.relations]}
            for i, f in p.fibers.items()
        }
    if p.actions:
        actions = {}
        for a, spec in p.actions.items():
            if spec.vertex_map is not None:
                actions[a] = {"vertex_map": dict(spec.vertex_map)}
            else:
                actions[a] = {
                    "object_map": dict(spec.object_map),
                    "arrow_map": {alpha: lincomb_json(v) for alpha, v in spec.arrow_map.items()},
                }
        doc["actions"] = actions
    if p.lifts:
        lifts: dict = {}
        for (a, alpha), v in p.lifts.items():
            lifts.setdefault(a, {})[alpha] = lincomb_json(v)
        doc["lifts"] = lifts
    if p.algebra is not None:
        doc["algebra"] = _algebra_json(p.algebra)
    if p.bounds:
        doc["bounds"] = dict(p.bounds)
    return doc


def dumps(p: ProblemFile) -> str:
    return json.dumps(to_document(p), indent=2) + "\n"
