"""Quiver presentation (Q', R') of Gr(X) and its verification.

Vertices of Q' are pairs _i x.  Arrows are the inner arrows _i alpha of each
fiber and the connecting arrows (a, _i x): _i x -> _j (ax) for every arrow
a: i -> j of I.  Relations come in three families:

  R1  fiber relations embedded by sigma_i,
  R2  pi(g, _i x) - pi(h, _i x) for each relation (g, h) of I,
  R3  (a, _i y) _i alpha - _j(a alpha) (a, _i x), with a alpha a lift of
      X(a)(alpha) to kQ^(j).
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property
from typing import Mapping, Sequence

from .congruence import FinPresCategory
from .errors import GrothcatError
from .functor import FunctorAssignment, act_on_morphism, act_on_object
from .grothendieck import (
    GrMorphism,
    GrObject,
    Report,
    gr_compose,
    gr_dim,
    gr_identity,
    gr_morphism_rank,
    gr_objects,
)
from .linalg import rank
from .path_algebra import LinComb, PathQuotient, format_lincomb, lin_mul, lin_scale
from .quiver import Arrow, Path, Quiver, export_dot, format_path
from .scalars import RATIONAL, Field


@dataclass(frozen=True)
class Inner:
    index: str
    arrow: str


@dataclass(frozen=True)
class Connecting:
    arrow: str
    index: str
    obj: str


def vertex_label(i: str, x: str) -> str:
    return f"_{i}{x}" if len(i) == 1 else f"_{{{i}}}{x}"


def inner_label(i: str, alpha: str) -> str:
    return f"_{i}{alpha}" if len(i) == 1 else f"_{{{i}}}{alpha}"


def connecting_label(a: str, i: str, x: str) -> str:
    return f"({a},{vertex_label(i, x)})"


@dataclass(frozen=True)
class GrQuiver:
    quiver: Quiver
    vertex_of: Mapping[str, GrObject]
    tag: Mapping[str, Inner | Connecting]

    @cached_property
    def vertex_id(self) -> dict[GrObject, str]:
        return {o: v for v, o in self.vertex_of.items()}

    @cached_property
    def arrow_id(self) -> dict[Inner | Connecting, str]:
        return {t: a for a, t in self.tag.items()}

    def vertex(self, i: str, x: str) -> str:
        return self.vertex_id[GrObject(i, x)]

    def inner(self, i: str, alpha: str) -> str:
        return self.arrow_id[Inner(i, alpha)]

    def connecting(self, a: str, i: str, x: str) -> str:
        return self.arrow_id[Connecting(a, i, x)]

    def is_connecting(self, arrow_id: str) -> bool:
        return isinstance(self.tag.get(arrow_id), Connecting)

    def to_dot(self) -> str:
        dashed = {a: {"style": "dashed"} for a, t in self.tag.items() if isinstance(t, Connecting)}
        return export_dot(self.quiver, edge_attrs=dashed, name="Qprime")

    def restrict(self, arrows: Sequence[str]) -> GrQuiver:
        keep = set(arrows)
        q = Quiver(self.quiver.vertices, tuple(a for a in self.quiver.arrows if a.id in keep))
        return GrQuiver(q, self.vertex_of, {a: t for a, t in self.tag.items() if a in keep})


@dataclass(frozen=True)
class GrRelation:
    family: str
    element: LinComb
    origin: str = ""

    def __str__(self):
        return format_lincomb(self.element)


@dataclass(frozen=True)
class GrRelationSet:
    relations: tuple[GrRelation, ...]

    def family(self, name: str) -> list[GrRelation]:
        return [r for r in self.relations if r.family == name]

    def elements(self) -> list[LinComb]:
        return [r.element for r in self.relations]

    def __len__(self):
        return len(self.relations)

    def __iter__(self):
        return iter(self.relations)


def build_qprime(x: FunctorAssignment) -> GrQuiver:
    iq = x.index_quiver
    vertices = []
    vertex_of = {}
    for i in iq.vertices:
        for v in x.fibers[i].quiver.vertices:
            vid = vertex_label(i, v)
            vertices.append(vid)
            vertex_of[vid] = GrObject(i, v)
    arrows = []
    tag: dict[str, Inner | Connecting] = {}
    for i in iq.vertices:
        fq = x.fibers[i].quiver
        for alpha in fq.arrows:
            aid = inner_label(i, alpha.id)
            arrows.append(Arrow(aid, vertex_label(i, alpha.tail), vertex_label(i, alpha.head)))
            tag[aid] = Inner(i, alpha.id)
    for a in iq.arrows:
        # the "ax != 0" guard is vacuous here: fiber objects are vertices
        act = x.actions[a.id]
        for v in x.fibers[a.tail].quiver.vertices:
            aid = connecting_label(a.id, a.tail, v)
            arrows.append(Arrow(aid, vertex_label(a.tail, v), vertex_label(a.head, act.object_map[v])))
            tag[aid] = Connecting(a.id, a.tail, v)
    return GrQuiver(Quiver(tuple(vertices), tuple(arrows)), vertex_of, tag)


def pi_path(gq: GrQuiver, x: FunctorAssignment, a: Path, obj: str) -> Path:
    """Chain of connecting arrows threading obj along the I-path a."""
    start = gq.vertex(a.tail, obj)
    if a.is_trivial:
        return Path(start, start)
    arrows = []
    cur = obj
    for arrow in a.arrows:
        src = x.index_quiver.arrow(arrow).tail
        arrows.append(gq.connecting(arrow, src, cur))
        cur = x.actions[arrow].object_map[cur]
    return gq.quiver.path(arrows)


def sigma_embed(gq: GrQuiver, i: str, v: LinComb) -> LinComb:
    def embed(p: Path) -> Path:
        if p.is_trivial:
            w = gq.vertex(i, p.tail)
            return Path(w, w)
        return Path(gq.vertex(i, p.tail), gq.vertex(i, p.head), tuple(gq.inner(i, a) for a in p.arrows))

    return LinComb(gq.vertex(i, v.tail), gq.vertex(i, v.head), [(embed(p), c) for p, c in v.terms.items()])


def choose_lift(x: FunctorAssignment, a: str, alpha: str) -> LinComb:
    """Normal form of X(a)(alpha) in X(j), which is its own preimage."""
    iq = x.index_quiver
    src = x.fibers[iq.arrow(a).tail]
    return act_on_morphism(x, iq.arrow_path(a), src.arrow(alpha))


Lifts = Mapping[tuple[str, str], LinComb]


def default_lifts(x: FunctorAssignment) -> dict[tuple[str, str], LinComb]:
    out = {}
    for a in x.index_quiver.arrows:
        for alpha in x.fibers[a.tail].quiver.arrows:
            out[a.id, alpha.id] = choose_lift(x, a.id, alpha.id)
    return out


def build_relations(
    x: FunctorAssignment, i_cat: FinPresCategory, gq: GrQuiver | None = None, lifts: Lifts | None = None
) -> GrRelationSet:
    gq = gq or build_qprime(x)
    lifts = {**default_lifts(x), **(lifts or {})}
    iq = x.index_quiver
    one = x.field.one
    rels: list[GrRelation] = []
    for i in iq.vertices:
        for mu in x.fibers[i].relations:
            rels.append(GrRelation("R1", sigma_embed(gq, i, mu), f"sigma_{i}({mu})"))
    for g, h in i_cat.relations:
        for v in x.fibers[g.tail].quiver.vertices:
            pg, ph = pi_path(gq, x, g, v), pi_path(gq, x, h, v)
            el = LinComb(pg.tail, pg.head, [(pg, one), (ph, -one)])
            if el:
                label = f"pi({format_path(g)},{vertex_label(g.tail, v)}) - pi({format_path(h)},{vertex_label(g.tail, v)})"
                rels.append(GrRelation("R2", el, label))
    for a in iq.arrows:
        i, j = a.tail, a.head
        for alpha in x.fibers[i].quiver.arrows:
            left = LinComb.of(gq.quiver.path([gq.inner(i, alpha.id), gq.connecting(a.id, i, alpha.head)]), one)
            lift = lifts[a.id, alpha.id]
            conn = LinComb.of(gq.quiver.arrow_path(gq.connecting(a.id, i, alpha.tail)), one)
            right = lin_mul(sigma_embed(gq, j, lift), conn)
            el = left - right
            if el:
                rels.append(GrRelation("R3", el, f"{a.id} on {alpha.id}"))
    return GrRelationSet(tuple(rels))


def phi_arrow(x: FunctorAssignment, i_cat: FinPresCategory, gq: GrQuiver, arrow_id: str) -> GrMorphism:
    t = gq.tag[arrow_id]
    arrow = gq.quiver.arrow(arrow_id)
    s, e = gq.vertex_of[arrow.tail], gq.vertex_of[arrow.head]
    if isinstance(t, Inner):
        fiber = x.fibers[t.index]
        return GrMorphism(s, e, {i_cat.identity(t.index): fiber.reduce(fiber.arrow(t.arrow))})
    a_cls = i_cat.classify(x.index_quiver.arrow_path(t.arrow))
    return GrMorphism(s, e, {a_cls: x.fibers[e.index].identity(e.fiber_object)})


class PhiEvaluator:
    """Phi on paths of Q', memoized by prefix so long paths cost one composition."""

    def __init__(self, x: FunctorAssignment, i_cat: FinPresCategory, gq: GrQuiver):
        self.x, self.i_cat, self.gq = x, i_cat, gq
        self._arrows: dict[str, GrMorphism] = {}
        self._paths: dict[Path, GrMorphism] = {}

    def path(self, p: Path) -> GrMorphism:
        m = self._paths.get(p)
        if m is None:
            if p.is_trivial:
                m = gr_identity(self.x, self.i_cat, self.gq.vertex_of[p.tail])
            else:
                last = p.arrows[-1]
                arrow = self._arrows.get(last)
                if arrow is None:
                    arrow = self._arrows[last] = phi_arrow(self.x, self.i_cat, self.gq, last)
                prefix = Path(p.tail, self.gq.quiver.arrow(last).tail, p.arrows[:-1])
                m = gr_compose(self.x, self.i_cat, arrow, self.path(prefix))
            self._paths[p] = m
        return m

    def __call__(self, v: LinComb) -> GrMorphism:
        total = GrMorphism(self.gq.vertex_of[v.tail], self.gq.vertex_of[v.head], {})
        for p, c in v.terms.items():
            total = total + self.path(p).scale(c)
        return total


def phi_eval(x: FunctorAssignment, i_cat: FinPresCategory, gq: GrQuiver, v: LinComb) -> GrMorphism:
    return PhiEvaluator(x, i_cat, gq)(v)


def presented_algebra(
    x: FunctorAssignment, i_cat: FinPresCategory, gq: GrQuiver, rels: GrRelationSet, max_extra: int = 8
) -> PathQuotient:
    """kQ'/<R'>; the search for a certified bound may go max_extra beyond the
    index bound plus the largest fiber bound."""
    fiber_bound = max((f.bound for f in x.fibers.values()), default=1)
    return PathQuotient(gq.quiver, rels.elements(), x.field, max_bound=i_cat.bound + fiber_bound + max_extra)


def presented_hom_basis(x: FunctorAssignment, i_cat: FinPresCategory, gq: GrQuiver, s: str, t: str) -> list[Path]:
    """M = { nu * pi(a, _i x) : a in I(i,j), nu in M_j(ax, y) } as paths of Q'."""
    so, to = gq.vertex_of[s], gq.vertex_of[t]
    out = []
    fiber = x.fibers[to.index]
    for a in i_cat.hom(so.index, to.index):
        ax = act_on_object(x, a, so.fiber_object)
        pi = pi_path(gq, x, a.rep, so.fiber_object)
        for nu in fiber.hom_basis(ax, to.fiber_object).basis:
            emb = sigma_embed(gq, to.index, LinComb.of(nu))
            (path,) = emb.terms
            out.append(Path(pi.tail, path.head, pi.arrows + path.arrows))
    return out


def perturbed_lifts(x: FunctorAssignment, rng: random.Random) -> tuple[dict, list]:
    """Default lifts plus random nonzero ideal elements wherever the lift
    target has a nonzero ideal component; also returns the touched keys."""
    lifts = default_lifts(x)
    touched = []
    for (a, alpha), lift in list(lifts.items()):
        j = x.index_quiver.arrow(a).head
        hb = x.fibers[j].hom_basis(lift.tail, lift.head)
        ideal = hb.ideal_elements()
        if not ideal:
            continue
        noise = LinComb.zero(lift.tail, lift.head)
        while not noise:
            for el in ideal:
                noise = noise + lin_scale(x.field(rng.randint(-2, 2)), el)
        lifts[a, alpha] = lift + noise
        touched.append((a, alpha))
    return lifts, touched


def verify_presentation(
    x: FunctorAssignment,
    i_cat: FinPresCategory,
    lifts: Lifts | None = None,
    seed: int = 0,
    claim3_samples: int = 20,
) -> Report:
    rng = random.Random(seed)
    gq = build_qprime(x)
    rels = build_relations(x, i_cat, gq, lifts)
    report = Report("presentation of Gr(X) by (Q', R')")
    phi = PhiEvaluator(x, i_cat, gq)

    # Claim 2: Phi(R') = 0
    nonzero = [r for r in rels if phi(r.element)]
    report.add(
        "Phi(R') = 0",
        not nonzero,
        f"{len(rels)} relations" if not nonzero else f"{nonzero[0].family} {nonzero[0]} maps to {phi(nonzero[0].element)}",
    )

    # Claim 1: objects and identities
    objs = gr_objects(x)
    bijective = sorted(gq.vertex_of.values()) == sorted(objs) and len(set(gq.vertex_of.values())) == len(objs)
    bad_ids = [v for v, o in gq.vertex_of.items() if phi(LinComb.of(Path(v, v), x.field.one)) != gr_identity(x, i_cat, o)]
    report.add(
        "objects _ix <-> (i,x), Phi(e) = id",
        bijective and not bad_ids,
        f"{len(objs)} objects" if bijective and not bad_ids else f"bad identities at {bad_ids}",
    )

    # Claims 4-5: M is a basis of each presented hom and Phi maps it onto a basis of Gr
    presented = presented_algebra(x, i_cat, gq, rels)
    failure = None
    broken = None
    pairs = 0
    try:
        universe = gq.quiver.paths_upto(presented.bound)
        for s in gq.quiver.vertices:
            for t in gq.quiver.vertices:
                pairs += 1
                so, to = gq.vertex_of[s], gq.vertex_of[t]
                dim_p = presented.dim(s, t)
                dim_g = gr_dim(x, i_cat, so, to)
                m = presented_hom_basis(x, i_cat, gq, s, t)
                if dim_p != dim_g:
                    failure = f"hom({s},{t}): presented dim {dim_p} != Gr dim {dim_g}"
                    break
                if len(m) != dim_g:
                    failure = f"hom({s},{t}): |M| = {len(m)} != {dim_g}"
                    break
                rows = [{n: c for n, c in enumerate(presented.coordinates(LinComb.of(p, x.field.one))) if c} for p in m]
                if rank(rows, x.field) != len(m):
                    failure = f"hom({s},{t}): M is dependent in kQ'/<R'>"
                    break
                images = [phi(LinComb.of(p, x.field.one)) for p in m]
                if gr_morphism_rank(x, i_cat, images) != dim_g:
                    failure = f"hom({s},{t}): Phi(M) does not span Gr(X)"
                    break
                # Phi must factor through the presented normal form
                for p in universe.get((s, t), ()):
                    v = LinComb.of(p, x.field.one)
                    if phi(v) != phi(presented.normal_form(v)):
                        failure = f"hom({s},{t}): Phi({format_path(p)}) differs from Phi of its normal form"
                        break
                if failure:
                    break
            if failure:
                break
    except GrothcatError as exc:  # bound failures on Q' are reported, not raised
        failure = broken = f"{type(exc).__name__}: {exc}"
    report.add(
        "Phi: (kQ'/<R'>)(s,t) -> Gr(X)(s,t) iso on bases",
        failure is None,
        failure or f"{pairs} hom pairs, bound {presented.bound}",
    )

    # Claim 3: pi(g,_ix) = pi(h,_ix) in kQ'/<R'> for (g,h) in R^#
    bad = None
    if broken is None:
        candidates = [
            (mc, p, q)
            for cs in i_cat.classes.values()
            for mc in cs
            for p in mc.members[:4]
            for q in mc.members[:4]
            if p != q
        ]
        rng.shuffle(candidates)
        for mc, p, q in candidates[:claim3_samples]:
            for v in x.fibers[p.tail].quiver.vertices:
                pp, pq = pi_path(gq, x, p, v), pi_path(gq, x, q, v)
                if presented.coordinates(LinComb.of(pp, x.field.one)) != presented.coordinates(LinComb.of(pq, x.field.one)):
                    bad = (format_path(p), format_path(q), v)
                    break
            if bad:
                break
    report.add(
        "pi(g,_ix) = pi(h,_ix) for (g,h) in R^#",
        broken is None and bad is None,
        "kQ'/<R'> not computable" if broken else (f"fails at {bad}" if bad else "sampled"),
    )

    # lift independence
    if lifts is None and broken is None:
        alt, touched = perturbed_lifts(x, rng)
        if touched:
            alt_rels = build_relations(x, i_cat, gq, alt)
            alt_alg = presented_algebra(x, i_cat, gq, alt_rels)
            try:
                diff = [
                    (s, t)
                    for s in gq.quiver.vertices
                    for t in gq.quiver.vertices
                    if alt_alg.dim(s, t) != presented.dim(s, t)
                ]
                detail = f"perturbed {len(touched)} lifts" if not diff else f"dims differ at {diff[:3]}"
            except GrothcatError as exc:
                diff, detail = True, f"perturbed presentation: {exc}"
            report.add("presented dims independent of the lifts", not diff, detail)
        else:
            report.add("presented dims independent of the lifts", True, "vacuous: every lift target has zero ideal component")
    return report


# -- arrow elimination -------------------------------------------------------

def _substitute(v: LinComb, arrow_id: str, replacement: LinComb, quiver: Quiver, one) -> LinComb:
    out = LinComb.zero(v.tail, v.head)
    for p, c in v.terms.items():
        if arrow_id not in p.arrows:
            out = out + LinComb.of(p, c)
            continue
        acc = LinComb.of(Path(p.tail, p.tail), one)
        for a in p.arrows:
            factor = replacement if a == arrow_id else LinComb.of(quiver.arrow_path(a), one)
            acc = lin_mul(factor, acc)
        out = out + lin_scale(c, acc)
    return out


def _eliminable(r: LinComb, field: Field) -> tuple[str, LinComb] | None:
    for p, c in r.terms.items():
        if len(p) != 1:
            continue
        arrow_id = p.arrows[0]
        rest = LinComb(r.tail, r.head, [(q, d) for q, d in r.terms.items() if q != p])
        if any(arrow_id in q.arrows for q in rest.terms):
            continue
        return arrow_id, lin_scale(-(field.one / field(c)), rest)
    return None


def simplify_presentation(
    gq: GrQuiver, rels: GrRelationSet, field: Field = RATIONAL
) -> tuple[GrQuiver, GrRelationSet]:
    """Delete arrows defined by relations of the form arrow = expression."""
    current = list(rels.relations)
    quiver = gq.quiver
    removed: list[str] = []
    changed = True
    while changed:
        changed = False
        for n, rel in enumerate(current):
            found = _eliminable(rel.element, field)
            if found is None:
                continue
            arrow_id, expr = found
            removed.append(arrow_id)
            rest = []
            for m, other in enumerate(current):
                if m == n:
                    continue
                el = _substitute(other.element, arrow_id, expr, quiver, field.one)
                if el:
                    rest.append(GrRelation(other.family, el, other.origin))
            current = rest
            quiver = Quiver(quiver.vertices, tuple(a for a in quiver.arrows if a.id != arrow_id))
            changed = True
            break
    keep = [a.id for a in quiver.arrows]
    return gq.restrict(keep), GrRelationSet(tuple(current))


__all__ = [
    "Connecting",
    "GrQuiver",
    "GrRelation",
    "GrRelationSet",
    "Inner",
    "build_qprime",
    "build_relations",
    "choose_lift",
    "default_lifts",
    "perturbed_lifts",
    "phi_eval",
    "pi_path",
    "presented_algebra",
    "presented_hom_basis",
    "sigma_embed",
    "simplify_presentation",
    "verify_presentation",
]
