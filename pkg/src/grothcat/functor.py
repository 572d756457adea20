"""Functors X: I -> k-Cat given on the generators of a presentation of I."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping

from .congruence import FinPresCategory, MorphismClass
from .errors import InductionError
from .path_algebra import LinComb, PathQuotient, lin_mul, lin_scale
from .quiver import Path, Quiver, format_path
from .scalars import RATIONAL, Field


class FiberPresentation:
    """X(i) = kQ^(i) / <R^(i)> over one vertex i of I."""

    def __init__(
        self,
        index: str,
        quiver: Quiver,
        relations: Iterable[LinComb] = (),
        field: Field = RATIONAL,
        max_bound: int = 12,
    ):
        self.index = index
        self.quiver = quiver
        self.relations = tuple(relations)
        self.field = field
        self.max_bound = max_bound

    @cached_property
    def algebra(self) -> PathQuotient:
        return PathQuotient(self.quiver, self.relations, self.field, self.max_bound)

    @property
    def bound(self) -> int:
        return self.algebra.bound

    def hom_basis(self, x: str, y: str):
        return self.algebra.hom_basis(x, y)

    def reduce(self, v: LinComb) -> LinComb:
        return self.algebra.normal_form(v)

    def identity(self, x: str) -> LinComb:
        return LinComb.of(Path(x, x), self.field.one)

    def arrow(self, alpha: str) -> LinComb:
        return LinComb.of(self.quiver.arrow_path(alpha), self.field.one)

    def __repr__(self):
        return f"FiberPresentation({self.index!r}, {len(self.quiver.vertices)} vertices)"


@dataclass(frozen=True)
class ArrowAction:
    """X(a) on generators: a vertex map and arrow images in the target fiber."""

    object_map: Mapping[str, str]
    arrow_map: Mapping[str, LinComb]

    def apply_path(self, p: Path, target: FiberPresentation) -> LinComb:
        if p.is_trivial:
            return target.identity(self.object_map[p.tail])
        acc = None
        for a in p.arrows:
            img = self.arrow_map[a]
            acc = img if acc is None else target.reduce(lin_mul(img, acc))
        return target.reduce(acc)

    def apply(self, v: LinComb, target: FiberPresentation) -> LinComb:
        out = LinComb.zero(self.object_map[v.tail], self.object_map[v.head])
        for p, c in v.terms.items():
            out = out + lin_scale(c, self.apply_path(p, target))
        return target.reduce(out)


@dataclass(frozen=True)
class FunctorAssignment:
    index_quiver: Quiver
    fibers: Mapping[str, FiberPresentation]
    actions: Mapping[str, ArrowAction]
    field: Field = RATIONAL


@dataclass(frozen=True)
class Violation:
    kind: str
    where: str
    detail: str

    def __str__(self):
        return f"[{self.kind}] {self.where}: {self.detail}"


def induce_from_vertex_map(
    src: FiberPresentation | Quiver, dst: FiberPresentation | Quiver, vmap: Mapping[str, str]
) -> ArrowAction:
    sq = src.quiver if isinstance(src, FiberPresentation) else src
    dq = dst.quiver if isinstance(dst, FiberPresentation) else dst
    for q in (sq, dq):
        pairs = set()
        for a in q.arrows:
            if a.tail == a.head:
                raise InductionError(f"quiver has a loop {a.id!r}", (a.tail, a.head))
            if (a.tail, a.head) in pairs:
                raise InductionError(f"quiver has a double arrow {a.tail} -> {a.head}", (a.tail, a.head))
            pairs.add((a.tail, a.head))
    for x in sq.vertices:
        if vmap.get(x) not in dq.vertices:
            raise InductionError(f"vertex {x!r} is sent to {vmap.get(x)!r}, not a vertex of the target quiver", (x, vmap.get(x)))
    one = dst.field.one if isinstance(dst, FiberPresentation) else 1
    arrow_map = {}
    for a in sq.arrows:
        fx, fy = vmap[a.tail], vmap[a.head]
        if fx == fy:
            arrow_map[a.id] = LinComb.of(Path(fx, fx), one)
            continue
        targets = dq.arrows_between(fx, fy)
        if not targets:
            raise InductionError(
                f"arrow {a.id!r}: no arrow {fx} -> {fy} in the target", (a.tail, a.head)
            )
        arrow_map[a.id] = LinComb.of(dq.arrow_path(targets[0].id), one)
    return ArrowAction(dict(vmap), arrow_map)


def _action_along(x: FunctorAssignment, p: Path):
    """Composite of the generator actions along a path of I."""
    return [(a, x.fibers[x.index_quiver.arrow(a).head]) for a in p.arrows]


def act_on_object(x: FunctorAssignment, a: MorphismClass | Path, obj: str) -> str:
    p = a.rep if isinstance(a, MorphismClass) else a
    for arrow, _ in _action_along(x, p):
        obj = x.actions[arrow].object_map[obj]
    return obj


def act_on_morphism(x: FunctorAssignment, a: MorphismClass | Path, v: LinComb) -> LinComb:
    p = a.rep if isinstance(a, MorphismClass) else a
    current = x.fibers[p.tail].reduce(v)
    for arrow, target in _action_along(x, p):
        current = x.actions[arrow].apply(current, target)
    return current


def validate_functor(x: FunctorAssignment, i_cat: FinPresCategory) -> list[Violation]:
    report: list[Violation] = []
    iq = i_cat.quiver
    for i in iq.vertices:
        if i not in x.fibers:
            report.append(Violation("missing-fiber", i, "no fiber given"))
    for a in iq.arrows:
        if a.id not in x.actions:
            report.append(Violation("missing-action", a.id, "no action given"))
    if report:
        return report

    for i, fiber in x.fibers.items():
        for v in fiber.algebra.vanishing_identities():
            report.append(Violation("trivial-path-in-ideal", f"X({i})", f"e_{v} lies in the ideal"))

    for a in iq.arrows:
        act = x.actions[a.id]
        src, dst = x.fibers[a.tail], x.fibers[a.head]
        where = f"X({a.id})"
        bad_objects = False
        for v in src.quiver.vertices:
            if act.object_map.get(v) not in dst.quiver.vertices:
                report.append(Violation("endpoint", where, f"vertex {v} is not sent into X({a.head})"))
                bad_objects = True
        if bad_objects:
            continue
        bad_arrows = False
        for alpha in src.quiver.arrows:
            img = act.arrow_map.get(alpha.id)
            want = (act.object_map[alpha.tail], act.object_map[alpha.head])
            if img is None:
                report.append(Violation("endpoint", where, f"arrow {alpha.id} has no image"))
                bad_arrows = True
            elif (img.tail, img.head) != want:
                report.append(
                    Violation("endpoint", where, f"image of {alpha.id} runs {img.tail}->{img.head}, expected {want[0]}->{want[1]}")
                )
                bad_arrows = True
        if bad_arrows:
            continue
        for r in src.relations:
            image = act.apply(r, dst)
            if image:
                report.append(Violation("relation", where, f"relation {r} is sent to {image} != 0"))
    if report:
        return report

    for g, h in i_cat.relations:
        label = f"({format_path(g)}, {format_path(h)})"
        fiber = x.fibers[g.tail]
        for obj in fiber.quiver.vertices:
            og, oh = act_on_object(x, g, obj), act_on_object(x, h, obj)
            if og != oh:
                report.append(Violation("coherence", label, f"object {obj} goes to {og} along {format_path(g)} but {oh} along {format_path(h)}"))
        if any(v.kind == "coherence" and v.where == label for v in report):
            continue
        for alpha in fiber.quiver.arrows:
            vg = act_on_morphism(x, g, fiber.arrow(alpha.id))
            vh = act_on_morphism(x, h, fiber.arrow(alpha.id))
            if vg != vh:
                report.append(Violation("coherence", label, f"arrow {alpha.id} goes to {vg} along {format_path(g)} but {vh} along {format_path(h)}"))
    return report


def diagonal_assignment(index_quiver: Quiver, fiber_quiver: Quiver, relations=(), field: Field = RATIONAL) -> FunctorAssignment:
    """Delta(C): the same fiber everywhere, identity actions."""
    fibers = {i: FiberPresentation(i, fiber_quiver, relations, field) for i in index_quiver.vertices}
    identity = ArrowAction(
        {v: v for v in fiber_quiver.vertices},
        {a.id: LinComb.of(fiber_quiver.arrow_path(a.id), field.one) for a in fiber_quiver.arrows},
    )
    return FunctorAssignment(index_quiver, fibers, {a.id: identity for a in index_quiver.arrows}, field)


__all__ = [
    "ArrowAction",
    "FiberPresentation",
    "FunctorAssignment",
    "Violation",
    "act_on_morphism",
    "act_on_object",
    "diagonal_assignment",
    "induce_from_vertex_map",
    "validate_functor",
]

