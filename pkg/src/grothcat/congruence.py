"""Finitely presented categories <Q | R> by bounded congruence closure.

The word problem is undecidable in general, so ``saturate`` closes the
relations on the finite universe of paths of length <= B and grows B until
the partition stabilizes, every length-B path is equivalent to a strictly
shorter one, and the classes pass a closure certificate (see
``_certificate_holds``); stability alone can stop too early when a relation
makes paths longer.  Longer paths are then classified by repeatedly
replacing a length-B window with its (shorter) canonical representative.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .errors import CompositionError, FactorizationError, InputError, NonStabilizingError
from .quiver import Path, Quiver, compose_paths, format_path, path_key

DEFAULT_MAX_BOUND = 12

PairRelation = tuple[Path, Path]


class UnionFind:
    def __init__(self):
        self.parent: dict = {}

    def find(self, x):
        parent = self.parent
        parent.setdefault(x, x)
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[rb] = ra
        return True


def check_relations(q: Quiver, relations: Iterable[PairRelation]) -> list[PairRelation]:
    rels = []
    for lhs, rhs in relations:
        if (lhs.tail, lhs.head) != (rhs.tail, rhs.head):
            raise InputError(f"relation ({format_path(lhs)}, {format_path(rhs)}) is not parallel")
        for p in (lhs, rhs):
            q.path(p.arrows, p.tail)
        rels.append((lhs, rhs))
    return rels


@dataclass(frozen=True)
class MorphismClass:
    rep: Path
    members: tuple[Path, ...] = field(default=(), compare=False, hash=False)

    @property
    def tail(self) -> str:
        return self.rep.tail

    @property
    def head(self) -> str:
        return self.rep.head

    def __lt__(self, other: MorphismClass):
        return self.rep.key() < other.rep.key()

    def __str__(self):
        return format_path(self.rep)


@dataclass(frozen=True)
class FinPresCategory:
    quiver: Quiver
    relations: tuple[PairRelation, ...]
    bound: int
    classes: Mapping[tuple[str, str], tuple[MorphismClass, ...]]
    table: Mapping[tuple[MorphismClass, MorphismClass], MorphismClass]
    reps: Mapping[Path, Path]
    certified: bool = True

    # -- queries -------------------------------------------------------
    def reduce_length(self, p: Path) -> Path:
        """Equivalent path of length <= bound, via the stabilization certificate."""
        while len(p) > self.bound:
            window = p.subpath(0, self.bound, self.quiver)
            shorter = self.reps[window]
            if len(shorter) >= self.bound:
                raise NonStabilizingError(f"{format_path(window)} has no shorter equivalent at bound {self.bound}")
            p = Path(p.tail, p.head, shorter.arrows + p.arrows[self.bound:])
        return p

    def classify(self, p: Path) -> MorphismClass:
        rep = self.reps[self.reduce_length(p)]
        return self._class_of_rep[rep]

    @cached_property
    def _class_of_rep(self) -> dict[Path, MorphismClass]:
        return {c.rep: c for cs in self.classes.values() for c in cs}

    def identity(self, i: str) -> MorphismClass:
        return self.classify(Path(i, i))

    def hom(self, i: str, j: str) -> tuple[MorphismClass, ...]:
        return self.classes.get((i, j), ())

    def objects(self) -> tuple[str, ...]:
        return self.quiver.vertices

    def compose(self, g: MorphismClass, f: MorphismClass) -> MorphismClass:
        return compose_classes(self, g, f)


def _close(q: Quiver, relations: Sequence[PairRelation], bound: int):
    """Union-find of R^# restricted to paths of length <= bound."""
    paths = q.paths_upto(bound)
    from_vertex = defaultdict(list)
    into_vertex = defaultdict(list)
    for (t, h), lst in paths.items():
        from_vertex[t].extend(lst)
        into_vertex[h].extend(lst)
    uf = UnionFind()
    for lst in paths.values():
        for p in lst:
            uf.find(p)
    for lhs, rhs in relations:
        room = bound - max(len(lhs), len(rhs))
        if room < 0:
            continue
        for before in into_vertex[lhs.tail]:
            if len(before) > room:
                continue
            for after in from_vertex[lhs.head]:
                if len(before) + len(after) > room:
                    continue
                uf.union(
                    compose_paths(after, compose_paths(lhs, before)),
                    compose_paths(after, compose_paths(rhs, before)),
                )
    return uf, paths


def _partition(uf: UnionFind, paths, max_len: int) -> dict[Path, Path]:
    """Map each path of length <= max_len to the minimum of its block."""
    blocks = defaultdict(list)
    for lst in paths.values():
        for p in lst:
            if len(p) <= max_len:
                blocks[uf.find(p)].append(p)
    reps = {}
    for members in blocks.values():
        m = min(members, key=path_key)
        for p in members:
            reps[p] = m
    return reps


def _certificate_holds(q: Quiver, relations: Sequence[PairRelation], reps: Mapping[Path, Path], bound: int) -> bool:
    """Check that the bounded partition is the true quotient.

    Bounded closure only merges truly equivalent paths.  Conversely, let the
    arrows act on classes from the left, a.[m] = [a m].  If that action is
    well defined and both sides of every relation act alike, evaluating paths
    through it is a functor that factors through the true quotient and agrees
    with the partition on short paths, so no further merges exist.
    """
    arrows_from = defaultdict(list)
    for a in q.arrows:
        arrows_from[a.tail].append(q.arrow_path(a.id))

    def act(x: Path, word: Path) -> Path:
        for aid in word.arrows:
            x = reps[compose_paths(q.arrow_path(aid), x)]
        return x

    for m, rep in reps.items():
        if len(m) >= bound:
            continue
        for a in arrows_from[m.head]:
            if reps[compose_paths(a, m)] != reps[compose_paths(a, rep)]:
                return False
    classes = set(reps.values())
    for lhs, rhs in relations:
        for y in classes:
            if y.head == lhs.tail and act(y, lhs) != act(y, rhs):
                return False
    return True


def _build(q, relations, bound, uf, paths, certified) -> FinPresCategory:
    blocks = defaultdict(list)
    for lst in paths.values():
        for p in lst:
            blocks[uf.find(p)].append(p)
    classes = defaultdict(list)
    reps = {}
    for members in blocks.values():
        members.sort(key=path_key)
        mc = MorphismClass(members[0], tuple(members))
        classes[mc.tail, mc.head].append(mc)
        for p in members:
            reps[p] = mc.rep
    ordered = {}
    for i in q.vertices:
        for j in q.vertices:
            if classes.get((i, j)):
                ordered[i, j] = tuple(sorted(classes[i, j]))
    cat = FinPresCategory(q, tuple(relations), bound, ordered, {}, reps, certified)
    if not certified:
        return cat
    table = {}
    for (i, j), fs in ordered.items():
        for k in q.vertices:
            for g in ordered.get((j, k), ()):
                for f in fs:
                    table[g, f] = cat.classify(compose_paths(g.rep, f.rep))
    object.__setattr__(cat, "table", table)
    return cat


def saturate(q: Quiver, relations: Iterable[PairRelation], max_bound: int = DEFAULT_MAX_BOUND) -> FinPresCategory:
    if max_bound < 1:
        raise InputError("max_bound must be >= 1")
    relations = check_relations(q, relations)
    start = max([1] + [max(len(l), len(r)) for l, r in relations])
    previous = None
    last = None
    for bound in range(start, max_bound + 1):
        uf, paths = _close(q, relations, bound)
        last = (uf, paths, bound)
        current = _partition(uf, paths, bound)
        if previous is not None:
            shared = _partition(uf, paths, bound - 1)
            stable = shared == previous
            reducible = all(len(current[p]) < bound for p in current if len(p) == bound)
            if stable and reducible and _certificate_holds(q, relations, current, bound):
                return _build(q, relations, bound, uf, paths, True)
        previous = current
    partial = None
    if last is not None:
        uf, paths, bound = last
        partial = _build(q, relations, bound, uf, paths, False)
    raise NonStabilizingError(
        f"no stabilization up to bound {max_bound}: possibly-infinite category", partial
    )


def are_equivalent(c: FinPresCategory, p: Path, q: Path) -> bool:
    if (p.tail, p.head) != (q.tail, q.head):
        raise InputError(f"paths {format_path(p)} and {format_path(q)} are not parallel")
    return c.reps[c.reduce_length(p)] == c.reps[c.reduce_length(q)]


def hom_set(c: FinPresCategory, i: str, j: str) -> list[MorphismClass]:
    for v in (i, j):
        if not c.quiver.has_vertex(v):
            raise InputError(f"unknown vertex {v!r}")
    return list(c.hom(i, j))


def compose_classes(c: FinPresCategory, g: MorphismClass, f: MorphismClass) -> MorphismClass:
    if f.head != g.tail:
        raise CompositionError(f"cannot compose [{g}] after [{f}]")
    return c.table[g, f]


# -- finite categories given by tables ----------------------------------------

@dataclass(frozen=True)
class FiniteCategory:
    """A finite category given explicitly.

    ``morphisms`` maps a name to (source, target); ``compose`` maps
    (g, f) to the name of g o f for every composable pair.
    """

    objects: tuple[str, ...]
    morphisms: Mapping[str, tuple[str, str]]
    identities: Mapping[str, str]
    compose: Mapping[tuple[str, str], str]

    def hom(self, x: str, y: str) -> list[str]:
        return sorted(m for m, st in self.morphisms.items() if st == (x, y))

    def validate(self) -> None:
        ms = self.morphisms
        for x in self.objects:
            ident = self.identities.get(x)
            if ident is None or ms.get(ident) != (x, x):
                raise InputError(f"object {x!r} lacks a valid identity")
        for g, (gs, gt) in ms.items():
            for f, (fs, ft) in ms.items():
                if ft != gs:
                    continue
                h = self.compose.get((g, f))
                if h is None or ms.get(h) != (fs, gt):
                    raise InputError(f"composite {g} o {f} missing or ill-typed")
        for f, (fs, ft) in ms.items():
            if self.compose[self.identities[ft], f] != f or self.compose[f, self.identities[fs]] != f:
                raise InputError(f"unit law fails at {f!r}")
        for h, (hs, ht) in ms.items():
            for g, (gs, gt) in ms.items():
                if gt != hs:
                    continue
                for f, (fs, ft) in ms.items():
                    if ft != gs:
                        continue
                    if self.compose[self.compose[h, g], f] != self.compose[h, self.compose[g, f]]:
                        raise InputError(f"associativity fails at ({h}, {g}, {f})")

    def evaluate(self, arrows: Sequence[str], source: str) -> str:
        """Composite of named morphisms listed in application order."""
        result = self.identities[source]
        for a in arrows:
            result = self.compose[a, result]
        return result


def present_category(cat: FiniteCategory) -> tuple[Quiver, list[PairRelation]]:
    cat.validate()
    idents = set(cat.identities.values())
    gens = [m for m in sorted(cat.morphisms) if m not in idents]
    q = Quiver.build(cat.objects, [(m, *cat.morphisms[m]) for m in gens])
    relations = []
    for f in gens:
        for g in gens:
            if cat.morphisms[f][1] != cat.morphisms[g][0]:
                continue
            mu = q.path((f, g))
            target = cat.compose[g, f]
            rhs = Path(mu.tail, mu.tail) if target in idents else q.arrow_path(target)
            relations.append((mu, rhs))
    return q, relations


@dataclass(frozen=True)
class QuotientFunctor:
    """G': <Q | R> -> D determined on objects and on morphism classes."""

    object_map: Mapping[str, str]
    morphism_map: Mapping[MorphismClass, str]


def factor_through_quotient(
    c: FinPresCategory,
    target: FiniteCategory,
    object_map: Mapping[str, str],
    arrow_map: Mapping[str, str],
) -> QuotientFunctor:
    q = c.quiver
    for a in q.arrows:
        img = arrow_map.get(a.id)
        if img is None or target.morphisms.get(img) != (object_map[a.tail], object_map[a.head]):
            raise FactorizationError(f"arrow {a.id!r} is not sent to a morphism with matching endpoints")

    def image(p: Path) -> str:
        return target.evaluate([arrow_map[a] for a in p.arrows], object_map[p.tail])

    for lhs, rhs in c.relations:
        if image(lhs) != image(rhs):
            raise FactorizationError(
                f"relation ({format_path(lhs)}, {format_path(rhs)}) is not respected", (lhs, rhs)
            )
    mapping = {}
    for classes in c.classes.values():
        for mc in classes:
            mapping[mc] = image(mc.rep)
    return QuotientFunctor(dict(object_map), mapping)


def category_from_presentation(c: FinPresCategory) -> FiniteCategory:
    """The saturated quotient as an explicit table (class reps as names)."""
    name = {mc: format_path(mc.rep) for cs in c.classes.values() for mc in cs}
    morphisms = {name[mc]: (mc.tail, mc.head) for mc in name}
    identities = {i: name[c.identity(i)] for i in c.objects()}
    compose = {(name[g], name[f]): name[h] for (g, f), h in c.table.items()}
    return FiniteCategory(tuple(c.objects()), morphisms, identities, compose)


def iter_class_pairs(c: FinPresCategory) -> Iterable[tuple[MorphismClass, MorphismClass]]:
    for (i, j), fs in c.classes.items():
        for k in c.objects():
            for g in c.hom(j, k):
                for f in fs:
                    yield g, f


__all__ = [
    "DEFAULT_MAX_BOUND",
    "FinPresCategory",
    "FiniteCategory",
    "MorphismClass",
    "QuotientFunctor",
    "UnionFind",
    "are_equivalent",
    "category_from_presentation",
    "compose_classes",
    "factor_through_quotient",
    "hom_set",
    "iter_class_pairs",
    "present_category",
    "saturate",
]

