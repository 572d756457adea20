"""The Grothendieck construction Gr(X) as a concrete linear category, and
the diagonal case Gr(Delta(A)) ~ AQ/<R>_A.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .congruence import FinPresCategory, MorphismClass, PairRelation
from .errors import CompositionError
from .functor import FunctorAssignment, act_on_morphism, act_on_object
from .linalg import rank
from .path_algebra import Algebra, LinComb, algebra_mul, lin_mul, quotient_free_module
from .quiver import Path, Quiver, compose_paths, format_path


@dataclass(frozen=True, order=True)
class GrObject:
    index: str
    fiber_object: str

    def __str__(self):
        return f"({self.index},{self.fiber_object})"


@dataclass(frozen=True)
class GrMorphism:
    """(f_a)_{a in I(i,j)} with f_a in X(j)(ax, y), stored as fiber normal forms."""

    source: GrObject
    target: GrObject
    components: Mapping[MorphismClass, LinComb] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "components", {a: v for a, v in self.components.items() if v})

    def __bool__(self):
        return bool(self.components)

    def __add__(self, other: GrMorphism) -> GrMorphism:
        if (self.source, self.target) != (other.source, other.target):
            raise CompositionError("adding morphisms between different objects")
        comps = dict(self.components)
        for a, v in other.components.items():
            comps[a] = comps[a] + v if a in comps else v
        return GrMorphism(self.source, self.target, comps)

    def scale(self, c) -> GrMorphism:
        return GrMorphism(self.source, self.target, {a: c * v for a, v in self.components.items()})

    def __str__(self):
        if not self.components:
            return "0"
        return " + ".join(f"[{a}]:{v}" for a, v in sorted(self.components.items()))


def gr_zero(s: GrObject, t: GrObject) -> GrMorphism:
    return GrMorphism(s, t, {})


def gr_identity(x: FunctorAssignment, i_cat: FinPresCategory, s: GrObject) -> GrMorphism:
    fiber = x.fibers[s.index]
    return GrMorphism(s, s, {i_cat.identity(s.index): fiber.identity(s.fiber_object)})


def gr_hom_basis(x: FunctorAssignment, i_cat: FinPresCategory, s: GrObject, t: GrObject) -> list[GrMorphism]:
    out = []
    fiber = x.fibers[t.index]
    for a in i_cat.hom(s.index, t.index):
        ax = act_on_object(x, a, s.fiber_object)
        for p in fiber.hom_basis(ax, t.fiber_object).basis:
            out.append(GrMorphism(s, t, {a: LinComb.of(p, x.field.one)}))
    return out


def gr_dim(x: FunctorAssignment, i_cat: FinPresCategory, s: GrObject, t: GrObject) -> int:
    fiber = x.fibers[t.index]
    return sum(
        fiber.hom_basis(act_on_object(x, a, s.fiber_object), t.fiber_object).dim
        for a in i_cat.hom(s.index, t.index)
    )


def gr_coordinates(x: FunctorAssignment, i_cat: FinPresCategory, m: GrMorphism) -> tuple:
    """Coordinates of m against the ordered basis of gr_hom_basis."""
    fiber = x.fibers[m.target.index]
    coords = []
    for a in i_cat.hom(m.source.index, m.target.index):
        hb = fiber.hom_basis(act_on_object(x, a, m.source.fiber_object), m.target.fiber_object)
        v = m.components.get(a)
        coords.extend(hb.reduce(v) if v is not None else [x.field.zero] * hb.dim)
    return tuple(coords)


def gr_compose(x: FunctorAssignment, i_cat: FinPresCategory, g: GrMorphism, f: GrMorphism) -> GrMorphism:
    if f.target != g.source:
        raise CompositionError(f"cannot compose a morphism out of {g.source} after one into {f.target}")
    k = g.target.index
    fiber_k = x.fibers[k]
    sums: dict[MorphismClass, LinComb] = {}
    for a, fa in f.components.items():
        for b, gb in g.components.items():
            c = i_cat.compose(b, a)
            term = lin_mul(gb, act_on_morphism(x, b, fa))
            sums[c] = sums[c] + term if c in sums else term
    return GrMorphism(f.source, g.target, {c: fiber_k.reduce(v) for c, v in sums.items()})


def gr_objects(x: FunctorAssignment) -> list[GrObject]:
    return [GrObject(i, v) for i in x.index_quiver.vertices for v in x.fibers[i].quiver.vertices]


# -- diagonal functors ---------------------------------------------------------

@dataclass(frozen=True)
class DiagonalMorphism:
    """A morphism (i,*) -> (j,*) of Gr(Delta(A)): one A-vector per class of I(i,j)."""

    source: str
    target: str
    components: Mapping[MorphismClass, tuple]


def gr_diagonal_hom(alg: Algebra, i_cat: FinPresCategory, i: str, j: str) -> list[tuple[MorphismClass, str]]:
    return [(a, label) for a in i_cat.hom(i, j) for label in alg.labels]


def diagonal_compose(alg: Algebra, i_cat: FinPresCategory, g: DiagonalMorphism, f: DiagonalMorphism) -> DiagonalMorphism:
    if f.target != g.source:
        raise CompositionError("diagonal morphisms do not compose")
    out: dict[MorphismClass, tuple] = {}
    for a, fa in f.components.items():
        for b, gb in g.components.items():
            c = i_cat.table[b, a]
            prod = algebra_mul(alg, gb, fa)
            out[c] = tuple(u + v for u, v in zip(out[c], prod)) if c in out else prod
    return DiagonalMorphism(f.source, g.target, {c: v for c, v in out.items() if any(v)})


@dataclass(frozen=True)
class DiagonalPresentation:
    """Display uses mathematical angle brackets, the minus sign and the tensor sign."""

    quiver: Quiver
    generators: tuple[PairRelation, ...]

    def word(self, p: Path) -> str:
        compact = all(len(a.id) == 1 for a in self.quiver.arrows)
        return format_path(p, compact=compact)

    @property
    def ring(self) -> str:
        if len(self.quiver.vertices) == 1:
            return "A\u27e8" + ",".join(a.id for a in self.quiver.arrows) + "\u27e9"
        return "AQ"

    def relation_words(self) -> list[str]:
        return [f"{self.word(g)}\u2212{self.word(h)}" for g, h in self.generators]

    def text(self) -> str:
        if not self.generators:
            return f"{self.ring} (no relations)"
        return f"{self.ring}/\u27e8" + ", ".join(self.relation_words()) + "\u27e9"

    def tensor_form(self) -> str:
        ring_k = "k" + self.ring[1:]
        if not self.generators:
            return f"A \u2297_k {ring_k}"
        return f"A \u2297_k ({ring_k}/\u27e8" + ", ".join(self.relation_words()) + "\u27e9)"


def diagonal_presentation(i_quiver: Quiver, i_relations: Sequence[PairRelation]) -> DiagonalPresentation:
    return DiagonalPresentation(i_quiver, tuple(i_relations))


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name}" + (f": {self.detail}" if self.detail else "")


@dataclass
class Report:
    title: str
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, passed: bool, detail: str = "") -> Check:
        c = Check(name, passed, detail)
        self.checks.append(c)
        return c

    def text(self) -> str:
        return "\n".join([self.title] + ["  " + c.line() for c in self.checks])


def _aq_element(alg: Algebra, m: DiagonalMorphism) -> dict[Path, tuple]:
    """F(f) = sum_a f_a a, with each class written by its canonical path."""
    return {a.rep: v for a, v in m.components.items()}


def _aq_mul(alg: Algebra, u: Mapping[Path, tuple], v: Mapping[Path, tuple]) -> dict[Path, tuple]:
    out: dict[Path, tuple] = {}
    for q, b in u.items():
        for p, a in v.items():
            qp = compose_paths(q, p)
            prod = algebra_mul(alg, b, a)
            out[qp] = tuple(s + t for s, t in zip(out[qp], prod)) if qp in out else prod
    return out


def _random_diag(alg: Algebra, i_cat: FinPresCategory, i: str, j: str, rng: random.Random) -> DiagonalMorphism:
    comps = {}
    for a in i_cat.hom(i, j):
        comps[a] = tuple(alg.field(rng.randint(-3, 3)) for _ in alg.labels)
    return DiagonalMorphism(i, j, {a: v for a, v in comps.items() if any(v)})


def verify_diagonal_iso(
    alg: Algebra,
    i_cat: FinPresCategory,
    bound: int | None = None,
    pairs: int = 50,
    seed: int = 0,
) -> Report:
    """Check that F: Gr(Delta(A)) -> AQ/<R>_A, (f_a) -> sum f_a a, is an
    isomorphism on the bounded path universe.

    The AQ side multiplies canonical paths by concatenation and decides
    equality modulo sum A(g - h), (g, h) in R^#, by row reduction; the Gr
    side uses the saturated composition table.
    """
    rng = random.Random(seed)
    bound = i_cat.bound if bound is None else min(bound, i_cat.bound)
    report = Report(f"diagonal isomorphism, A = {alg.name} (dim {alg.dim})")
    objects = list(i_cat.objects())
    universe = i_cat.quiver.paths_upto(bound)

    modules = {}
    for (i, j), paths in universe.items():
        pairs_e = {(p, q) for p in paths for q in paths if i_cat.reps[p] == i_cat.reps[q]}
        modules[i, j] = quotient_free_module(paths, pairs_e, alg)

    def equal_mod_ideal(i, j, u: Mapping[Path, tuple], v: Mapping[Path, tuple]) -> bool:
        diff = {}
        for p in set(u) | set(v):
            a = u.get(p, alg.zero_vector())
            b = v.get(p, alg.zero_vector())
            diff[p] = tuple(s - t for s, t in zip(a, b))
        folded: dict[Path, tuple] = {}
        for p, c in diff.items():
            p = i_cat.reduce_length(p)
            folded[p] = tuple(s + t for s, t in zip(folded[p], c)) if p in folded else c
        diff = folded
        if (i, j) not in modules:
            return not any(any(c) for c in diff.values())
        return modules[i, j].in_kernel(diff)

    # (1) unit law: F(id_(i,*)) = 1_A e_i
    bad = []
    for i in objects:
        ident = DiagonalMorphism(i, i, {i_cat.identity(i): alg.unit_vector()})
        image = _aq_element(alg, ident)
        unit = {Path(i, i): alg.unit_vector()}
        if not equal_mod_ideal(i, i, image, unit):
            bad.append(i)
    report.add("F(id) = 1", not bad, f"fails at {bad}" if bad else f"{len(objects)} objects")

    # (2) multiplicativity on random composable pairs
    triples = [(i, j, k) for i in objects for j in objects for k in objects if i_cat.hom(i, j) and i_cat.hom(j, k)]
    witness = None
    tried = 0
    if triples:
        for _ in range(pairs):
            i, j, k = rng.choice(triples)
            f = _random_diag(alg, i_cat, i, j, rng)
            g = _random_diag(alg, i_cat, j, k, rng)
            lhs = _aq_element(alg, diagonal_compose(alg, i_cat, g, f))
            rhs = _aq_mul(alg, _aq_element(alg, g), _aq_element(alg, f))
            tried += 1
            if not equal_mod_ideal(i, k, lhs, rhs):
                witness = (i, j, k, f, g)
                break
    detail = f"{tried} random pairs" if witness is None else f"fails for objects {witness[:3]}"
    report.add("F(g o f) = F(g) F(f)", witness is None, detail)

    # (3) per-hom dimensions: dim A * |I(i,j)| against dim of AQ/<R>_A on the universe
    mismatch = []
    for i in objects:
        for j in objects:
            gr_side = len(gr_diagonal_hom(alg, i_cat, i, j))
            paths = universe.get((i, j), [])
            if (i, j) in modules:
                aq_side = alg.dim * (len(paths) - modules[i, j].kernel_rank())
            else:
                aq_side = 0
            if gr_side != aq_side:
                mismatch.append((i, j, gr_side, aq_side))
    report.add(
        "dim Gr(Delta(A))((i,*),(j,*)) = dim (AQ/<R>_A)(i,j)",
        not mismatch,
        f"mismatches {mismatch}" if mismatch else f"{len(objects) ** 2} hom pairs",
    )
    return report


def gr_morphism_rank(x: FunctorAssignment, i_cat: FinPresCategory, ms: Sequence[GrMorphism]) -> int:
    rows = [{n: c for n, c in enumerate(gr_coordinates(x, i_cat, m)) if c} for m in ms]
    return rank(rows, x.field)

