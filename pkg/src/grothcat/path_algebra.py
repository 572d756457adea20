"""Linear combinations of paths, quotients kQ/<R> and finite algebras.

Hom spaces of kQ/<R> are computed on the bounded universe of paths of
length <= B.  The ideal component at (x, y) is spanned by the products
p * r * q that fit in the bound; row reducing it with the largest path as
pivot leaves the non-pivot paths as a normal-form basis.  B is accepted once
every length-B path is a pivot (so it rewrites to shorter paths) and the
dimensions agree with those at B - 1.
"""
from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .errors import BoundError, CompositionError, InfiniteDimensionError, InputError
from .linalg import Echelon, rank
from .quiver import Path, Quiver, compose_paths, format_path, path_key
from .scalars import RATIONAL, Field, format_scalar


class LinComb:
    """Element of kQ(tail, head): a finite map path -> nonzero scalar."""

    __slots__ = ("tail", "head", "terms")

    def __init__(self, tail: str, head: str, terms: Mapping[Path, object] | Iterable = ()):
        self.tail = tail
        self.head = head
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean: dict[Path, object] = {}
        for p, c in items:
            if (p.tail, p.head) != (tail, head):
                raise InputError(f"{format_path(p)} is not a path {tail} -> {head}")
            v = clean.get(p, 0) + c
            if v:
                clean[p] = v
            else:
                clean.pop(p, None)
        self.terms = clean

    @classmethod
    def of(cls, p: Path, coeff=1) -> LinComb:
        return cls(p.tail, p.head, {p: coeff})

    @classmethod
    def zero(cls, tail: str, head: str) -> LinComb:
        return cls(tail, head)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, LinComb):
            return NotImplemented
        return (self.tail, self.head) == (other.tail, other.head) and self.terms == other.terms

    def __hash__(self):
        return hash((self.tail, self.head, frozenset(self.terms.items())))

    def __add__(self, other: LinComb) -> LinComb:
        return lin_add(self, other)

    def __neg__(self) -> LinComb:
        return lin_scale(-1, self)

    def __sub__(self, other: LinComb) -> LinComb:
        return lin_add(self, lin_scale(-1, other))

    def __mul__(self, other):
        if isinstance(other, LinComb):
            return lin_mul(self, other)
        return lin_scale(other, self)

    def __rmul__(self, c):
        return lin_scale(c, self)

    def paths(self) -> list[Path]:
        return sorted(self.terms, key=path_key)

    def max_len(self) -> int:
        return max((len(p) for p in self.terms), default=0)

    def map_coeffs(self, f) -> LinComb:
        return LinComb(self.tail, self.head, {p: f(c) for p, c in self.terms.items()})

    def __repr__(self):
        return f"LinComb({self.tail!r}, {self.head!r}, {format_lincomb(self)!r})"

    def __str__(self):
        return format_lincomb(self)


def format_lincomb(v: LinComb, render=format_path) -> str:
    if not v.terms:
        return "0"
    out = []
    for i, (p, c) in enumerate(v.terms.items()):
        neg = c != -c and _is_negative(c)
        mag = -c if neg else c
        word = render(p)
        body = word if mag == 1 else f"{format_scalar(mag)}*{word}"
        if i == 0:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)


def _is_negative(c) -> bool:
    try:
        return c < 0
    except TypeError:
        return False


def lin_add(x: LinComb, y: LinComb) -> LinComb:
    if (x.tail, x.head) != (y.tail, y.head):
        raise CompositionError("adding linear combinations with different endpoints")
    return LinComb(x.tail, x.head, itertools.chain(x.terms.items(), y.terms.items()))


def lin_scale(c, x: LinComb) -> LinComb:
    if not c:
        return LinComb(x.tail, x.head)
    return LinComb(x.tail, x.head, {p: c * v for p, v in x.terms.items()})


def lin_mul(later: LinComb, earlier: LinComb) -> LinComb:
    if later.tail != earlier.head:
        raise CompositionError(f"cannot compose {later} after {earlier}")
    terms = []
    for q, b in later.terms.items():
        for p, a in earlier.terms.items():
            terms.append((compose_paths(q, p), b * a))
    return LinComb(earlier.tail, later.head, terms)


def check_linear_relations(q: Quiver, relations: Iterable[LinComb]) -> list[LinComb]:
    rels = []
    for r in relations:
        if not r:
            raise InputError("zero relation")
        for p in r.terms:
            q.path(p.arrows, p.tail)
        rels.append(r)
    return rels


def split_homogeneous(terms: Iterable[tuple[Path, object]]) -> list[LinComb]:
    """Split a formal sum of paths into its parallel (homogeneous) parts."""
    by_pair: dict[tuple[str, str], list] = defaultdict(list)
    for p, c in terms:
        by_pair[p.tail, p.head].append((p, c))
    parts = [LinComb(t, h, items) for (t, h), items in by_pair.items()]
    return [v for v in parts if v]


def _ideal_products(q: Quiver, relations: Sequence[LinComb], bound: int, paths=None):
    """Yield p * r * q for every relation r fitting in length <= bound."""
    if paths is None:
        paths = q.paths_upto(bound)
    into = defaultdict(list)
    out = defaultdict(list)
    for (t, h), lst in paths.items():
        into[h].extend(lst)
        out[t].extend(lst)
    for lst in itertools.chain(into.values(), out.values()):
        lst.sort(key=len)
    for r in relations:
        room = bound - r.max_len()
        if room < 0:
            continue
        terms = list(r.terms.items())
        for before in into[r.tail]:
            nb = len(before.arrows)
            if nb > room:
                break
            for after in out[r.head]:
                if nb + len(after.arrows) > room:
                    break
                items = {
                    Path(before.tail, after.head, before.arrows + p.arrows + after.arrows): c for p, c in terms
                }
                yield LinComb(before.tail, after.head, items.items())


def ideal_component(q: Quiver, relations: Iterable[LinComb], x: str, y: str, bound: int) -> list[LinComb]:
    rels = check_linear_relations(q, relations)
    seen = set()
    result = []
    for v in _ideal_products(q, rels, bound):
        if (v.tail, v.head) == (x, y) and v and v not in seen:
            seen.add(v)
            result.append(v)
    return result


@dataclass
class HomBasis:
    source: str
    target: str
    bound: int
    field: Field
    paths: tuple[Path, ...]
    echelon: Echelon
    basis: tuple[Path, ...] = ()

    def __post_init__(self):
        if not self.basis:
            self.basis = tuple(p for p in self.paths if p not in self.echelon.pivots)

    @cached_property
    def _index(self) -> dict[Path, int]:
        return {p: i for i, p in enumerate(self.basis)}

    def __len__(self):
        return len(self.basis)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def certified(self) -> bool:
        return all(p in self.echelon.pivots for p in self.paths if len(p) == self.bound)

    def normal_form(self, v: LinComb) -> LinComb:
        if (v.tail, v.head) != (self.source, self.target):
            raise CompositionError(f"{v} does not live in ({self.source}, {self.target})")
        for p in v.terms:
            if len(p) > self.bound:
                raise BoundError(f"{format_path(p)} is longer than bound {self.bound}")
        red = self.echelon.reduce(v.terms)
        return LinComb(self.source, self.target, sorted(red.items(), key=lambda t: path_key(t[0])))

    def reduce(self, v: LinComb) -> tuple:
        nf = self.normal_form(v)
        coords = [self.field.zero] * len(self.basis)
        for p, c in nf.terms.items():
            coords[self._index[p]] = c
        return tuple(coords)

    def expand(self, coords: Sequence) -> LinComb:
        return LinComb(self.source, self.target, zip(self.basis, coords))

    def ideal_elements(self) -> list[LinComb]:
        return [LinComb(self.source, self.target, row) for row in self.echelon.rows.values()]


def _hom_bases_at(q: Quiver, relations: Sequence[LinComb], bound: int, field: Field, pairs=None):
    paths = q.paths_upto(bound)
    echelons: dict[tuple[str, str], Echelon] = defaultdict(lambda: Echelon(field, key=path_key))
    for v in _ideal_products(q, relations, bound, paths):
        if pairs is None or (v.tail, v.head) in pairs:
            echelons[v.tail, v.head].add(v.terms)
    wanted = pairs if pairs is not None else [(x, y) for x in q.vertices for y in q.vertices]
    return {
        (x, y): HomBasis(x, y, bound, field, tuple(paths.get((x, y), ())), echelons[x, y])
        for x, y in wanted
    }


def reduce(b: HomBasis, v: LinComb) -> tuple:
    return b.reduce(v)


def hom_basis(
    q: Quiver, relations: Iterable[LinComb], x: str, y: str, bound: int, field: Field = RATIONAL
) -> HomBasis:
    rels = check_linear_relations(q, relations)
    for v in (x, y):
        if not q.has_vertex(v):
            raise InputError(f"unknown vertex {v!r}")
    hb = _hom_bases_at(q, rels, bound, field, pairs={(x, y)})[x, y]
    if not hb.certified():
        raise InfiniteDimensionError(
            f"hom({x},{y}): some length-{bound} path does not reduce to shorter paths; "
            "possibly-infinite-dimensional"
        )
    return hb


def interreduce(q: Quiver, relations: Sequence[LinComb], field: Field, rounds: int = 3) -> list[LinComb]:
    """Replace each relation by its remainder modulo the ideal of the others,
    truncated at its own length.  The ideal is unchanged; relations whose long
    terms are consequences of shorter relations become short themselves."""
    rels = list(relations)
    for _ in range(rounds):
        changed = False
        for n, r in enumerate(rels):
            if not r:
                continue
            others = [o for m, o in enumerate(rels) if m != n and o]
            ech = Echelon(field, key=path_key)
            for v in _ideal_products(q, others, r.max_len()):
                if (v.tail, v.head) == (r.tail, r.head):
                    ech.add(v.terms)
            red = LinComb(r.tail, r.head, ech.reduce(r.terms))
            if red != r:
                rels[n] = red
                changed = True
        if not changed:
            break
    return [r for r in rels if r]


def _action_certified(q: Quiver, relations: Sequence[LinComb], bases: Mapping, field: Field) -> bool:
    """Check that the truncated quotient V is all of kQ/<R>.

    Arrows act on V by a.[b] = [a b] for basis paths b.  If this action agrees
    with normal forms (a times an ideal row reduces to zero) and every relation
    acts as zero, V is a kQ/<R>-module on which p.[e] = [p] for short p, so
    the surjection from the truncated quotient onto kQ/<R> is injective.
    """
    one = field.one
    out_of = defaultdict(list)
    for a in q.arrows:
        out_of[a.tail].append(q.arrow_path(a.id))

    def act(a: Path, v: LinComb) -> LinComb:
        return bases[v.tail, a.head].normal_form(lin_mul(LinComb.of(a, one), v))

    for (w, x), hb in bases.items():
        for pivot, row in hb.echelon.rows.items():
            if len(pivot) >= hb.bound:
                continue
            v = LinComb(w, x, row)
            for a in out_of[x]:
                if act(a, v):
                    return False
    for r in relations:
        for w in q.vertices:
            for b in bases[w, r.tail].basis:
                total = LinComb.zero(w, r.head)
                for p, c in r.terms.items():
                    v = LinComb.of(b, one)
                    for aid in p.arrows:
                        v = act(q.arrow_path(aid), v)
                    total = total + lin_scale(c, v)
                if total:
                    return False
    return True


class PathQuotient:
    """kQ/<R> with a single certified bound shared by all vertex pairs."""

    def __init__(
        self,
        quiver: Quiver,
        relations: Iterable[LinComb],
        field: Field = RATIONAL,
        max_bound: int = 12,
        start: int | None = None,
    ):
        self.quiver = quiver
        self.relations = tuple(check_linear_relations(quiver, relations))
        self.field = field
        self.max_bound = max_bound
        self.start = start

    @cached_property
    def reduced_relations(self) -> tuple[LinComb, ...]:
        """Generators of the same ideal with redundant long terms removed."""
        return tuple(interreduce(self.quiver, self.relations, self.field))

    @cached_property
    def _bases(self) -> dict[tuple[str, str], HomBasis]:
        rels = self.reduced_relations
        start = max([1] + [r.max_len() for r in rels])
        if self.start is not None:
            start = max(start, self.start)
        for bound in range(start, max(self.max_bound, start) + 1):
            bases = _hom_bases_at(self.quiver, rels, bound, self.field)
            if all(hb.certified() for hb in bases.values()) and _action_certified(self.quiver, rels, bases, self.field):
                return bases
        raise InfiniteDimensionError(
            f"no certified bound up to {self.max_bound}: possibly-infinite-dimensional"
        )

    @property
    def bound(self) -> int:
        return next(iter(self._bases.values())).bound if self._bases else 0

    def hom_basis(self, x: str, y: str) -> HomBasis:
        return self._bases[x, y]

    def dim(self, x: str, y: str) -> int:
        return self._bases[x, y].dim

    def normal_form(self, v: LinComb) -> LinComb:
        """Normal form of any homogeneous v; long paths are reduced arrow by arrow."""
        hb = self._bases[v.tail, v.head]
        if v.max_len() <= hb.bound:
            return hb.normal_form(v)
        out = LinComb.zero(v.tail, v.head)
        for p, c in v.terms.items():
            out = out + lin_scale(c, self._normal_path(p))
        return hb.normal_form(out)

    def _normal_path(self, p: Path) -> LinComb:
        if len(p) <= self.bound:
            return self._bases[p.tail, p.head].normal_form(LinComb.of(p))
        acc = LinComb.of(Path(p.tail, p.tail), self.field.one)
        for a in p.arrows:
            step = lin_mul(LinComb.of(self.quiver.arrow_path(a)), acc)
            acc = self._bases[step.tail, step.head].normal_form(step)
        return acc

    def coordinates(self, v: LinComb) -> tuple:
        nf = self.normal_form(v)
        return self._bases[v.tail, v.head].reduce(nf)

    def is_zero(self, v: LinComb) -> bool:
        return not self.normal_form(v)

    def vanishing_identities(self) -> list[str]:
        """Vertices x with e_x in the ideal."""
        return [x for x in self.quiver.vertices if self.is_zero(LinComb.of(Path(x, x)))]


# -- finite-dimensional algebras -------------------------------------------

@dataclass(frozen=True)
class Algebra:
    """A finite-dimensional algebra given by structure constants.

    ``table[i, j]`` is the product of basis elements i * j as a dict
    label -> scalar; missing entries are zero.
    """

    labels: tuple[str, ...]
    table: Mapping[tuple[str, str], Mapping[str, object]]
    unit: Mapping[str, object]
    field: Field = RATIONAL
    name: str = "A"

    @property
    def dim(self) -> int:
        return len(self.labels)

    def vector(self, coords: Mapping[str, object]) -> tuple:
        return tuple(self.field(coords.get(l, 0)) for l in self.labels)

    def unit_vector(self) -> tuple:
        return self.vector(self.unit)

    def basis_vector(self, label: str) -> tuple:
        return self.vector({label: 1})

    def zero_vector(self) -> tuple:
        return tuple(self.field.zero for _ in self.labels)

    def validate(self) -> None:
        for (i, j), prod in self.table.items():
            if i not in self.labels or j not in self.labels or any(k not in self.labels for k in prod):
                raise InputError(f"structure constant ({i}, {j}) mentions an unknown label")
        one = self.unit_vector()
        basis = [self.basis_vector(l) for l in self.labels]
        for b in basis:
            if algebra_mul(self, one, b) != b or algebra_mul(self, b, one) != b:
                raise InputError("unit law fails")
        for x, y, z in itertools.product(basis, repeat=3):
            if algebra_mul(self, algebra_mul(self, x, y), z) != algebra_mul(self, x, algebra_mul(self, y, z)):
                raise InputError("multiplication is not associative")

    @classmethod
    def ground(cls, field: Field = RATIONAL) -> Algebra:
        return cls(("1",), {("1", "1"): {"1": 1}}, {"1": 1}, field, "k")

    @classmethod
    def dual_numbers(cls, field: Field = RATIONAL) -> Algebra:
        table = {("1", "1"): {"1": 1}, ("1", "t"): {"t": 1}, ("t", "1"): {"t": 1}}
        return cls(("1", "t"), table, {"1": 1}, field, "k[t]/(t^2)")

    @classmethod
    def upper_triangular(cls, field: Field = RATIONAL) -> Algebra:
        table = {
            ("e11", "e11"): {"e11": 1},
            ("e11", "e12"): {"e12": 1},
            ("e12", "e22"): {"e12": 1},
            ("e22", "e22"): {"e22": 1},
        }
        return cls(("e11", "e12", "e22"), table, {"e11": 1, "e22": 1}, field, "T2(k)")

    @classmethod
    def preset(cls, name: str, field: Field = RATIONAL) -> Algebra:
        presets = {"k": cls.ground, "dual_numbers": cls.dual_numbers, "upper_triangular_2": cls.upper_triangular}
        try:
            return presets[name](field)
        except KeyError:
            raise InputError(f"unknown algebra preset {name!r}") from None


def algebra_mul(a: Algebra, u: Sequence, v: Sequence) -> tuple:
    n = a.dim
    if len(u) != n or len(v) != n:
        raise InputError(f"expected vectors of length {n}")
    out = [a.field.zero] * n
    pos = {l: i for i, l in enumerate(a.labels)}
    for i, li in enumerate(a.labels):
        if not u[i]:
            continue
        for j, lj in enumerate(a.labels):
            if not v[j]:
                continue
            for lk, c in a.table.get((li, lj), {}).items():
                out[pos[lk]] += u[i] * v[j] * a.field(c)
    return tuple(out)


# -- free modules modulo an equivalence ------------------------------------

@dataclass
class FreeQuotient:
    """(+)_{x in S} A x  modulo  sum_{(g,h) in E} A(g - h)."""

    elements: tuple
    classes: tuple[tuple, ...]
    differences: list[dict]
    algebra: Algebra
    _class_index: dict = field(default_factory=dict)

    def __post_init__(self):
        for n, block in enumerate(self.classes):
            for x in block:
                self._class_index[x] = n

    def project(self, x) -> int:
        """epsilon on a basis element: the index of its class."""
        return self._class_index[x]

    def project_vector(self, v: Mapping[object, Sequence]) -> dict[int, tuple]:
        out: dict[int, tuple] = {}
        for x, coeffs in v.items():
            n = self.project(x)
            cur = out.get(n, self.algebra.zero_vector())
            out[n] = tuple(a + b for a, b in zip(cur, coeffs))
        return {n: c for n, c in out.items() if any(c)}

    def kernel_rank(self) -> int:
        """k-rank of span{g - h : (g, h) in E} inside k^S."""
        return rank(self.differences, self.algebra.field)

    def in_kernel(self, v: Mapping[object, Sequence]) -> bool:
        """Whether v lies in sum A(g - h), checked coordinate-wise by row reduction."""
        ech = Echelon(self.algebra.field, key=repr)
        ech.extend(self.differences)
        for slot in range(self.algebra.dim):
            row = {x: c[slot] for x, c in v.items() if c[slot]}
            if not ech.contains(row):
                return False
        return True


def quotient_free_module(s: Iterable, e: Iterable[tuple], algebra: Algebra | None = None) -> FreeQuotient:
    elements = tuple(s)
    algebra = algebra or Algebra.ground()
    pairs = set(e)
    members = set(elements)
    for g, h in pairs:
        if g not in members or h not in members:
            raise InputError(f"pair ({g}, {h}) leaves the set")
    for x in elements:
        if (x, x) not in pairs:
            raise InputError(f"not reflexive at {x!r}")
    for g, h in pairs:
        if (h, g) not in pairs:
            raise InputError(f"not symmetric at ({g!r}, {h!r})")
    succ = defaultdict(set)
    for g, h in pairs:
        succ[g].add(h)
    for g, h in pairs:
        if not succ[h] <= succ[g]:
            raise InputError(f"not transitive through ({g!r}, {h!r})")
    seen = set()
    classes = []
    for x in elements:
        if x in seen:
            continue
        block = tuple(y for y in elements if y in succ[x])
        seen.update(block)
        classes.append(block)
    one = algebra.field.one
    differences = [{g: one, h: -one} for g, h in sorted(pairs, key=repr) if g != h]
    return FreeQuotient(elements, tuple(classes), differences, algebra)
