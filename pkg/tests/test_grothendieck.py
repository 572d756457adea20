import dataclasses
import random

import pytest

from grothcat.congruence import saturate
from grothcat.errors import CompositionError
from grothcat.functor import FiberPresentation, FunctorAssignment, diagonal_assignment, induce_from_vertex_map
from grothcat.grothendieck import (
    GrMorphism,
    GrObject,
    diagonal_presentation,
    gr_compose,
    gr_coordinates,
    gr_dim,
    gr_hom_basis,
    gr_identity,
    gr_objects,
    verify_diagonal_iso,
)
from grothcat.path_algebra import Algebra
from grothcat.quiver import Quiver

from .randgen import random_functors


def semigroup():
    iq = Quiver.build(["1"], [("g", "1", "1")])
    g = lambda n: iq.path(["g"] * n, "1")
    fiber = FiberPresentation("1", Quiver.build(["1", "2", "3"], [("alpha", "1", "2"), ("beta", "2", "3")]))
    x = FunctorAssignment(iq, {"1": fiber}, {"g": induce_from_vertex_map(fiber, fiber, {"1": "2", "2": "3", "3": "3"})})
    return x, saturate(iq, [(g(2), g(3))])


def ex41_index():
    q = Quiver.build(
        ["1", "2", "3", "4", "5"],
        [("a", "1", "2"), ("b", "2", "5"), ("c", "1", "3"), ("d", "3", "5"), ("e", "1", "4"), ("f", "4", "5")],
    )
    return q, [(q.path(["a", "b"]), q.path(["c", "d"]))]


def test_semigroup_hom_dims():
    x, c = semigroup()
    o = lambda v: GrObject("1", v)
    # classes e, g, g^2 send 1 to 1, 2, 3; X(1)(1,3), X(1)(2,3), X(1)(3,3) are 1-dimensional
    assert gr_dim(x, c, o("1"), o("3")) == 3
    assert gr_dim(x, c, o("3"), o("1")) == 0
    assert gr_dim(x, c, o("1"), o("1")) == 1
    assert gr_dim(x, c, o("3"), o("3")) == 3
    assert len(gr_hom_basis(x, c, o("1"), o("3"))) == 3


def test_compose_checks_endpoints():
    x, c = semigroup()
    o = lambda v: GrObject("1", v)
    with pytest.raises(CompositionError):
        gr_compose(x, c, gr_identity(x, c, o("1")), gr_identity(x, c, o("2")))


def _random_morphism(rng, x, c, s, t):
    m = GrMorphism(s, t, {})
    for b in gr_hom_basis(x, c, s, t):
        m = m + b.scale(x.field(rng.randint(-2, 2)))
    return m


def test_category_axioms_on_random_instances():
    rng = random.Random(31)
    for x, c in random_functors(3, 40):
        objs = gr_objects(x)
        for _ in range(8):
            s, t, u, v = (rng.choice(objs) for _ in range(4))
            f = _random_morphism(rng, x, c, s, t)
            g = _random_morphism(rng, x, c, t, u)
            h = _random_morphism(rng, x, c, u, v)
            assert gr_compose(x, c, gr_identity(x, c, t), f) == f
            assert gr_compose(x, c, f, gr_identity(x, c, s)) == f
            assert gr_compose(x, c, h, gr_compose(x, c, g, f)) == gr_compose(x, c, gr_compose(x, c, h, g), f)
            # bilinearity in the first slot
            f2 = _random_morphism(rng, x, c, s, t)
            assert gr_compose(x, c, g, f + f2) == gr_compose(x, c, g, f) + gr_compose(x, c, g, f2)


def test_coordinates_match_basis():
    x, c = semigroup()
    s, t = GrObject("1", "1"), GrObject("1", "3")
    basis = gr_hom_basis(x, c, s, t)
    for n, b in enumerate(basis):
        coords = gr_coordinates(x, c, b)
        assert coords == tuple(1 if k == n else 0 for k in range(len(basis)))


def test_diagonal_dims_equal_hom_counts():
    q, rels = ex41_index()
    c = saturate(q, rels)
    x = diagonal_assignment(q, Quiver.build(["*"]))
    for i in q.vertices:
        for j in q.vertices:
            assert gr_dim(x, c, GrObject(i, "*"), GrObject(j, "*")) == len(c.hom(i, j))


@pytest.mark.parametrize("alg", ["k", "dual_numbers", "upper_triangular_2"])
def test_diagonal_iso_examples(alg):
    a = Algebra.preset(alg)
    q, rels = ex41_index()
    assert verify_diagonal_iso(a, saturate(q, rels)).passed
    x, c = semigroup()
    assert verify_diagonal_iso(a, c).passed


def test_diagonal_iso_detects_corrupted_table():
    q, rels = ex41_index()
    c = saturate(q, rels)
    table = dict(c.table)
    a = c.classify(q.arrow_path("a"))
    b = c.classify(q.arrow_path("b"))
    fe = c.classify(q.path(["e", "f"]))
    table[b, a] = fe
    broken = dataclasses.replace(c, table=table)
    report = verify_diagonal_iso(Algebra.dual_numbers(), broken, pairs=200)
    assert not report.passed
    assert not report.checks[1].passed


def test_diagonal_presentation_text():
    q, rels = ex41_index()
    d = diagonal_presentation(q, rels)
    assert d.text() == "AQ/⟨ba−dc⟩"
    assert d.tensor_form() == "A ⊗_k (kQ/⟨ba−dc⟩)"
    assert diagonal_presentation(q, []).text() == "AQ (no relations)"
    x, c = semigroup()
    assert diagonal_presentation(c.quiver, c.relations).text() == "A⟨g⟩/⟨g^2−g^3⟩"
