import itertools
import random
from fractions import Fraction

import pytest

from grothcat.errors import InfiniteDimensionError, InputError
from grothcat.linalg import Echelon, rank
from grothcat.path_algebra import (
    Algebra,
    LinComb,
    PathQuotient,
    algebra_mul,
    format_lincomb,
    hom_basis,
    ideal_component,
    interreduce,
    lin_mul,
    quotient_free_module,
    split_homogeneous,
)
from grothcat.quiver import Path, Quiver
from grothcat.scalars import GF, RATIONAL, Field


def square():
    return Quiver.build(["1", "2", "3", "4"], [("a", "1", "2"), ("b", "2", "4"), ("c", "1", "3"), ("d", "3", "4")])


def commutativity(q):
    return LinComb("1", "4", [(q.path(["a", "b"]), 1), (q.path(["c", "d"]), -1)])


def test_lincomb_arithmetic():
    q = square()
    ba, dc = q.path(["a", "b"]), q.path(["c", "d"])
    v = LinComb.of(ba) + LinComb.of(dc, 2)
    assert (v - v).terms == {}
    assert (3 * v).terms[dc] == 6
    assert format_lincomb(LinComb.of(ba) - LinComb.of(dc)) == "ba - dc"
    with pytest.raises(InputError):
        LinComb("1", "4", [(q.arrow_path("a"), 1)])


def test_lin_mul_composes():
    q = square()
    a, b = LinComb.of(q.arrow_path("a"), 2), LinComb.of(q.arrow_path("b"), 3)
    assert lin_mul(b, a) == LinComb.of(q.path(["a", "b"]), 6)


def test_split_homogeneous():
    q = square()
    parts = split_homogeneous([(q.arrow_path("a"), 1), (q.arrow_path("b"), 1), (q.arrow_path("a"), -1)])
    assert len(parts) == 1 and parts[0] == LinComb.of(q.arrow_path("b"))


def test_commutative_square_dims():
    q = square()
    alg = PathQuotient(q, [commutativity(q)])
    assert alg.dim("1", "4") == 1
    assert alg.dim("1", "2") == 1 and alg.dim("4", "1") == 0 and alg.dim("1", "1") == 1
    nf = alg.normal_form(LinComb.of(q.path(["a", "b"])))
    assert nf == alg.normal_form(LinComb.of(q.path(["c", "d"])))
    assert alg.is_zero(commutativity(q))


def test_zero_relation():
    q = square()
    alg = PathQuotient(q, [LinComb.of(q.path(["a", "b"]))])
    assert alg.dim("1", "4") == 1
    assert alg.is_zero(LinComb.of(q.path(["a", "b"])))


def test_truncated_loop():
    q = Quiver.build(["1"], [("x", "1", "1")])
    alg = PathQuotient(q, [LinComb.of(q.path(["x"] * 3))])
    assert alg.dim("1", "1") == 3
    assert alg.is_zero(LinComb.of(q.path(["x"] * 7)))


def test_free_loop_is_infinite():
    q = Quiver.build(["1"], [("x", "1", "1")])
    with pytest.raises(InfiniteDimensionError):
        PathQuotient(q, [], max_bound=6).dim("1", "1")
    with pytest.raises(InfiniteDimensionError):
        hom_basis(q, [], "1", "1", 4, RATIONAL)


def test_identity_killed():
    q = Quiver.build(["1", "2"], [("a", "1", "2")])
    alg = PathQuotient(q, [LinComb.of(Path("1", "1"))])
    assert alg.vanishing_identities() == ["1"]


def test_normal_form_is_idempotent_and_linear():
    rng = random.Random(3)
    q = Quiver.build(["1", "2", "3"], [("a", "1", "2"), ("b", "1", "2"), ("c", "2", "3"), ("d", "2", "3")])
    rels = [
        LinComb("1", "3", [(q.path(["a", "c"]), 1), (q.path(["b", "d"]), -2)]),
        LinComb("1", "3", [(q.path(["a", "d"]), 1)]),
    ]
    alg = PathQuotient(q, rels)
    paths = [p for p in q.paths_upto(2).get(("1", "3"), [])]
    assert alg.dim("1", "3") == 2
    for _ in range(30):
        u = LinComb("1", "3", [(p, Fraction(rng.randint(-3, 3))) for p in paths])
        v = LinComb("1", "3", [(p, Fraction(rng.randint(-3, 3))) for p in paths])
        nu = alg.normal_form(u)
        assert alg.normal_form(nu) == nu
        assert alg.normal_form(u + v) == nu + alg.normal_form(v)
    for r in rels:
        assert alg.is_zero(r)


def test_ideal_elements_span_ideal():
    q = square()
    b = hom_basis(q, [commutativity(q)], "1", "4", 3, RATIONAL)
    ideal = b.ideal_elements()
    assert len(ideal) == 1
    assert rank([dict(v.terms) for v in ideal_component(q, [commutativity(q)], "1", "4", 3)], RATIONAL) == 1
    with pytest.raises(InfiniteDimensionError):
        hom_basis(q, [commutativity(q)], "1", "4", 2, RATIONAL)


def _naive_rank(rows, ncols):
    m = [[Fraction(x) for x in r] for r in rows]
    rk = 0
    for col in range(ncols):
        piv = next((i for i in range(rk, len(m)) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[rk], m[piv] = m[piv], m[rk]
        for i in range(len(m)):
            if i != rk and m[i][col] != 0:
                f = m[i][col] / m[rk][col]
                m[i] = [x - f * y for x, y in zip(m[i], m[rk])]
        rk += 1
    return rk


def test_echelon_rank_matches_dense_elimination():
    rng = random.Random(4)
    for _ in range(80):
        n, k = rng.randint(1, 6), rng.randint(1, 6)
        rows = [[rng.choice([0, 0, 1, -1, 2]) for _ in range(k)] for _ in range(n)]
        sparse = [{j: c for j, c in enumerate(r) if c} for r in rows]
        assert rank(sparse, RATIONAL) == _naive_rank(rows, k)


def test_echelon_reduce_is_remainder():
    ech = Echelon(RATIONAL)
    ech.extend([{0: 1, 2: 1}, {1: 1, 2: 1}])
    assert ech.contains({0: 2, 2: 2})
    # pivots are the largest columns: 2, then 1 after clearing
    assert set(ech.pivots) == {2, 1}
    assert ech.reduce({2: 1}) == {0: -1}
    assert ech.reduce({1: 1}) == {0: 1}


def test_prime_field():
    f = Field.parse("fp:7")
    assert f(3) * f(5) == f(1)
    assert f(1) / f(3) == f(5)
    assert f(Fraction(1, 2)) == f(4)
    assert -f(1) == f(6)
    assert GF(10, 7) == 3
    with pytest.raises(InputError):
        Field.parse("fp:8")
    with pytest.raises(InputError):
        Field.parse("reals")


def test_quotient_over_prime_field():
    # over F_2 the relation 2ba + dc is just the zero relation dc
    q = square()
    f2 = Field(2)
    rel = LinComb("1", "4", [(q.path(["a", "b"]), f2(2)), (q.path(["c", "d"]), f2(1))])
    alg = PathQuotient(q, [rel], f2)
    assert alg.dim("1", "4") == 1
    assert alg.is_zero(LinComb.of(q.path(["c", "d"]), f2(1)))
    f3 = Field(3)
    rel3 = LinComb("1", "4", [(q.path(["a", "b"]), f3(1)), (q.path(["c", "d"]), f3(-1))])
    assert PathQuotient(q, [rel3], f3).dim("1", "4") == 1


@pytest.mark.parametrize("name", ["k", "dual_numbers", "upper_triangular_2"])
def test_algebra_presets_are_associative(name):
    alg = Algebra.preset(name)
    alg.validate()
    assert alg.dim == {"k": 1, "dual_numbers": 2, "upper_triangular_2": 3}[name]


def test_dual_number_square_is_zero():
    alg = Algebra.dual_numbers()
    t = alg.basis_vector("t")
    assert algebra_mul(alg, t, t) == alg.zero_vector()


def test_bad_algebra_rejected():
    alg = Algebra(("1", "x"), {("1", "1"): {"1": 1}, ("x", "x"): {"x": 1}}, {"1": 1})
    with pytest.raises(InputError):
        alg.validate()


def _random_partition(rng, elems):
    blocks = []
    for x in elems:
        if blocks and rng.random() < 0.5:
            rng.choice(blocks).append(x)
        else:
            blocks.append([x])
    return blocks


def test_free_quotient_kernel_rank():
    rng = random.Random(12)
    for _ in range(100):
        s = list(range(rng.randint(1, 8)))
        blocks = _random_partition(rng, s)
        e = {(x, y) for b in blocks for x in b for y in b}
        fq = quotient_free_module(s, e)
        assert fq.kernel_rank() == len(s) - len(blocks)
        v = {x: (Fraction(rng.randint(-2, 2)),) for x in s}
        assert fq.in_kernel(v) == (not fq.project_vector(v))


def test_free_quotient_rejects_non_equivalence():
    with pytest.raises(InputError):
        quotient_free_module([1, 2], {(1, 1), (2, 2), (1, 2)})
    with pytest.raises(InputError):
        quotient_free_module([1, 2], {(1, 1)})


def test_free_quotient_with_algebra():
    alg = Algebra.dual_numbers()
    fq = quotient_free_module(["p", "q"], {("p", "p"), ("q", "q"), ("p", "q"), ("q", "p")}, alg)
    t = alg.basis_vector("t")
    minus_t = tuple(-c for c in t)
    assert fq.in_kernel({"p": t, "q": minus_t})
    assert not fq.in_kernel({"p": t, "q": t})


def test_hom_basis_coordinates_round_trip():
    q = square()
    b = hom_basis(q, [commutativity(q)], "1", "4", 3, RATIONAL)
    for p in itertools.chain(q.paths_upto(2)[("1", "4")]):
        coords = b.reduce(LinComb.of(p))
        assert b.expand(coords) == b.normal_form(LinComb.of(p))


def test_stable_dims_are_not_enough():
    # the group algebra of the cyclic group of order 3 in disguise; the
    # truncated quotient has stable dimension 8 at bounds 3 and 4
    q = Quiver.build(["1"], [("x0", "1", "1"), ("x1", "1", "1")])
    w = lambda *a: q.path(list(a), "1")
    diff = lambda p, r: LinComb("1", "1", [(p, 1), (r, -1)])
    rels = [diff(w("x0", "x0", "x0"), w("x0", "x0", "x1")), diff(w(), w("x1", "x0", "x1")), diff(w("x0", "x0"), w("x1", "x1"))]
    alg = PathQuotient(q, rels)
    assert alg.dim("1", "1") == 3
    assert alg.normal_form(LinComb.of(w("x0"))) == alg.normal_form(LinComb.of(w("x1")))


def test_interreduce_drops_redundant_terms():
    q = square()
    ab = LinComb.of(q.path(["a", "b"]))
    noisy = LinComb("1", "4", [(q.path(["c", "d"]), 1), (q.path(["a", "b"]), 3)])
    assert interreduce(q, [ab, noisy], RATIONAL) == [ab, LinComb.of(q.path(["c", "d"]))]
    assert interreduce(q, [ab, ab], RATIONAL) == [ab]
