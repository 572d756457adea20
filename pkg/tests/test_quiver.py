import random

import pytest

from grothcat.errors import CompositionError, InputError
from grothcat.quiver import Path, Quiver, compose_paths, enumerate_paths, export_dot, format_path, trivial

from .randgen import random_presentation


def square():
    return Quiver.build(["1", "2", "3", "4"], [("a", "1", "2"), ("b", "2", "4"), ("c", "1", "3"), ("d", "3", "4")])


def test_path_is_application_order():
    q = square()
    p = q.path(["a", "b"])
    assert (p.tail, p.head) == ("1", "4")
    assert format_path(p) == "ba"


def test_compose_concatenates():
    q = square()
    p = compose_paths(q.arrow_path("b"), q.arrow_path("a"))
    assert p == q.path(["a", "b"])
    assert compose_paths(p, trivial("1")) == p
    assert compose_paths(trivial("4"), p) == p


def test_compose_rejects_mismatch():
    q = square()
    with pytest.raises(CompositionError):
        compose_paths(q.arrow_path("a"), q.arrow_path("b"))


def test_path_rejects_broken_chain():
    with pytest.raises(CompositionError):
        square().path(["a", "d"])


def test_unknown_vertex_in_arrow():
    with pytest.raises(InputError):
        Quiver.build(["1"], [("a", "1", "2")])


def test_duplicate_arrow_id():
    with pytest.raises(InputError):
        Quiver.build(["1", "2"], [("a", "1", "2"), ("a", "2", "1")])


def test_format_powers_and_long_ids():
    loop = Quiver.build(["1"], [("g", "1", "1")])
    assert format_path(loop.path(["g", "g", "g"])) == "g^3"
    assert format_path(trivial("1")) == "e_1"
    assert format_path(trivial("1"), identity="e") == "e"
    q = Quiver.build(["1", "2", "3"], [("alpha", "1", "2"), ("beta", "2", "3")])
    assert format_path(q.path(["alpha", "beta"])) == "beta*alpha"


def test_key_orders_by_length_first():
    q = square()
    ps = sorted([q.path(["a", "b"]), q.arrow_path("d"), trivial("3")])
    assert [len(p) for p in ps] == [0, 1, 2]


def _count_paths(q, bound):
    # walk counts from adjacency powers
    idx = {v: n for n, v in enumerate(q.vertices)}
    n = len(q.vertices)
    adj = [[0] * n for _ in range(n)]
    for a in q.arrows:
        adj[idx[a.tail]][idx[a.head]] += 1
    total = [[int(i == j) for j in range(n)] for i in range(n)]
    power = [row[:] for row in total]
    for _ in range(bound):
        power = [[sum(power[i][k] * adj[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
        total = [[total[i][j] + power[i][j] for j in range(n)] for i in range(n)]
    return {(u, v): total[idx[u]][idx[v]] for u in q.vertices for v in q.vertices}


def test_paths_upto_matches_adjacency_powers():
    rng = random.Random(11)
    for _ in range(40):
        q, _ = random_presentation(rng)
        bound = rng.randint(0, 4)
        counts = _count_paths(q, bound)
        got = q.paths_upto(bound)
        for pair, c in counts.items():
            assert len(got.get(pair, [])) == c
            assert all(len(p) <= bound for p in got.get(pair, []))
        for (s, t), ps in got.items():
            assert ps == sorted(ps)
            assert len(set(ps)) == len(ps)
            assert enumerate_paths(q, s, t, bound) == ps


def test_longest_path():
    assert square().longest_path() == 2
    assert Quiver.build(["1"], [("g", "1", "1")]).longest_path() is None
    assert Quiver.build(["1"]).longest_path() == 0


def test_subpath():
    q = square()
    p = q.path(["a", "b"])
    assert p.subpath(0, 1, q) == q.arrow_path("a")
    assert p.subpath(1, 1, q) == Path("2", "2")


def test_dot_export():
    q = Quiver.build(["1", "2"], [("a", "1", "2"), ("b", "1", "2")])
    out = export_dot(q, edge_attrs={"b": {"style": "dashed"}}, name="G")
    assert out.startswith('digraph "G" {')
    assert '"1" -> "2" [label="a"];' in out
    assert '"1" -> "2" [label="b", style="dashed"];' in out
    assert out.rstrip().endswith("}")


def test_dot_escapes_quotes():
    q = Quiver.build(['x"y'], [])
    assert '"x\\"y"' in export_dot(q)
