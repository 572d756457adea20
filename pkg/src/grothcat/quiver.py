"""Quivers, paths and DOT export.

Paths are stored in application order (``arrows[0]`` is applied first) but
written right to left, so ``compose_paths(b, a)`` is the path ``ba``.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping

from .errors import CompositionError, InputError


@dataclass(frozen=True)
class Arrow:
    id: str
    tail: str
    head: str


@dataclass(frozen=True)
class Path:
    tail: str
    head: str
    arrows: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.arrows and self.tail != self.head:
            raise InputError(f"trivial path needs tail == head, got {self.tail}, {self.head}")
        object.__setattr__(self, "_hash", hash((self.tail, self.head, self.arrows)))

    def __hash__(self):
        return self._hash

    def __len__(self):
        return len(self.arrows)

    @property
    def is_trivial(self) -> bool:
        return not self.arrows

    def key(self):
        return (len(self.arrows), self.arrows, self.tail)

    def __lt__(self, other: Path):
        return self.key() < other.key()

    def subpath(self, start: int, stop: int, quiver: Quiver) -> Path:
        """Arrows ``start:stop`` (application order) as a path of ``quiver``."""
        arrows = self.arrows[start:stop]
        if not arrows:
            v = self.tail if start == 0 else quiver.arrow(self.arrows[start - 1]).head
            return Path(v, v)
        return Path(quiver.arrow(arrows[0]).tail, quiver.arrow(arrows[-1]).head, arrows)

    def __str__(self):
        return format_path(self)


def trivial(vertex: str) -> Path:
    return Path(vertex, vertex)


def path_key(p: Path):
    return p.key()


@dataclass(frozen=True)
class Quiver:
    vertices: tuple[str, ...]
    arrows: tuple[Arrow, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "arrows", tuple(self.arrows))
        if len(set(self.vertices)) != len(self.vertices):
            raise InputError("duplicate vertex ids")
        vs = set(self.vertices)
        seen = set()
        for a in self.arrows:
            if a.id in seen:
                raise InputError(f"duplicate arrow id {a.id!r}")
            seen.add(a.id)
            if a.tail not in vs or a.head not in vs:
                raise InputError(f"arrow {a.id!r} has an undeclared endpoint")

    @classmethod
    def build(cls, vertices: Iterable[str], arrows: Iterable[tuple[str, str, str]] = ()) -> Quiver:
        return cls(tuple(vertices), tuple(Arrow(*a) for a in arrows))

    @cached_property
    def _by_id(self) -> dict[str, Arrow]:
        return {a.id: a for a in self.arrows}

    @cached_property
    def _out(self) -> dict[str, list[Arrow]]:
        out = defaultdict(list)
        for a in sorted(self.arrows, key=lambda a: a.id):
            out[a.tail].append(a)
        return out

    def has_vertex(self, v: str) -> bool:
        return v in self._vertex_set

    @cached_property
    def _vertex_set(self) -> frozenset[str]:
        return frozenset(self.vertices)

    def arrow(self, arrow_id: str) -> Arrow:
        try:
            return self._by_id[arrow_id]
        except KeyError:
            raise InputError(f"unknown arrow {arrow_id!r}") from None

    def outgoing(self, v: str) -> list[Arrow]:
        return self._out.get(v, [])

    def arrows_between(self, x: str, y: str) -> list[Arrow]:
        return [a for a in self.outgoing(x) if a.head == y]

    def path(self, arrows: Iterable[str], vertex: str | None = None) -> Path:
        """Path from arrow ids in application order; ``vertex`` for the trivial path."""
        arrows = tuple(arrows)
        if not arrows:
            if vertex is None or not self.has_vertex(vertex):
                raise InputError(f"trivial path needs a declared vertex, got {vertex!r}")
            return Path(vertex, vertex)
        objs = [self.arrow(a) for a in arrows]
        for first, second in zip(objs, objs[1:]):
            if first.head != second.tail:
                raise CompositionError(f"arrows {first.id!r} and {second.id!r} do not compose")
        return Path(objs[0].tail, objs[-1].head, arrows)

    def arrow_path(self, arrow_id: str) -> Path:
        a = self.arrow(arrow_id)
        return Path(a.tail, a.head, (a.id,))

    def paths_upto(self, max_len: int) -> dict[tuple[str, str], list[Path]]:
        """All paths of length <= max_len, grouped by (tail, head), each list sorted."""
        out: dict[tuple[str, str], list[Path]] = defaultdict(list)
        frontier = [Path(v, v) for v in self.vertices]
        for p in frontier:
            out[p.tail, p.head].append(p)
        for _ in range(max_len):
            nxt = []
            for p in frontier:
                for a in self.outgoing(p.head):
                    q = Path(p.tail, a.head, p.arrows + (a.id,))
                    nxt.append(q)
                    out[q.tail, q.head].append(q)
            frontier = nxt
            if not frontier:
                break
        for lst in out.values():
            lst.sort(key=path_key)
        return out

    def longest_path(self) -> int | None:
        """Length of the longest path, or None when the quiver has a cycle."""
        indeg = {v: 0 for v in self.vertices}
        for a in self.arrows:
            indeg[a.head] += 1
        depth = {v: 0 for v in self.vertices}
        ready = [v for v in self.vertices if indeg[v] == 0]
        done = 0
        while ready:
            v = ready.pop()
            done += 1
            for a in self.outgoing(v):
                depth[a.head] = max(depth[a.head], depth[v] + 1)
                indeg[a.head] -= 1
                if indeg[a.head] == 0:
                    ready.append(a.head)
        if done < len(self.vertices):
            return None
        return max(depth.values(), default=0)


def compose_paths(later: Path, earlier: Path) -> Path:
    if later.tail != earlier.head:
        raise CompositionError(f"cannot compose {format_path(later)} after {format_path(earlier)}")
    return Path(earlier.tail, later.head, earlier.arrows + later.arrows)


def enumerate_paths(q: Quiver, source: str, target: str, max_len: int) -> list[Path]:
    if max_len < 0:
        raise InputError("max_len must be nonnegative")
    for v in (source, target):
        if not q.has_vertex(v):
            raise InputError(f"unknown vertex {v!r}")
    return list(q.paths_upto(max_len).get((source, target), []))


def format_path(p: Path, compact: bool | None = None, identity: str | None = None) -> str:
    """Right-to-left rendering: ``ba``, ``g^2``, ``(g,_12)*(g,_11)``, ``e_1``.

    Single-character arrow ids are juxtaposed with powers compressed; longer
    ids are joined with ``*``.
    """
    if not p.arrows:
        return identity if identity is not None else f"e_{p.tail}"
    written = list(reversed(p.arrows))
    if compact is None:
        compact = all(len(a) == 1 for a in written)
    if not compact:
        return "*".join(written)
    parts = []
    i = 0
    while i < len(written):
        j = i
        while j < len(written) and written[j] == written[i]:
            j += 1
        run = j - i
        parts.append(written[i] if run == 1 else f"{written[i]}^{run}")
        i = j
    return "".join(parts)


def _dot_quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(
    q: Quiver,
    labels: Mapping[str, str] | None = None,
    edge_attrs: Mapping[str, Mapping[str, str]] | None = None,
    name: str = "Q",
) -> str:
    """Render ``q`` as a Graphviz digraph.

    ``labels`` maps vertex or arrow ids to display labels; ``edge_attrs``
    adds extra attributes per arrow id (e.g. ``{"style": "dashed"}``).
    """
    labels = labels or {}
    edge_attrs = edge_attrs or {}
    lines = [f"digraph {_dot_quote(name)} {{"]
    for v in q.vertices:
        lines.append(f"  {_dot_quote(v)} [label={_dot_quote(labels.get(v, v))}];")
    for a in q.arrows:
        attrs = {"label": labels.get(a.id, a.id)}
        attrs.update(edge_attrs.get(a.id, {}))
        rendered = ", ".join(f"{k}={_dot_quote(v)}" for k, v in attrs.items())
        lines.append(f"  {_dot_quote(a.tail)} -> {_dot_quote(a.head)} [{rendered}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
