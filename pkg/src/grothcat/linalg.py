"""Sparse exact row reduction over a ``Field``.

Rows are dicts column -> coefficient.  ``Echelon`` keeps a fully reduced
row echelon form whose pivot in each row is the *largest* column under
``key``, so the columns that never become pivots are the small ones: they
form the standard (normal-form) basis of the quotient.
"""
from __future__ import annotations

from collections import defaultdict
from typing import Callable, Hashable, Iterable, Mapping

from .scalars import Field

Row = dict


def _axpy(target: dict, coeff, row: Mapping) -> None:
    for col, c in row.items():
        v = target.get(col, 0) + coeff * c
        if v:
            target[col] = v
        else:
            target.pop(col, None)


class Echelon:
    def __init__(self, field: Field, key: Callable[[Hashable], object] = lambda c: c):
        self.field = field
        self.key = key
        self.rows: dict[Hashable, Row] = {}
        # column -> pivots of the rows that have a non-pivot entry there
        self._occurs: dict[Hashable, set] = defaultdict(set)

    def __len__(self):
        return len(self.rows)

    @property
    def pivots(self):
        return self.rows.keys()

    def reduce(self, row: Mapping) -> Row:
        """Remainder of ``row`` modulo the span, supported on non-pivot columns."""
        out = {}
        for col, c in row.items():
            if not c:
                continue
            c = self.field(c)
            pivot_row = self.rows.get(col)
            if pivot_row is None:
                _axpy(out, c, {col: 1})
            else:
                # pivot_row = col + (non-pivot terms); substitute col := -(rest)
                _axpy(out, -c, {k: v for k, v in pivot_row.items() if k != col})
        return out

    def add(self, row: Mapping) -> bool:
        """Insert ``row``; returns False if it was already in the span."""
        r = self.reduce(row)
        if not r:
            return False
        lead = max(r, key=self.key)
        inv = self.field.one / r[lead]
        r = {k: v * inv for k, v in r.items()}
        for pivot in self._occurs.pop(lead, ()):
            other = self.rows[pivot]
            _axpy(other, -other[lead], r)
            for col in r:
                if col in other:
                    self._occurs[col].add(pivot)
                else:
                    self._occurs[col].discard(pivot)
        for col in r:
            if col != lead:
                self._occurs[col].add(lead)
        self.rows[lead] = r
        return True

    def extend(self, rows: Iterable[Mapping]) -> None:
        for row in rows:
            self.add(row)

    def contains(self, row: Mapping) -> bool:
        return not self.reduce(row)


def rank(rows: Iterable[Mapping], field: Field) -> int:
    ech = Echelon(field, key=repr)
    for row in rows:
        ech.add(row)
    return len(ech)


def vector_rows(vectors: Iterable[Iterable]) -> list[Row]:
    return [{i: c for i, c in enumerate(v) if c} for v in vectors]
