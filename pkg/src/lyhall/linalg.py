"""Exact sparse row reduction over the rationals.

Rows are dicts ``column -> Fraction`` with no zero entries.  Columns may be
any hashable, totally ordered keys; the package uses terms.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Hashable, Iterable, Mapping

Row = dict


def axpy(target: dict, scale: Fraction, source: Mapping) -> None:
    """target += scale * source, dropping entries that cancel."""
    for col, c in source.items():
        v = target.get(col, 0) + scale * c
        if v:
            target[col] = v
        else:
            del target[col]


class Echelon:
    """Incrementally maintained reduced row echelon form.

    Each pivot row has coefficient 1 at its pivot column, and no pivot
    column appears in any other pivot row.  Reducing a vector is therefore a
    single pass over its pivot columns.

    The pivot of a new row is the column appearing in the fewest stored rows
    (ties broken by ``order``, largest first), which keeps back-substitution
    cheap.
    """

    def __init__(self, order: Callable[[Hashable], object] | None = None):
        self.pivots: dict[Hashable, dict] = {}
        self._cols: dict[Hashable, set] = {}
        self._order = order if order is not None else (lambda c: c)

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def __len__(self) -> int:
        return len(self.pivots)

    def reduce(self, row: Mapping) -> dict:
        out = {c: Fraction(v) for c, v in row.items() if v}
        for col in [c for c in out if c in self.pivots]:
            v = out.get(col)
            if v:
                axpy(out, -v, self.pivots[col])
        return out

    def contains(self, row: Mapping) -> bool:
        return not self.reduce(row)

    def add(self, row: Mapping) -> bool:
        """Insert a row; returns True iff it was independent of those stored."""
        r = self.reduce(row)
        if not r:
            return False
        cols = self._cols
        order = self._order
        piv = min(r, key=lambda c: (len(cols.get(c, ())), _Neg(order(c))))
        inv = 1 / r[piv]
        if inv != 1:
            for c in r:
                r[c] *= inv
        for other in list(cols.get(piv, ())):
            prow = self.pivots[other]
            before = set(prow)
            axpy(prow, -prow[piv], r)
            after = set(prow)
            for c in before - after:
                cols[c].discard(other)
            for c in after - before:
                cols.setdefault(c, set()).add(other)
        cols.pop(piv, None)
        self.pivots[piv] = r
        for c in r:
            if c != piv:
                cols.setdefault(c, set()).add(piv)
        return True

    def extend(self, rows: Iterable[Mapping]) -> int:
        return sum(self.add(r) for r in rows)


class _Neg:
    __slots__ = ("v",)

    def __init__(self, v):
        self.v = v

    def __lt__(self, other: _Neg) -> bool:
        return other.v < self.v

    def __eq__(self, other: object) -> bool:
        return isinstance(other, _Neg) and other.v == self.v


def rank(rows: Iterable[Mapping]) -> int:
    e = Echelon()
    e.extend(rows)
    return e.rank
