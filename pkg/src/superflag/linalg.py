"""Exact sparse linear algebra over Q.

Vectors are dicts mapping a hashable column key to a nonzero Fraction.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Hashable, Iterable, Mapping

Vector = dict


def clean(v: Mapping) -> dict:
    return {k: Fraction(c) for k, c in v.items() if c}


def axpy(y: dict, a, x: Mapping) -> dict:
    """Return ``y + a*x`` as a new dict."""
    out = dict(y)
    for k, c in x.items():
        s = out.get(k, 0) + a * c
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


class Echelon:
    """Incrementally maintained reduced row echelon basis.

    ``order`` fixes the column order; columns not listed sort after listed
    ones by ``repr``.  Each stored row is normalized to pivot coefficient 1
    and fully reduced against the other rows.
    """

    def __init__(self, order: Iterable[Hashable] | None = None, track: bool = False):
        self._rank = {k: i for i, k in enumerate(order or ())}
        self.rows: dict = {}  # pivot column -> row
        self.track = track
        self.origins: dict = {}  # pivot column -> combination of input ids

    def _key(self, col):
        r = self._rank.get(col)
        return (0, r, "") if r is not None else (1, 0, repr(col))

    def pivot_of(self, v: Mapping):
        return min(v, key=self._key)

    def reduce(self, v: Mapping, origin: dict | None = None):
        # stored rows vanish on each other's pivots, so one pass suffices
        v = dict(v)
        for col in [c for c in v if c in self.rows]:
            c = v.get(col)
            if c:
                v = axpy(v, -c, self.rows[col])
                if origin is not None:
                    origin = axpy(origin, -c, self.origins[col])
        return v, origin

    def add(self, v: Mapping, origin_id=None) -> bool:
        """Insert a vector; return True when it increased the rank."""
        origin = {origin_id: Fraction(1)} if self.track else None
        v, origin = self.reduce(clean(v), origin)
        if not v:
            if self.track:
                self.last_dependency = origin
            return False
        p = self.pivot_of(v)
        c = v[p]
        v = {k: x / c for k, x in v.items()}
        if origin is not None:
            origin = {k: x / c for k, x in origin.items()}
        for q, row in list(self.rows.items()):
            a = row.get(p)
            if a:
                self.rows[q] = axpy(row, -a, v)
                if self.track:
                    self.origins[q] = axpy(self.origins[q], -a, origin)
        self.rows[p] = v
        if self.track:
            self.origins[p] = origin
        return True

    @property
    def rank(self) -> int:
        return len(self.rows)

    def contains(self, v: Mapping) -> bool:
        return not self.reduce(clean(v))[0]

    def coordinates(self, v: Mapping):
        """Coefficients of ``v`` on the stored rows (by pivot), or None if not in the span."""
        rest, _ = self.reduce(clean(v))
        if rest:
            return None
        return {p: v[p] for p in self.rows if v.get(p)}

    def basis(self) -> list[dict]:
        return [self.rows[p] for p in sorted(self.rows, key=self._key)]


def rank(vectors: Iterable[Mapping]) -> int:
    e = Echelon()
    for v in vectors:
        e.add(v)
    return e.rank


def nullspace(rows: Iterable[Mapping], columns: list) -> list[dict]:
    """Basis of ``{u : row . u = 0 for every row}`` in reduced form.

    Free columns are taken in ``columns`` order, pivots preferred early, so
    the returned basis is canonical for a fixed column order.
    """
    e = Echelon(columns)
    for r in rows:
        e.add(r)
    pivots = set(e.rows)
    basis = []
    for free in columns:
        if free in pivots:
            continue
        u = {free: Fraction(1)}
        for p, row in e.rows.items():
            a = row.get(free)
            if a:
                u[p] = -a
        basis.append(u)
    return basis
