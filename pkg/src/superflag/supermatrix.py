"""Supermatrices with entries in a localized supercommutative ring."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .superpoly import RationalSuperFunction, SuperPolynomial, VarTable, VarTableMismatch

__all__ = ["SuperMatrix", "SingularMatrix", "mat_mul", "mat_rows", "mat_cols", "mat_inverse"]


class SingularMatrix(ArithmeticError):
    pass


def _as_rf(table, v) -> RationalSuperFunction:
    if isinstance(v, RationalSuperFunction):
        return v
    if isinstance(v, SuperPolynomial):
        return RationalSuperFunction.from_poly(v)
    return RationalSuperFunction.const(table, Fraction(v))


class SuperMatrix:
    """A matrix whose rows and columns carry parities.

    The entry in row ``i`` and column ``j`` of an even supermatrix has parity
    ``row_par[i] + col_par[j]`` mod 2.
    """

    __slots__ = ("table", "entries", "row_par", "col_par")

    def __init__(self, table: VarTable, entries, row_par: Sequence[int], col_par: Sequence[int]):
        self.table = table
        self.row_par = tuple(row_par)
        self.col_par = tuple(col_par)
        rows = [[_as_rf(table, v) for v in row] for row in entries]
        if len(rows) != len(self.row_par) or any(len(r) != len(self.col_par) for r in rows):
            raise ValueError("entry shape does not match parity labels")
        for r in rows:
            for v in r:
                if v.table != table:
                    raise VarTableMismatch("entry over a different variable table")
        self.entries = rows

    @classmethod
    def identity(cls, table, parities) -> "SuperMatrix":
        n = len(parities)
        return cls(table, [[1 if i == j else 0 for j in range(n)] for i in range(n)], parities, parities)

    @property
    def shape(self):
        return len(self.row_par), len(self.col_par)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __eq__(self, other):
        if not isinstance(other, SuperMatrix):
            return NotImplemented
        return (self.row_par == other.row_par and self.col_par == other.col_par
                and all(a == b for ra, rb in zip(self.entries, other.entries) for a, b in zip(ra, rb)))

    def __matmul__(self, other):
        return mat_mul(self, other)

    def __add__(self, other):
        if self.row_par != other.row_par or self.col_par != other.col_par:
            raise ValueError("shape mismatch")
        return SuperMatrix(self.table, [[a + b for a, b in zip(ra, rb)]
                                        for ra, rb in zip(self.entries, other.entries)],
                           self.row_par, self.col_par)

    def __neg__(self):
        return SuperMatrix(self.table, [[-a for a in r] for r in self.entries], self.row_par, self.col_par)

    def __sub__(self, other):
        return self + (-other)

    def is_even(self) -> bool:
        for i, rp in enumerate(self.row_par):
            for j, cp in enumerate(self.col_par):
                v = self.entries[i][j]
                if v and v.parity() != (rp + cp) % 2:
                    return False
        return True

    def map(self, fn) -> "SuperMatrix":
        return SuperMatrix(self.table, [[fn(v) for v in r] for r in self.entries], self.row_par, self.col_par)

    def body(self) -> "SuperMatrix":
        return self.map(lambda v: v.body())

    def block(self, rp: int, cp: int) -> "SuperMatrix":
        rows = [i for i, p in enumerate(self.row_par) if p == rp]
        cols = [j for j, p in enumerate(self.col_par) if p == cp]
        return mat_cols(mat_rows(self, rows), cols)

    def __repr__(self):
        return f"SuperMatrix({self.shape[0]}x{self.shape[1]})"

    def pretty(self, names=None) -> str:
        cells = [[v.to_str(names) for v in r] for r in self.entries]
        if not cells:
            return "[]"
        width = [max((len(cells[i][j]) for i in range(len(cells))), default=1)
                 for j in range(len(self.col_par))]
        lines = []
        prev_rp = self.row_par[0] if self.row_par else 0
        for i, row in enumerate(cells):
            rp = self.row_par[i]
            if rp != prev_rp:
                lines.append("-" * (sum(width) + 3 * len(width) + 2))
                prev_rp = rp
            parts = []
            for j, s in enumerate(row):
                if j and self.col_par[j] != self.col_par[j - 1]:
                    parts.append("|")
                parts.append(s.rjust(width[j]))
            lines.append("[ " + "  ".join(parts) + " ]")
        return "\n".join(lines)

    __str__ = pretty

    def to_json(self):
        return {"row_parity": list(self.row_par), "col_parity": list(self.col_par),
                "entries": [[v.to_json() for v in r] for r in self.entries]}


def mat_mul(a: SuperMatrix, b: SuperMatrix) -> SuperMatrix:
    if a.col_par != b.row_par:
        raise ValueError(f"cannot multiply: column parities {a.col_par} vs row parities {b.row_par}")
    if a.table != b.table:
        raise VarTableMismatch("matrices over different tables")
    n, k = a.shape
    m = b.shape[1]
    zero = RationalSuperFunction.zero(a.table)
    out = []
    for i in range(n):
        row = []
        ai = a.entries[i]
        for j in range(m):
            acc = zero
            for t in range(k):
                x = ai[t]
                if x:
                    y = b.entries[t][j]
                    if y:
                        acc = acc + x * y
            row.append(acc)
        out.append(row)
    return SuperMatrix(a.table, out, a.row_par, b.col_par)


def mat_rows(a: SuperMatrix, even_rows: Sequence[int], odd_rows: Sequence[int] | None = None) -> SuperMatrix:
    """Select rows.

    With one index list the indices are raw 0-based row positions.  With two,
    they are 0-based positions inside the even and the odd row groups.
    """
    if odd_rows is None:
        idx = list(even_rows)
    else:
        evens = [i for i, p in enumerate(a.row_par) if p == 0]
        odds = [i for i, p in enumerate(a.row_par) if p == 1]
        try:
            idx = [evens[i] for i in even_rows] + [odds[i] for i in odd_rows]
        except IndexError:
            raise IndexError("row index out of range") from None
    if any(i < 0 or i >= len(a.row_par) for i in idx):
        raise IndexError("row index out of range")
    return SuperMatrix(a.table, [a.entries[i] for i in idx], [a.row_par[i] for i in idx], a.col_par)


def mat_cols(a: SuperMatrix, idx: Sequence[int]) -> SuperMatrix:
    idx = list(idx)
    return SuperMatrix(a.table, [[r[j] for j in idx] for r in a.entries], a.row_par,
                       [a.col_par[j] for j in idx])


def _even_inverse(rows: list[list[RationalSuperFunction]], table) -> list[list[RationalSuperFunction]]:
    """Gauss-Jordan over the commutative ring of even entries.

    An even element is a unit of the localized ring iff its body is nonzero.
    """
    n = len(rows)
    work = [list(r) + [RationalSuperFunction.const(table, 1 if i == j else 0) for j in range(n)]
            for i, r in enumerate(rows)]
    for col in range(n):
        pivot = None
        best = None
        for r in range(col, n):
            v = work[r][col]
            if v.body():
                # prefer constant pivots, they keep denominators small
                score = (0 if v.is_polynomial() and v.num.is_constant() else 1, len(v.num.terms))
                if best is None or score < best:
                    pivot, best = r, score
        if pivot is None:
            raise SingularMatrix("body of the matrix is singular")
        work[col], work[pivot] = work[pivot], work[col]
        inv = work[col][col].invert()
        work[col] = [v * inv if v else v for v in work[col]]
        for r in range(n):
            if r != col:
                f = work[r][col]
                if f:
                    work[r] = [a - f * b if b else a for a, b in zip(work[r], work[col])]
    return [r[n:] for r in work]


def mat_inverse(a: SuperMatrix) -> SuperMatrix:
    """Two-sided inverse of an even square supermatrix."""
    if sorted(a.row_par) != sorted(a.col_par):
        raise ValueError("matrix is not square in the super sense")
    if not a.is_even():
        raise ValueError("only even supermatrices are invertible here")
    table = a.table
    r0 = [i for i, p in enumerate(a.row_par) if p == 0]
    r1 = [i for i, p in enumerate(a.row_par) if p == 1]
    c0 = [j for j, p in enumerate(a.col_par) if p == 0]
    c1 = [j for j, p in enumerate(a.col_par) if p == 1]

    def sub(rows, cols):
        return [[a.entries[i][j] for j in cols] for i in rows]

    A, B, C, D = sub(r0, c0), sub(r0, c1), sub(r1, c0), sub(r1, c1)

    def mm(x, y):
        if not x or not y or not y[0]:
            return [[RationalSuperFunction.zero(table)] * (len(y[0]) if y else 0) for _ in x]
        return mat_mul(SuperMatrix(table, x, [0] * len(x), [0] * len(y)),
                       SuperMatrix(table, y, [0] * len(y), [0] * len(y[0]))).entries

    def msub(x, y):
        return [[p - q for p, q in zip(rx, ry)] for rx, ry in zip(x, y)]

    Ai = _even_inverse(A, table) if A else []
    if D:
        S = msub(D, mm(mm(C, Ai), B)) if A else D
        Si = _even_inverse(S, table)
    else:
        Si = []
    if A and D:
        AiB = mm(Ai, B)
        CAi = mm(C, Ai)
        top_left = [[p + q for p, q in zip(rx, ry)] for rx, ry in zip(Ai, mm(mm(AiB, Si), CAi))]
        top_right = [[-v for v in r] for r in mm(AiB, Si)]
        bot_left = [[-v for v in r] for r in mm(Si, CAi)]
    else:
        top_left, top_right, bot_left = Ai, [[] for _ in Ai], [[] for _ in Si]
    # inverse has rows indexed by the columns of a, columns by the rows of a
    n = len(a.row_par)
    out = [[None] * n for _ in range(n)]
    for bi, i in enumerate(c0):
        for bj, j in enumerate(r0):
            out[i][j] = top_left[bi][bj]
        for bj, j in enumerate(r1):
            out[i][j] = top_right[bi][bj]
    for bi, i in enumerate(c1):
        for bj, j in enumerate(r0):
            out[i][j] = bot_left[bi][bj]
        for bj, j in enumerate(r1):
            out[i][j] = Si[bi][bj]
    return SuperMatrix(table, out, a.col_par, a.row_par)
