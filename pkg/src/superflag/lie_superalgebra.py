"""gl(m|n), its quotients, abstract Lie superalgebras and subspace tests."""

from __future__ import annotations

import itertools
import json
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .linalg import Echelon, axpy, clean

__all__ = [
    "GlElement",
    "E",
    "gl_basis",
    "gl_bracket",
    "pgl_project",
    "pgl_basis",
    "sl_basis",
    "psl_basis",
    "wn_dimension",
    "AbstractSuperAlgebra",
    "JacobiViolation",
    "Subspace",
    "subspace_ops",
    "h4_basis",
    "h4_grading",
    "h4_from_df",
]


class GlElement:
    """A matrix in gl(m|n); indices 1..m are even, m+1..m+n odd."""

    __slots__ = ("m", "n", "entries")

    def __init__(self, m: int, n: int, entries: Mapping | None = None):
        self.m, self.n = m, n
        N = m + n
        out = {}
        for (a, b), c in (entries or {}).items():
            if not (1 <= a <= N and 1 <= b <= N):
                raise IndexError(f"entry ({a},{b}) outside gl({m}|{n})")
            if c:
                out[(a, b)] = Fraction(c)
        self.entries = out

    @property
    def size(self):
        return (self.m, self.n)

    def index_parity(self, a: int) -> int:
        return 0 if a <= self.m else 1

    def parity(self):
        ps = {(self.index_parity(a) + self.index_parity(b)) % 2 for a, b in self.entries}
        if len(ps) > 1:
            return None
        return ps.pop() if ps else 0

    def parity_part(self, p: int) -> "GlElement":
        return GlElement(self.m, self.n, {ab: c for ab, c in self.entries.items()
                                          if (self.index_parity(ab[0]) + self.index_parity(ab[1])) % 2 == p})

    def _check(self, other):
        if (self.m, self.n) != (other.m, other.n):
            raise ValueError("gl size mismatch")

    def __add__(self, other):
        self._check(other)
        return GlElement(self.m, self.n, axpy(self.entries, 1, other.entries))

    def __sub__(self, other):
        self._check(other)
        return GlElement(self.m, self.n, axpy(self.entries, -1, other.entries))

    def __neg__(self):
        return GlElement(self.m, self.n, {k: -c for k, c in self.entries.items()})

    def __mul__(self, c):
        return GlElement(self.m, self.n, {k: v * c for k, v in self.entries.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, GlElement):
            return NotImplemented
        return (self.m, self.n) == (other.m, other.n) and self.entries == other.entries

    def __hash__(self):
        return hash((self.m, self.n, frozenset(self.entries.items())))

    def matmul(self, other) -> "GlElement":
        self._check(other)
        out: dict = {}
        rows = {}
        for (b, c), v in other.entries.items():
            rows.setdefault(b, []).append((c, v))
        for (a, b), u in self.entries.items():
            for c, v in rows.get(b, ()):
                out[(a, c)] = out.get((a, c), 0) + u * v
        return GlElement(self.m, self.n, out)

    def supertrace(self) -> Fraction:
        return sum((c if a <= self.m else -c) for (a, b), c in self.entries.items() if a == b) or Fraction(0)

    def __repr__(self):
        if not self.entries:
            return "0"
        parts = []
        for (a, b), c in sorted(self.entries.items()):
            lab = _label(a, b)
            parts.append(lab if c == 1 else f"-{lab}" if c == -1 else f"{c}*{lab}")
        return " + ".join(parts).replace("+ -", "- ")

    def to_json(self):
        return {"m": self.m, "n": self.n,
                "entries": [[a, b, str(c)] for (a, b), c in sorted(self.entries.items())]}

    @classmethod
    def from_json(cls, data):
        return cls(data["m"], data["n"], {(a, b): Fraction(c) for a, b, c in data["entries"]})


def _label(a: int, b: int) -> str:
    return f"E{a}{b}" if a < 10 and b < 10 else f"E{a},{b}"


def E(m: int, n: int, a: int, b: int) -> GlElement:
    return GlElement(m, n, {(a, b): 1})


def identity(m: int, n: int) -> GlElement:
    return GlElement(m, n, {(a, a): 1 for a in range(1, m + n + 1)})


def gl_basis(m: int, n: int) -> list[GlElement]:
    N = m + n
    return [E(m, n, a, b) for a in range(1, N + 1) for b in range(1, N + 1)]


def gl_bracket(a: GlElement, b: GlElement) -> GlElement:
    """Super-commutator, extended bilinearly to inhomogeneous arguments."""
    a._check(b)
    out = GlElement(a.m, a.n)
    for pa in (0, 1):
        x = a.parity_part(pa)
        if not x.entries:
            continue
        for pb in (0, 1):
            y = b.parity_part(pb)
            if not y.entries:
                continue
            sign = -1 if pa * pb else 1
            out = out + x.matmul(y) - y.matmul(x) * sign
    return out


def pgl_project(a: GlElement) -> GlElement:
    """Coset representative modulo the identity with vanishing (1,1) entry."""
    c = a.entries.get((1, 1), 0)
    if not c:
        return a
    return a - identity(a.m, a.n) * c


def pgl_basis(m: int, n: int) -> list[GlElement]:
    return [pgl_project(E(m, n, a, b)) for a in range(1, m + n + 1) for b in range(1, m + n + 1)
            if (a, b) != (1, 1)]


def sl_basis(m: int, n: int) -> list[GlElement]:
    """Supertrace-zero matrices."""
    N = m + n
    out = [E(m, n, a, b) for a in range(1, N + 1) for b in range(1, N + 1) if a != b]
    sign = [None] + [1 if a <= m else -1 for a in range(1, N + 1)]
    for a in range(2, N + 1):
        # E11 + c*Eaa with supertrace 0
        out.append(GlElement(m, n, {(1, 1): 1, (a, a): -Fraction(sign[1], sign[a])}))
    return out


def psl_basis(m: int, n: int) -> list[GlElement]:
    """Spanning set of the image of sl(m|n) in pgl(m|n)."""
    return [pgl_project(x) for x in sl_basis(m, n)]


def wn_dimension(n: int) -> int:
    if n < 0:
        raise ValueError("n must be nonnegative")
    return n * 2 ** n


class JacobiViolation(ValueError):
    pass


class AbstractSuperAlgebra:
    """Finite-dimensional Lie superalgebra given by structure constants.

    ``constants[(i, j)]`` maps basis index ``k`` to the coefficient of
    ``e_k`` in ``[e_i, e_j]``.  Missing pairs bracket to zero.
    """

    def __init__(self, labels: Sequence[str], parities: Sequence[int], constants: Mapping,
                 validate: bool = True):
        if len(labels) != len(parities) or len(set(labels)) != len(labels):
            raise ValueError("labels must be unique and match parities")
        self.labels = list(labels)
        self.parities = list(parities)
        self.constants = {}
        for (i, j), row in constants.items():
            row = clean(row)
            if row:
                self.constants[(i, j)] = row
        if validate:
            self.validate()

    @property
    def dim(self) -> int:
        return len(self.labels)

    def parity_of(self, v: Mapping):
        ps = {self.parities[i] for i, c in v.items() if c}
        if len(ps) > 1:
            return None
        return ps.pop() if ps else 0

    def bracket(self, u: Mapping, v: Mapping) -> dict:
        out: dict = {}
        for i, a in u.items():
            if not a:
                continue
            for j, b in v.items():
                if not b:
                    continue
                row = self.constants.get((i, j))
                if row:
                    out = axpy(out, a * b, row)
        return out

    def basis_vector(self, i: int) -> dict:
        return {i: Fraction(1)}

    def validate(self):
        d = self.dim
        for (i, j), row in self.constants.items():
            for k in row:
                if self.parities[k] != (self.parities[i] + self.parities[j]) % 2:
                    raise JacobiViolation(f"[{self.labels[i]},{self.labels[j]}] has wrong parity")
        for i in range(d):
            for j in range(i, d):
                a = self.constants.get((i, j), {})
                b = self.constants.get((j, i), {})
                s = -1 if self.parities[i] * self.parities[j] else 1
                # [x,y] = -(-1)^{p(x)p(y)} [y,x]
                if clean(axpy(a, s, b)):
                    raise JacobiViolation(f"antisymmetry fails for {self.labels[i]}, {self.labels[j]}")
        for i, j, k in itertools.product(range(d), repeat=3):
            x, y, z = ({i: 1}, {j: 1}, {k: 1})
            lhs = self.bracket(x, self.bracket(y, z))
            rhs = self.bracket(self.bracket(x, y), z)
            s = -1 if self.parities[i] * self.parities[j] else 1
            rhs = axpy(rhs, s, self.bracket(y, self.bracket(x, z)))
            if clean(axpy(lhs, -1, rhs)):
                raise JacobiViolation(f"super-Jacobi fails on ({self.labels[i]}, {self.labels[j]}, "
                                      f"{self.labels[k]})")

    def to_json(self) -> dict:
        consts = []
        for (i, j), row in sorted(self.constants.items()):
            for k, c in sorted(row.items()):
                consts.append([self.labels[i], self.labels[j], self.labels[k], str(c)])
        return {"labels": self.labels, "parities": self.parities, "constants": consts}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, data, validate: bool = True):
        idx = {lab: i for i, lab in enumerate(data["labels"])}
        consts: dict = {}
        for a, b, c, v in data["constants"]:
            consts.setdefault((idx[a], idx[b]), {})[idx[c]] = Fraction(v)
        return cls(data["labels"], data["parities"], consts, validate)

    # -- constructions ------------------------------------------------
    @classmethod
    def from_basis(cls, labels, elements, bracket, vectorize, parity, validate: bool = True):
        """Structure constants of a bracket-closed family of concrete elements."""
        ech = Echelon(track=True)
        for i, el in enumerate(elements):
            if not ech.add(vectorize(el), origin_id=i):
                raise ValueError(f"element {labels[i]} is linearly dependent on earlier ones")
        consts = {}
        for i, a in enumerate(elements):
            for j, b in enumerate(elements):
                v = vectorize(bracket(a, b))
                if not v:
                    continue
                coords = _express(ech, v)
                if coords is None:
                    raise ValueError(f"[{labels[i]}, {labels[j]}] leaves the span")
                consts[(i, j)] = coords
        return cls(labels, [parity(e) for e in elements], consts, validate)

    @classmethod
    def gl(cls, m: int, n: int, validate: bool = True) -> "AbstractSuperAlgebra":
        N = m + n
        pairs = [(a, b) for a in range(1, N + 1) for b in range(1, N + 1)]
        index = {ab: i for i, ab in enumerate(pairs)}
        par = [(0 if a <= m else 1) ^ (0 if b <= m else 1) for a, b in pairs]
        consts = {}
        for (a, b), i in index.items():
            for (c, d), j in index.items():
                row = {}
                if b == c:
                    row[index[(a, d)]] = Fraction(1)
                if d == a:
                    s = -1 if par[i] * par[j] else 1
                    k = index[(c, b)]
                    row[k] = row.get(k, 0) - s
                if clean(row):
                    consts[(i, j)] = row
        return cls([_label(a, b) for a, b in pairs], par, consts, validate)

    @classmethod
    def pgl(cls, m: int, n: int, validate: bool = True) -> "AbstractSuperAlgebra":
        basis = pgl_basis(m, n)
        labels = [_label(a, b) for a in range(1, m + n + 1) for b in range(1, m + n + 1) if (a, b) != (1, 1)]

        def vec(x):
            return dict(pgl_project(x).entries)

        return cls.from_basis(labels, basis, gl_bracket, vec, lambda x: x.parity(), validate)


def _express(ech: Echelon, v: Mapping):
    """Coordinates of ``v`` in the inserted elements (tracked echelon)."""
    rest, _ = ech.reduce(clean(v))
    if rest:
        return None
    out: dict = {}
    for p, row in ech.rows.items():
        c = v.get(p)
        if c:
            out = axpy(out, c, ech.origins[p])
    return out


class Subspace:
    """Exact span of vectors given as dicts (or objects with a vectorizer)."""

    def __init__(self, vectors: Iterable = (), vectorize=None):
        self.vectorize = vectorize or _default_vectorize
        self.ech = Echelon()
        self.generators = []
        for v in vectors:
            self.add(v)

    def add(self, v) -> bool:
        self.generators.append(v)
        return self.ech.add(self.vectorize(v))

    @property
    def dim(self) -> int:
        return self.ech.rank

    def __contains__(self, v) -> bool:
        return self.ech.contains(self.vectorize(v))

    def contains(self, v) -> bool:
        return v in self

    def is_ideal(self, ambient_basis: Iterable, bracket) -> bool:
        """True iff bracketing every generator with every ambient basis element stays inside."""
        for x in ambient_basis:
            for g in self.generators:
                if bracket(x, g) not in self:
                    return False
        return True


def _default_vectorize(v):
    if isinstance(v, GlElement):
        return dict(v.entries)
    if hasattr(v, "vector"):
        return v.vector()
    return dict(v)


def subspace_ops(vectors, vectorize=None) -> Subspace:
    return Subspace(vectors, vectorize)


# ---------------------------------------------------------------------------
# the 15 + 1 fields spanning H4 (x) <z> on the (1|2)-dimensional chart
# ---------------------------------------------------------------------------

def h4_basis(chart=None):
    """The 15 graded basis fields (degrees -1, 0, 1, 2) and the grading field z.

    Returns ``(fields, z)`` where ``fields`` is a list of ``(degree, label,
    SuperDerivation)``.  ``chart`` defaults to the standard chart of
    Gr(2|2; 1|2), whose coordinates are x | xi_1, xi_2.
    """
    from .fields import SuperDerivation
    from .flag_atlas import parse_flag, standard_chart

    if chart is None:
        chart = standard_chart(parse_flag("Gr(2|2; 1|2)"))
    x_name, = chart.table.even
    a_name, b_name = chart.table.odd
    V = chart.variables()
    x, a, b = V[x_name], V[a_name], V[b_name]
    one = 1

    def f(**coeffs):
        names = {"x": x_name, "a": a_name, "b": b_name}
        return SuperDerivation(chart, {names[k]: v for k, v in coeffs.items()})

    fields = [
        (-1, "d/dxi1", f(a=one)),
        (-1, "d/dxi2", f(b=one)),
        (-1, "x d/dxi1", f(a=x)),
        (-1, "x d/dxi2", f(b=x)),
        (0, "d/dx", f(x=one)),
        (0, "x d/dx + xi1 d/dxi1", f(x=x, a=a)),
        (0, "x d/dx + xi2 d/dxi2", f(x=x, b=b)),
        (0, "xi1 d/dxi2", f(b=a)),
        (0, "xi2 d/dxi1", f(a=b)),
        (0, "x xi1 d/dxi1 + x xi2 d/dxi2 + x^2 d/dx", f(a=x * a, b=x * b, x=x * x)),
        (1, "xi1 d/dx", f(x=a)),
        (1, "xi2 d/dx", f(x=b)),
        (1, "x xi1 d/dx + xi1 xi2 d/dxi2", f(x=x * a, b=a * b)),
        (1, "x xi2 d/dx - xi1 xi2 d/dxi1", f(x=x * b, a=-(a * b))),
        (2, "theta = xi1 xi2 d/dx", f(x=a * b)),
    ]
    z = f(a=a, b=b)
    return fields, z


def h4_grading(fields, z):
    """Eigenvalue of ad z on each field, or None when a field is not an eigenvector."""
    from .fields import eigenvalue, field_bracket

    return [eigenvalue(field_bracket(z, v), v) for _, _, v in fields]


def h4_from_df():
    """The algebra of fields D_f = sum_i (df/dtheta_i) d/dtheta_i on Lambda(theta_1..theta_4).

    Returns ``(fields, degrees)`` with one field per nonconstant monomial f,
    degree = deg f - 2.
    """
    from .fields import SuperDerivation
    from .superpoly import SuperPolynomial, VarTable, sp_partial

    table = VarTable((), [f"theta{i}" for i in range(1, 5)])
    fields, degrees = [], []
    for size in range(1, 5):
        for subset in itertools.combinations(range(4), size):
            f = SuperPolynomial.monomial(table, (), subset)
            coeffs = {v: sp_partial(f, v) for v in table.odd}
            fields.append(SuperDerivation(table, coeffs))
            degrees.append(size - 2)
    return fields, degrees
