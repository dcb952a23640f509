"""Vector fields (superderivations) on a chart."""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Mapping

from .flag_atlas import Chart, ChartIndex, get_atlas, make_chart, normalize_frames
from .lie_superalgebra import GlElement
from .superpoly import (RationalSuperFunction, SuperPolynomial, VarTable, sp_substitute)
from .supermatrix import SuperMatrix, mat_mul

__all__ = [
    "SuperDerivation",
    "ChartMismatch",
    "field_bracket",
    "pushforward",
    "fundamental_field",
    "is_projectable",
    "project",
    "eigenvalue",
    "rf_retable",
]


class ChartMismatch(ValueError):
    pass


def _as_rf(table, v) -> RationalSuperFunction:
    if isinstance(v, RationalSuperFunction):
        return v
    if isinstance(v, SuperPolynomial):
        return RationalSuperFunction.from_poly(v)
    return RationalSuperFunction.const(table, Fraction(v))


def rf_retable(f: RationalSuperFunction, table: VarTable) -> RationalSuperFunction:
    num = f.num.retable(table)
    den = {g.retable(table): e for g, e in f.den.items()}
    return RationalSuperFunction(num, den, _reduce=False)


class SuperDerivation:
    """``sum_v coeffs[v] * d/dv`` with left odd derivatives.

    ``where`` is a :class:`Chart` or a bare :class:`VarTable`.
    """

    __slots__ = ("chart", "table", "coeffs")

    def __init__(self, where, coeffs: Mapping | None = None):
        if isinstance(where, Chart):
            self.chart = where
            self.table = where.table
        else:
            self.chart = None
            self.table = where
        out = {}
        for v, c in (coeffs or {}).items():
            self.table.locate(v)
            c = _as_rf(self.table, c)
            if c.table != self.table:
                raise ChartMismatch(f"coefficient of d/d{v} lives over another table")
            if c:
                out[v] = c
        self.coeffs = out

    # -- structure -----------------------------------------------------
    def _same(self, other):
        if self.table != other.table:
            raise ChartMismatch("fields live on different charts")

    def parity(self):
        ps = set()
        for v, c in self.coeffs.items():
            pc = c.parity()
            if pc is None:
                return None
            ps.add((pc + self.table.parity(v)) % 2)
        if len(ps) > 1:
            return None
        return ps.pop() if ps else 0

    def parity_part(self, p: int) -> "SuperDerivation":
        out = {}
        for v, c in self.coeffs.items():
            out[v] = c.parity_part((p + self.table.parity(v)) % 2)
        return SuperDerivation(self._where(), out)

    def _where(self):
        return self.chart if self.chart is not None else self.table

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def coeff(self, v: str) -> RationalSuperFunction:
        return self.coeffs.get(v, RationalSuperFunction.zero(self.table))

    def __add__(self, other):
        self._same(other)
        out = dict(self.coeffs)
        for v, c in other.coeffs.items():
            out[v] = out[v] + c if v in out else c
        return SuperDerivation(self._where(), out)

    def __neg__(self):
        return SuperDerivation(self._where(), {v: -c for v, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "SuperDerivation":
        return SuperDerivation(self._where(), {v: f * Fraction(c) for v, f in self.coeffs.items()})

    def __mul__(self, c):
        if isinstance(c, (int, Fraction)):
            return self.scale(c)
        return NotImplemented

    __rmul__ = __mul__

    def left_multiply(self, f) -> "SuperDerivation":
        """``f * self``; the function sits to the left of every coefficient."""
        f = _as_rf(self.table, f)
        return SuperDerivation(self._where(), {v: f * c for v, c in self.coeffs.items()})

    def __eq__(self, other):
        if not isinstance(other, SuperDerivation):
            return NotImplemented
        if self.table != other.table:
            return False
        keys = set(self.coeffs) | set(other.coeffs)
        return all(self.coeff(v) == other.coeff(v) for v in keys)

    def __hash__(self):
        return hash((self.table, frozenset(self.coeffs)))

    # -- action --------------------------------------------------------
    def apply(self, f) -> RationalSuperFunction:
        f = _as_rf(self.table, f)
        out = RationalSuperFunction.zero(self.table)
        for v, c in self.coeffs.items():
            d = f.partial(v)
            if d:
                out = out + c * d
        return out

    def is_polynomial(self) -> bool:
        return all(c.is_polynomial() for c in self.coeffs.values())

    def vector(self) -> dict:
        """Linear coordinates for span computations."""
        out = {}
        for v, c in self.coeffs.items():
            dkey = tuple(sorted((json.dumps(g.to_json()), e) for g, e in c.den.items()))
            for key, val in c.num.terms.items():
                out[(v, dkey, key)] = val
        return out

    # -- rendering -----------------------------------------------------
    def to_str(self, names: Mapping[str, str] | None = None) -> str:
        names = names or {}
        parts = []
        for v in self.table.names:
            c = self.coeffs.get(v)
            if c is None:
                continue
            s = c.to_str(names)
            d = f"∂/∂{names.get(v, v)}"
            if s == "1":
                parts.append(d)
            elif s == "-1":
                parts.append("-" + d)
            elif len(c.num.terms) > 1 and not c.den:
                parts.append(f"({s}){d}")
            else:
                parts.append(f"{s}{d}" if not c.den else f"[{s}]{d}")
        if not parts:
            return "0"
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    def __str__(self):
        if self.chart is not None:
            return self.to_str(self.chart.display_names())
        return self.to_str()

    def __repr__(self):
        return f"SuperDerivation({self.to_str()})"

    def to_json(self):
        out = {"coeffs": {v: c.to_json() for v, c in sorted(self.coeffs.items())},
               "table": self.table.to_json()}
        if self.chart is not None:
            out["flag"] = str(self.chart.flag)
            out["chart"] = self.chart.index.to_json()
        return out

    @classmethod
    def from_json(cls, data):
        from .flag_atlas import parse_flag

        if "flag" in data:
            where = make_chart(parse_flag(data["flag"]), ChartIndex.from_json(data["chart"]))
            table = where.table
        else:
            t = data["table"]
            table = where = VarTable(t["even"], t["odd"], t.get("nilpotent", ()))
        return cls(where, {v: RationalSuperFunction.from_json(table, c) for v, c in data["coeffs"].items()})


def field_bracket(a: SuperDerivation, b: SuperDerivation) -> SuperDerivation:
    """``[a, b]`` with coefficient ``a(b_w) - (-1)^{p(a)p(b)} b(a_w)``; bilinear in parity parts."""
    a._same(b)
    out = SuperDerivation(a._where())
    pa_parts = [(p, a.parity_part(p)) for p in (0, 1)] if a.parity() is None else [(a.parity(), a)]
    pb_parts = [(p, b.parity_part(p)) for p in (0, 1)] if b.parity() is None else [(b.parity(), b)]
    for pa, x in pa_parts:
        if not x:
            continue
        for pb, y in pb_parts:
            if not y:
                continue
            sign = -1 if pa * pb else 1
            coeffs = {}
            for w in set(x.coeffs) | set(y.coeffs):
                c = x.apply(y.coeff(w))
                d = y.apply(x.coeff(w))
                coeffs[w] = c - d if sign == 1 else c + d
            out = out + SuperDerivation(a._where(), coeffs)
    return out


def pushforward(v: SuperDerivation, dst) -> SuperDerivation:
    """Express ``v`` in the coordinates of another chart of the same flag."""
    if v.chart is None:
        raise ChartMismatch("pushforward needs a field attached to a chart")
    atlas = get_atlas(v.chart.flag)
    dst = atlas.chart(dst)
    if dst.index == v.chart.index:
        return v
    forward = atlas.transition(v.chart, dst)
    back = atlas.transition(dst, v.chart)
    coeffs = {}
    for w, T in forward.items():
        c = v.apply(T)
        if c:
            coeffs[w] = sp_substitute(c, back, dst.table)
    return SuperDerivation(dst, coeffs)


_T = "_t"


def fundamental_field(X: GlElement, chart: Chart) -> SuperDerivation:
    """First-order action of ``E + tX`` on the chart, read off as a vector field.

    For odd ``X`` the parameter ``t`` is odd and placed before all coordinates,
    so the coefficient is the left t-derivative.  Inhomogeneous ``X`` is split.
    """
    flag = chart.flag
    if (X.m, X.n) != (flag.m, flag.n):
        raise ValueError(f"gl({X.m}|{X.n}) does not act on {flag}")
    p = X.parity()
    if p is None:
        return fundamental_field(X.parity_part(0), chart) + fundamental_field(X.parity_part(1), chart)
    if not X.entries:
        return SuperDerivation(chart)
    base = chart.table
    if p:
        table = base.extend(odd=[_T], odd_first=True)
    else:
        table = base.extend(even=[_T], nilpotent=[_T])
    t = SuperPolynomial.var(table, _T)
    N = flag.m + flag.n
    par = [0] * flag.m + [1] * flag.n
    L = [[(1 if a == b else 0) + t * X.entries.get((a + 1, b + 1), 0) for b in range(N)] for a in range(N)]
    L = SuperMatrix(table, L, par, par)
    frames = [SuperMatrix(table, [[rf_retable(f, table) for f in row] for row in Z.entries], Z.row_par, Z.col_par)
              for Z in chart.matrices]
    frames[0] = mat_mul(L, frames[0])
    values = normalize_frames(chart, frames)
    coeffs = {}
    for v, f in values.items():
        d = f.partial(_T)
        if d:
            d = RationalSuperFunction(d.num.drop_variables([_T]), d.den, _reduce=False)
            coeffs[v] = rf_retable(d, base)
    return SuperDerivation(chart, coeffs)


def is_projectable(v: SuperDerivation):
    """``(True, None)`` or ``(False, (coordinate, coefficient))`` for the bundle to the first level."""
    chart = v.chart
    if chart is None or chart.flag.r < 2:
        raise ValueError("projectability needs a field on a flag of length at least 2")
    base = set(chart.level_names(1))
    for w in chart.level_names(1):
        c = v.coeffs.get(w)
        if c is None:
            continue
        used = c.num.free_names()
        for g in c.den:
            used |= g.free_names()
        if not used <= base:
            return False, (w, c)
    return True, None


def project(v: SuperDerivation) -> SuperDerivation:
    ok, bad = is_projectable(v)
    if not ok:
        raise ValueError(f"field is not projectable: coefficient of d/d{bad[0]} is {bad[1]}")
    chart = v.chart
    base_chart = make_chart(chart.flag.base(), ChartIndex(chart.index.levels[:1]))
    coeffs = {w: rf_retable(v.coeffs[w], base_chart.table) for w in chart.level_names(1) if w in v.coeffs}
    return SuperDerivation(base_chart, coeffs)


def eigenvalue(w: SuperDerivation, v: SuperDerivation):
    """The scalar c with ``w == c*v``, or None."""
    if not v:
        return None
    var, c = next(iter(v.coeffs.items()))
    key, val = next(iter(c.num.terms.items()))
    other = w.coeff(var)
    if other.den != c.den:
        lam = None
        if not other:
            lam = Fraction(0)
    else:
        lam = Fraction(other.num.terms.get(key, 0)) / val
    if lam is None or w != v.scale(lam):
        return None
    return lam
