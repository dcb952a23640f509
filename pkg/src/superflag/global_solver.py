"""Global vector fields and functions by exact linear algebra on a polynomial ansatz.

An ansatz on the standard chart is pushed to every other chart.  After
bringing all terms over one common denominator Q, a coefficient is regular iff
its numerator vanishes modulo Q.  Reduction modulo the principal ideal (Q) is
linear, so every unknown contributes a fixed remainder vector and regularity
becomes a homogeneous linear system over Q.
"""

from __future__ import annotations

import itertools
import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable

from .fields import SuperDerivation, fundamental_field, pushforward, rf_retable
from .flag_atlas import Chart, FlagType, get_atlas, parse_flag
from .lie_superalgebra import GlElement, gl_basis
from .linalg import Echelon, axpy, nullspace
from .superpoly import (RationalSuperFunction, SuperPolynomial, divmod_even, rf_is_regular,
                        sp_substitute)

__all__ = [
    "SolveReport",
    "LiftResult",
    "ansatz_monomials",
    "solve_global_fields",
    "solve_global_functions",
    "mu_kernel",
    "mu_image_rank",
    "lift_query",
    "is_global",
    "vertical_directions",
    "DEFAULT_DEGREE",
    "EXCEPTIONAL_DEGREE",
]

DEFAULT_DEGREE = 2
EXCEPTIONAL_DEGREE = 3


def ansatz_monomials(chart: Chart, D: int) -> list[SuperPolynomial]:
    """Even monomials of degree <= D times every odd monomial.

    The odd part is finite-dimensional, so only the even degree is bounded.
    """
    table = chart.table
    ne, no = len(table.even), len(table.odd)
    out = []
    for deg in range(D + 1):
        for exps in _compositions(deg, ne):
            for k in range(no + 1):
                for odd in itertools.combinations(range(no), k):
                    out.append(SuperPolynomial.monomial(table, exps, odd))
    return out


def _compositions(total: int, parts: int):
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def vertical_directions(chart: Chart) -> list[str]:
    return [v for v in chart.names if chart.level_of[v] >= 2]


class _ChartImage:
    """Data needed to push ansatz elements from the standard chart to one chart."""

    def __init__(self, atlas, src: Chart, dst: Chart):
        self.dst = dst
        self.forward = atlas.transition(src, dst)
        self.back = atlas.transition(dst, src)
        self._mono: dict = {}
        self._jac: dict = {}

    def monomial(self, m: SuperPolynomial) -> RationalSuperFunction:
        key = next(iter(m.terms))
        hit = self._mono.get(key)
        if hit is None:
            hit = sp_substitute(m, self.back, self.dst.table)
            self._mono[key] = hit
        return hit

    def jacobian(self, w: str, w2: str) -> RationalSuperFunction:
        """d T_{w2} / d w, rewritten in the target chart."""
        key = (w, w2)
        hit = self._jac.get(key)
        if hit is None:
            d = self.forward[w2].partial(w)
            hit = sp_substitute(d, self.back, self.dst.table) if d else d
            hit = RationalSuperFunction.zero(self.dst.table) if not d else hit
            self._jac[key] = hit
        return hit


def _common_denominator(table, rfs: Iterable[RationalSuperFunction]):
    den: dict = {}
    for f in rfs:
        for g, e in f.den.items():
            if den.get(g, 0) < e:
                den[g] = e
    Q = SuperPolynomial.const(table, 1)
    for g, e in den.items():
        Q = Q * g ** e
    return den, Q


def _remainder_rows(items, table):
    """``items``: list of (unknown id, target coordinate, RSF).

    Returns the linear constraints (dicts unknown -> coeff) expressing that
    for each target coordinate the combination is regular.
    """
    den, Q = _common_denominator(table, (f for _, _, f in items))
    if Q.is_constant():
        return [], Q
    rows: dict = {}
    for uid, w2, f in items:
        scale = SuperPolynomial.const(table, 1)
        for g, e in den.items():
            k = e - f.den.get(g, 0)
            if k:
                scale = scale * g ** k
        num = f.num * scale
        _, r = divmod_even(num, Q)
        for key, c in r.terms.items():
            row = rows.setdefault((w2, key), {})
            row[uid] = row.get(uid, 0) + c
    return [r for r in rows.values() if any(r.values())], Q


@dataclass
class SolveReport:
    space: str
    degree: int
    dimension: int
    stabilized: bool
    dimension_next: int | None = None
    basis: list = field(default_factory=list)
    certificates: list = field(default_factory=list)
    kind: str = "fields"
    seconds: float = 0.0

    def to_json(self) -> dict:
        return {
            "space": self.space,
            "kind": self.kind,
            "degree": self.degree,
            "dimension": self.dimension,
            "dimension_next": self.dimension_next,
            "stabilized": self.stabilized,
            "basis": [b.to_json() for b in self.basis],
            "certificates": self.certificates,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=1)

    @classmethod
    def from_json(cls, data) -> "SolveReport":
        if data.get("kind", "fields") == "fields":
            basis = [SuperDerivation.from_json(b) for b in data["basis"]]
        else:
            flag = parse_flag(data["space"])
            table = get_atlas(flag).standard.table
            basis = [RationalSuperFunction.from_json(table, b) for b in data["basis"]]
        return cls(data["space"], data["degree"], data["dimension"], data["stabilized"],
                   data.get("dimension_next"), basis, data.get("certificates", []), data.get("kind", "fields"))

    def __eq__(self, other):
        if not isinstance(other, SolveReport):
            return NotImplemented
        return self.to_json() == other.to_json()


def _field_unknowns(chart: Chart, D: int, directions=None, parity=None):
    dirs = list(directions) if directions is not None else list(chart.names)
    monos = ansatz_monomials(chart, D)
    out = []
    for w in dirs:
        pw = chart.table.parity(w)
        for m in monos:
            if parity is not None and (m.parity() + pw) % 2 != parity:
                continue
            out.append((w, m))
    return out


def _field_constraints(flag: FlagType, unknowns, parallel: bool = False, extra=None):
    """Regularity constraints for ``sum c_i * m_i d/dw_i (+ extra)`` on every chart.

    ``extra`` is a fixed field whose contribution goes to the column ``"rhs"``.
    """
    atlas = get_atlas(flag)
    src = atlas.standard
    others = [c for c in atlas.charts if c.index != src.index]

    def one(dst):
        img = _ChartImage(atlas, src, dst)
        items = []
        for uid, (w, m) in enumerate(unknowns):
            mi = img.monomial(m)
            for w2 in dst.names:
                J = img.jacobian(w, w2)
                if J:
                    items.append((uid, w2, mi * J))
        if extra is not None:
            pushed = pushforward(extra, dst)
            for w2, c in pushed.coeffs.items():
                items.append(("rhs", w2, c))
        rows, _ = _remainder_rows(items, dst.table)
        return [(dst.index, r) for r in rows]

    if parallel and len(others) > 1:
        with ThreadPoolExecutor() as pool:
            chunks = list(pool.map(one, others))
    else:
        chunks = [one(c) for c in others]
    return [r for chunk in chunks for r in chunk]


def _basis_fields(chart, unknowns, null) -> list[SuperDerivation]:
    out = []
    for vec in null:
        coeffs: dict = {}
        for uid, c in vec.items():
            w, m = unknowns[uid]
            coeffs[w] = coeffs.get(w, SuperPolynomial.zero(chart.table)) + m.scale(c)
        out.append(SuperDerivation(chart, coeffs))
    return out


def _solve_fields_once(flag, D, directions=None, parallel=False):
    atlas = get_atlas(flag)
    chart = atlas.standard
    unknowns = _field_unknowns(chart, D, directions)
    rows = [r for _, r in _field_constraints(flag, unknowns, parallel)]
    null = nullspace(rows, list(range(len(unknowns))))
    return _basis_fields(chart, unknowns, null)


def solve_global_fields(t, D: int = DEFAULT_DEGREE, directions=None, parallel: bool = False,
                        check_stable: bool = True) -> SolveReport:
    """Global vector fields with standard-chart coefficients of degree <= D.

    ``directions`` restricts the ansatz to the listed coordinates (e.g. the
    vertical ones).  With ``check_stable`` the solve is repeated at D+1.
    """
    flag = parse_flag(t) if isinstance(t, str) else t
    start = time.perf_counter()
    basis = _solve_fields_once(flag, D, directions, parallel)
    dim_next = None
    stable = False
    if check_stable:
        dim_next = len(_solve_fields_once(flag, D + 1, directions, parallel))
        stable = dim_next == len(basis)
    return SolveReport(str(flag), D, len(basis), stable, dim_next, basis, [], "fields",
                       time.perf_counter() - start)


def _solve_functions_once(flag, D):
    atlas = get_atlas(flag)
    src = atlas.standard
    monos = ansatz_monomials(src, D)
    rows = []
    for dst in atlas.charts:
        if dst.index == src.index:
            continue
        img = _ChartImage(atlas, src, dst)
        items = [(uid, "f", img.monomial(m)) for uid, m in enumerate(monos)]
        rows += _remainder_rows(items, dst.table)[0]
    null = nullspace(rows, list(range(len(monos))))
    out = []
    for vec in null:
        f = SuperPolynomial.zero(src.table)
        for uid, c in vec.items():
            f = f + monos[uid].scale(c)
        out.append(RationalSuperFunction.from_poly(f))
    return out


def solve_global_functions(t, D: int = DEFAULT_DEGREE, check_stable: bool = True) -> SolveReport:
    flag = parse_flag(t) if isinstance(t, str) else t
    start = time.perf_counter()
    basis = _solve_functions_once(flag, D)
    dim_next = None
    stable = False
    if check_stable:
        dim_next = len(_solve_functions_once(flag, D + 1))
        stable = dim_next == len(basis)
    return SolveReport(str(flag), D, len(basis), stable, dim_next, basis, [], "functions",
                       time.perf_counter() - start)


def is_global(v: SuperDerivation) -> tuple[bool, list]:
    """Check regularity of the pushforward on every chart; returns failing charts."""
    atlas = get_atlas(v.chart.flag)
    bad = []
    for dst in atlas.charts:
        w = pushforward(v, dst)
        for var, c in w.coeffs.items():
            if not rf_is_regular(c)[0]:
                bad.append((str(dst.index), var))
    return not bad, bad


def _mu_vectors(flag):
    chart = get_atlas(flag).standard
    basis = gl_basis(flag.m, flag.n)
    return basis, [fundamental_field(X, chart).vector() for X in basis]


def mu_kernel(t) -> list[GlElement]:
    """Nullspace of X -> fundamental_field(X) on the standard chart."""
    flag = parse_flag(t) if isinstance(t, str) else t
    basis, vecs = _mu_vectors(flag)
    # transpose: one row per coordinate of the field vector
    rows: dict = {}
    for i, v in enumerate(vecs):
        for key, c in v.items():
            rows.setdefault(key, {})[i] = c
    null = nullspace(rows.values(), list(range(len(basis))))
    out = []
    for vec in null:
        X = GlElement(flag.m, flag.n)
        for i, c in vec.items():
            X = X + basis[i] * c
        out.append(X)
    return out


def mu_image_rank(t) -> int:
    flag = parse_flag(t) if isinstance(t, str) else t
    e = Echelon()
    for v in _mu_vectors(flag)[1]:
        e.add(v)
    return e.rank


# ---------------------------------------------------------------------------
# lifting a base field to the flag
# ---------------------------------------------------------------------------

@dataclass
class LiftResult:
    feasible: bool
    witness: SuperDerivation | None = None
    vertical_dimension: int = 0
    certificate: list = field(default_factory=list)
    local: "LocalLiftAnalysis | None" = None

    def to_json(self):
        return {"feasible": self.feasible,
                "witness": self.witness.to_json() if self.witness is not None else None,
                "vertical_dimension": self.vertical_dimension,
                "certificate": self.certificate,
                "local": self.local.to_json() if self.local is not None else None}


def _inconsistent_subset(rows, n_unknowns):
    """Positions of rows whose combination reads ``0 = nonzero``, or None."""
    ech = Echelon(list(range(n_unknowns)) + ["rhs"], track=True)
    for i, r in enumerate(rows):
        ech.add(r, origin_id=i)
        row = ech.rows.get("rhs")
        if row is not None and len(row) == 1:
            return sorted(ech.origins["rhs"])
    return None


def lift_query(w: SuperDerivation, t, D: int = EXCEPTIONAL_DEGREE) -> LiftResult:
    """Is there a vertical v with (w lifted) + v global on the flag?

    ``w`` is a field on the standard chart of the base Grassmannian; the lift
    copies its coefficients onto the first-level coordinates.  Two analyses
    run: the local bracket conditions (see :func:`local_lift_conditions`) and
    the global regularity system for a vertical ansatz of even degree <= D.
    The query is feasible iff both are consistent.
    """
    flag = parse_flag(t) if isinstance(t, str) else t
    if flag.r < 2:
        raise ValueError("lifting needs a flag of length at least 2")
    atlas = get_atlas(flag)
    chart = atlas.standard
    lifted = SuperDerivation(chart, {v: rf_retable(c, chart.table) for v, c in w.coeffs.items()})
    local = local_lift_conditions(lifted)
    unknowns = _field_unknowns(chart, D, vertical_directions(chart), parity=w.parity())
    rows = [r for _, r in _field_constraints(flag, unknowns, extra=lifted)]
    vert = nullspace([{k: c for k, c in r.items() if k != "rhs"} for r in rows],
                     list(range(len(unknowns))))
    certificate = []
    if not local.consistent:
        certificate += [{"kind": "bracket", "equation": e} for e in local.contradiction]
    bad = _inconsistent_subset(rows, len(unknowns))
    if bad is not None:
        certificate += [{"kind": "regularity", "equation": _render_equation(chart, unknowns, rows[i])}
                        for i in bad]
    if certificate:
        return LiftResult(False, None, len(vert), certificate, local)
    sol = _particular_solution(rows, len(unknowns))
    coeffs: dict = {}
    for uid, c in sol.items():
        var, m = unknowns[uid]
        coeffs[var] = coeffs.get(var, SuperPolynomial.zero(chart.table)) + m.scale(c)
    witness = lifted + SuperDerivation(chart, coeffs)
    return LiftResult(True, witness, len(vert), [], local)


def _particular_solution(rows, n):
    ech = Echelon(list(range(n)) + ["rhs"])
    for r in rows:
        ech.add(r)
    sol = {}
    for p, row in ech.rows.items():
        if p == "rhs":
            raise ArithmeticError("system is inconsistent")
        c = row.get("rhs")
        if c:
            sol[p] = -c
    return sol


def _render_equation(chart, unknowns, row) -> str:
    names = chart.display_names()
    parts = []
    for k, c in sorted(row.items(), key=lambda kv: (kv[0] == "rhs", str(kv[0]))):
        if k == "rhs":
            continue
        w, m = unknowns[k]
        parts.append(f"{c}*[{m.to_str(names)} ∂/∂{names[w]}]")
    lhs = " + ".join(parts) if parts else "0"
    return f"{lhs} = {-row.get('rhs', 0)}"


_FUNCTION_LETTERS = "fghpqrs"


@dataclass
class LocalLiftAnalysis:
    """Bracket conditions on the vertical part of a lift, in symbolic form.

    The vertical part is ``sum_w F_w d/dw`` over the fiber coordinates with
    unknown functions ``F_w`` (named f, g, ... in coordinate order).  For a
    generator X whose bracket with the base field stays in the base image of
    gl, the full bracket [mu(X), lift] is forced; this yields linear
    first-order conditions on the F_w.
    """

    functions: dict
    equations: list
    derived: dict
    checks: list
    consistent: bool
    contradiction: list

    def to_json(self):
        return {"functions": self.functions, "equations": self.equations,
                "derived": self.derived, "mixed_partials": self.checks,
                "consistent": self.consistent, "contradiction": self.contradiction}


def local_lift_conditions(lifted: SuperDerivation) -> LocalLiftAnalysis:
    from .fields import field_bracket

    chart = lifted.chart
    flag = chart.flag
    table = chart.table
    names = chart.display_names()
    base_names = set(chart.level_names(1))
    fiber = vertical_directions(chart)
    letters = {w: _FUNCTION_LETTERS[i] for i, w in enumerate(fiber)}
    p_lift = lifted.parity()
    gens = gl_basis(flag.m, flag.n)
    mus = [fundamental_field(X, chart) for X in gens]

    def base_vec(v):
        return {k: c for k, c in v.vector().items() if k[0] in base_names}

    ech = Echelon(track=True)
    for i, mv in enumerate(mus):
        ech.add(base_vec(mv), origin_id=i)

    # an equation: lhs {(w, u): coeff} meaning coeff * dF_w/du, u None for F_w itself; rhs RSF
    equations = []
    for X, mx in zip(gens, mus):
        br = field_bracket(mx, lifted)
        coords = _coords(ech, base_vec(br))
        if coords is None:
            continue
        combo = SuperDerivation(chart)
        for i, c in coords.items():
            combo = combo + mus[i].scale(c)
        rhs_field = combo - br
        px = X.parity()
        sign = -1 if px * p_lift else 1
        for w2 in fiber:
            lhs: dict = {}
            for u, cu in mx.coeffs.items():
                lhs[(w2, u)] = lhs.get((w2, u), 0) + cu
            c_w2 = mx.coeff(w2)
            for w in fiber:
                d = c_w2.partial(w)
                if d:
                    lhs[(w, None)] = lhs.get((w, None), 0) + d * (-sign)
            lhs = {k: v for k, v in lhs.items() if v}
            rhs = rhs_field.coeff(w2)
            if lhs or rhs:
                equations.append((repr(X), lhs, rhs))

    known: dict = {}
    changed = True
    while changed:
        changed = False
        for _, lhs, rhs in equations:
            rest = {}
            value = rhs
            for k, c in lhs.items():
                if k in known:
                    value = value - c * known[k]
                else:
                    rest[k] = c
            if len(rest) == 1:
                (k, c), = rest.items()
                if k[1] is not None and c.is_polynomial() and c.num.is_constant():
                    val = value * (1 / c.num.constant_term())
                    if k in known:
                        continue
                    known[k] = val
                    changed = True

    checks = []
    contradiction = []
    for (w, u), a in known.items():
        for (w_, v), b in known.items():
            if w_ != w or u >= v:
                continue
            # d_v d_u F = (-1)^{p(u)p(v)} d_u d_v F
            s = -1 if table.parity(u) * table.parity(v) else 1
            lhs = a.partial(v)
            rhs = b.partial(u) * s
            fn = letters[w]
            ok = lhs == rhs
            text = (f"∂/∂{names[v]}(∂{fn}/∂{names[u]}) = {lhs.to_str(names)}, "
                    f"(-1)^(p·p) ∂/∂{names[u]}(∂{fn}/∂{names[v]}) = {rhs.to_str(names)}")
            checks.append({"function": fn, "pair": [names[u], names[v]], "consistent": ok,
                           "trivial": not lhs and not rhs, "detail": text})
            if not ok:
                contradiction += [_render_known(letters, names, (w, u), a),
                                  _render_known(letters, names, (w, v), b), text]

    rendered = [f"[μ({lab}), w]: " + _render_lhs(letters, names, lhs) + f" = {rhs.to_str(names)}"
                for lab, lhs, rhs in equations]
    derived = {f"∂{letters[w]}/∂{names[u]}": val.to_str(names) for (w, u), val in known.items()}
    return LocalLiftAnalysis({letters[w]: names[w] for w in fiber}, rendered, derived, checks,
                             not contradiction, contradiction)


def _render_known(letters, names, key, val) -> str:
    w, u = key
    return f"∂{letters[w]}/∂{names[u]} = {val.to_str(names)}"


def _render_lhs(letters, names, lhs) -> str:
    parts = []
    for (w, u), c in lhs.items():
        target = letters[w] if u is None else f"∂{letters[w]}/∂{names[u]}"
        cs = c.to_str(names)
        parts.append(target if cs == "1" else f"-{target}" if cs == "-1" else f"({cs})*{target}")
    return " + ".join(parts) if parts else "0"


def _coords(ech: Echelon, v):
    rest, _ = ech.reduce(v)
    if rest:
        return None
    out: dict = {}
    for p in ech.rows:
        c = v.get(p)
        if c:
            out = axpy(out, c, ech.origins[p])
    return out
