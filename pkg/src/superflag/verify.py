"""Verifier suites: each returns a list of :class:`Check` records."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .fields import field_bracket, fundamental_field
from .flag_atlas import get_atlas, parse_flag
from .global_solver import (is_global, lift_query, mu_image_rank, mu_kernel, solve_global_fields,
                            solve_global_functions)
from .lie_superalgebra import (GlElement, Subspace, gl_basis, gl_bracket, h4_basis, h4_from_df,
                               h4_grading, identity)
from . import golden
from .weights import NotDominant, Weight, gelfand_tsetlin_dim, section_table, weyl_dim

__all__ = ["Check", "SUITES", "run_suite", "HOMOMORPHISM_SPACES", "FUNCTION_CASES"]

HOMOMORPHISM_SPACES = ["Gr(2|2; 1|1)", "Gr(2|1; 1|1)", "F(2|2; 1,1 | 2,1)"]
FUNCTION_CASES = {"Gr(2|1; 1|1)": 1, "F(2|2; 1,1 | 2,1)": 1, "Gr(1|1; 0|1)": 2, "Gr(1|2; 0|2)": 4}
LIFT_SPACE = "F(2|2; 1,1 | 2,1)"


@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""

    def to_json(self):
        return {"name": self.name, "ok": self.ok, "detail": self.detail}

    @classmethod
    def from_json(cls, data):
        return cls(data["name"], data["ok"], data.get("detail", ""))


def _flags(space, default):
    return [parse_flag(s) if isinstance(s, str) else s for s in ([space] if space else default)]


def homomorphism(space=None, seed: int = 0, samples: int = 20, orientation: str = "both"):
    """Compare [mu X, mu Y] with mu([X, Y]) and with mu([Y, X]) over all basis pairs.

    Fundamental fields of a left action reverse brackets, so the reversed
    identity is the one expected to hold exactly.
    """
    out = []
    rng = random.Random(seed)
    for flag in _flags(space, HOMOMORPHISM_SPACES):
        chart = get_atlas(flag).standard
        basis = gl_basis(flag.m, flag.n)
        mu = {repr(X): fundamental_field(X, chart) for X in basis}
        lit_fail, rev_fail = [], []
        for X, Y in itertools.product(basis, basis):
            lhs = field_bracket(mu[repr(X)], mu[repr(Y)])
            if orientation in ("both", "literal") and lhs != fundamental_field(gl_bracket(X, Y), chart):
                lit_fail.append(f"[{X!r}, {Y!r}]")
            if orientation in ("both", "reversed") and lhs != fundamental_field(gl_bracket(Y, X), chart):
                rev_fail.append(f"[{X!r}, {Y!r}]")
        pairs = len(basis) ** 2
        if orientation in ("both", "literal"):
            out.append(Check(f"{flag}: [mu X, mu Y] = mu([X, Y])", not lit_fail,
                             f"{pairs - len(lit_fail)}/{pairs} pairs; failing: {', '.join(lit_fail[:6])}"
                             + (" ..." if len(lit_fail) > 6 else "")))
        if orientation in ("both", "reversed"):
            out.append(Check(f"{flag}: [mu X, mu Y] = mu([Y, X])", not rev_fail,
                             f"{pairs - len(rev_fail)}/{pairs} pairs"))
        bad = 0
        for _ in range(samples):
            X = _random_element(flag, basis, rng)
            Y = _random_element(flag, basis, rng)
            lhs = field_bracket(fundamental_field(X, chart), fundamental_field(Y, chart))
            if lhs != fundamental_field(gl_bracket(Y, X), chart):
                bad += 1
        out.append(Check(f"{flag}: random combinations (seed {seed}) reverse brackets", not bad,
                         f"{samples - bad}/{samples} samples"))
    return out


def _random_element(flag, basis, rng):
    X = GlElement(flag.m, flag.n)
    for b in rng.sample(basis, min(4, len(basis))):
        X = X + b * rng.randint(-3, 3)
    return X


def kernel(space=None, **_):
    out = []
    for flag in _flags(space, HOMOMORPHISM_SPACES):
        ker = mu_kernel(flag)
        ident = identity(flag.m, flag.n)
        ok = len(ker) == 1 and Subspace([ident]).contains(ker[0])
        out.append(Check(f"{flag}: ker mu = <E>", ok, f"kernel basis: {[repr(k) for k in ker]}"))
        N = flag.m + flag.n
        rank = mu_image_rank(flag)
        out.append(Check(f"{flag}: rank mu = {N * N - 1}", rank == N * N - 1, f"rank {rank}"))
    return out


def golden_fields(**_):
    out = []
    chart = get_atlas(parse_flag(golden.GR2211_SPACE)).standard
    for (a, b), data in golden.GR2211_MU.items():
        X = GlElement(2, 2, {(a, b): 1})
        got = fundamental_field(X, chart)
        want = golden.build(data, chart, golden.GR2211_NAMES)
        out.append(Check(f"{golden.GR2211_SPACE}: mu(E{a}{b}) = {want}", got == want, f"computed {got}"))
    image = Subspace([fundamental_field(X, chart) for X in gl_basis(2, 2)])
    for label, data in golden.GR2211_EXTRA.items():
        v = golden.build(data, chart, golden.GR2211_NAMES)
        ok, bad = is_global(v)
        out.append(Check(f"{golden.GR2211_SPACE}: {v} is global", ok, f"singular on {bad}" if bad else ""))
        out.append(Check(f"{golden.GR2211_SPACE}: {v} is outside the gl image", v not in image))
    extra = Subspace(list(image.generators) + [golden.build(s, chart, golden.GR2211_NAMES)
                                            for s in golden.GR2211_EXTRA.values()])
    out.append(Check(f"{golden.GR2211_SPACE}: image + extra fields has dimension 17", extra.dim == 17,
                     f"dimension {extra.dim}"))

    chart2 = get_atlas(parse_flag(golden.GR2212_SPACE)).standard
    fields, z = h4_basis(chart2)
    grading = h4_grading(fields, z)
    for (deg, data), (d, label, v), g in zip(golden.GR2212_H4, fields, grading):
        want = golden.build(data, chart2, golden.GR2212_NAMES)
        ok, bad = is_global(v)
        out.append(Check(f"{golden.GR2212_SPACE}: degree {deg} field {want}",
                         v == want and d == deg and g == deg and ok,
                         f"computed {v}, z-eigenvalue {g}, global {ok}"))
    zw = golden.build(golden.GR2212_Z, chart2, golden.GR2212_NAMES)
    out.append(Check(f"{golden.GR2212_SPACE}: z = {zw}", z == zw and is_global(z)[0]))
    return out


def h4(**_):
    out = []
    flag = parse_flag(golden.GR2212_SPACE)
    chart = get_atlas(flag).standard
    fields, z = h4_basis(chart)
    vecs = [v for _, _, v in fields]
    span = Subspace(vecs)
    out.append(Check("H4 basis is linearly independent", span.dim == 15, f"dimension {span.dim}"))
    closed = all(field_bracket(a, b) in span for a, b in itertools.combinations_with_replacement(vecs, 2))
    out.append(Check("H4 span is closed under the bracket", closed))
    full = Subspace(vecs + [z])
    ad_z = all(field_bracket(z, v) in span for v in vecs)
    out.append(Check("z normalizes H4", ad_z))
    rep = solve_global_fields(flag, 2)
    same = rep.dimension == 16 and all(v in full for v in rep.basis)
    out.append(Check("solver space equals H4 + <z>", same,
                     f"solver dimension {rep.dimension}, stabilized {rep.stabilized}"))
    grades = h4_grading(fields + [(0, "z", z)], z)
    dims = [sum(1 for g in grades if g == d) for d in (-1, 0, 1, 2)]
    out.append(Check("z-eigenspace dimensions of H4 + <z> are (4, 7, 4, 1)", dims == [4, 7, 4, 1], f"{dims}"))
    df, degrees = h4_from_df()
    df_span = Subspace(df)
    df_dims = _graded_dims(df, degrees)
    out.append(Check("D_f model has graded dimensions (4, 6, 4, 1)", df_dims == [4, 6, 4, 1] and df_span.dim == 15,
                     f"{df_dims}, total {df_span.dim}"))
    df_closed = all(field_bracket(a, b) in df_span for a, b in itertools.combinations_with_replacement(df, 2))
    out.append(Check("D_f span is closed under the bracket", df_closed))
    mu_span = Subspace([fundamental_field(X, chart) for X in gl_basis(2, 2)])
    theta = vecs[-1]
    out.append(Check("gl image has dimension 15 and excludes theta", mu_span.dim == 15 and theta not in mu_span,
                     f"dimension {mu_span.dim}"))
    return out


def _graded_dims(fields, degrees):
    out = []
    for d in (-1, 0, 1, 2):
        out.append(Subspace([f for f, g in zip(fields, degrees) if g == d]).dim)
    return out


def bwb_table(max_m: int = 4, max_n: int = 4, **_):
    out = []
    bad = []
    for N in range(1, 5):
        for top in itertools.product(range(-2, 3), repeat=N):
            if any(a < b for a, b in zip(top, top[1:])):
                continue
            w = Weight(top, ())
            if weyl_dim(w) != gelfand_tsetlin_dim(w):
                bad.append(str(top))
    out.append(Check("Weyl dimension agrees with Gelfand-Tsetlin count on gl_1..gl_4", not bad,
                     f"mismatches: {bad[:5]}"))
    try:
        weyl_dim(Weight((0, 1, -1), ()))
        rejects = False
    except NotDominant:
        rejects = True
    out.append(Check("weyl_dim rejects non-dominant weights", rejects))
    records = section_table(max_m, max_n)
    for r in records:
        key = f"(m,n,k1,l1)=({r['m']},{r['n']},{r['k1']},{r['l1']})"
        detail = f"dimension {r['dimension']}, table {r['expected']}, rows {[i + 1 for i in r['rows']]}"
        if r["overlap"]:
            detail += " (overlapping rows agree)"
        out.append(Check(key, r["match"], detail))
    return out


def functions(space=None, **_):
    cases = {str(parse_flag(space)): None} if space else FUNCTION_CASES
    out = []
    for s, want in cases.items():
        rep = solve_global_functions(s, 2)
        ok = rep.stabilized and (want is None or rep.dimension == want)
        out.append(Check(f"{parse_flag(s)}: global functions = {want if want is not None else '?'}", ok,
                         f"dimension {rep.dimension} (next {rep.dimension_next}), stabilized {rep.stabilized}"))
    return out


def lift(**_):
    flag = parse_flag(LIFT_SPACE)
    base = get_atlas(flag.base()).standard
    fields, _ = h4_basis(base)
    theta = fields[-1][2]
    res = lift_query(theta, flag)
    detail = "; ".join(c["equation"] for c in res.certificate) if res.certificate else (
        f"witness {res.witness}; derived {res.local.derived}")
    out = [Check(f"{flag}: theta admits no global lift", not res.feasible, detail)]
    control = fundamental_field(GlElement(2, 2, {(2, 1): 1}), base)
    res2 = lift_query(control, flag)
    want = fundamental_field(GlElement(2, 2, {(2, 1): 1}), get_atlas(flag).standard)
    out.append(Check(f"{flag}: mu(E21) lifts to its fundamental field", res2.feasible and res2.witness == want,
                     f"witness {res2.witness}"))
    return out


SUITES = {
    "homomorphism": homomorphism,
    "kernel": kernel,
    "golden-fields": golden_fields,
    "h4": h4,
    "bwb-table": bwb_table,
    "functions": functions,
    "lift": lift,
}


def run_suite(name: str, **kwargs) -> list[Check]:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    return SUITES[name](**kwargs)
