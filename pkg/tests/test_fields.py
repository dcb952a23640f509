from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from strategies import TABLE, homogeneous_polys, polys
from superflag import golden
from superflag.fields import (SuperDerivation, eigenvalue, field_bracket, fundamental_field, is_projectable,
                              project, pushforward)
from superflag.flag_atlas import get_atlas, parse_flag
from superflag.lie_superalgebra import E, GlElement, gl_basis, gl_bracket
from superflag.superpoly import RationalSuperFunction, SuperPolynomial

GR2211 = parse_flag("Gr(2|2; 1|1)")
FLAG = parse_flag("F(2|2; 1,1 | 2,1)")
FLAG_NAMES = {"x": "x1_11", "xi1": "xi1_11", "xi2": "xi1_12", "eta": "eta2_11", "y": "y2_11"}


def test_golden_gr2211_fields():
    chart = get_atlas(GR2211).standard
    for (a, b), data in golden.GR2211_MU.items():
        assert fundamental_field(E(2, 2, a, b), chart) == golden.build(data, chart, golden.GR2211_NAMES), (a, b)


def test_flag_fundamental_fields_hand_derived():
    # derived by hand from (1 + t E_ab) Z_1, C Z_2 and renormalization
    chart = get_atlas(FLAG).standard
    want = {
        (1, 3): {"xi1": [(1, "")]},
        (1, 4): {"xi2": [(1, "")]},
        (3, 2): {"x": [(1, "xi1")], "eta": [(1, "")]},
        (4, 2): {"x": [(1, "xi2")], "eta": [(-1, "y")]},
        (3, 4): {"y": [(1, "")], "xi2": [(-1, "xi1")]},
    }
    for (a, b), data in want.items():
        assert fundamental_field(E(2, 2, a, b), chart) == golden.build(data, chart, FLAG_NAMES), (a, b)


def test_bracket_reverses_order_on_basis():
    chart = get_atlas(GR2211).standard
    mu = {(a, b): fundamental_field(E(2, 2, a, b), chart) for a in range(1, 5) for b in range(1, 5)}
    # [mu E12, mu E21] = -(mu E11 - mu E22) = mu([E21, E12])
    lhs = field_bracket(mu[(1, 2)], mu[(2, 1)])
    assert lhs == mu[(2, 2)] - mu[(1, 1)]
    assert lhs == fundamental_field(gl_bracket(E(2, 2, 2, 1), E(2, 2, 1, 2)), chart)


def test_identity_acts_trivially():
    chart = get_atlas(FLAG).standard
    X = GlElement(2, 2, {(i, i): 1 for i in range(1, 5)})
    assert not fundamental_field(X, chart)


def test_fundamental_fields_project_to_base():
    chart = get_atlas(FLAG).standard
    base = get_atlas(FLAG.base()).standard
    for X in gl_basis(2, 2):
        v = fundamental_field(X, chart)
        ok, _ = is_projectable(v)
        assert ok
        assert project(v) == fundamental_field(X, base)


def test_non_projectable_field_detected():
    chart = get_atlas(FLAG).standard
    V = chart.variables()
    v = SuperDerivation(chart, {"x1_11": V["y2_11"]})
    ok, (w, _) = is_projectable(v)
    assert not ok and w == "x1_11"


def test_eigenvalue_helper():
    chart = get_atlas(GR2211).standard
    v = fundamental_field(E(2, 2, 1, 2), chart)
    assert eigenvalue(v.scale(3), v) == 3
    assert eigenvalue(fundamental_field(E(2, 2, 1, 1), chart), v) is None


def test_json_round_trip():
    chart = get_atlas(FLAG).standard
    v = fundamental_field(E(2, 2, 2, 3), chart)
    assert SuperDerivation.from_json(v.to_json()) == v
    w = SuperDerivation(TABLE, {"a": SuperPolynomial.var(TABLE, "x")})
    assert SuperDerivation.from_json(w.to_json()) == w


def test_display_uses_greek_letters():
    chart = get_atlas(GR2211).standard
    assert str(fundamental_field(E(2, 2, 1, 3), chart)) == "η^1_{11}∂/∂x^1_{11} + y^1_{11}∂/∂ξ^1_{11}"


# -- property suites ---------------------------------------------------------

@st.composite
def homogeneous_fields(draw, max_terms=2):
    p = draw(st.integers(0, 1))
    coeffs = {}
    for v in draw(st.sets(st.sampled_from(TABLE.names), min_size=1, max_size=2)):
        coeffs[v] = draw(polys(max_terms=max_terms, max_exp=1, parity=(p + TABLE.parity(v)) % 2))
    return p, SuperDerivation(TABLE, coeffs)


@given(homogeneous_fields(), homogeneous_polys(max_terms=3), polys(max_terms=3))
def test_leibniz_for_derivations(dp, fp, g):
    (pd, D), (pf, f) = dp, fp
    s = -1 if pd * pf else 1
    F = RationalSuperFunction.from_poly(f)
    G = RationalSuperFunction.from_poly(g)
    assert D.apply(F * G) == D.apply(F) * G + F * D.apply(G) * s


@given(homogeneous_fields(), homogeneous_fields(), homogeneous_fields())
def test_super_jacobi_for_fields(ap, bp, cp):
    (pa, a), (pb, b), (_, c) = ap, bp, cp
    s = -1 if pa * pb else 1
    lhs = field_bracket(a, field_bracket(b, c))
    rhs = field_bracket(field_bracket(a, b), c) + field_bracket(b, field_bracket(a, c)).scale(s)
    assert lhs == rhs


@given(homogeneous_fields(), homogeneous_fields(), polys(max_terms=3))
def test_bracket_is_the_supercommutator_of_actions(ap, bp, f):
    (pa, a), (pb, b) = ap, bp
    s = -1 if pa * pb else 1
    F = RationalSuperFunction.from_poly(f)
    assert field_bracket(a, b).apply(F) == a.apply(b.apply(F)) - b.apply(a.apply(F)) * s


EQUIVARIANCE_SPACES = ["Gr(2|2; 1|1)", "Gr(2|1; 1|1)", "Gr(2|2; 1|2)", "F(2|2; 1,1 | 2,1)"]


@st.composite
def gl_elements(draw, m, n):
    N = m + n
    entries = {}
    for _ in range(draw(st.integers(1, 3))):
        a, b = draw(st.integers(1, N)), draw(st.integers(1, N))
        entries[(a, b)] = entries.get((a, b), 0) + Fraction(draw(st.integers(-2, 2)))
    return GlElement(m, n, entries)


@settings(max_examples=1000)
@given(st.data())
def test_pushforward_equivariance(data):
    flag = parse_flag(data.draw(st.sampled_from(EQUIVARIANCE_SPACES)))
    atlas = get_atlas(flag)
    src = data.draw(st.sampled_from(atlas.charts))
    dst = data.draw(st.sampled_from(atlas.charts))
    X = data.draw(gl_elements(flag.m, flag.n))
    assert pushforward(fundamental_field(X, src), dst) == fundamental_field(X, dst)


@settings(max_examples=1000)
@given(st.data())
def test_pushforward_preserves_brackets(data):
    atlas = get_atlas(GR2211)
    src = atlas.standard
    dst = data.draw(st.sampled_from(atlas.charts))

    def field():
        p = data.draw(st.integers(0, 1))
        coeffs = {}
        for v in data.draw(st.sets(st.sampled_from(src.names), min_size=1, max_size=2)):
            coeffs[v] = data.draw(polys(table=src.table, max_terms=2, max_exp=1,
                                        parity=(p + src.table.parity(v)) % 2))
        return SuperDerivation(src, coeffs)

    a, b = field(), field()
    assert pushforward(field_bracket(a, b), dst) == field_bracket(pushforward(a, dst), pushforward(b, dst))
