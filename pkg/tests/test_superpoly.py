
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from strategies import TABLE, homogeneous_polys, polys, units
from superflag.superpoly import (RationalSuperFunction, SuperPolynomial, VarTable, divmod_even,
                                 exact_divide, rf_is_regular, sp_invert, sp_partial, sp_substitute)

V = {n: SuperPolynomial.var(TABLE, n) for n in TABLE.names}
x, y, a, b, c = (V[n] for n in ("x", "y", "a", "b", "c"))


def test_odd_variables_anticommute():
    assert a * b == -(b * a)
    assert a * a == SuperPolynomial.zero(TABLE)
    assert (a * b * c) == -(c * b * a)


def test_even_commute_with_odd():
    assert x * a == a * x
    assert (x + a) * (x + a) == x * x + (x * a).scale(2)


def test_left_derivative_sign():
    # d/db (a b) = -a with the left derivative
    assert sp_partial(a * b, "b") == -a
    assert sp_partial(a * b, "a") == b
    assert sp_partial(x * x * y, "x") == (x * y).scale(2)


def test_parity_and_body():
    f = x * y + a * b + x * a
    assert f.parity() is None
    assert f.parity_part(0) == x * y + a * b
    assert f.body() == x * y
    assert (a * b).parity() == 0


def test_nilpotent_even_variable():
    t = VarTable(["t", "x"], ["a"], nilpotent=["t"])
    T = SuperPolynomial.var(t, "t")
    X = SuperPolynomial.var(t, "x")
    assert T * T == SuperPolynomial.zero(t)
    assert (1 + T) * (1 - T) == SuperPolynomial.const(t, 1)
    assert (T * X) * (T * X) == SuperPolynomial.zero(t)


def test_divmod_and_exact_divide():
    d = x + 1
    q, r = divmod_even(x * x * a - a, d)
    assert r == SuperPolynomial.zero(TABLE)
    assert q == (x - 1) * a
    assert exact_divide((x * x - 1) * b, d) == (x - 1) * b
    assert exact_divide(x * x + 1, d) is None


def test_rational_reduction_and_regularity():
    f = RationalSuperFunction.over((x * x - 1) * a, x - 1)
    ok, p = rf_is_regular(f)
    assert ok and p == (x + 1) * a
    g = RationalSuperFunction.over(a, x)
    assert not rf_is_regular(g)[0]
    assert g * RationalSuperFunction.from_poly(x) == RationalSuperFunction.from_poly(a)


def test_json_round_trip():
    f = RationalSuperFunction.over(x * a + b, x * y + 1, 2)
    assert RationalSuperFunction.from_json(TABLE, f.to_json()) == f
    p = x * a * b - y
    assert SuperPolynomial.from_json(TABLE, p.to_json()) == p


def test_substitute_parity_check():
    with pytest.raises(ValueError):
        sp_substitute(a, {"a": RationalSuperFunction.from_poly(x)})


def test_quotient_rule():
    f = RationalSuperFunction.over(a, x)
    assert f.partial("x") == RationalSuperFunction.over(-a, x, 2)
    assert f.partial("a") == RationalSuperFunction.over(SuperPolynomial.const(TABLE, 1), x)


# -- property suites ---------------------------------------------------------

@given(polys(), polys(), polys())
def test_ring_axioms(f, g, h):
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h


@given(homogeneous_polys(), homogeneous_polys())
def test_supercommutativity(fp, gp):
    (p, f), (q, g) = fp, gp
    sign = -1 if p * q else 1
    assert f * g == (g * f).scale(sign)


@given(st.sampled_from(TABLE.names), st.sampled_from(TABLE.names), polys(max_terms=5))
def test_partials_supercommute(u, v, f):
    # d_u d_v = (-1)^{p(u)p(v)} d_v d_u; for two odd variables the partials anticommute
    s = -1 if TABLE.parity(u) * TABLE.parity(v) else 1
    assert sp_partial(sp_partial(f, v), u) == sp_partial(sp_partial(f, u), v).scale(s)


@given(st.sampled_from(TABLE.odd), st.sampled_from(TABLE.odd), polys(max_terms=5))
def test_odd_partials_anticommute(u, v, f):
    assert sp_partial(sp_partial(f, v), u) == -sp_partial(sp_partial(f, u), v)


@given(st.sampled_from(TABLE.names), homogeneous_polys(), polys())
def test_leibniz_rule(v, fp, g):
    p, f = fp
    s = -1 if p * TABLE.parity(v) else 1
    assert sp_partial(f * g, v) == sp_partial(f, v) * g + (f * sp_partial(g, v)).scale(s)


@given(units())
def test_inverse_round_trip(u):
    inv = sp_invert(u)
    one = RationalSuperFunction.const(TABLE, 1)
    assert inv * RationalSuperFunction.from_poly(u) == one
    assert RationalSuperFunction.from_poly(u).invert() == inv


@given(polys(), units())
def test_rational_division_round_trip(f, u):
    F = RationalSuperFunction.from_poly(f)
    U = RationalSuperFunction.from_poly(u)
    assert (F / U) * U == F


@settings(max_examples=300)
@given(polys(max_terms=3), polys(max_terms=3), units())
def test_substitution_is_a_homomorphism(f, g, u):
    images = {"x": RationalSuperFunction.from_poly(y + a * b),
              "a": RationalSuperFunction.from_poly(c) / RationalSuperFunction.from_poly(u),
              "b": RationalSuperFunction.from_poly(x * a + b)}
    lhs = sp_substitute(f * g, images, TABLE)
    rhs = sp_substitute(f, images, TABLE) * sp_substitute(g, images, TABLE)
    assert lhs == rhs
