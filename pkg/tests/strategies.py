"""Hypothesis strategies shared by the property suites."""

from fractions import Fraction

from hypothesis import strategies as st

from superflag.superpoly import SuperPolynomial, VarTable

TABLE = VarTable(["x", "y"], ["a", "b", "c"])
COEFF = st.integers(-3, 3).filter(bool).map(Fraction)


@st.composite
def monomials(draw, table=TABLE, max_exp=2, parity=None):
    exps = tuple(draw(st.integers(0, max_exp)) for _ in table.even)
    odd = draw(st.sets(st.integers(0, len(table.odd) - 1)))
    if parity is not None and len(odd) % 2 != parity:
        if odd:
            odd = set(sorted(odd)[1:])
        else:
            odd = {draw(st.integers(0, len(table.odd) - 1))}
    return SuperPolynomial.monomial(table, exps, sorted(odd), draw(COEFF))


@st.composite
def polys(draw, table=TABLE, max_terms=4, max_exp=2, parity=None):
    out = SuperPolynomial.zero(table)
    for _ in range(draw(st.integers(0, max_terms))):
        out = out + draw(monomials(table, max_exp, parity))
    return out


@st.composite
def homogeneous_polys(draw, table=TABLE, max_terms=4, max_exp=2):
    p = draw(st.integers(0, 1))
    return p, draw(polys(table, max_terms, max_exp, parity=p))


@st.composite
def units(draw, table=TABLE):
    """Even polynomials with nonzero constant term, hence a nonzero body."""
    rest = draw(polys(table, max_terms=3, max_exp=1, parity=0))
    return rest + SuperPolynomial.const(table, draw(COEFF) - rest.constant_term())
