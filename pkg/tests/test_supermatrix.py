import pytest
from hypothesis import given
from hypothesis import strategies as st

from strategies import TABLE, polys, units
from superflag.superpoly import RationalSuperFunction, SuperPolynomial
from superflag.supermatrix import SingularMatrix, SuperMatrix, mat_inverse, mat_mul

V = {n: SuperPolynomial.var(TABLE, n) for n in TABLE.names}


def _nilpotent_even(draw):
    p = draw(polys(max_terms=2, max_exp=1, parity=0))
    return SuperPolynomial(TABLE, {k: v for k, v in p.terms.items() if k[1]})


@st.composite
def invertible(draw):
    """Even supermatrix whose even blocks have invertible bodies (diagonal units plus nilpotents)."""
    p, q = draw(st.sampled_from([(1, 1), (2, 1), (1, 2), (2, 0), (0, 2)]))
    par = [0] * p + [1] * q
    entries = []
    for i, ri in enumerate(par):
        row = []
        for j, cj in enumerate(par):
            if ri != cj:
                row.append(draw(polys(max_terms=2, max_exp=1, parity=1)))
            elif i == j:
                row.append(draw(units()))
            else:
                row.append(_nilpotent_even(draw))
        entries.append(row)
    return SuperMatrix(TABLE, entries, par, par)


def test_two_by_two_inverse():
    x, y, a, b = V["x"], V["y"], V["a"], V["b"]
    M = SuperMatrix(TABLE, [[x, a], [b, y]], [0, 1], [0, 1])
    Mi = mat_inverse(M)
    one = SuperMatrix.identity(TABLE, [0, 1])
    assert mat_mul(M, Mi) == one
    assert mat_mul(Mi, M) == one
    # top-left entry is (x - a y^{-1} b)^{-1}
    expected = RationalSuperFunction.from_poly(y) / RationalSuperFunction.from_poly(x * y - a * b)
    assert Mi[0, 0] == expected


def test_singular_body_raises():
    a, b = V["a"], V["b"]
    M = SuperMatrix(TABLE, [[a * b, a], [b, SuperPolynomial.const(TABLE, 1)]], [0, 1], [0, 1])
    with pytest.raises(SingularMatrix):
        mat_inverse(M)


def test_odd_matrix_rejected():
    a = V["a"]
    with pytest.raises(ValueError):
        mat_inverse(SuperMatrix(TABLE, [[a]], [0], [0]))


@given(invertible())
def test_inverse_round_trip(M):
    Mi = mat_inverse(M)
    one = SuperMatrix.identity(TABLE, M.row_par)
    assert mat_mul(M, Mi) == one
    assert mat_mul(Mi, M) == one
