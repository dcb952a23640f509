from collections import Counter

import pytest
from hypothesis import given, strategies as st

from superflag import golden
from superflag.fields import SuperDerivation, fundamental_field
from superflag.flag_atlas import get_atlas, parse_flag
from superflag.lie_superalgebra import GlElement, h4_basis
from superflag.weights import (NotDominant, Weight, bwb_sections, eq11_expected, gelfand_tsetlin_dim,
                               is_dominant, psi_weights, restrict, section_table, weight_of, weyl_dim)


def W(m, n, **terms):
    """W(3, 0, mu1=1, mu3=-1) -> mu_1 - mu_3."""
    return Weight.from_terms(m, n, {(k[:-1], int(k[-1])): c for k, c in terms.items()})


@pytest.fixture(scope="module")
def gr2211():
    return get_atlas(parse_flag("Gr(2|2; 1|1)")).standard


def test_weight_arithmetic_and_display():
    a = W(2, 2, mu1=1, lam2=-1)
    b = W(2, 2, mu2=1, lam1=-1)
    assert (a + b) - b == a
    assert (-a + a).is_zero()
    assert str(W(2, 2, lam1=1, mu2=-1)) == "λ1 - μ2"
    assert Weight.from_json(a.to_json()) == a


def test_weight_of_examples(gr2211):
    xi_deta = golden.build(golden.GR2211_EXTRA["xi d/deta"], gr2211, golden.GR2211_NAMES)
    eta_dxi = golden.build(golden.GR2211_EXTRA["eta d/dxi"], gr2211, golden.GR2211_NAMES)
    extra = W(2, 2, mu1=1, mu2=1, lam1=-1, lam2=-1)
    assert weight_of(xi_deta) == extra
    assert weight_of(eta_dxi) == -extra

    chart = get_atlas(parse_flag("Gr(2|2; 1|2)")).standard
    theta = h4_basis(chart)[0][-1][2]
    assert weight_of(theta) == extra

    V = gr2211.variables()
    assert weight_of(SuperDerivation(gr2211, {"x1_11": 1 + V["x1_11"]})) is None
    assert weight_of(SuperDerivation(gr2211)) is None


def test_fundamental_field_weights_form_root_system(gr2211):
    got = Counter()
    for a in range(1, 5):
        for b in range(1, 5):
            w = weight_of(fundamental_field(GlElement(2, 2, {(a, b): 1}), gr2211))
            e = [0] * 4
            e[b - 1] += 1
            e[a - 1] -= 1
            assert w == Weight(tuple(e[:2]), tuple(e[2:]))
            got[w] += 1
    for data in golden.GR2211_EXTRA.values():
        got[weight_of(golden.build(data, gr2211, golden.GR2211_NAMES))] += 1
    roots = [w for w in got if not w.is_zero()]
    assert got[Weight.zero(2, 2)] == 4
    assert len(roots) == 12 + 2
    extra = W(2, 2, mu1=1, mu2=1, lam1=-1, lam2=-1)
    assert got[extra] == got[-extra] == 1


def test_dominance():
    assert is_dominant(W(3, 0, mu1=1, mu3=-1))
    assert is_dominant(W(2, 3, mu1=1, lam3=-1))
    assert not is_dominant(W(2, 2, mu2=1, lam1=-1))
    # both extra weights are constant on each block, hence dominant
    extra = W(2, 2, mu1=1, mu2=1, lam1=-1, lam2=-1)
    assert is_dominant(extra) and is_dominant(-extra)


def test_weyl_dim_examples():
    assert weyl_dim(W(3, 0, mu1=1, mu3=-1)) == 8
    assert weyl_dim(W(2, 3, mu1=1, lam3=-1)) == 2 * 3
    assert weyl_dim(Weight.zero(4, 4)) == 1
    assert weyl_dim(W(0, 4, lam1=1, lam4=-1)) == 15
    with pytest.raises(NotDominant):
        weyl_dim(W(3, 0, mu2=1, mu1=-1))


dominant_gl = st.integers(1, 4).flatmap(
    lambda N: st.lists(st.integers(-3, 3), min_size=N, max_size=N).map(lambda v: tuple(sorted(v, reverse=True))))


@given(dominant_gl)
def test_weyl_dim_matches_gelfand_tsetlin(top):
    w = Weight(top, ())
    assert weyl_dim(w) == gelfand_tsetlin_dim(w)
    shifted = Weight(tuple(a + 1 for a in top), ())
    assert weyl_dim(shifted) == weyl_dim(w)


def test_restrict_keeps_last_entries():
    w = Weight((3, 2, 1), (0, -1))
    assert restrict(w, 2, 1) == Weight((2, 1), (-1,))


def test_psi_generic_weights():
    rep = psi_weights(3, 3, 1, 1)
    assert Counter(rep.weights) == Counter({W(3, 3, mu3=1, lam3=-1): 1, W(3, 3, lam3=1, mu3=-1): 1,
                                            Weight.zero(3, 3): 1})
    assert rep.local_dimension() == 3
    assert psi_weights(2, 1, 1, 1).local_dimension() == 3
    with pytest.raises(ValueError):
        psi_weights(2, 2, 3, 0)


def test_bwb_examples():
    assert bwb_sections(psi_weights(3, 3, 1, 1))[0] == 1
    assert bwb_sections(psi_weights(2, 3, 2, 1))[0] == 10
    assert bwb_sections(psi_weights(3, 2, 1, 0))[0] == 0


def test_exceptional_local_dimensions():
    assert psi_weights(2, 2, 1, 1, case="a").local_dimension() == 17
    assert psi_weights(2, 2, 1, 1, case="b+").local_dimension() == 16
    assert psi_weights(2, 2, 1, 1, case="b-").local_dimension() == 16
    with pytest.raises(ValueError):
        psi_weights(2, 2, 1, 1, case="c")


def test_generic_row_is_one_dimensional():
    for m in range(2, 5):
        for n in range(2, 5):
            for k in range(1, m):
                for l in range(1, n):
                    assert bwb_sections(psi_weights(m, n, k, l))[0] == 1


def test_section_table_matches_every_row():
    records = section_table(4, 4)
    assert len(records) == sum((m + 1) * (n + 1) - 2 for m in range(1, 5) for n in range(1, 5))
    assert all(r["match"] for r in records)
    overlaps = [r for r in records if r["overlap"]]
    assert overlaps and all(r["expected"] == r["dimension"] for r in overlaps)


def test_eq11_expected_outside_table():
    assert eq11_expected(2, 2, 0, 0) is None
