import json

import pytest

from superflag import golden
from superflag.fields import SuperDerivation, field_bracket, fundamental_field, is_projectable, project
from superflag.flag_atlas import get_atlas, parse_flag
from superflag.global_solver import (SolveReport, ansatz_monomials, is_global, lift_query, mu_image_rank,
                                     mu_kernel, solve_global_fields, solve_global_functions,
                                     vertical_directions)
from superflag.lie_superalgebra import GlElement, Subspace, gl_basis, h4_basis, identity
from superflag.linalg import nullspace

# Independent oracles: sl_2, sl_3 on projective spaces; W_n = Der of a Grassmann
# algebra on n generators (dim n 2^n) for purely odd spaces.
CLASSICAL = {
    "Gr(2|0; 1|0)": (3, 1),
    "Gr(3|0; 1|0)": (8, 1),
    "Gr(1|1; 0|1)": (2, 2),
    "Gr(1|1; 1|0)": (2, 2),
    "Gr(1|2; 0|2)": (8, 4),
    "Gr(1|2; 1|0)": (8, 4),
}


@pytest.mark.parametrize("space", sorted(CLASSICAL))
def test_classical_and_purely_odd_spaces(space):
    fields, funcs = CLASSICAL[space]
    rep = solve_global_fields(space)
    assert rep.stabilized and rep.dimension == fields
    f = solve_global_functions(space)
    assert f.stabilized and f.dimension == funcs


def test_ansatz_counts_even_degree():
    chart = get_atlas(parse_flag("Gr(1|1; 0|1)")).standard
    # single odd coordinate: 1 and xi
    assert len(ansatz_monomials(chart, 0)) == 2
    chart = get_atlas(parse_flag("Gr(2|0; 1|0)")).standard
    assert len(ansatz_monomials(chart, 2)) == 3


def _solver_span(space, D=2, **kw):
    rep = solve_global_fields(space, D, **kw)
    return rep, Subspace(rep.basis)


def test_gr2211_decomposes_as_image_plus_two():
    rep, span = _solver_span("Gr(2|2; 1|1)")
    chart = get_atlas(parse_flag("Gr(2|2; 1|1)")).standard
    image = [fundamental_field(X, chart) for X in gl_basis(2, 2)]
    extra = [golden.build(s, chart, golden.GR2211_NAMES) for s in golden.GR2211_EXTRA.values()]
    assert rep.dimension == 17
    assert Subspace(image).dim == 15
    assert all(v in span for v in image + extra)
    assert Subspace(image + extra).dim == 17


def _eigen_dims(basis, z, values):
    """dim {v in span(basis) : [z, v] = d v} for each d; basis must be independent."""
    out = []
    for d in values:
        cols = [(field_bracket(z, b) - b.scale(d)).vector() for b in basis]
        rows = {}
        for i, v in enumerate(cols):
            for key, c in v.items():
                rows.setdefault(key, {})[i] = c
        out.append(len(nullspace(rows.values(), list(range(len(basis))))))
    return out


def test_gr2212_grading_by_z():
    rep, span = _solver_span("Gr(2|2; 1|2)")
    _, z = h4_basis(rep.basis[0].chart)
    assert z in span
    assert _eigen_dims(rep.basis, z, (-1, 0, 1, 2)) == [4, 7, 4, 1]


def test_flag_has_one_field_beyond_pgl():
    # DERIVED: the solver finds 16, one more than the image of gl(2|2)
    flag = parse_flag("F(2|2; 1,1 | 2,1)")
    chart = get_atlas(flag).standard
    rep, span = _solver_span(flag)
    image = Subspace([fundamental_field(X, chart) for X in gl_basis(2, 2)])
    assert rep.stabilized and rep.dimension == 16 and image.dim == 15
    extra = [v for v in rep.basis if v not in image]
    assert extra
    v = extra[0]
    assert is_global(v)[0]
    ok, _ = is_projectable(v)
    assert ok
    theta = h4_basis(get_atlas(flag.base()).standard)[0][-1][2]
    base_image = Subspace([fundamental_field(X, get_atlas(flag.base()).standard) for X in gl_basis(2, 2)])
    p = project(v)
    assert p not in base_image
    assert Subspace(list(base_image.generators) + [theta]).contains(p)


@pytest.mark.parametrize("space", ["F(2|2; 1,1 | 2,1)", "F(2|2; 1,0 | 2,1)"])
def test_no_vertical_fields(space):
    chart = get_atlas(parse_flag(space)).standard
    rep = solve_global_fields(space, 2, directions=vertical_directions(chart))
    assert rep.stabilized and rep.dimension == 0


def test_degenerate_flag_at_degree_three():
    rep = solve_global_fields("F(1|2; 0,0 | 2,1)", 3)
    assert rep.stabilized and rep.dimension == 20


def test_instability_is_reported():
    rep = solve_global_fields("Gr(2|2; 1|1)", 0)
    assert not rep.stabilized and rep.dimension < rep.dimension_next


def test_report_json_round_trip():
    rep = solve_global_fields("Gr(2|1; 1|1)")
    back = SolveReport.from_json(json.loads(rep.dumps()))
    assert back == rep
    assert all(isinstance(b, SuperDerivation) for b in back.basis)
    f = solve_global_functions("Gr(1|2; 0|2)")
    assert SolveReport.from_json(json.loads(f.dumps())) == f


@pytest.mark.parametrize("space", ["Gr(2|1; 1|1)", "Gr(3|1; 1|0)", "F(2|2; 1,1 | 2,1)"])
def test_kernel_is_identity(space):
    flag = parse_flag(space)
    ker = mu_kernel(flag)
    assert len(ker) == 1 and Subspace([identity(flag.m, flag.n)]).contains(ker[0])
    assert mu_image_rank(flag) == (flag.m + flag.n) ** 2 - 1


def test_is_global_detects_singular_field():
    chart = get_atlas(parse_flag("Gr(2|0; 1|0)")).standard
    V = chart.variables()
    x = V["x1_11"]
    assert is_global(SuperDerivation(chart, {"x1_11": x * x}))[0]
    ok, bad = is_global(SuperDerivation(chart, {"x1_11": x * x * x}))
    assert not ok and bad


@pytest.fixture(scope="module")
def theta_lift():
    flag = parse_flag("F(2|2; 1,1 | 2,1)")
    theta = h4_basis(get_atlas(flag.base()).standard)[0][-1][2]
    return lift_query(theta, flag)


def test_theta_lift_witness(theta_lift):
    # DERIVED: with consistent fiber signs the lift exists; the vertical part is (-y xi1 - xi2) d/deta
    res = theta_lift
    assert res.feasible
    chart = res.witness.chart
    V = chart.variables()
    y, xi1, xi2 = V["y2_11"], V["xi1_11"], V["xi1_12"]
    want = SuperDerivation(chart, {"x1_11": xi1 * xi2, "eta2_11": -(y * xi1) - xi2})
    assert res.witness == want
    assert is_global(res.witness)[0]
    assert project(res.witness) == project(want)


def test_theta_local_analysis(theta_lift):
    loc = theta_lift.local
    assert loc.consistent and not loc.contradiction
    assert loc.functions == {"f": "y^2_{11}", "g": "η^2_{11}"}
    assert loc.derived["∂g/∂ξ^1_{11}"] == "-y^2_{11}"
    assert loc.derived["∂g/∂ξ^1_{12}"] == "-1"
    assert loc.derived["∂g/∂y^2_{11}"] == "-ξ^1_{11}"
    nontrivial = [c for c in loc.checks if not c["trivial"]]
    assert nontrivial and all(c["consistent"] for c in nontrivial)


def test_lift_of_fundamental_field():
    flag = parse_flag("F(2|2; 1,1 | 2,1)")
    X = GlElement(2, 2, {(2, 1): 1})
    res = lift_query(fundamental_field(X, get_atlas(flag.base()).standard), flag)
    assert res.feasible and res.witness == fundamental_field(X, get_atlas(flag).standard)


def test_lift_certificate_for_singular_base_field():
    flag = parse_flag("F(2|2; 1,1 | 2,1)")
    base = get_atlas(flag.base()).standard
    x = base.variables()["x1_11"]
    res = lift_query(SuperDerivation(base, {"x1_11": x * x * x}), flag)
    assert not res.feasible and res.witness is None
    assert any(c["kind"] == "regularity" for c in res.certificate)
