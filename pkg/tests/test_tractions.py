"""Boundary traction families: both splits, their frozen values, and the
virtual-work consistency that pins the signs."""
import numpy as np

from couplestress import energies as en
from couplestress import polyfield as pf
from couplestress import stresses as st
from couplestress import tensors as tn
from couplestress import tractions as tr
from couplestress.energies import Material

X = [pf.Poly3.variable(ax) for ax in range(3)]
ZERO = pf.Poly3.zero()


def quad_state():
    u = pf.as_vec([ZERO, X[0] * X[0], ZERO])
    return st.assemble(u, Material(1.0, 1.0, 1.0, 0.0, 1.0))


def test_surface_moment_matrix_frozen():
    # u = (0, x1^2, 0): m = e1 (x) e3 + e3 (x) e1, n = e1,
    # rows are m_i x n: only row 1 survives with value e2
    state = quad_state()
    face = tr.Face(0, 1.0)
    M = tr.surface_moment_matrix(state.m_curl, face.normal)
    vals = pf.eval_mat(M, np.array([[1.0, 0.5, 0.5]]))[0]
    expect = np.zeros((3, 3))
    expect[0, 1] = 1.0
    assert np.allclose(vals, expect)


def test_surface_moment_matrix_annihilates_normal():
    rng = np.random.default_rng(0)
    state = st.assemble(pf.random_vec_field(rng, 4), Material(1, 1, 1.3, 0.7, 1))
    for face in tr.ALL_FACES:
        M = tr.surface_moment_matrix(state.m_curl, face.normal)
        Mn = tn.matvec(M, face.normal)
        assert pf.max_abs_coeff_vec(Mn) < 1e-13


def test_double_force_is_tangential():
    rng = np.random.default_rng(1)
    state = st.assemble(pf.random_vec_field(rng, 4), Material(1, 1, 1.3, 0.7, 1))
    for face in tr.ALL_FACES:
        for make in (
            lambda: tr.traction_curl_form(state, face),
            lambda: tr.traction_axl_form(state, face, "energetic"),
            lambda: tr.traction_axl_form(state, face, "appendix"),
        ):
            ts = make()
            assert ts.double_force_normal_component() < 1e-13


def test_frozen_double_forces():
    state = quad_state()
    face = tr.Face(0, 1.0)
    cmp = tr.compare_double_forces(state, face)
    g_curl = [face.restrict(cmp["curl"][i]) for i in range(3)]
    g_ap = [face.restrict(cmp["axl-appendix"][i]) for i in range(3)]
    assert g_curl[0].is_zero() and g_curl[2].is_zero()
    assert g_curl[1].coef == {(0, 0, 0): 0.5}
    assert g_ap[0].is_zero() and g_ap[2].is_zero()
    assert g_ap[1].coef == {(0, 0, 0): -0.5}
    # curl route and energetic orientation agree identically; appendix flips
    assert cmp["curl-vs-energetic"] < 1e-14
    assert cmp["curl-plus-appendix"] < 1e-14


def test_frozen_tractions_reduce_to_classical():
    # for this field the correction terms vanish on the face x1 = 1 and
    # both tractions equal sigma.n = (0, 2, 0)
    state = quad_state()
    face = tr.Face(0, 1.0)
    for ts in (
        tr.traction_curl_form(state, face),
        tr.traction_axl_form(state, face, "energetic"),
    ):
        t = [face.restrict(ts.traction[i]) for i in range(3)]
        assert t[0].is_zero() and t[2].is_zero()
        assert t[1].coef == {(0, 0, 0): 2.0}


def test_face_work_totals_agree_termwise_differ():
    state = quad_state()
    face = tr.Face(0, 1.0)
    bump = tr.face_bump(face, direction=1)
    comp = tr.face_work_comparison(state, face, bump)
    assert comp["total_gap"] < 1e-8
    # the appendix split moves 2 * (1/30)^2 / 2 = 1/900 between the terms
    assert abs(comp["termwise_double_force_gap"] - 1.0 / 900.0) < 1e-12
    assert comp["termwise_double_force_gap"] > 1e-3


def test_closed_boundary_work_is_route_independent():
    rng = np.random.default_rng(2)
    mat = Material(1.0, 0.5, 1.2, 0.8, 1.0)
    for _ in range(5):
        state = st.assemble(pf.random_vec_field(rng, 3), mat)
        test_field = pf.random_vec_field(rng, 3)
        w_curl = tr.closed_boundary_work(state, test_field, "curl")
        w_axl = tr.closed_boundary_work(state, test_field, "axl")
        w_vol = tr.volume_virtual_work(state, test_field)
        scale = max(1.0, abs(w_vol))
        assert abs(w_curl - w_axl) / scale < 1e-12
        assert abs(w_curl - w_vol) / scale < 1e-12


def test_face_bump_vanishes_on_face_edges():
    face = tr.Face(0, 1.0)
    bump = tr.face_bump(face, direction=1)
    # zero on the four edges of the face and on the opposite face
    pts = np.array(
        [
            [1.0, 0.0, 0.5],
            [1.0, 1.0, 0.5],
            [1.0, 0.5, 0.0],
            [1.0, 0.5, 1.0],
            [0.0, 0.5, 0.5],
        ]
    )
    vals = pf.eval_vec(bump, pts)
    assert np.max(np.abs(vals)) < 1e-15
    # nonzero in the face interior
    inner = pf.eval_vec(bump, np.array([[1.0, 0.5, 0.5]]))
    assert abs(inner[0][1]) > 1e-4


def test_surface_divergence_residual():
    # the tangential divergence identity integrates to zero for fields
    # vanishing on the face boundary
    face = tr.Face(0, 1.0)
    bump = tr.face_bump(face, direction=2)
    assert abs(tr.surface_divergence_residual(face, bump)) < 1e-13


def test_erroneous_variant_differs_from_both():
    # the classical reduced traction with the spin correction dropped:
    # on a field with nonconstant moments it disagrees with both splits
    rng = np.random.default_rng(3)
    mat = Material(1.0, 1.0, 1.0, 1.0, 1.0)
    state = st.assemble(pf.random_vec_field(rng, 4), mat)
    face = tr.Face(0, 1.0)
    wrong = tr.erroneous_mindlin_tiersten(state, face)
    assert wrong.notes.get("erroneous") is True
    right = tr.traction_axl_form(state, face, "energetic")
    gap = pf.max_abs_coeff_vec(
        pf.as_vec(
            [face.restrict(wrong.traction[i] - right.traction[i]) for i in range(3)]
        )
    )
    assert gap > 1e-3


def test_edge_force_nonzero_where_double_force_jumps():
    # edge contributions exist in general; check they evaluate finitely and
    # are nonzero for the standing example on the edge shared with x2 faces
    state = quad_state()
    face = tr.Face(0, 1.0)
    e = tr.edge_force(state, face, edge_axis=2, edge_value=1.0,
                      formulation="curl")
    vals = [e[i].eval(np.array([[1.0, 0.5, 1.0]]))[0] for i in range(3)]
    assert all(np.isfinite(vals))


def test_virtual_work_quadrature_matches_exact_integration():
    state = quad_state()
    face = tr.Face(0, 1.0)
    bump = tr.face_bump(face, direction=1)
    quad = tr.boundary_virtual_work(state, face, bump, "curl")
    exact = tr.unsplit_face_work(state, face, bump, "curl")
    assert abs(quad["total"] - exact) < 1e-12
