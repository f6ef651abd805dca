import numpy as np
import pytest

from couplestress import polyfield as pf
from couplestress.polyfield import DegreeCapError, Poly3


def test_arithmetic_matches_pointwise_evaluation():
    rng = np.random.default_rng(0)
    p = pf.random_poly(rng, 3)
    q = pf.random_poly(rng, 2)
    pts = rng.uniform(0, 1, (20, 3))
    assert np.allclose((p + q).eval(pts), p.eval(pts) + q.eval(pts))
    assert np.allclose((p - q).eval(pts), p.eval(pts) - q.eval(pts))
    assert np.allclose((p * q).eval(pts), p.eval(pts) * q.eval(pts))
    assert np.allclose((p * 2.5).eval(pts), 2.5 * p.eval(pts))
    assert np.allclose((p / 2.0).eval(pts), p.eval(pts) / 2.0)
    assert np.allclose((p**3).eval(pts), p.eval(pts) ** 3)


def test_diff_product_rule():
    rng = np.random.default_rng(1)
    p = pf.random_poly(rng, 3)
    q = pf.random_poly(rng, 3)
    for ax in range(3):
        gap = ((p * q).diff(ax) - p.diff(ax) * q - p * q.diff(ax)).max_abs_coeff()
        assert gap < 1e-13


def test_integrate_monomial():
    # int over unit box of x^a y^b z^c = 1/((a+1)(b+1)(c+1))
    p = Poly3.monomial((2, 3, 1))
    assert abs(p.integrate() - 1.0 / (3 * 4 * 2)) < 1e-15
    q = Poly3.const(4.0)
    assert q.integrate() == 4.0


def test_integral_of_product_fast_path():
    rng = np.random.default_rng(2)
    p = pf.random_poly(rng, 4)
    q = pf.random_poly(rng, 4)
    assert abs(pf.integral_of_product(p, q) - (p * q).integrate()) < 1e-13


def test_restrict():
    x, y = Poly3.variable(0), Poly3.variable(1)
    p = x * x * y + x * 3.0
    r = p.restrict(0, 1.0)  # -> y + 3
    assert abs(r.eval(np.array([[0.0, 0.25, 0.7]]))[0] - 3.25) < 1e-15
    # restricted polynomial no longer depends on the fixed axis
    assert all(k[0] == 0 for k in r.coef)


def test_degree_cap_guards_construction():
    with pytest.raises(DegreeCapError):
        Poly3({(5, 0, 0): 1.0}, cap=4)
    # products extend the cap so legitimate growth is never rejected
    x = Poly3.variable(0, cap=4)
    p = x**5
    assert p.degree() == 5 and p.cap >= 5


def test_degree_and_zero():
    assert Poly3.zero().degree() == -1
    assert Poly3.const(2.0).degree() == 0
    assert Poly3.monomial((1, 2, 0)).degree() == 3
    assert Poly3.zero().is_zero()


def test_vector_operators_on_known_field():
    x, y, z = (Poly3.variable(ax) for ax in range(3))
    u = pf.as_vec([y * z, x * x, x * y * z])
    pts = np.array([[0.3, 0.7, 0.2]])

    d = pf.div(u)  # 0 + 0 + xy
    assert abs(d.eval(pts)[0] - 0.3 * 0.7) < 1e-15

    c = pf.curl(u)  # (xz - 0, y - yz, 2x - z)
    expect = np.array([0.3 * 0.2, 0.7 - 0.7 * 0.2, 0.6 - 0.2])
    got = pf.eval_vec(c, pts)[0]
    assert np.allclose(got, expect)

    J = pf.jac(u)  # row i holds the partials of u_i
    assert abs(J[0, 1].eval(pts)[0] - 0.2) < 1e-15
    assert abs(J[1, 0].eval(pts)[0] - 0.6) < 1e-15


def test_second_gradient_symmetry_and_values():
    rng = np.random.default_rng(3)
    u = pf.random_vec_field(rng, 4)
    T = pf.second_gradient(u)
    # T[k, i, j] = u_k,ij is symmetric in (i, j)
    gap = pf.max_abs_coeff_ten3(
        np.array(
            [[[T[k, i, j] - T[k, j, i] for j in range(3)] for i in range(3)]
             for k in range(3)],
            dtype=object,
        )
    )
    assert gap == 0.0


def test_strain_gradient_index_convention():
    # E[i, k, l] = (sym grad u)_ik differentiated along l
    rng = np.random.default_rng(4)
    u = pf.random_vec_field(rng, 3)
    from couplestress import tensors as tn

    E = pf.strain_gradient(u)
    eps = tn.sym(pf.jac(u))
    for i in range(3):
        for k in range(3):
            for l in range(3):
                assert (E[i, k, l] - eps[i, k].diff(l)).max_abs_coeff() < 1e-14


def test_face_integral():
    x, y = Poly3.variable(0), Poly3.variable(1)
    p = x * y * y
    # on the face x = 1: int y^2 over the unit square = 1/3
    assert abs(pf.face_integral(p, 0, 1.0) - 1.0 / 3.0) < 1e-15
    # on the face x = 0 the integrand vanishes
    assert pf.face_integral(p, 0, 0.0) == 0.0


def test_random_sym_and_skw_fields():
    rng = np.random.default_rng(5)
    S = pf.random_sym_mat_field(rng, 2)
    A = pf.random_skw_mat_field(rng, 2)
    for i in range(3):
        for j in range(3):
            assert (S[i, j] - S[j, i]).max_abs_coeff() == 0.0
            assert (A[i, j] + A[j, i]).max_abs_coeff() == 0.0
