import numpy as np

from couplestress import tensors as tn

rng = np.random.default_rng(42)


def random_matrix():
    return rng.uniform(-2.0, 2.0, (3, 3))


def test_axl_anti_roundtrip():
    v = rng.uniform(-1, 1, 3)
    assert np.allclose(tn.axl(tn.anti(v)), v)
    A = tn.skw(random_matrix())
    assert np.allclose(tn.anti(tn.axl(A)), A)


def test_anti_acts_as_cross_product():
    v = rng.uniform(-1, 1, 3)
    w = rng.uniform(-1, 1, 3)
    assert np.allclose(tn.anti(v) @ w, np.cross(v, w))


def test_axl_pairing_factor_two():
    # <anti(v), A> = 2 <v, axl(A)> for skew A
    v = rng.uniform(-1, 1, 3)
    A = tn.skw(random_matrix())
    lhs = tn.inner(tn.anti(v), A)
    rhs = 2.0 * tn.inner_vec(v, tn.axl(A))
    assert abs(lhs - rhs) < 1e-14


def test_anti_of_cross_product():
    # anti(a x b) = b (x) a - a (x) b
    a = rng.uniform(-1, 1, 3)
    b = rng.uniform(-1, 1, 3)
    lhs = tn.anti(np.cross(a, b))
    rhs = np.outer(b, a) - np.outer(a, b)
    assert np.allclose(lhs, rhs)


def test_cartan_decomposition_reassembles_and_is_orthogonal():
    A = random_matrix()
    d, w, s = tn.cartan_decompose(A)
    assert np.allclose(d + w + s, A)
    assert abs(tn.trace(d)) < 1e-14
    assert np.allclose(w, -w.T)
    assert abs(tn.inner(d, w)) < 1e-14
    assert abs(tn.inner(d, s)) < 1e-14
    assert abs(tn.inner(w, s)) < 1e-14
    # Frobenius norms add up
    assert abs(tn.norm_sq(A) - tn.norm_sq(d) - tn.norm_sq(w) - tn.norm_sq(s)) < 1e-13


def test_eps_contract_on_spin_matrix():
    v = rng.uniform(-1, 1, 3)
    out = tn.eps_contract(tn.anti(v))
    assert np.allclose(out, 2.0 * v)


def test_eps_dot_is_minus_anti():
    v = rng.uniform(-1, 1, 3)
    assert np.allclose(tn.eps_dot(v), -tn.anti(v))


def test_matmul_matvec_against_numpy():
    A, B = random_matrix(), random_matrix()
    v = rng.uniform(-1, 1, 3)
    assert np.allclose(tn.matmul(A, B), A @ B)
    assert np.allclose(tn.matvec(A, v), A @ v)


def test_ten3_inner():
    A = rng.uniform(-1, 1, (3, 3, 3))
    B = rng.uniform(-1, 1, (3, 3, 3))
    assert abs(tn.ten3_inner(A, B) - np.sum(A * B)) < 1e-13
