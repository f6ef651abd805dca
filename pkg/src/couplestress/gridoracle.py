"""Finite-difference grid oracle for the polynomial differential operators.

Central differences of second order on a fixed interior lattice give an
implementation-independent check: for each operator the sup-norm error
against the exact polynomial result must shrink like h^2 as the stencil
spacing h is refined. Fields of total degree >= 5 keep every truncation
term alive so the observed order is meaningful.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import polyfield as pf
from . import tensors as tn

BASE_LATTICE = np.array(
    [[a, b, c] for a in (0.25, 0.5, 0.75) for b in (0.25, 0.5, 0.75) for c in (0.25, 0.5, 0.75)]
)

DEFAULT_H = (1 / 8, 1 / 16, 1 / 32)

_E = np.eye(3)


def fd_partial(f, pts, axis, h):
    """Second-order central difference of a scalar callable."""
    e = _E[axis]
    return (f(pts + h * e) - f(pts - h * e)) / (2 * h)


def fd_second_partial(f, pts, ax1, ax2, h):
    e1, e2 = _E[ax1], _E[ax2]
    if ax1 == ax2:
        return (f(pts + h * e1) - 2 * f(pts) + f(pts - h * e1)) / h**2
    return (
        f(pts + h * e1 + h * e2)
        - f(pts + h * e1 - h * e2)
        - f(pts - h * e1 + h * e2)
        + f(pts - h * e1 - h * e2)
    ) / (4 * h**2)


def _scalar_callable(p):
    return lambda pts: p.eval(pts)


def fd_grad(p, pts, h):
    f = _scalar_callable(p)
    return np.stack([fd_partial(f, pts, ax, h) for ax in range(3)], axis=-1)


def fd_jac(u, pts, h):
    out = np.empty((pts.shape[0], 3, 3))
    for i in range(3):
        f = _scalar_callable(u[i])
        for j in range(3):
            out[:, i, j] = fd_partial(f, pts, j, h)
    return out


def fd_div(u, pts, h):
    J = fd_jac(u, pts, h)
    return J[:, 0, 0] + J[:, 1, 1] + J[:, 2, 2]


def fd_curl(u, pts, h):
    J = fd_jac(u, pts, h)
    return np.stack(
        [
            J[:, 2, 1] - J[:, 1, 2],
            J[:, 0, 2] - J[:, 2, 0],
            J[:, 1, 0] - J[:, 0, 1],
        ],
        axis=-1,
    )


def fd_mat_grad(P, pts, h):
    out = np.empty((pts.shape[0], 3, 3, 3))
    for i in range(3):
        for j in range(3):
            f = _scalar_callable(P[i, j])
            for k in range(3):
                out[:, i, j, k] = fd_partial(f, pts, k, h)
    return out


def fd_mat_curl(P, pts, h):
    G = fd_mat_grad(P, pts, h)  # G[:, i, k, l] = d P_ik / d x_l
    out = np.zeros((pts.shape[0], 3, 3))
    for i in range(3):
        for j in range(3):
            for l in range(3):
                for k in range(3):
                    e = tn.EPS[j, l, k]
                    if e:
                        out[:, i, j] += e * G[:, i, k, l]
    return out


def fd_mat_div(P, pts, h):
    G = fd_mat_grad(P, pts, h)
    return G[:, :, 0, 0] + G[:, :, 1, 1] + G[:, :, 2, 2]


def fd_second_gradient(u, pts, h):
    out = np.empty((pts.shape[0], 3, 3, 3))
    for k in range(3):
        f = _scalar_callable(u[k])
        for i in range(3):
            for j in range(3):
                out[:, k, i, j] = fd_second_partial(f, pts, i, j, h)
    return out


@dataclass
class OrderReport:
    operator: str
    errors: list
    hs: list
    observed_order: float
    exact_match: bool = False
    passed: bool = field(default=False)

    def as_dict(self):
        return {
            "operator": self.operator,
            "hs": list(self.hs),
            "errors": list(self.errors),
            "observed_order": self.observed_order,
            "exact_match": self.exact_match,
            "passed": self.passed,
        }


def _observed_order(errors, hs):
    errors = np.asarray(errors)
    if np.max(errors) < 1e-13:
        return float("inf"), True
    slope = np.polyfit(np.log(np.asarray(hs)), np.log(errors), 1)[0]
    return float(slope), False


_OPERATORS = {}


def _register(name, exact_fn, fd_fn):
    _OPERATORS[name] = (exact_fn, fd_fn)


def _exact_grad(u, pts):
    return pf.eval_vec(pf.grad(u[0]), pts)


def _fd_grad(u, pts, h):
    return fd_grad(u[0], pts, h)


_register("grad", _exact_grad, _fd_grad)
_register("jacobian", lambda u, pts: pf.eval_mat(pf.jac(u), pts), fd_jac)
_register("div", lambda u, pts: pf.div(u).eval(pts), fd_div)
_register("curl", lambda u, pts: pf.eval_vec(pf.curl(u), pts), fd_curl)
_register(
    "mat_curl",
    lambda u, pts: pf.eval_mat(pf.mat_curl(tn.sym(pf.jac(u))), pts),
    lambda u, pts, h: fd_mat_curl(tn.sym(pf.jac(u)), pts, h),
)
_register(
    "mat_div",
    lambda u, pts: pf.eval_vec(pf.mat_div(tn.sym(pf.jac(u))), pts),
    lambda u, pts, h: fd_mat_div(tn.sym(pf.jac(u)), pts, h),
)


def _exact_second_gradient(u, pts):
    T = pf.second_gradient(u)
    out = np.empty((pts.shape[0], 3, 3, 3))
    for k in range(3):
        for i in range(3):
            for j in range(3):
                out[:, k, i, j] = T[k, i, j].eval(pts)
    return out


_register("second_gradient", _exact_second_gradient, fd_second_gradient)


def operator_names():
    return sorted(_OPERATORS)


def check_operator(name, u, hs=DEFAULT_H, pts=None, min_order=1.9):
    """Compare one exact operator with its finite-difference counterpart."""
    if pts is None:
        pts = BASE_LATTICE
    exact_fn, fd_fn = _OPERATORS[name]
    exact = exact_fn(u, pts)
    errors = []
    for h in hs:
        approx = fd_fn(u, pts, h)
        errors.append(float(np.max(np.abs(approx - exact))))
    order, exact_match = _observed_order(errors, hs)
    passed = exact_match or order >= min_order
    return OrderReport(name, errors, list(hs), order, exact_match, passed)


def run_suite(seed=0, trials=10, degree=5, hs=DEFAULT_H, min_order=1.9):
    """Order check of every registered operator on random fields."""
    rng = np.random.default_rng(seed)
    reports = []
    for _ in range(trials):
        u = pf.random_vec_field(rng, degree)
        for name in operator_names():
            reports.append(check_operator(name, u, hs=hs, min_order=min_order))
    return reports
