"""End-to-end acceptance runs at the contract tolerances.

Each criterion is one test. Every test prints a single PASS/FAIL line
(visible under pytest -s) and enforces its stated runtime budget.
"""
import time

import numpy as np

from couplestress import conformal as cf
from couplestress import energies as en
from couplestress import gridoracle as go
from couplestress import lift as lf
from couplestress import micromorphic as mm
from couplestress import polyfield as pf
from couplestress import solver as sv
from couplestress import stresses as st
from couplestress import tractions as tr
from couplestress.energies import Material, rotation_gradient, strain_curl


def _line(num, ok, detail):
    print(f"{'PASS' if ok else 'FAIL'} acceptance-{num}: {detail}")


def _fields(rng, n, degree=4):
    return [pf.random_vec_field(rng, degree) for _ in range(n)]


def test_acceptance_1_curvature_transpose_identity():
    t0 = time.monotonic()
    rng = np.random.default_rng(101)
    worst = 0.0
    for u in _fields(rng, 100):
        khat = strain_curl(u)
        ktil = rotation_gradient(u)
        gap = max(
            (khat[j, i] - ktil[i, j]).max_abs_coeff()
            for i in range(3)
            for j in range(3)
        )
        worst = max(worst, gap)
    dt = time.monotonic() - t0
    ok = worst < 1e-12 and dt < 5.0
    _line(1, ok, f"transpose identity, 100 degree-4 fields, worst {worst:.3e}, {dt:.2f}s")
    assert worst < 1e-12
    assert dt < 5.0


def test_acceptance_2_stress_structure():
    t0 = time.monotonic()
    rng = np.random.default_rng(102)
    worst = {}
    for u in _fields(rng, 100):
        for a1, a2 in ((1.0, 0.0), (0.0, 1.0), (1.0, 1.0)):
            state = st.assemble(u, Material(1.0, 1.0, a1, a2, 1.0))
            for key, val in st.structure_report(state).items():
                worst[key] = max(worst.get(key, 0.0), val)
    dt = time.monotonic() - t0
    top = max(worst.values())
    ok = top < 1e-12 and dt < 10.0
    _line(2, ok, f"stress structure, 300 cases, worst {top:.3e}, {dt:.2f}s")
    for key, val in worst.items():
        assert val < 1e-12, key
    assert dt < 10.0


def test_acceptance_3_energy_form_equivalence():
    t0 = time.monotonic()
    rng = np.random.default_rng(103)
    mat = Material(1.3, 0.8, 1.2, 0.7, 0.9)
    worst_eq = 0.0
    worst_gr = 0.0
    mapped = mat.with_alphas(*en.grioli_to_indeterminate(0.7, 0.3))
    for u in _fields(rng, 100):
        worst_eq = max(worst_eq, en.equivalence_report(u, mat)["max_difference"])
        gr = (
            en.grioli_density(u, mat, alpha1=0.7, eta_prime=0.3)
            - en.indeterminate_density(u, mapped)
        ).max_abs_coeff()
        worst_gr = max(worst_gr, gr)
    dt = time.monotonic() - t0
    ok = worst_eq <= 1e-12 and worst_gr <= 1e-12
    _line(3, ok, f"five forms {worst_eq:.3e}, grioli map {worst_gr:.3e}, {dt:.2f}s")
    assert worst_eq <= 1e-12
    assert worst_gr <= 1e-12


def test_acceptance_4_conformal_invariance():
    t0 = time.monotonic()
    rng = np.random.default_rng(104)
    mat = Material(1.0, 1.0, 1.0, 1.0, 1.0)
    worst_mc = 0.0
    worst_hd = 0.0
    worst_rel = 0.0
    sensitive = True
    for _ in range(25):
        phi, params = cf.random_conformal(rng)
        mc, _ = en.evaluate_model("modified-conformal", phi, mat)
        worst_mc = max(worst_mc, mc.max_abs_coeff())
        spin_sq = float(np.sum(params.W * params.W))
        hd, _ = en.evaluate_model("hadjesfandiari-dargush", phi, mat)
        worst_hd = max(
            worst_hd,
            (hd - mat.curvature_scale * mat.alpha2 * spin_sq).max_abs_coeff(),
        )
        ind, _ = en.evaluate_model("indeterminate", phi, mat)
        if np.sqrt(spin_sq) > 1e-6 and ind.max_abs_coeff() <= 1e-13:
            sensitive = False
        worst_rel = max(worst_rel, max(cf.relations_report(phi, params).values()))
    dt = time.monotonic() - t0
    ok = worst_mc <= 1e-12 and worst_hd <= 1e-12 and sensitive and worst_rel <= 1e-12
    _line(
        4,
        ok,
        f"25 conformal maps: invariant {worst_mc:.3e}, spin density {worst_hd:.3e}, "
        f"relations {worst_rel:.3e}, sensitive={sensitive}, {dt:.2f}s",
    )
    assert worst_mc <= 1e-12
    assert worst_hd <= 1e-12
    assert sensitive
    assert worst_rel <= 1e-12


def test_acceptance_5_boundary_tractions():
    t0 = time.monotonic()
    x1 = pf.Poly3.variable(0)
    u = pf.as_vec([pf.Poly3.zero(), x1 * x1, pf.Poly3.zero()])
    state = st.assemble(u, Material(1.0, 1.0, 1.0, 0.0, 1.0))
    face = tr.Face(0, 1.0)

    cmp = tr.compare_double_forces(state, face)
    half = pf.Poly3.const(0.5)
    g_curl = [face.restrict(cmp["curl"][i]) for i in range(3)]
    g_ap = [face.restrict(cmp["axl-appendix"][i]) for i in range(3)]
    curl_gap = max(
        g_curl[0].max_abs_coeff(),
        (g_curl[1] - half).max_abs_coeff(),
        g_curl[2].max_abs_coeff(),
    )
    ap_gap = max(
        g_ap[0].max_abs_coeff(),
        (g_ap[1] + half).max_abs_coeff(),
        g_ap[2].max_abs_coeff(),
    )

    t_curl = tr.traction_curl_form(state, face).traction
    t_ap = tr.traction_axl_form(state, face, "appendix").traction
    expect = [0.0, 2.0, 0.0]
    tr_gap = max(
        (face.restrict(t[i]) - expect[i]).max_abs_coeff()
        for t in (t_curl, t_ap)
        for i in range(3)
    )

    bump = tr.face_bump(face, direction=1)
    comparison = tr.face_work_comparison(state, face, bump)
    total_gap = comparison["total_gap"]
    termwise = comparison["termwise_double_force_gap"]

    dt = time.monotonic() - t0
    ok = (
        curl_gap <= 1e-12
        and ap_gap <= 1e-12
        and tr_gap <= 1e-12
        and total_gap <= 1e-8
        and termwise > 1e-3
    )
    _line(
        5,
        ok,
        f"double forces (0,+-1/2,0) {max(curl_gap, ap_gap):.3e}, tractions {tr_gap:.3e}, "
        f"total work gap {total_gap:.3e}, termwise {termwise:.3e}, {dt:.2f}s",
    )
    assert curl_gap <= 1e-12
    assert ap_gap <= 1e-12
    assert tr_gap <= 1e-12
    assert total_gap <= 1e-8
    assert termwise > 1e-3


def test_acceptance_6_second_gradient_lift():
    t0 = time.monotonic()
    rng = np.random.default_rng(106)
    C = lf.sixth_order_isotropic(1.0, 0.0)
    worst = 0.0
    for u in _fields(rng, 50):
        worst = max(worst, lf.verify_energy_equality(u, 1.0, 0.0, C))

    x1 = pf.Poly3.variable(0)
    u_frozen = pf.as_vec([pf.Poly3.zero(), x1 * x1, pf.Poly3.zero()])
    frozen = lf.second_gradient_pairing(u_frozen, C).integrate()

    u_probe = pf.random_vec_field(rng, 4)
    corrected = lf.roundtrip_gap(u_probe, "corrected")
    printed = lf.roundtrip_gap(u_probe, "printed")

    dt = time.monotonic() - t0
    ok = (
        worst < 1e-12
        and abs(frozen - 1.0) <= 1e-14
        and corrected <= 1e-12
        and printed > 1e-6
    )
    _line(
        6,
        ok,
        f"lift equality {worst:.3e}, frozen value {frozen:.15f}, "
        f"roundtrips corrected {corrected:.3e} / printed {printed:.3e}, {dt:.2f}s",
    )
    assert worst < 1e-12
    assert abs(frozen - 1.0) <= 1e-14
    assert corrected <= 1e-12
    assert printed > 1e-6


def test_acceptance_7_equilibrium_solver():
    t0 = time.monotonic()
    mat = Material(1.0, 1.0, 1.0, 0.0, 1.0)
    basis = sv.bubble_basis(2)
    asm_curl = sv.assemble(basis, mat, "curl")
    asm_axl = sv.assemble(basis, mat, "axl")
    k_gap = float(np.max(np.abs(asm_curl.K - asm_axl.K))) / max(
        1.0, float(np.max(np.abs(asm_curl.K)))
    )

    rng = np.random.default_rng(107)
    c_star = rng.uniform(-1.0, 1.0, len(basis))
    u_star = sv.displacement(basis, c_star)
    _, b = sv.manufactured_load(basis, u_star, mat)
    rep = sv.solve(asm_curl, b)
    rec = sv.recovery_error(basis, rep.coefficients, u_star)

    dt = time.monotonic() - t0
    ok = rep.min_eigenvalue > 0.0 and k_gap <= 1e-12 and rec <= 1e-8 and dt < 60.0
    _line(
        7,
        ok,
        f"min eig {rep.min_eigenvalue:.3e}, formulation gap {k_gap:.3e}, "
        f"recovery {rec:.3e}, {dt:.2f}s",
    )
    assert rep.min_eigenvalue > 0.0
    assert k_gap <= 1e-12
    assert rec <= 1e-8
    assert dt < 60.0


def test_acceptance_8_penalty_limits():
    t0 = time.monotonic()
    basis = sv.bubble_basis(2)
    x = [pf.Poly3.variable(ax) for ax in range(3)]
    f = pf.as_vec([x[1] + 1.0, x[2] - 2.0, x[0]])
    params = mm.MicromorphicParams()
    summary = []
    ok = True
    for model in ("cosserat", "microstrain"):
        study = mm.penalty_limit_study(model, params, basis, f, (1.0, 1e2, 1e4, 1e6))
        e_con = study["constrained_energy"]
        rows = study["rows"]
        violations = [r["violation"] for r in rows]
        energies = [r["energy"] for r in rows]
        decreasing = all(b < a for a, b in zip(violations, violations[1:]))
        increasing = all(b > a - 1e-13 for a, b in zip(energies, energies[1:]))
        bounded = all(e <= e_con + 1e-10 * max(1.0, abs(e_con)) for e in energies)
        ok = ok and decreasing and increasing and bounded
        summary.append(
            f"{model}: violation {violations[0]:.2e}->{violations[-1]:.2e}, "
            f"energy gap {e_con - energies[-1]:.2e}"
        )
        assert decreasing, model
        assert increasing, model
        assert bounded, model
    dt = time.monotonic() - t0
    ok = ok and dt < 120.0
    _line(8, ok, "; ".join(summary) + f", {dt:.2f}s")
    assert dt < 120.0


def test_acceptance_9_operator_oracles():
    t0 = time.monotonic()
    reports = go.run_suite(trials=10)
    failed = [r.operator for r in reports if not r.passed]
    min_order = min(
        (r.observed_order for r in reports if not r.exact_match), default=2.0
    )
    dt = time.monotonic() - t0
    ok = not failed
    _line(
        9,
        ok,
        f"{len(reports)} oracle checks, least observed order {min_order:.2f}, {dt:.2f}s",
    )
    assert not failed, failed
