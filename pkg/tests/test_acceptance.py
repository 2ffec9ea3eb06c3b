"""Top-level acceptance sweep: ten criteria, one pass/fail line each.

Each test prints its verdict so a plain ``pytest -v tests/test_acceptance.py``
reads as a checklist.  Budgeted criteria time themselves and fail when they
run over.
"""

import json
import math
import random
import time

from susygordon.cli import main
from susygordon.catalog import catalog_entry, catalog_names, verify_entry
from susygordon.elliptic import jacobi
from susygordon.grassmann import DEFAULT_CONTEXT as CTX
from susygordon.odes import (
    drift_ratio,
    first_integral_check,
    integrate_profile_ode,
    make_system,
)
from susygordon.prolongation import (
    COMPONENT_SIGNATURE,
    SSG_SIGNATURE,
    component_named_generators,
    component_shift_spec,
    prolong,
    prolong_expanded,
    random_jet_point,
    ssg_named_generators,
    ssg_shift_spec,
    symmetry_residual,
)
from susygordon.reductions import (
    component_case_ids,
    component_slice_check,
    nonstandard_obstruction,
    random_reduction_profiles,
    reduction_case_ids,
    reduction_consistency,
    profile,
)
from susygordon.analytic import TrigPoly
from susygordon.superalgebra import (
    AlgebraElement,
    adjoint_closed_form,
    adjoint_exp,
    bracket,
    verify_structure,
)
from susygordon.superfield import evaluate_bundle, op_D, op_Q, random_superfield, superfield_jet


def _verdict(num, label, ok):
    print(f"criterion {num:02d} ({label}): {'pass' if ok else 'FAIL'}")
    assert ok, f"criterion {num:02d} ({label})"


POINTS = tuple((0.15 + 0.2 * i, -0.45 + 0.17 * i) for i in range(10))


def test_criterion_01_operator_algebra():
    t0 = time.perf_counter()
    worst = 0.0
    for seed in range(50):
        f = random_superfield(900 + seed, CTX)
        for x0, t0p in POINTS:
            x, t = CTX.scalar(x0), CTX.scalar(t0p)
            b = evaluate_bundle(f, x, t)
            jet = superfield_jet(f, x, t, order=2)

            def D2(a, c):
                return op_D(op_D(jet, CTX, c), CTX, a).value()

            def Q2(a, c):
                return op_Q(op_Q(jet, CTX, c), CTX, a).value()

            def DQ(a, c):
                return op_D(op_Q(jet, CTX, c), CTX, a).value()

            def QD(a, c):
                return op_Q(op_D(jet, CTX, c), CTX, a).value()

            devs = [
                (D2("x", "x") - b.d_x).norm(),
                (D2("t", "t") - b.d_t).norm(),
                (D2("x", "t") + D2("t", "x")).norm(),
                (Q2("x", "x") * 2.0 + b.d_x * 2.0).norm(),
                (Q2("t", "t") * 2.0 + b.d_t * 2.0).norm(),
                (Q2("x", "t") + Q2("t", "x")).norm(),
            ]
            for da, qb in (("x", "x"), ("x", "t"), ("t", "x"), ("t", "t")):
                devs.append((DQ(da, qb) + QD(qb, da)).norm())
            worst = max(worst, *devs)
    elapsed = time.perf_counter() - t0
    _verdict(1, "operator algebra", worst <= 1e-12 and elapsed < 5.0)


def test_criterion_02_prolongation_oracle():
    t0 = time.perf_counter()
    worst = 0.0
    gens = ssg_named_generators(CTX)
    for seed in range(100):
        p = random_jet_point(SSG_SIGNATURE, 7000 + seed, CTX)
        for g in gens.values():
            pr, pe = prolong(g, p), prolong_expanded(g, p)
            for key, val in pe.values.items():
                worst = max(worst, (pr.values[key] - val).norm())
    cgens = component_named_generators(CTX)
    for seed in range(100):
        p = random_jet_point(COMPONENT_SIGNATURE, 8000 + seed, CTX)
        for g in cgens.values():
            pr, pe = prolong(g, p), prolong_expanded(g, p)
            for key, val in pe.values.items():
                worst = max(worst, (pr.values[key] - val).norm())
    elapsed = time.perf_counter() - t0
    _verdict(2, "prolongation oracle equivalence", worst <= 1e-12 and elapsed < 30.0)


def test_criterion_03_determining_equations():
    gens = ssg_named_generators(CTX)
    worst = 0.0
    for seed in range(200):
        p = random_jet_point(SSG_SIGNATURE, 11000 + seed, CTX)
        for g in gens.values():
            worst = max(worst, symmetry_residual(g, p).norm())
    cworst = 0.0
    for seed in range(100):
        p = random_jet_point(COMPONENT_SIGNATURE, 12000 + seed, CTX)
        for g in component_named_generators(CTX).values():
            cworst = max(cworst, max(r.norm() for r in symmetry_residual(g, p)))
    # the field shift is NOT a symmetry; its residual body must stay visible
    shift = ssg_shift_spec(CTX)
    cshift = component_shift_spec(CTX)
    floor = math.inf
    for seed in range(60):
        p = random_jet_point(SSG_SIGNATURE, 13000 + seed, CTX)
        if abs(math.cos(p.coordinate("Phi").body)) < 0.1:
            continue
        floor = min(floor, abs(symmetry_residual(shift, p).body))
    cfloor = math.inf
    for seed in range(60):
        p = random_jet_point(COMPONENT_SIGNATURE, 14000 + seed, CTX)
        if abs(math.cos(p.coordinate("u").body)) < 0.1:
            continue
        cfloor = min(cfloor, abs(symmetry_residual(cshift, p)[0].body))
    _verdict(
        3,
        "determining equations",
        worst <= 1e-12 and cworst <= 1e-12 and floor >= 0.1 and cfloor >= 0.1,
    )


def test_criterion_04_structure_constants():
    dev = max(
        verify_structure("superspace", n_points=4, seed=0, ctx=CTX),
        verify_structure("component", n_points=4, seed=0, ctx=CTX),
    )

    def rand_elem(seed):
        rng = random.Random(seed)
        mu, nu = CTX.gen("mu"), CTX.gen("nu")
        eta, lam = CTX.gen("D1"), CTX.gen("D2")
        return AlgebraElement.from_coeffs(
            CTX,
            L=CTX.scalar(rng.uniform(-1, 1)) + mu * nu * rng.uniform(-0.5, 0.5),
            Px=rng.uniform(-1, 1),
            Pt=rng.uniform(-1, 1),
            Qx=mu * rng.uniform(-1, 1) + eta * rng.uniform(-1, 1),
            Qt=nu * rng.uniform(-1, 1) + lam * rng.uniform(-1, 1),
        )

    jac = 0.0
    for s in range(100):
        X, Y, Z = rand_elem(3 * s), rand_elem(3 * s + 1), rand_elem(3 * s + 2)
        total = (
            bracket(X, bracket(Y, Z))
            + bracket(Y, bracket(Z, X))
            + bracket(Z, bracket(X, Y))
        )
        jac = max(jac, total.norm())
    _verdict(4, "structure constants", dev <= 1e-12 and jac <= 1e-12)


def test_criterion_05_bch_closed_form():
    mu, nu = CTX.gen("mu"), CTX.gen("nu")
    eta, lam = CTX.gen("D1"), CTX.gen("D2")
    worst = 0.0
    for i, k in enumerate((CTX.scalar(-0.5), CTX.scalar(0.3), mu * nu)):
        Y = AlgebraElement.from_coeffs(CTX, L=k, Qx=eta * 0.7, Qt=lam * (-0.4))
        rng = random.Random(40 + i)
        for _ in range(5):
            X = AlgebraElement.from_coeffs(
                CTX,
                Px=rng.uniform(-1, 1),
                Pt=rng.uniform(-1, 1),
                Qx=mu * rng.uniform(-1, 1),
                Qt=nu * rng.uniform(-1, 1),
            )
            gap = adjoint_exp(Y, X, series_terms=16) - adjoint_closed_form(Y, X)
            worst = max(worst, gap.norm())
    _verdict(5, "BCH closed form", worst <= 1e-10)


def test_criterion_06_reduction_consistency():
    pts = ((0.4, 0.7), (1.1, 0.5), (0.8, 1.3), (-0.6, 0.9), (1.5, -0.4), (0.3, 1.8))
    pos = tuple((abs(x), abs(t)) for x, t in pts)
    worst = 0.0
    for i, case in enumerate(reduction_case_ids()):
        prof = random_reduction_profiles(case, 500 + i, CTX)
        use = pos if case == "S1" else pts
        worst = max(worst, reduction_consistency(case, prof, use, ctx=CTX))

    rng = random.Random(77)

    def fn():
        return TrigPoly(
            waves=[(rng.uniform(0.4, 1.0), rng.uniform(0.5, 1.2), rng.uniform(-1.5, 1.5))],
            poly=[rng.uniform(-0.3, 0.3)],
        )

    sworst = 0.0
    for lid in component_case_ids():
        prof = {
            "u": profile(CTX, (CTX.scalar(rng.uniform(0.7, 1.3)), fn())),
            "phi": profile(CTX, (CTX.gen("D1"), fn()), (CTX.gen("mu0"), fn())),
            "psi": profile(CTX, (CTX.gen("D2"), fn()), (CTX.gen("lambda0"), fn())),
        }
        sworst = max(sworst, component_slice_check(lid, prof, (0.6, 1.3, 2.1), CTX))
    _verdict(6, "reduction consistency", worst <= 1e-10 and sworst <= 1e-12)


def test_criterion_07_solution_catalog():
    t0 = time.perf_counter()
    ok = True
    for name in catalog_names():
        check = verify_entry(name)
        entry = catalog_entry(name)
        if not check.passed or check.tolerance != entry.tolerance:
            ok = False
    elapsed = time.perf_counter() - t0
    _verdict(7, "solution catalog", ok and elapsed < 120.0)


def test_criterion_08_elliptic_layer():
    worst = 0.0
    for m in (-1.0, -0.3, 0.2, 0.49, 0.81):
        for i in range(13):
            tr = jacobi(-3.0 + 0.5 * i, m)
            worst = max(
                worst,
                abs(tr.sn ** 2 + tr.cn ** 2 - 1.0),
                abs(tr.dn ** 2 + m * tr.sn ** 2 - 1.0),
            )
    system = make_system("rebp", eps=-1.0, ctx=CTX)
    traj = integrate_profile_ode(system, (0.0, 1.0), 0.0, 3.0, 1.0 / 256, ctx=CTX)
    drift = first_integral_check(traj)
    ratio = drift_ratio(system, (0.3, 0.9), 0.0, 3.0, 0.1, ctx=CTX)
    _verdict(
        8,
        "elliptic layer",
        worst <= 1e-12 and drift <= 1e-8 and 12.8 <= ratio <= 19.2,
    )


def test_criterion_09_obstruction_demo():
    rec = nonstandard_obstruction("S5", CTX)
    ok = (
        rec.reducible is False
        and rec.x_gap >= 0.1
        and rec.solution_set == "value = k*pi"
        and max(rec.details["kpi_residuals"].values()) <= 1e-12
        and rec.details["offset_body_residual"] >= 0.1
        and rec.details["odd_probe_residual"] >= 0.1
    )
    _verdict(9, "obstruction demo", ok)


def test_criterion_10_determinism(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    args = ["verify", "--suite", "all", "--seed", "1"]
    code_a = main(args + ["--out", str(a)])
    code_b = main(args + ["--out", str(b)])
    capsys.readouterr()
    same = a.read_bytes() == b.read_bytes()
    report = json.loads(a.read_text())
    all_pass = all(c["status"] == "pass" for c in report["checks"])
    _verdict(10, "determinism", code_a == 0 and code_b == 0 and same and all_pass)
