"""Bracket table, adjoint action, and the subalgebra catalog."""

import json
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from susygordon.grassmann import DEFAULT_CONTEXT, GrassmannNumber, Parity, ParityError
from susygordon.superalgebra import (
    STRUCTURE_TABLE,
    AlgebraElement,
    OutOfIdeal,
    adjoint_closed_form,
    adjoint_exp,
    adjoint_truncation_bound,
    basis_element,
    bracket,
    solve_conjugation_to_L,
    subalgebra_catalog,
    verify_structure,
)

ctx = DEFAULT_CONTEXT
MU = ctx.gen("mu")
NU = ctx.gen("nu")
ETA = ctx.gen("D1")
LAM = ctx.gen("D2")


def elem(**kw):
    return AlgebraElement.from_coeffs(ctx, **kw)


def rand_elem(seed, ideal_only=False):
    cL = ctx.zero() if ideal_only else ctx.sample(Parity.EVEN, 2, seed)
    return AlgebraElement(
        cL,
        ctx.sample(Parity.EVEN, 2, seed + 101),
        ctx.sample(Parity.EVEN, 2, seed + 202),
        ctx.sample(Parity.ODD, 3, seed + 303),
        ctx.sample(Parity.ODD, 3, seed + 404),
    )


# ------------------------------------------------------------ bracket table


def test_table_even_rows():
    L, Px, Pt = basis_element("L"), basis_element("Px"), basis_element("Pt")
    assert (bracket(L, Px) - 2.0 * Px).norm() == 0.0
    assert (bracket(L, Pt) + 2.0 * Pt).norm() == 0.0
    assert bracket(Px, Pt).is_zero()
    assert bracket(Px, Px).is_zero()
    assert bracket(L, L).is_zero()


def test_table_mixed_rows():
    L = basis_element("L")
    qx, qt = elem(Qx=MU), elem(Qt=NU)
    assert (bracket(L, qx) - elem(Qx=MU)).norm() == 0.0
    assert (bracket(L, qt) + elem(Qt=NU)).norm() == 0.0
    assert (bracket(qx, L) + elem(Qx=MU)).norm() == 0.0
    assert (bracket(qt, L) - elem(Qt=NU)).norm() == 0.0
    assert bracket(qx, basis_element("Px")).is_zero()
    assert bracket(qt, basis_element("Pt")).is_zero()


def test_table_odd_odd():
    # {Q_x, Q_x} = -2 P_x threads through the graded coefficient swap:
    # [mu Qx, eta Qx] = -mu eta (-2 Px) = 2 mu eta Px
    got = bracket(elem(Qx=MU), elem(Qx=ETA))
    want = 2.0 * (MU * ETA)
    assert (got.c_Px - want).norm() == 0.0
    assert got.c_Pt.is_zero() and got.c_Qx.is_zero() and got.c_Qt.is_zero()
    got_t = bracket(elem(Qt=NU), elem(Qt=LAM))
    assert (got_t.c_Pt - 2.0 * (NU * LAM)).norm() == 0.0
    # same odd parameter twice collapses to zero
    assert bracket(elem(Qx=MU), elem(Qx=MU)).is_zero()
    assert bracket(elem(Qx=MU), elem(Qt=NU)).is_zero()


@given(st.integers(0, 400))
@settings(max_examples=40, deadline=None)
def test_bracket_antisymmetry_on_even_elements(seed):
    X, Y = rand_elem(seed), rand_elem(seed + 7000)
    assert (bracket(X, Y) + bracket(Y, X)).norm() < 1e-13


@given(st.integers(0, 400))
@settings(max_examples=25, deadline=None)
def test_jacobi_identity(seed):
    X, Y, Z = rand_elem(seed), rand_elem(seed + 5000), rand_elem(seed + 9000)
    total = (
        bracket(X, bracket(Y, Z))
        + bracket(Y, bracket(Z, X))
        + bracket(Z, bracket(X, Y))
    )
    assert total.norm() < 1e-12


def test_bracket_bilinear_over_even_weights():
    a = ctx.scalar(0.5) + ctx.gen(2) * ctx.gen(3) * 0.7
    X1, X2, Y = rand_elem(11), rand_elem(22), rand_elem(33)
    lhs = bracket(a * X1 + X2, Y)
    rhs = a * bracket(X1, Y) + bracket(X2, Y)
    assert (lhs - rhs).norm() < 1e-13


def test_parity_enforcement():
    with pytest.raises(ParityError):
        elem(Qx=1.0)
    with pytest.raises(ParityError):
        elem(L=MU)
    with pytest.raises(ParityError):
        basis_element("Qx")
    with pytest.raises(ParityError):
        rand_elem(3) * MU


# ------------------------------------------------------------ adjoint action


def test_closed_form_pure_scaling_frozen():
    # k = 0.3, no odd parts in Y: slots scale by e^{2k}, e^{-2k}, e^k, e^{-k}
    Y = elem(L=0.3)
    X = elem(Px=1.7, Pt=-0.6, Qx=0.9 * MU, Qt=1.3 * NU)
    img = adjoint_closed_form(Y, X)
    assert img.c_Px.body == pytest.approx(3.0976019606638651, abs=1e-14)
    assert img.c_Pt.body == pytest.approx(-0.32928698165641585, abs=1e-14)
    assert (img.c_Qx - 1.2148729268184029 * MU).norm() < 1e-14
    assert (img.c_Qt - 0.9630636868862333 * NU).norm() < 1e-14
    assert img.c_L.is_zero()


def test_closed_form_rejects_L_part():
    with pytest.raises(OutOfIdeal):
        adjoint_closed_form(elem(L=0.2), elem(L=1.0, Px=1.0))


def test_translation_parts_of_Y_are_inert():
    Y1 = elem(L=0.4, Px=2.0, Pt=-3.0, Qx=0.5 * ETA)
    Y2 = elem(L=0.4, Qx=0.5 * ETA)
    X = elem(Px=0.7, Pt=0.3, Qx=1.1 * MU, Qt=-0.2 * NU)
    d = adjoint_closed_form(Y1, X) - adjoint_closed_form(Y2, X)
    assert d.norm() == 0.0


def test_closed_form_bodiless_scaling_exact():
    # k = theta1 theta2: e^{2k} = 1 + 2k exactly, no limit handling needed
    k = ctx.gen("theta1") * ctx.gen("theta2")
    img = adjoint_closed_form(elem(L=k), elem(Px=1.0))
    want = ctx.one() + 2.0 * k
    assert (img.c_Px - want).norm() == 0.0


def test_closed_form_bodiless_ratio_term():
    # the (e^k - 1)/k factor at k = theta1 theta2 is 1 + k/2; with
    # Y = k L + eta Qx and X = mu Qx the P_x slot becomes
    # 2 eta mu (1 + k)(1 + k/2) = 2 eta mu (1 + 3k/2)
    k = ctx.gen("theta1") * ctx.gen("theta2")
    img = adjoint_closed_form(elem(L=k, Qx=ETA), elem(Qx=MU))
    want = 2.0 * (ETA * MU) * (ctx.one() + 1.5 * k)
    assert (img.c_Px - want).norm() < 1e-15
    assert (img.c_Qx - (ctx.one() + k) * MU).norm() == 0.0


@pytest.mark.parametrize("kval", [-0.5, 0.3, "bodiless"])
def test_closed_form_matches_series(kval):
    k = ctx.gen("theta1") * ctx.gen("theta2") if kval == "bodiless" else ctx.scalar(kval)
    Y = elem(L=k, Qx=0.8 * ETA, Qt=-0.4 * LAM)
    X = elem(Px=0.3, Pt=1.1, Qx=0.9 * MU, Qt=1.3 * NU)
    closed = adjoint_closed_form(Y, X)
    series = adjoint_exp(Y, X, series_terms=16)
    assert (closed - series).norm() < 1e-10
    assert adjoint_truncation_bound(Y, X, 16) < 1e-10


@given(st.integers(0, 300))
@settings(max_examples=30, deadline=None)
def test_adjoint_preserves_the_ideal(seed):
    Y = rand_elem(seed)
    X = rand_elem(seed + 1234, ideal_only=True)
    img = adjoint_exp(Y, X, series_terms=12)
    assert img.c_L.is_zero()


def test_series_term_count_matters():
    # one term is just X; the default tail bound is what makes 16 safe
    Y, X = elem(L=-0.5), elem(Px=1.0)
    assert (adjoint_exp(Y, X, series_terms=1) - X).norm() == 0.0
    assert adjoint_truncation_bound(Y, X, 4) > adjoint_truncation_bound(Y, X, 16)


# ----------------------------------------------- conjugation normal forms


def test_rescaling_normal_form_Px_Pt():
    for eps in (1.0, -1.0):
        X = elem(Px=1.0, Pt=eps)
        img = adjoint_closed_form(elem(L=0.7), X)
        scale = 1.0 / img.c_Px.body
        z = img * scale
        assert z.c_Px.body == pytest.approx(1.0, abs=1e-15)
        # the relative weight moves but the sign never does
        assert z.c_Pt.body == pytest.approx(eps * 0.06081006262521797, abs=1e-15)
        assert math.copysign(1.0, z.c_Pt.body) == eps


def test_rescaling_normal_form_Px_Qx():
    X = elem(Px=1.0, Qx=MU)
    img = adjoint_closed_form(elem(L=0.7), X)
    z = img * (1.0 / img.c_Px.body)
    assert z.c_Px.body == pytest.approx(1.0, abs=1e-15)
    assert (z.c_Qx - 0.4965853037914095 * MU).norm() < 1e-15
    assert z.c_Pt.is_zero()


def test_rescaling_two_odd_parameters():
    # conjugating mu Qx + nu Qt by -k L and rescaling by e^{2k} sends
    # (mu, nu) to (e^k mu, e^{3k} nu)
    k = 0.25
    X = elem(Qx=MU, Qt=NU)
    img = adjoint_closed_form(elem(L=-k), X)
    z = img * math.exp(2 * k)
    assert (z.c_Qx - 1.2840254166877414 * MU).norm() < 1e-14
    assert (z.c_Qt - 2.117000016612675 * NU).norm() < 1e-14


def test_conjugating_away_the_ideal_part():
    # V = L + W conjugates to exactly L; the closed-form Y needs half the
    # translation parts and the odd parts verbatim (Qt with a flipped sign)
    V = elem(L=1.0, Px=0.7, Pt=-1.3, Qx=0.8 * MU, Qt=1.1 * NU)
    Y0 = elem(Px=0.35, Pt=0.65, Qx=0.8 * MU, Qt=-1.1 * NU)
    img = adjoint_exp(Y0, V, series_terms=16)
    assert (img - basis_element("L")).norm() < 1e-15


@given(st.integers(0, 200))
@settings(max_examples=20, deadline=None)
def test_newton_solve_reaches_L(seed):
    V = rand_elem(seed, ideal_only=True) * 0.3 + basis_element("L")
    Y, res = solve_conjugation_to_L(V)
    assert res < 1e-12
    assert Y.c_L.is_zero()
    img = adjoint_exp(Y, V)
    assert (img - basis_element("L")).norm() < 1e-12


# ------------------------------------------------------- realized structure


def test_realized_superspace_structure():
    assert verify_structure("superspace", n_points=4, seed=0) < 1e-12


def test_realized_component_structure():
    assert verify_structure("component", n_points=4, seed=0) < 1e-12


def test_realized_structure_negative_control(monkeypatch):
    monkeypatch.setitem(STRUCTURE_TABLE, ("Qx", "Qx"), {"Px": 2.0})
    assert verify_structure("superspace", n_points=2, seed=0) > 0.1


def test_unknown_realization():
    with pytest.raises(ValueError):
        verify_structure("lightcone")


# ------------------------------------------------------- subalgebra catalog


def test_catalog_shape():
    cat = subalgebra_catalog()
    assert len(cat) == 21
    names = [t.name for t in cat]
    assert len(set(names)) == 21
    assert sum(1 for t in cat if t.picture == "superspace") == 16
    assert sum(1 for t in cat if t.picture == "component") == 5
    blob = json.dumps([t.payload() for t in cat])
    back = json.loads(blob)
    assert back[3]["slots"] == ["eps"]
    assert back[15]["expression"] == "P_x + eps*P_t + mu*Q_x + nu*Q_t"


def test_catalog_instantiation():
    cat = {t.name: t for t in subalgebra_catalog()}
    X = cat["S16"].instantiate(ctx, eps=-1.0, mu=MU, nu=NU)
    assert X.c_Px.body == 1.0 and X.c_Pt.body == -1.0
    assert (X.c_Qx - MU).norm() == 0.0 and (X.c_Qt - NU).norm() == 0.0
    assert X.c_L.is_zero()
    lone = cat["S1"].instantiate(ctx)
    assert lone.c_L.body == 1.0 and lone.c_Px.is_zero()
    s7 = cat["S7"].instantiate(ctx, mu=MU)
    assert s7.c_Pt.body == 1.0 and s7.c_Px.is_zero()
    with pytest.raises(KeyError):
        cat["S13"].instantiate(ctx, mu=MU)
    with pytest.raises(ValueError):
        cat["L1"].instantiate(ctx)
    with pytest.raises(ParityError):
        cat["S5"].instantiate(ctx, mu=0.5)


def test_catalog_entries_are_subalgebras():
    # every superspace template closes under the bracket: [X, X] = 0
    cat = subalgebra_catalog()
    for t in cat:
        if t.picture != "superspace":
            continue
        params = {}
        if "eps" in t.slots:
            params["eps"] = -1.0
        if "mu" in t.slots:
            params["mu"] = MU
        if "nu" in t.slots:
            params["nu"] = NU
        X = t.instantiate(ctx, **params)
        assert bracket(X, X).is_zero(), t.name
