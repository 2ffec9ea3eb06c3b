"""Superfield assembly, covariant/supersymmetry operators, residuals."""

import math

import pytest

from susygordon.analytic import ARCTAN, EXP, SECH, SIN
from susygordon.grassmann import (
    DEFAULT_CONTEXT as CTX,
    Parity,
    apply_analytic,
    gen_derivative,
    sample_random,
    scalar,
)
from susygordon.superfield import (
    Superfield,
    apply_D,
    apply_DD,
    apply_Q,
    component_equivalence,
    component_residuals,
    constant_component,
    evaluate_bundle,
    op_D,
    op_Q,
    profile_component,
    random_superfield,
    ssg_residual,
    superfield_jet,
    theta_coefficients,
    zero_component,
)
from susygordon.superjet import jet_apply_analytic, jet_scale

TH1 = CTX.gen("theta1")
TH2 = CTX.gen("theta2")


def make(u_half=None, phi=None, psi=None, F=None):
    z = zero_component(CTX)
    return Superfield(u_half or z, phi or z, psi or z, F or z, CTX)


def test_linear_u_component():
    f = make(u_half=profile_component(lambda jx, jt: jx))  # u = 2x
    b = evaluate_bundle(f, scalar(0.3), scalar(-1.2))
    assert b.d_x.body == 1.0
    assert b.d_th1.is_zero()
    assert b.d_xt.is_zero()


def test_constant_odd_component():
    xi3 = CTX.gen(3)
    f = make(phi=constant_component(xi3))
    b = evaluate_bundle(f, scalar(0.0), scalar(0.0))
    assert (b.d_th1 - xi3).is_zero()
    assert b.d_x.is_zero()
    assert (b.value - TH1 * xi3).is_zero()


def test_theta_derivative_layout():
    # value = th1 th2 F: leftmost-subscript-first reading gives +F, and the
    # swapped application order flips the sign
    f = make(F=profile_component(lambda jx, jt: jx * jt))
    x, t = scalar(2.0), scalar(5.0)
    b = evaluate_bundle(f, x, t)
    assert b.d_th1th2.body == 10.0
    i1, i2 = CTX.roles["theta1"], CTX.roles["theta2"]
    swapped = gen_derivative(gen_derivative(b.value, i2), i1)
    assert swapped.body == -10.0
    # first theta derivatives carry the familiar expansion
    assert (b.d_th1 - TH2 * scalar(10.0)).is_zero()
    assert (b.d_th2 + TH1 * scalar(10.0)).is_zero()


def test_first_theta_derivative_is_phi_plus_theta2_F():
    f = random_superfield(42)
    x, t = scalar(0.4), scalar(0.9)
    b = evaluate_bundle(f, x, t)
    phi_v = f.phi(x, t, 0).value()
    F_v = f.F(x, t, 0).value()
    assert (b.d_th1 - (phi_v + TH2 * F_v)).norm() < 1e-14
    psi_v = f.psi(x, t, 0).value()
    assert (b.d_th2 - (psi_v - TH1 * F_v)).norm() < 1e-14


def test_D_of_pure_theta1():
    f = make(phi=constant_component(CTX.one()))  # value = th1
    assert (apply_D(f, "x", scalar(1.0), scalar(2.0)) - CTX.one()).is_zero()


POINTS = [(0.3, -0.7), (1.1, 0.45), (-0.6, 0.2)]


@pytest.mark.parametrize("seed", range(10))
def test_operator_identities(seed):
    f = random_superfield(seed)
    for x0, t0 in POINTS:
        x, t = scalar(x0), scalar(t0)
        b = evaluate_bundle(f, x, t)
        jet3 = superfield_jet(f, x, t, order=2)

        def DD(a, b_):
            return op_D(op_D(jet3, CTX, b_), CTX, a).value()

        def QQ(a, b_):
            return op_Q(op_Q(jet3, CTX, b_), CTX, a).value()

        def DQ(a, b_):
            return op_D(op_Q(jet3, CTX, b_), CTX, a).value()

        def QD(a, b_):
            return op_Q(op_D(jet3, CTX, b_), CTX, a).value()

        assert (DD("x", "x") - b.d_x).norm() < 1e-13
        assert (DD("t", "t") - b.d_t).norm() < 1e-13
        assert (DD("x", "t") + DD("t", "x")).norm() < 1e-13
        # {Q,Q} doubles the single square: 2 Q_x^2 = -2 d_x
        assert (QQ("x", "x") * 2.0 + scalar(2.0) * b.d_x).norm() < 1e-13
        assert (QQ("t", "t") * 2.0 + scalar(2.0) * b.d_t).norm() < 1e-13
        assert (QQ("x", "t") + QQ("t", "x")).norm() < 1e-13
        for da, qb in (("x", "x"), ("x", "t"), ("t", "x"), ("t", "t")):
            anti = DQ(da, qb) + QD(qb, da)
            assert anti.norm() < 1e-13, f"D_{da} Q_{qb} anticommutator: {anti}"


def test_apply_wrappers_match_jet_ops():
    f = random_superfield(7)
    x, t = scalar(0.25), scalar(0.75)
    b = evaluate_bundle(f, x, t)
    assert (apply_D(f, "x", x, t) - (b.d_th1 + TH1 * b.d_x)).norm() < 1e-14
    assert (apply_Q(f, "t", x, t) - (b.d_th2 - TH2 * b.d_t)).norm() < 1e-14
    assert (apply_DD(f, "x", "t", x, t) - op_D(
        op_D(superfield_jet(f, x, t, 2), CTX, "t"), CTX, "x"
    ).value()).norm() == 0.0


def test_residual_is_covariant_equation():
    # the expanded residual must equal D_x D_t value - sin(value)
    for seed in (3, 11):
        f = random_superfield(seed)
        for x0, t0 in POINTS:
            x, t = scalar(x0), scalar(t0)
            r = ssg_residual(f, x, t)
            alt = apply_DD(f, "x", "t", x, t) - apply_analytic(
                SIN, evaluate_bundle(f, x, t).value
            )
            assert (r - alt).norm() < 1e-13


def test_constant_multiple_of_pi_solves():
    # value = k*pi solves the equation; k*pi/2 with odd k does not
    for k in (-1, 0, 2):
        f = make(u_half=constant_component(scalar(k * math.pi)))
        assert ssg_residual(f, scalar(0.1), scalar(0.2)).norm() < 1e-12
    g = make(u_half=constant_component(scalar(math.pi / 2.0)))
    assert ssg_residual(g, scalar(0.1), scalar(0.2)).norm() > 0.5


def test_negative_control_theta1theta2():
    f = make(F=constant_component(CTX.one()))  # value = th1 th2
    r = ssg_residual(f, scalar(0.0), scalar(0.0))
    # -value_th1th2 - sin(th1 th2) = -1 - th1 th2
    assert (r + CTX.one() + TH1 * TH2).is_zero()
    assert abs(r.body) >= 0.1


def kink_superfield():
    def u_half(jx, jt):
        return jet_apply_analytic(jet_apply_analytic(jx - jt, EXP), ARCTAN) * 2.0

    def F(jx, jt):
        return jet_apply_analytic(jx - jt, SECH) * (-1.0)

    return make(u_half=profile_component(u_half), F=profile_component(F))


def test_classical_kink():
    f = kink_superfield()
    for i in range(5):
        for j in range(5):
            x0, t0 = -1.0 + 0.5 * i, -0.8 + 0.4 * j
            d1, d2, d3, dF = component_residuals(f, scalar(x0), scalar(t0))
            assert d1.norm() < 1e-10, f"({x0},{t0}): {d1}"
            assert d2.is_zero() and d3.is_zero()
            assert dF.norm() < 1e-10
            r = ssg_residual(f, scalar(x0), scalar(t0))
            assert r.norm() < 1e-10


def test_kink_against_finite_differences():
    # independent scalar oracle for u_xt = -sin(u)
    u = lambda x, t: 4.0 * math.atan(math.exp(x - t))
    h = 1e-4
    for x0, t0 in ((0.0, 0.0), (0.7, -0.3)):
        fd = (u(x0 + h, t0 + h) - u(x0 + h, t0 - h) - u(x0 - h, t0 + h) + u(x0 - h, t0 - h)) / (
            4 * h * h
        )
        assert abs(fd + math.sin(u(x0, t0))) < 1e-6


def test_component_equivalence_off_shell():
    for seed in range(20):
        f = random_superfield(seed)
        for x0, t0 in POINTS[:2]:
            dev = component_equivalence(f, scalar(x0), scalar(t0))
            assert dev < 1e-12, f"seed {seed} at ({x0},{t0}): {dev}"
    z = make()
    assert component_equivalence(z, scalar(0.0), scalar(0.0)) == 0.0


def test_sin_expansion_of_constant_superfield():
    alpha, beta = 0.7, 1.3
    eta, lam = CTX.gen(4), CTX.gen(5)
    f = make(
        u_half=constant_component(scalar(alpha)),
        phi=constant_component(eta),
        psi=constant_component(lam),
        F=constant_component(scalar(beta)),
    )
    v = evaluate_bundle(f, scalar(0.0), scalar(0.0)).value
    s = apply_analytic(SIN, v)
    c0, c1, c2, c3 = theta_coefficients(s, CTX)
    sa, ca = math.sin(alpha), math.cos(alpha)
    assert abs(c0.body - sa) < 1e-12
    assert (c1 - eta * ca).norm() < 1e-12
    assert (c2 - lam * ca).norm() < 1e-12
    expect3 = scalar(beta * ca) + eta * lam * sa
    assert (c3 - expect3).norm() < 1e-12


def test_residual_parity_even():
    for seed in (1, 8):
        f = random_superfield(seed)
        r = ssg_residual(f, scalar(0.5), scalar(0.1))
        assert r.parity in (Parity.EVEN,)


def test_gian_type_constant_background():
    # u = (2k+1)pi, phi = m0, psi = m0*w(t), F = (-1)^(k+1): exact solution
    m0 = CTX.gen("mu0")
    for k in (0, 1):
        f = make(
            u_half=constant_component(scalar((2 * k + 1) * math.pi / 2.0)),
            phi=constant_component(m0),
            psi=profile_component(lambda jx, jt: jet_scale(jt * jt, m0, from_left=True)),
            F=constant_component(scalar((-1.0) ** (k + 1))),
        )
        x, t = scalar(0.8), scalar(1.7)
        d1, d2, d3, dF = component_residuals(f, x, t)
        for d in (d1, d2, d3):
            assert d.norm() < 1e-12
        assert dF.norm() < 5e-13
        assert ssg_residual(f, x, t).norm() < 5e-13


def test_grassmann_valued_evaluation_points():
    # even supernumber coordinates flow through the jets unharmed
    f = random_superfield(5)
    soul = CTX.gen(2) * CTX.gen(3)
    x = scalar(0.4) + soul * scalar(0.2)
    t = scalar(-0.3)
    dev = component_equivalence(f, x, t)
    assert dev < 1e-12
