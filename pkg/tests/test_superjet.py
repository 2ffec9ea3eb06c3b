"""Jet layer: Leibniz products, partials, analytic composition."""

import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from susygordon.analytic import COS, EXP, LOG, SIN, TaylorFn, TrigPoly
from susygordon.grassmann import GrassmannNumber, ParityError, gen, sample_random, scalar
from susygordon.superjet import (
    JetSpec,
    SuperJet,
    jet_add,
    jet_apply_analytic,
    jet_constant,
    jet_from_derivs,
    jet_isclose,
    jet_multiply,
    jet_partial,
    jet_scale,
    jet_variable,
)

NG = 8
XT = JetSpec(("x", "t"), order=2)


def sc(v):
    return scalar(v, NG)


def test_square_of_coordinate():
    j = jet_variable(JetSpec(("x",), 2), "x", sc(3.0))
    sq = jet_multiply(j, j)
    assert sq.get((0,)).body == 9.0
    assert sq.get((1,)).body == 6.0
    assert sq.get((2,)).body == 2.0


def test_two_variable_product_against_calculus():
    # f = sin(x) cos(t) + x t^2 at (x0, t0), all raw partials to order 2
    x0, t0 = 0.7, -0.4
    jx = jet_variable(XT, "x", sc(x0))
    jt = jet_variable(XT, "t", sc(t0))
    f = jet_apply_analytic(jx, SIN) * jet_apply_analytic(jt, COS) + jx * (jt * jt)
    sx, cx = math.sin(x0), math.cos(x0)
    stt, ct = math.sin(t0), math.cos(t0)
    expect = {
        (0, 0): sx * ct + x0 * t0**2,
        (1, 0): cx * ct + t0**2,
        (0, 1): -sx * stt + 2 * x0 * t0,
        (2, 0): -sx * ct,
        (1, 1): -cx * stt + 2 * t0,
        (0, 2): -sx * ct + 2 * x0,
    }
    for J, v in expect.items():
        got = f.get(J).body
        assert abs(got - v) < 1e-12, f"component {J}: {got} vs {v}"


def test_mixed_partial_against_finite_differences():
    def f(x, t):
        return math.exp(0.3 * x) * math.sin(x * t) + t**3

    def build(x0, t0):
        jx = jet_variable(XT, "x", sc(x0))
        jt = jet_variable(XT, "t", sc(t0))
        return jet_apply_analytic(jet_scale(jx, 0.3), EXP) * jet_apply_analytic(
            jx * jt, SIN
        ) + jt * jt * jt

    x0, t0 = 1.1, 0.6
    jet = build(x0, t0)
    h = 1e-4
    fd_xt = (f(x0 + h, t0 + h) - f(x0 + h, t0 - h) - f(x0 - h, t0 + h) + f(x0 - h, t0 - h)) / (
        4 * h * h
    )
    assert abs(jet.get((1, 1)).body - fd_xt) < 1e-6
    fd_x = (f(x0 + h, t0) - f(x0 - h, t0)) / (2 * h)
    assert abs(jet.get((1, 0)).body - fd_x) < 1e-7


def test_soul_carrying_composition():
    # sin(alpha + e*beta) = sin(alpha) + e*beta*cos(alpha) when e*e = 0,
    # and the same must hold slotwise for every sigma-derivative
    e = gen(1, NG) * gen(2, NG)
    alpha = TrigPoly(waves=[(1.2, 0.9, 0.2)], poly=[0.4])
    beta = TrigPoly(waves=[(0.7, 1.4, -0.5)])
    s0 = 0.8
    spec = JetSpec(("s",), 3)
    da, db = alpha.derivs(s0, 3), beta.derivs(s0, 3)
    F = jet_from_derivs(spec, {(k,): sc(da[k]) + e * sc(db[k]) for k in range(4)})
    sF = jet_apply_analytic(F, SIN)
    sin_a = TaylorFn(lambda s: (s * 0.9 + 0.2).apply(SIN) * 1.2 + 0.4).derivs(s0, 3)
    # expected body: sin(alpha); expected e-part: beta*cos(alpha)
    body_expect = TaylorFn(
        lambda s: ((s * 0.9 + 0.2).apply(SIN) * 1.2 + 0.4).apply(SIN)
    ).derivs(s0, 3)
    soul_expect = TaylorFn(
        lambda s: ((s * 1.4 - 0.5).apply(SIN) * 0.7)
        * ((s * 0.9 + 0.2).apply(SIN) * 1.2 + 0.4).apply(COS)
    ).derivs(s0, 3)
    for k in range(4):
        comp = sF.get((k,))
        assert abs(comp.body - body_expect[k]) < 1e-10
        soul = comp - sc(comp.body)
        diff = soul - e * sc(soul_expect[k])
        assert diff.norm() < 1e-10, f"slot {k}: {diff}"
    assert len(sin_a) == 4  # silence the otherwise-unused route


def test_exp_log_round_trip():
    spec = JetSpec(("x",), 3)
    e = gen(1, NG) * gen(2, NG)
    j = jet_from_derivs(
        spec,
        {
            (0,): sc(2.0) + e * sc(0.3),
            (1,): sc(-0.4) + e * sc(1.1),
            (2,): sc(0.9),
            (3,): sc(0.2) + e * sc(-0.7),
        },
    )
    back = jet_apply_analytic(jet_apply_analytic(j, LOG), EXP)
    assert jet_isclose(back, j, 1e-10)


def test_order_three_chain_rule():
    tp = TrigPoly(waves=[(0.8, 1.3, 0.4), (0.3, 2.1, -1.0)], poly=[0.2, 0.5])
    x0 = 0.35
    spec = JetSpec(("x",), 3)
    inner = jet_from_derivs(spec, {(k,): sc(v) for k, v in enumerate(tp.derivs(x0, 3))})
    outer = jet_apply_analytic(inner, SIN)
    ref = TaylorFn(
        lambda s: (
            (s * 1.3 + 0.4).apply(SIN) * 0.8
            + (s * 2.1 - 1.0).apply(SIN) * 0.3
            + s * 0.5
            + 0.2
        ).apply(SIN)
    ).derivs(x0, 3)
    for k in range(4):
        assert abs(outer.get((k,)).body - ref[k]) < 1e-11


def test_partial_and_truncation():
    jx = jet_variable(XT, "x", sc(2.0))
    jt = jet_variable(XT, "t", sc(5.0))
    f = jx * jx * jt  # x^2 t
    fx = jet_partial(f, "x")  # 2 x t
    assert fx.spec.order == 1
    assert fx.get((0, 0)).body == 20.0
    assert fx.get((1, 0)).body == 10.0
    assert fx.get((0, 1)).body == 4.0
    with pytest.raises(KeyError):
        f.d("y")


def rand_jet(spec, rng_seed, parity=None):
    rng = random.Random(rng_seed)
    comp = {}
    for J in spec.indices():
        if parity is None:
            v = sample_random("even", 4, rng.randrange(10**6), NG) + sample_random(
                "odd", 3, rng.randrange(10**6), NG
            )
        else:
            v = sample_random(parity, 4, rng.randrange(10**6), NG)
        comp[J] = v
    return jet_from_derivs(spec, comp)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6), st.integers(0, 10**6))
def test_product_rule(sa, sb):
    f = rand_jet(XT, sa)
    g = rand_jet(XT, sb)
    lhs = jet_partial(jet_multiply(f, g), "x")
    spec1 = JetSpec(XT.seeds, 1)
    trunc = lambda j: SuperJet(spec1, NG, {J: v for J, v in j.comp.items() if sum(J) <= 1})
    rhs = jet_add(
        jet_multiply(jet_partial(f, "x"), trunc(g)),
        jet_multiply(trunc(f), jet_partial(g, "x")),
    )
    assert jet_isclose(lhs, rhs, 1e-9)


def test_odd_times_odd_jets():
    th1, th2 = gen(1, NG), gen(2, NG)
    spec = JetSpec(("x",), 1)
    a = jet_from_derivs(spec, {(0,): th1 * sc(2.0), (1,): th1 * sc(-1.0)})
    b = jet_from_derivs(spec, {(0,): th1 * sc(3.0), (1,): th2})
    sq = jet_multiply(a, a)
    assert all(v.is_zero() for v in sq.comp.values())
    ab = jet_multiply(a, b)
    assert ab.get((0, )).is_zero()
    assert (ab.get((1,)) - (th1 * th2 * sc(2.0) + (-th1) * th1 * sc(3.0))).norm() < 1e-15


def test_left_vs_right_scale():
    th1, th2 = gen(1, NG), gen(2, NG)
    spec = JetSpec(("x",), 0)
    a = jet_from_derivs(spec, {(0,): th2})
    left = jet_scale(a, th1, from_left=True)
    right = jet_scale(a, th1)
    assert (left.get((0,)) - th1 * th2).norm() == 0.0
    assert (right.get((0,)) + th1 * th2).norm() == 0.0


def test_apply_rejects_odd_jet():
    spec = JetSpec(("x",), 1)
    a = jet_from_derivs(spec, {(0,): gen(1, NG)})
    with pytest.raises(ParityError):
        jet_apply_analytic(a, SIN)


def test_constant_jet():
    c = jet_constant(XT, sc(4.0))
    assert c.value().body == 4.0
    assert c.d("x").is_zero()
    j = jet_variable(XT, "t", sc(1.5))
    assert (c * j).d("t").body == 4.0
