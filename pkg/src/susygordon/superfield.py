"""Even superfields on the (1,1|2) superspace and the operators acting on them.

A superfield is stored as four component handles over the even coordinates,
with the two odd coordinates realized as the reserved Grassmann generators
of an ``AlgebraContext``:

    value = u/2 + th1*phi + th2*psi + th1*th2*F

Handles map ``(x, t, order) -> SuperJet`` over seeds ("x", "t"), so the
whole calculus runs on exact jets; no finite differencing anywhere.

Odd-coordinate derivatives are left derivatives: d_th1(th1 th2 F) = th2 F
and d_th2(th1 th2 F) = -th1 F.  A doubly-indexed entry applies the leftmost
subscript first, so value_th1th2 = d_th2(d_th1 value) and equals +F on the
pure th1 th2 term.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable

from .analytic import COS, SIN, TrigPoly
from .grassmann import (
    DEFAULT_CONTEXT,
    AlgebraContext,
    GrassmannNumber,
    apply_analytic,
    soul_taylor,
    drop_gens,
    gen_derivative,
    scalar,
)
from .superjet import (
    JetSpec,
    SuperJet,
    jet_apply_analytic,
    jet_constant,
    jet_map,
    jet_partial,
    jet_scale,
    jet_variable,
)

ComponentHandle = Callable[[GrassmannNumber, GrassmannNumber, int], SuperJet]


@dataclass
class Superfield:
    u_half: ComponentHandle
    phi: ComponentHandle
    psi: ComponentHandle
    F: ComponentHandle
    ctx: AlgebraContext = DEFAULT_CONTEXT


@dataclass
class SuperfieldValueBundle:
    value: GrassmannNumber
    d_x: GrassmannNumber
    d_t: GrassmannNumber
    d_th1: GrassmannNumber
    d_th2: GrassmannNumber
    d_xx: GrassmannNumber
    d_xt: GrassmannNumber
    d_tt: GrassmannNumber
    d_xth1: GrassmannNumber
    d_xth2: GrassmannNumber
    d_tth1: GrassmannNumber
    d_tth2: GrassmannNumber
    d_th1th2: GrassmannNumber


def superfield_jet(f: Superfield, x, t, order: int = 2) -> SuperJet:
    """The full theta-carrying jet of the superfield over ("x", "t")."""
    th1, th2 = f.ctx.gen("theta1"), f.ctx.gen("theta2")
    ju = f.u_half(x, t, order)
    jphi = f.phi(x, t, order)
    jpsi = f.psi(x, t, order)
    jF = f.F(x, t, order)
    return (
        ju
        + jet_scale(jphi, th1, from_left=True)
        + jet_scale(jpsi, th2, from_left=True)
        + jet_scale(jF, th1 * th2, from_left=True)
    )


def evaluate_bundle(f: Superfield, x, t) -> SuperfieldValueBundle:
    jet = superfield_jet(f, x, t, order=2)
    i1 = f.ctx.roles["theta1"]
    i2 = f.ctx.roles["theta2"]

    def dth1(v):
        return gen_derivative(v, i1)

    def dth2(v):
        return gen_derivative(v, i2)

    v = jet.value()
    return SuperfieldValueBundle(
        value=v,
        d_x=jet.d("x"),
        d_t=jet.d("t"),
        d_th1=dth1(v),
        d_th2=dth2(v),
        d_xx=jet.d("x", "x"),
        d_xt=jet.d("x", "t"),
        d_tt=jet.d("t", "t"),
        d_xth1=dth1(jet.d("x")),
        d_xth2=dth2(jet.d("x")),
        d_tth1=dth1(jet.d("t")),
        d_tth2=dth2(jet.d("t")),
        d_th1th2=dth2(dth1(v)),
    )


# ---------------------------------------------------- superspace derivations


def op_partial(jet: SuperJet, seed: str) -> SuperJet:
    return jet_partial(jet, seed)


def _op_theta(jet: SuperJet, ctx: AlgebraContext, which: str, sign: float) -> SuperJet:
    """d_theta + sign * theta * d_even as a jet-to-jet map (order drops 1)."""
    theta_role, seed = ("theta1", "x") if which == "x" else ("theta2", "t")
    idx = ctx.roles[theta_role]
    th = ctx.gen(theta_role)
    first = jet_map(jet, lambda v: gen_derivative(v, idx))
    second = jet_scale(jet_partial(jet, seed), th * sign, from_left=True)
    sub = JetSpec(jet.spec.seeds, jet.spec.order - 1)
    comp = dict(second.comp)
    for J, v in first.comp.items():
        if sum(J) <= sub.order:
            comp[J] = comp[J] + v if J in comp else v
    return SuperJet(sub, jet.ngen, comp)


def op_D(jet: SuperJet, ctx: AlgebraContext, which: str) -> SuperJet:
    return _op_theta(jet, ctx, which, 1.0)


def op_Q(jet: SuperJet, ctx: AlgebraContext, which: str) -> SuperJet:
    return _op_theta(jet, ctx, which, -1.0)


def apply_D(f: Superfield, which: str, x, t) -> GrassmannNumber:
    return op_D(superfield_jet(f, x, t, order=1), f.ctx, which).value()


def apply_Q(f: Superfield, which: str, x, t) -> GrassmannNumber:
    return op_Q(superfield_jet(f, x, t, order=1), f.ctx, which).value()


def apply_DD(f: Superfield, outer: str, inner: str, x, t) -> GrassmannNumber:
    jet = superfield_jet(f, x, t, order=2)
    return op_D(op_D(jet, f.ctx, inner), f.ctx, outer).value()


# ------------------------------------------------------------------ residuals


def ssg_residual(f: Superfield, x, t) -> GrassmannNumber:
    """th1 th2 value_xt - th2 value_tth1 + th1 value_xth2 - value_th1th2 - sin(value).

    Zero exactly when the point satisfies the superfield equation; this is
    the expanded form of (covariant x) (covariant t) value = sin(value).
    The sine goes through the bare Taylor core: a field whose odd slots
    carry even supernumber coefficients has a mixed-parity value, and the
    residual must still be able to judge it.
    """
    b = evaluate_bundle(f, x, t)
    th1, th2 = f.ctx.gen("theta1"), f.ctx.gen("theta2")
    return (
        th1 * th2 * b.d_xt
        - th2 * b.d_tth1
        + th1 * b.d_xth2
        - b.d_th1th2
        - soul_taylor(SIN, b.value)
    )


def component_residuals(f: Superfield, x, t):
    """(D1, D2, D3, DF): the three component equations plus the algebraic tie.

    D1 = u_xt + sin u - 2 phi psi sin(u/2)
    D2 = phi_t + psi cos(u/2)
    D3 = psi_x - phi cos(u/2)
    DF = F + sin(u/2)
    """
    ju = f.u_half(x, t, 2)
    jphi = f.phi(x, t, 1)
    jpsi = f.psi(x, t, 1)
    jF = f.F(x, t, 0)
    half_u = ju.value()
    sin_half = apply_analytic(SIN, half_u)
    cos_half = apply_analytic(COS, half_u)
    u_xt = ju.d("x", "t") * 2.0
    sin_u = sin_half * cos_half * 2.0
    phi_v, psi_v = jphi.value(), jpsi.value()
    d1 = u_xt + sin_u - phi_v * psi_v * sin_half * 2.0
    d2 = jphi.d("t") + psi_v * cos_half
    d3 = jpsi.d("x") - phi_v * cos_half
    dF = jF.value() + sin_half
    return d1, d2, d3, dF


def theta_coefficients(v: GrassmannNumber, ctx: AlgebraContext):
    """Split v = c0 + th1 c1 + th2 c2 + th1 th2 c3 with theta-free c_i."""
    i1, i2 = ctx.roles["theta1"], ctx.roles["theta2"]
    mask = (1 << i1) | (1 << i2)
    c0 = drop_gens(v, mask)
    c1 = drop_gens(gen_derivative(v, i1), mask)
    c2 = drop_gens(gen_derivative(v, i2), mask)
    c3 = gen_derivative(gen_derivative(v, i1), i2)
    return c0, c1, c2, c3


def component_equivalence(f: Superfield, x, t) -> float:
    """Max deviation between the residual's theta slots and the component set.

    The identity holds off shell:
        slot 1     = -DF
        slot th1   =  D3
        slot th2   = -D2
        slot th1th2 = D1/2 - DF cos(u/2)
    """
    r = ssg_residual(f, x, t)
    c0, c1, c2, c3 = theta_coefficients(r, f.ctx)
    d1, d2, d3, dF = component_residuals(f, x, t)
    u_half = f.u_half(x, t, 0).value()
    cos_half = apply_analytic(COS, u_half)
    checks = (
        c0 + dF,
        c1 - d3,
        c2 + d2,
        c3 - (d1 * 0.5 - dF * cos_half),
    )
    return max(c.norm() for c in checks)


# ------------------------------------------------------------ handle builders


def constant_component(value: GrassmannNumber) -> ComponentHandle:
    def handle(x, t, order):
        return jet_constant(JetSpec(("x", "t"), order), value)

    return handle


def profile_component(builder) -> ComponentHandle:
    """builder(jx, jt) -> SuperJet, with jx, jt the coordinate jets."""

    def handle(x, t, order):
        spec = JetSpec(("x", "t"), order)
        return builder(jet_variable(spec, "x", x), jet_variable(spec, "t", t))

    return handle


def zero_component(ctx: AlgebraContext = DEFAULT_CONTEXT) -> ComponentHandle:
    return constant_component(ctx.zero())


def random_superfield(rng_seed, ctx: AlgebraContext = DEFAULT_CONTEXT) -> Superfield:
    """Polynomial x trigonometric components with random odd prefactors.

    Deterministic in the seed.  Free odd generators (everything except the
    two theta slots) appear in the odd components both linearly and as a
    cubic product, so anticommutation bugs have something to bite on.
    """
    rng = random.Random(rng_seed)
    i1, i2 = ctx.roles["theta1"], ctx.roles["theta2"]
    free = [i for i in range(ctx.generator_count) if i not in (i1, i2)]

    def trig():
        return TrigPoly(
            waves=[(rng.uniform(-1, 1), rng.uniform(0.4, 1.3), rng.uniform(-1, 1))],
            poly=[rng.uniform(-0.6, 0.6), rng.uniform(-0.4, 0.4)],
        )

    def even_builder():
        fx, ft, gx, gt = trig(), trig(), trig(), trig()

        def handle(x, t, order):
            spec = JetSpec(("x", "t"), order)
            jx = jet_variable(spec, "x", x)
            jt = jet_variable(spec, "t", t)
            return jet_apply_analytic(jx, fx) * jet_apply_analytic(jt, ft) + jet_apply_analytic(
                jx, gx
            ) * jet_apply_analytic(jt, gt)

        return handle

    def odd_builder():
        k1 = ctx.gen(rng.choice(free))
        trip = rng.sample(free, 3)
        k3 = ctx.gen(trip[0]) * ctx.gen(trip[1]) * ctx.gen(trip[2])
        fx, ft, gx, gt = trig(), trig(), trig(), trig()

        def handle(x, t, order):
            spec = JetSpec(("x", "t"), order)
            jx = jet_variable(spec, "x", x)
            jt = jet_variable(spec, "t", t)
            a = jet_apply_analytic(jx, fx) * jet_apply_analytic(jt, ft)
            b = jet_apply_analytic(jx, gx) * jet_apply_analytic(jt, gt)
            return jet_scale(a, k1, from_left=True) + jet_scale(b, k3, from_left=True)

        return handle

    return Superfield(
        u_half=even_builder(),
        phi=odd_builder(),
        psi=odd_builder(),
        F=even_builder(),
        ctx=ctx,
    )
