"""Invariant ansatz construction and the reduced ODE systems.

Every subalgebra whose orbits fill out superspace minus one even direction
is catalogued as a :class:`ReductionCase`: an invariant variable ``sigma``,
two odd invariant monomials, and the four profile equations the ansatz

    value = alpha(sigma) + m1 * f1(sigma) + m2 * f2(sigma) + m1 m2 * beta(sigma)

must satisfy.  ``build_ansatz`` turns four one-variable profiles into a full
superfield; ``reduced_residual`` evaluates the profile equations (appending
the second-order rewritten rows for the scaling and traveling cases);
``reduction_consistency`` checks, off shell and with random profiles, that
the superfield equation's residual recombines exactly from the reduced rows.

The component-level table (cases L1..L5 for u, phi, psi without the
auxiliary field) lives here too, with the slice map tying each of its rows
back to a superspace case.

Odd coefficients always multiply from the left, and the equations keep every
anticommuting product in the order written in their docstrings; swapping two
odd profile values flips a sign, so none of these expressions are symmetric
in their factors.
"""

import cmath
import math
import random
from dataclasses import dataclass, field
from typing import Callable, Optional

from .analytic import COS, RECIP, SIN, Const, Power, TrigPoly
from .grassmann import (
    DEFAULT_CONTEXT,
    AlgebraContext,
    GrassmannNumber,
    Parity,
    ParityError,
    apply_analytic,
    scalar,
)
from .superalgebra import AlgebraElement
from .superfield import Superfield, evaluate_bundle, ssg_residual, theta_coefficients
from .superjet import (
    JetSpec,
    SuperJet,
    jet_apply_analytic,
    jet_constant,
    jet_map,
    jet_scale,
    jet_variable,
)


class SingularPoint(ValueError):
    """A reduced equation was evaluated where one of its terms blows up."""


class OutOfDomain(ValueError):
    """The ansatz is not defined at the requested base point."""


def _promote(v, ctx: AlgebraContext) -> GrassmannNumber:
    if isinstance(v, GrassmannNumber):
        return v
    return ctx.scalar(float(v))


# --------------------------------------------------------------------------
# profiles


@dataclass(frozen=True)
class Profile:
    """Function of the invariant variable with supernumber coefficients.

    Stored as a sum of (coefficient, scalar function) terms, so exact
    derivatives of any order are available and a Taylor shift by the
    nilpotent part of the argument costs nothing extra.
    """

    ngen: int
    terms: tuple = ()

    @property
    def parity(self) -> Parity:
        seen = {c.parity for c, _ in self.terms if not c.is_zero()}
        if not seen:
            return Parity.EVEN
        if len(seen) > 1:
            return Parity.MIXED
        return seen.pop()

    def is_zero(self) -> bool:
        return all(c.is_zero() for c, _ in self.terms)

    def jet(self, sigma_jet: SuperJet) -> SuperJet:
        acc = jet_constant(sigma_jet.spec, scalar(0.0, self.ngen))
        for coef, fn in self.terms:
            acc = acc + jet_scale(jet_apply_analytic(sigma_jet, fn), coef, from_left=True)
        return acc

    def derivs_at(self, sigma, order: int) -> list:
        """[f, f', ..., f^(order)] at sigma; soul in sigma is Taylor-expanded."""
        sg = sigma if isinstance(sigma, GrassmannNumber) else scalar(float(sigma), self.ngen)
        base = jet_variable(JetSpec(("s",), order), "s", sg)
        out = [scalar(0.0, self.ngen) for _ in range(order + 1)]
        for coef, fn in self.terms:
            j = jet_apply_analytic(base, fn)
            for k in range(order + 1):
                out[k] = out[k] + coef * j.get((k,))
        return out

    def value_at(self, sigma) -> GrassmannNumber:
        return self.derivs_at(sigma, 0)[0]

    def scaled(self, c) -> "Profile":
        cg = c if isinstance(c, GrassmannNumber) else scalar(float(c), self.ngen)
        return Profile(self.ngen, tuple((cg * coef, fn) for coef, fn in self.terms))

    def __add__(self, other: "Profile") -> "Profile":
        if self.ngen != other.ngen:
            raise ValueError("profiles over different generator counts")
        return Profile(self.ngen, self.terms + other.terms)


def profile(ctx: AlgebraContext, *terms) -> Profile:
    """Build a Profile from (coefficient, AnalyticFn) pairs."""
    norm = []
    for coef, fn in terms:
        norm.append((_promote(coef, ctx), fn))
    return Profile(ctx.generator_count, tuple(norm))


def const_profile(value, ctx: AlgebraContext = DEFAULT_CONTEXT) -> Profile:
    return profile(ctx, (value, Const(1.0)))


def zero_profile(ctx: AlgebraContext = DEFAULT_CONTEXT) -> Profile:
    return Profile(ctx.generator_count, ())


def _random_fn(rng: random.Random) -> TrigPoly:
    waves = [
        (rng.uniform(0.3, 1.0), rng.uniform(0.4, 1.2), rng.uniform(-1.5, 1.5))
        for _ in range(rng.randint(1, 2))
    ]
    poly = [rng.uniform(-0.4, 0.4), rng.uniform(-0.2, 0.2)]
    return TrigPoly(waves=waves, poly=poly)


def random_reduction_profiles(
    case,
    rng_seed,
    ctx: AlgebraContext = DEFAULT_CONTEXT,
    gens=("D1", "D2", "mu0", "lambda0"),
) -> dict:
    """Smooth random profiles with the right parities for the case's slots.

    Odd slots get one linear generator plus one cubic product so that
    anticommutation mistakes in the equations cannot cancel silently; the
    even slots carry a nilpotent pair on top of an ordinary number.
    """
    case = reduction_case(case)
    rng = random.Random(rng_seed)
    g = [ctx.gen(r) for r in gens]
    pair = g[0] * g[1]
    triple1 = g[0] * g[1] * g[2]
    triple2 = g[1] * g[2] * g[3]
    odd_leads = [g[2], g[3], g[0], g[1]]
    out = {}
    for i, name in enumerate(case.profile_names):
        if i in (0, 3):
            out[name] = profile(
                ctx,
                (ctx.scalar(rng.uniform(0.6, 1.4)), _random_fn(rng)),
                (pair * rng.uniform(-0.8, 0.8), _random_fn(rng)),
            )
        else:
            lead = odd_leads[i] * rng.uniform(0.5, 1.2)
            deep = (triple1 if i == 1 else triple2) * rng.uniform(-0.9, 0.9)
            out[name] = profile(ctx, (lead, _random_fn(rng)), (deep, _random_fn(rng)))
    return out


# --------------------------------------------------------------------------
# the reduction cases


@dataclass(frozen=True)
class ReductionCase:
    """One invariant ansatz shape plus its reduced system.

    ``signs`` couples the residual of the full superfield equation to the
    reduced rows: residual = sum_i signs[i] * monomial_i * row_i with the
    monomials (1, m1, m2, m1*m2).  The tuples were fixed by evaluating both
    sides off shell on random profiles; flipping any entry breaks the
    consistency check at order one.
    """

    case_id: str
    profile_names: tuple
    param_names: tuple
    signs: tuple
    sigma_jet: Callable = field(repr=False)
    m1_jet: Callable = field(repr=False)
    m2_jet: Callable = field(repr=False)
    equations: Callable = field(repr=False)
    guard: Optional[Callable] = field(default=None, repr=False)
    generator: Optional[Callable] = field(default=None, repr=False)


def _fill_params(case: ReductionCase, params, ctx: AlgebraContext) -> dict:
    given = dict(params or {})
    out = {}
    for name in case.param_names:
        if name == "eps":
            eps = float(given.pop("eps", 1.0))
            if eps not in (-1.0, 1.0):
                raise ValueError("eps must be +1 or -1")
            out["eps"] = eps
        else:
            v = given.pop(name, None)
            if v is None:
                v = ctx.gen(name)
            if not isinstance(v, GrassmannNumber) or not v.is_odd():
                raise ParityError(f"parameter {name} must be an odd supernumber")
            out[name] = v
    if given:
        raise ValueError(f"unknown parameters {sorted(given)} for {case.case_id}")
    return out


def _check_profiles(case: ReductionCase, profiles) -> None:
    for i, name in enumerate(case.profile_names):
        if name not in profiles:
            raise KeyError(f"{case.case_id} needs a profile named {name!r}")
        pr = profiles[name]
        if pr.is_zero():
            continue
        par = pr.parity
        if par is Parity.MIXED:
            raise ParityError(f"profile {name!r} mixes parities")
        want = Parity.EVEN if i in (0, 3) else Parity.ODD
        if par is not want:
            raise ParityError(f"profile {name!r} must be {want.name.lower()}")


def _jc(jref: SuperJet, value: GrassmannNumber) -> SuperJet:
    return jet_constant(jref.spec, value)


def _theta(ctx: AlgebraContext, which: str) -> GrassmannNumber:
    return ctx.gen(which)


# sigma / monomial builders.  Each takes the coordinate jets and returns a
# jet over the same spec, so products pick up the right x/t derivatives.

def _sig_s1(jx, jt, p, ctx):
    return jx * jt


def _m1_s1(jx, jt, p, ctx):
    return jet_scale(jet_apply_analytic(jt, Power(0.5)), _theta(ctx, "theta1"), from_left=True)


def _m2_s1(jx, jt, p, ctx):
    return jet_scale(jet_apply_analytic(jt, Power(-0.5)), _theta(ctx, "theta2"), from_left=True)


def _guard_s1(x, t, p, ctx):
    tb = _promote(t, ctx).body
    if tb <= 0.0:
        raise OutOfDomain(f"ansatz uses t**(1/2); needs t > 0, got body {tb}")


def _sig_t(jx, jt, p, ctx):
    return jt


def _sig_x(jx, jt, p, ctx):
    return jx


def _const_th1(jx, jt, p, ctx):
    return _jc(jx, _theta(ctx, "theta1"))


def _const_th2(jx, jt, p, ctx):
    return _jc(jx, _theta(ctx, "theta2"))


def _sig_s4(jx, jt, p, ctx):
    return jx + jet_scale(jt, -p["eps"])


def _sig_s7(jx, jt, p, ctx):
    return jx + jet_scale(jt, p["mu"] * _theta(ctx, "theta1"), from_left=True)


def _tau_s6(jx, jt, p, ctx):
    return _jc(jx, _theta(ctx, "theta1")) - jet_scale(jx, p["mu"], from_left=True)


def _tau_s7(jx, jt, p, ctx):
    return _jc(jx, _theta(ctx, "theta1")) - jet_scale(jt, p["mu"], from_left=True)


def _sig_s8(jx, jt, p, ctx):
    return (
        jet_scale(jx, p["eps"])
        - jt
        + jet_scale(jt, p["mu"] * _theta(ctx, "theta1"), from_left=True)
    )


def _tau_s8(jx, jt, p, ctx):
    return _jc(jx, _theta(ctx, "theta1")) - jet_scale(jt, p["mu"] * p["eps"], from_left=True)


def _sig_s10(jx, jt, p, ctx):
    return jt + jet_scale(jx, p["nu"] * _theta(ctx, "theta2"), from_left=True)


def _tau_s10(jx, jt, p, ctx):
    return _jc(jx, _theta(ctx, "theta2")) - jet_scale(jx, p["nu"], from_left=True)


def _tau_s11(jx, jt, p, ctx):
    return _jc(jx, _theta(ctx, "theta2")) - jet_scale(jt, p["nu"], from_left=True)


def _sig_s12(jx, jt, p, ctx):
    return (
        jt
        - jet_scale(jx, p["eps"])
        + jet_scale(jx, p["nu"] * _theta(ctx, "theta2"), from_left=True)
    )


def _trig(a0):
    return apply_analytic(SIN, a0), apply_analytic(COS, a0)


# Reduced rows, one function per case.  pv maps profile name to the list
# [f, f', f''] at sigma; rows are stated left to right exactly as solved.

def _rows_s1(pv, sig, p, ctx):
    a, m, n, b = pv["alpha"], pv["mu"], pv["nu"], pv["beta"]
    sin_a, cos_a = _trig(a[0])
    return (
        b[0] + sin_a,
        n[1] - m[0] * cos_a,
        sig * m[1] + m[0] * 0.5 + n[0] * cos_a,
        a[1] + sig * a[2] - b[0] * cos_a - m[0] * n[0] * sin_a,
    )


def _rows_s2(pv, sig, p, ctx):
    a, m, n, b = pv["alpha"], pv["mu"], pv["nu"], pv["beta"]
    sin_a, cos_a = _trig(a[0])
    return (
        b[0] + sin_a,
        m[0] * cos_a,
        m[1] + n[0] * cos_a,
        b[0] * cos_a + m[0] * n[0] * sin_a,
    )


def _rows_s3(pv, sig, p, ctx):
    a, m, n, b = pv["alpha"], pv["mu"], pv["nu"], pv["beta"]
    sin_a, cos_a = _trig(a[0])
    return (
        b[0] + sin_a,
        n[1] - m[0] * cos_a,
        n[0] * cos_a,
        b[0] * cos_a + m[0] * n[0] * sin_a,
    )


def _rows_s4(pv, sig, p, ctx):
    a, m, n, b = pv["alpha"], pv["mu"], pv["nu"], pv["beta"]
    e = p["eps"]
    sin_a, cos_a = _trig(a[0])
    return (
        b[0] + sin_a,
        n[1] - m[0] * cos_a,
        m[1] * e - n[0] * cos_a,
        a[2] * e + b[0] * cos_a + m[0] * n[0] * sin_a,
    )


def _rows_s6(pv, sig, p, ctx):
    a, h, l, b = pv["alpha"], pv["eta"], pv["lambda"], pv["beta"]
    mu = p["mu"]
    sin_a, cos_a = _trig(a[0])
    return (
        b[0] + sin_a,
        mu * b[0] - h[0] * cos_a,
        h[1] + l[0] * cos_a,
        mu * h[1] + b[0] * cos_a + h[0] * l[0] * sin_a,
    )


def _rows_s7(pv, sig, p, ctx):
    a, h, l, b = pv["alpha"], pv["eta"], pv["lambda"], pv["beta"]
    mu = p["mu"]
    sin_a, cos_a = _trig(a[0])
    return (
        b[0] + sin_a,
        l[1] - h[0] * cos_a,
        mu * a[1] - l[0] * cos_a,
        mu * h[1] + b[0] * cos_a + h[0] * l[0] * sin_a,
    )


def _rows_s8(pv, sig, p, ctx):
    a, h, l, b = pv["alpha"], pv["eta"], pv["lambda"], pv["beta"]
    mu, e = p["mu"], p["eps"]
    sin_a, cos_a = _trig(a[0])
    return (
        b[0] + sin_a,
        l[1] * e - h[0] * cos_a,
        h[1] + mu * a[1] - l[0] * cos_a,
        a[2] * e + mu * h[1] + b[0] * cos_a + h[0] * l[0] * sin_a,
    )


def _rows_s10(pv, sig, p, ctx):
    a, h, l, b = pv["alpha"], pv["eta"], pv["lambda"], pv["beta"]
    nu = p["nu"]
    sin_a, cos_a = _trig(a[0])
    return (
        b[0] - sin_a,
        l[1] + h[0] * cos_a,
        nu * a[1] + l[0] * cos_a,
        nu * h[1] - b[0] * cos_a - h[0] * l[0] * sin_a,
    )


def _rows_s11(pv, sig, p, ctx):
    a, h, l, b = pv["alpha"], pv["eta"], pv["lambda"], pv["beta"]
    nu = p["nu"]
    sin_a, cos_a = _trig(a[0])
    return (
        b[0] - sin_a,
        nu * b[0] + h[0] * cos_a,
        h[1] - l[0] * cos_a,
        nu * h[1] - b[0] * cos_a - h[0] * l[0] * sin_a,
    )


def _rows_s12(pv, sig, p, ctx):
    a, h, l, b = pv["alpha"], pv["eta"], pv["lambda"], pv["beta"]
    nu, e = p["nu"], p["eps"]
    sin_a, cos_a = _trig(a[0])
    return (
        b[0] - sin_a,
        l[1] + h[0] * cos_a,
        nu * a[1] + h[1] * e + l[0] * cos_a,
        a[2] * e + nu * h[1] - b[0] * cos_a - h[0] * l[0] * sin_a,
    )


def _gen_l(p, ctx):
    return AlgebraElement.from_coeffs(ctx, L=1.0)


def _gen_px(p, ctx):
    return AlgebraElement.from_coeffs(ctx, Px=1.0)


def _gen_pt(p, ctx):
    return AlgebraElement.from_coeffs(ctx, Pt=1.0)


def _gen_s4(p, ctx):
    return AlgebraElement.from_coeffs(ctx, Px=1.0, Pt=p["eps"])


def _gen_s6(p, ctx):
    return AlgebraElement.from_coeffs(ctx, Px=1.0, Qx=p["mu"])


def _gen_s7(p, ctx):
    return AlgebraElement.from_coeffs(ctx, Pt=1.0, Qx=p["mu"])


def _gen_s8(p, ctx):
    return AlgebraElement.from_coeffs(ctx, Px=1.0, Pt=p["eps"], Qx=p["mu"])


def _gen_s10(p, ctx):
    return AlgebraElement.from_coeffs(ctx, Px=1.0, Qt=p["nu"])


def _gen_s11(p, ctx):
    return AlgebraElement.from_coeffs(ctx, Pt=1.0, Qt=p["nu"])


def _gen_s12(p, ctx):
    return AlgebraElement.from_coeffs(ctx, Px=1.0, Pt=p["eps"], Qt=p["nu"])


_SUPER_NAMES = ("alpha", "mu", "nu", "beta")
_ODD_NAMES = ("alpha", "eta", "lambda", "beta")

CASES = {
    "S1": ReductionCase("S1", _SUPER_NAMES, (), (-1.0, 1.0, -1.0, 1.0),
                        _sig_s1, _m1_s1, _m2_s1, _rows_s1, guard=_guard_s1,
                        generator=_gen_l),
    "S2": ReductionCase("S2", _SUPER_NAMES, (), (-1.0, -1.0, -1.0, -1.0),
                        _sig_t, _const_th1, _const_th2, _rows_s2,
                        generator=_gen_px),
    "S3": ReductionCase("S3", _SUPER_NAMES, (), (-1.0, 1.0, -1.0, -1.0),
                        _sig_x, _const_th1, _const_th2, _rows_s3,
                        generator=_gen_pt),
    "S4": ReductionCase("S4", _SUPER_NAMES, ("eps",), (-1.0, 1.0, 1.0, -1.0),
                        _sig_s4, _const_th1, _const_th2, _rows_s4,
                        generator=_gen_s4),
    "S6": ReductionCase("S6", _ODD_NAMES, ("mu",), (-1.0, 1.0, -1.0, -1.0),
                        _sig_t, _tau_s6, _const_th2, _rows_s6,
                        generator=_gen_s6),
    "S7": ReductionCase("S7", _ODD_NAMES, ("mu",), (-1.0, 1.0, 1.0, -1.0),
                        _sig_s7, _tau_s7, _const_th2, _rows_s7,
                        generator=_gen_s7),
    "S8": ReductionCase("S8", _ODD_NAMES, ("mu", "eps"), (-1.0, 1.0, 1.0, -1.0),
                        _sig_s8, _tau_s8, _const_th2, _rows_s8,
                        generator=_gen_s8),
    "S10": ReductionCase("S10", _ODD_NAMES, ("nu",), (1.0, -1.0, -1.0, 1.0),
                         _sig_s10, _tau_s10, _const_th1, _rows_s10,
                         generator=_gen_s10),
    "S11": ReductionCase("S11", _ODD_NAMES, ("nu",), (1.0, -1.0, 1.0, 1.0),
                         _sig_x, _tau_s11, _const_th1, _rows_s11,
                         generator=_gen_s11),
    "S12": ReductionCase("S12", _ODD_NAMES, ("nu", "eps"), (1.0, -1.0, -1.0, 1.0),
                         _sig_s12, _tau_s10, _const_th1, _rows_s12,
                         generator=_gen_s12),
}


def reduction_case(case) -> ReductionCase:
    if isinstance(case, ReductionCase):
        return case
    try:
        return CASES[case]
    except KeyError:
        raise KeyError(f"no reduction case {case!r}; have {sorted(CASES)}") from None


def reduction_case_ids() -> tuple:
    return tuple(sorted(CASES, key=lambda s: int(s[1:])))


# --------------------------------------------------------------------------
# ansatz assembly and the consistency checks


def _phi_jet(case, profiles, p, ctx, jx, jt) -> SuperJet:
    sj = case.sigma_jet(jx, jt, p, ctx)
    m1 = case.m1_jet(jx, jt, p, ctx)
    m2 = case.m2_jet(jx, jt, p, ctx)
    names = case.profile_names
    acc = profiles[names[0]].jet(sj)
    acc = acc + m1 * profiles[names[1]].jet(sj)
    acc = acc + m2 * profiles[names[2]].jet(sj)
    acc = acc + (m1 * m2) * profiles[names[3]].jet(sj)
    return acc


def build_ansatz(case, profiles, params=None, ctx: AlgebraContext = DEFAULT_CONTEXT) -> Superfield:
    """Superfield whose value is the invariant ansatz of the case."""
    case = reduction_case(case)
    p = _fill_params(case, params, ctx)
    _check_profiles(case, profiles)

    def component(slot):
        def handle(x, t, order):
            if case.guard is not None:
                case.guard(x, t, p, ctx)
            spec = JetSpec(("x", "t"), order)
            jx = jet_variable(spec, "x", _promote(x, ctx))
            jt = jet_variable(spec, "t", _promote(t, ctx))
            jet = _phi_jet(case, profiles, p, ctx, jx, jt)
            return jet_map(jet, lambda v: theta_coefficients(v, ctx)[slot])

        return handle

    return Superfield(component(0), component(1), component(2), component(3), ctx)


def scaling_rewrite_rows(pv, sigma, ngen: int, constant=None):
    """Second-order form of the scaling reduction, nu as the lead profile.

    Needs sigma > 0; the nilpotent constant defaults to sigma**(1/2) mu nu
    evaluated from the same profile values.
    """
    sg = sigma if isinstance(sigma, GrassmannNumber) else scalar(float(sigma), ngen)
    if sg.body <= 0.0:
        raise SingularPoint(f"rewritten scaling rows need sigma > 0, got body {sg.body}")
    a, m, n, b = pv["alpha"], pv["mu"], pv["nu"], pv["beta"]
    sin_a, cos_a = _trig(a[0])
    if abs(cos_a.body) < 1e-12:
        raise SingularPoint("cos(alpha) vanishes; tan(alpha) row undefined")
    inv_cos = apply_analytic(RECIP, cos_a)
    tan_a = sin_a * inv_cos
    root = apply_analytic(Power(0.5), sg)
    inv_root = apply_analytic(Power(-0.5), sg)
    inv_sig = apply_analytic(RECIP, sg)
    c0 = constant if constant is not None else root * m[0] * n[0]
    return (
        sg * a[2] + a[1] + sin_a * cos_a - c0 * inv_root * sin_a,
        n[2] + tan_a * a[1] * n[1] + inv_sig * n[1] * 0.5 + inv_sig * cos_a * cos_a * n[0],
        m[0] - inv_cos * n[1],
        b[0] + sin_a,
        root * (m[1] * n[0] + m[0] * n[1]) + inv_root * (m[0] * n[0]) * 0.5,
    )


def traveling_rewrite_rows(pv, eps: float, ngen: int, constant=None):
    """Second-order form of the traveling reduction; constant defaults to mu nu."""
    a, m, n, b = pv["alpha"], pv["mu"], pv["nu"], pv["beta"]
    sin_a, cos_a = _trig(a[0])
    if abs(cos_a.body) < 1e-12:
        raise SingularPoint("cos(alpha) vanishes; tan(alpha) row undefined")
    inv_cos = apply_analytic(RECIP, cos_a)
    tan_a = sin_a * inv_cos
    k0 = constant if constant is not None else m[0] * n[0]
    return (
        a[2] * eps - sin_a * cos_a + k0 * sin_a,
        n[2] + tan_a * n[1] * a[1] - cos_a * cos_a * n[0] * eps,
        m[0] - inv_cos * n[1],
        b[0] + sin_a,
        m[1] * n[0] + m[0] * n[1],
    )


def reduced_residual(case, profiles, sigma, params=None,
                     ctx: AlgebraContext = DEFAULT_CONTEXT, constant=None) -> list:
    """All reduced rows at one value of the invariant variable.

    Four rows for every case; the scaling and traveling cases return nine,
    the extra five being the rewritten second-order system (with its
    first-integral row last).
    """
    case = reduction_case(case)
    p = _fill_params(case, params, ctx)
    _check_profiles(case, profiles)
    sg = _promote(sigma, ctx)
    pv = {name: profiles[name].derivs_at(sg, 2) for name in case.profile_names}
    rows = list(case.equations(pv, sg, p, ctx))
    if case.case_id == "S1":
        rows.extend(scaling_rewrite_rows(pv, sg, ctx.generator_count, constant))
    elif case.case_id == "S4":
        rows.extend(traveling_rewrite_rows(pv, p["eps"], ctx.generator_count, constant))
    return rows


def reduction_consistency(case, profiles, points, params=None,
                          ctx: AlgebraContext = DEFAULT_CONTEXT) -> float:
    """Worst gap between the full residual and the recombined reduced rows.

    Entirely off shell: profiles are arbitrary, so this checks the algebra
    of the reduction (chain rule through sigma, the odd monomial products,
    the sign table) rather than any particular solution.
    """
    case = reduction_case(case)
    p = _fill_params(case, params, ctx)
    sf = build_ansatz(case, profiles, params, ctx)
    spec0 = JetSpec(("x", "t"), 0)
    worst = 0.0
    for x, t in points:
        xg, tg = _promote(x, ctx), _promote(t, ctx)
        full = ssg_residual(sf, xg, tg)
        jx = jet_variable(spec0, "x", xg)
        jt = jet_variable(spec0, "t", tg)
        sig = case.sigma_jet(jx, jt, p, ctx).value()
        m1 = case.m1_jet(jx, jt, p, ctx).value()
        m2 = case.m2_jet(jx, jt, p, ctx).value()
        pv = {name: profiles[name].derivs_at(sig, 2) for name in case.profile_names}
        rows = case.equations(pv, sig, p, ctx)
        s = case.signs
        rec = rows[0] * s[0] + m1 * rows[1] * s[1] + m2 * rows[2] * s[2] \
            + (m1 * m2) * rows[3] * s[3]
        worst = max(worst, (full - rec).norm())
    return worst


def case_generator(case, params=None, ctx: AlgebraContext = DEFAULT_CONTEXT) -> AlgebraElement:
    """The algebra element whose invariants the case's ansatz is built from."""
    case = reduction_case(case)
    p = _fill_params(case, params, ctx)
    return case.generator(p, ctx)


def _coefficient_values(X: AlgebraElement, x, t, ctx: AlgebraContext):
    """(xi, tau, rho, sigma) of the realized vector field at a literal point."""
    th1, th2 = ctx.gen("theta1"), ctx.gen("theta2")
    xg, tg = _promote(x, ctx), _promote(t, ctx)
    xi = X.c_L * xg * (-2.0) + X.c_Px - X.c_Qx * th1
    tau = X.c_L * tg * 2.0 + X.c_Pt - X.c_Qt * th2
    rho = X.c_L * th1 * (-1.0) + X.c_Qx
    sv = X.c_L * th2 + X.c_Qt
    return xi, tau, rho, sv


def ansatz_invariance(case, profiles, points, params=None,
                      ctx: AlgebraContext = DEFAULT_CONTEXT) -> float:
    """Worst norm of the generator's first-order action on the built ansatz.

    Zero (to rounding) certifies that the ansatz really is constant along
    the generator's flow, independently of any equation of motion.
    """
    case = reduction_case(case)
    p = _fill_params(case, params, ctx)
    sf = build_ansatz(case, profiles, params, ctx)
    X = case.generator(p, ctx)
    worst = 0.0
    for x, t in points:
        b = evaluate_bundle(sf, x, t)
        xi, tau, rho, sv = _coefficient_values(X, x, t, ctx)
        act = xi * b.d_x + tau * b.d_t + rho * b.d_th1 + sv * b.d_th2
        worst = max(worst, act.norm())
    return worst


def reduction_constant(case, profiles, sigma, ctx: AlgebraContext = DEFAULT_CONTEXT) -> GrassmannNumber:
    """The conserved nilpotent product of the odd profiles at sigma."""
    case = reduction_case(case)
    if case.case_id not in ("S1", "S4"):
        raise ValueError("only the scaling and traveling cases carry this constant")
    sg = _promote(sigma, ctx)
    m = profiles["mu"].value_at(sg)
    n = profiles["nu"].value_at(sg)
    if case.case_id == "S4":
        return m * n
    if sg.body <= 0.0:
        raise SingularPoint("sigma**(1/2) needs sigma > 0")
    return apply_analytic(Power(0.5), sg) * m * n


def constant_drift(case, profiles, sigmas, ctx: AlgebraContext = DEFAULT_CONTEXT) -> float:
    vals = [reduction_constant(case, profiles, s, ctx) for s in sigmas]
    return max(((v - vals[0]).norm() for v in vals), default=0.0)


# --------------------------------------------------------------------------
# component-level reductions (u, phi, psi; no auxiliary field)

_L_IDS = ("L1", "L2", "L3", "L4", "L5")

# slice factors: component row i equals factor[i] * superspace row (3, 2, 1)
_L_TO_S = {
    "L1": ("S1", None, (2.0, 1.0, 1.0)),
    "L2": ("S2", None, (2.0, 1.0, 1.0)),
    "L3": ("S3", None, (2.0, 1.0, 1.0)),
    "L4": ("S4", 1.0, (-2.0, 1.0, 1.0)),
    "L5": ("S4", -1.0, (-2.0, -1.0, 1.0)),
}


def component_reduced_residual(l_id, profiles, sigma,
                               ctx: AlgebraContext = DEFAULT_CONTEXT) -> list:
    """Rows of the component reduction table at one sigma.

    Profiles are keyed u, phi, psi; for the scaling case phi and psi are the
    stripped profiles (the t powers live in the ansatz, not here).
    """
    if l_id not in _L_IDS:
        raise KeyError(f"no component case {l_id!r}; have {_L_IDS}")
    sg = _promote(sigma, ctx)
    u = profiles["u"].derivs_at(sg, 2)
    f = profiles["phi"].derivs_at(sg, 2)
    s = profiles["psi"].derivs_at(sg, 2)
    sin_u = apply_analytic(SIN, u[0])
    sin_h = apply_analytic(SIN, u[0] * 0.5)
    cos_h = apply_analytic(COS, u[0] * 0.5)
    pair = sin_h * f[0] * s[0] * 2.0
    if l_id == "L1":
        return [
            sg * u[2] + u[1] + sin_u - pair,
            f[0] * 0.5 + sg * f[1] + cos_h * s[0],
            s[1] - cos_h * f[0],
        ]
    if l_id == "L2":
        return [-sin_u + pair, f[1] + cos_h * s[0], cos_h * f[0]]
    if l_id == "L3":
        return [-sin_u + pair, cos_h * s[0], s[1] - cos_h * f[0]]
    if l_id == "L4":
        return [-u[2] + sin_u - pair, f[1] - cos_h * s[0], s[1] - cos_h * f[0]]
    return [u[2] + sin_u - pair, f[1] + cos_h * s[0], s[1] - cos_h * f[0]]


def component_slice_check(l_id, profiles, sigmas,
                          ctx: AlgebraContext = DEFAULT_CONTEXT) -> float:
    """Each component row against its superspace row, beta eliminated.

    The algebraic row beta = -sin(alpha) is substituted into the superspace
    system with u = 2 alpha, phi = mu, psi = nu; the remaining three rows
    must match the component table up to the fixed factors recorded in the
    slice map.
    """
    s_id, eps, fac = _L_TO_S[l_id]
    case = CASES[s_id]
    p = {"eps": eps} if eps is not None else None
    pp = _fill_params(case, p, ctx)
    worst = 0.0
    for sigma in sigmas:
        sg = _promote(sigma, ctx)
        rows_l = component_reduced_residual(l_id, profiles, sg, ctx)
        u = profiles["u"].derivs_at(sg, 2)
        a = [u[0] * 0.5, u[1] * 0.5, u[2] * 0.5]
        sin_a, cos_a = _trig(a[0])
        pv = {
            "alpha": a,
            "mu": profiles["phi"].derivs_at(sg, 2),
            "nu": profiles["psi"].derivs_at(sg, 2),
            "beta": [
                -sin_a,
                -cos_a * a[1],
                sin_a * a[1] * a[1] - cos_a * a[2],
            ],
        }
        rows_s = case.equations(pv, sg, pp, ctx)
        dev = max(
            (rows_l[0] - rows_s[3] * fac[0]).norm(),
            (rows_l[1] - rows_s[2] * fac[1]).norm(),
            (rows_l[2] - rows_s[1] * fac[2]).norm(),
        )
        worst = max(worst, dev)
    return worst


def component_case_ids() -> tuple:
    return _L_IDS


# --------------------------------------------------------------------------
# subalgebras with no standard reduction


@dataclass(frozen=True)
class ObstructionRecord:
    subalgebra: str
    invariant_form: str
    reducible: bool
    x_gap: Optional[float] = None
    solution_set: Optional[str] = None
    details: dict = field(default_factory=dict)


_NONSTANDARD_FORMS = {
    "S5": "mu * f(x, t, theta1, theta2, value)",
    "S9": "nu * f(x, t, theta1, theta2, value)",
    "S13": "mu*nu * f(x, t, theta1, theta2, value)",
    "S14": "mu*nu * f(t, theta1, theta2, value)",
    "S15": "mu*nu * f(x, theta1, theta2, value)",
    "S16": "mu*nu * f(theta1, theta2, value)",
}


def _s5_superfield(profiles, mu, ctx):
    """value = a(t) + tau h(t) + th2 l(t) + tau th2 b(t) with tau = mu x th1.

    tau is even (a product of two odd factors) and squares to zero, so h is
    an even profile while l and b are odd; the opposite of the standard
    cases, where the odd invariant is theta-like.
    """
    th1, th2 = ctx.gen("theta1"), ctx.gen("theta2")

    def component(slot):
        def handle(x, t, order):
            spec = JetSpec(("x", "t"), order)
            jx = jet_variable(spec, "x", _promote(x, ctx))
            jt = jet_variable(spec, "t", _promote(t, ctx))
            tau = jet_scale(jx, mu * th1, from_left=True)
            jth2 = jet_constant(spec, th2)
            jet = profiles["a"].jet(jt)
            jet = jet + tau * profiles["h"].jet(jt)
            jet = jet + jth2 * profiles["l"].jet(jt)
            jet = jet + (tau * jth2) * profiles["b"].jet(jt)
            return jet_map(jet, lambda v: theta_coefficients(v, ctx)[slot])

        return handle

    return Superfield(component(0), component(1), component(2), component(3), ctx)


def nonstandard_obstruction(sub_id, ctx: AlgebraContext = DEFAULT_CONTEXT,
                            rng_seed=0) -> ObstructionRecord:
    """Why the listed subalgebras admit no standard invariant ansatz.

    Their odd invariant is nilpotent-valued (tau = mu * f or mu*nu * f), so
    it cannot serve as a coordinate.  For S5 the record carries the worked
    demonstration: substituting value = A(t, tau, theta2) with tau = mu x
    theta1 leaves x explicit in the would-be reduced equation, and the
    honest reduction by the even part {Q_x, P_x} forces value = k pi.
    """
    if sub_id not in _NONSTANDARD_FORMS:
        raise KeyError(f"no nonstandard record for {sub_id!r}; have {sorted(_NONSTANDARD_FORMS)}")
    form = _NONSTANDARD_FORMS[sub_id]
    if sub_id != "S5":
        return ObstructionRecord(sub_id, form, reducible=False,
                                 details={"reason": "nilpotent odd invariant"})

    rng = random.Random(rng_seed)
    mu = ctx.gen("mu")
    t0 = 0.7 + rng.uniform(0.0, 0.6)
    profiles = {
        "a": profile(ctx, (ctx.scalar(rng.uniform(0.6, 1.3)), _random_fn(rng))),
        "h": profile(ctx, (ctx.scalar(rng.uniform(0.5, 1.2)), _random_fn(rng))),
        "l": profile(ctx, (ctx.gen("D1"), _random_fn(rng))),
        "b": profile(ctx, (ctx.gen("D2"), _random_fn(rng))),
    }
    sf = _s5_superfield(profiles, mu, ctx)
    r1 = ssg_residual(sf, 1.0, t0)
    r2 = ssg_residual(sf, 2.0, t0)
    x_gap = (r2 - r1).norm()

    # the residual is affine in x, so the gap above is exactly the
    # coefficient that no choice of profiles can remove
    r3 = ssg_residual(sf, 3.0, t0)
    affine = ((r3 - r2) - (r2 - r1)).norm()

    # even-part reduction: value depends on t and theta2 only; the residual
    # collapses to -sin(value), so constants k pi pass and nothing else does
    from .superfield import constant_component, zero_component

    kpi = {}
    for k in (-1, 0, 1, 2):
        c = Superfield(
            constant_component(ctx.scalar(k * math.pi)),
            zero_component(ctx), zero_component(ctx), zero_component(ctx), ctx)
        kpi[k] = ssg_residual(c, 0.3, -0.8).norm()
    off = Superfield(
        constant_component(ctx.scalar(0.4)),
        zero_component(ctx), zero_component(ctx), zero_component(ctx), ctx)
    off_norm = ssg_residual(off, 0.3, -0.8).norm()
    probe = Superfield(
        constant_component(ctx.scalar(math.pi)),
        zero_component(ctx),
        constant_component(ctx.gen("D1")),
        zero_component(ctx), ctx)
    probe_norm = ssg_residual(probe, 0.3, -0.8).norm()

    return ObstructionRecord(
        "S5", form, reducible=False, x_gap=x_gap,
        solution_set="value = k*pi",
        details={
            "affine_defect": affine,
            "kpi_residuals": kpi,
            "offset_body_residual": off_norm,
            "odd_probe_residual": probe_norm,
        },
    )


def nonstandard_ids() -> tuple:
    return tuple(sorted(_NONSTANDARD_FORMS, key=lambda s: int(s[1:])))


# --------------------------------------------------------------------------
# complex-variable cross-checks of the scaling reduction


def _complex_sample(rng):
    p = [complex(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)) for _ in range(3)]
    sigma = complex(rng.uniform(0.4, 2.0), rng.choice([-1.0, 1.0]) * rng.uniform(0.2, 1.0))
    y = cmath.exp(p[0] + p[1] * sigma + p[2] * sigma * sigma)
    y1 = (p[1] + 2.0 * p[2] * sigma) * y
    y2 = (2.0 * p[2]) * y + (p[1] + 2.0 * p[2] * sigma) * y1
    alpha = 1j * (p[0] + p[1] * sigma + p[2] * sigma * sigma)
    a1 = 1j * (p[1] + 2.0 * p[2] * sigma)
    a2 = 1j * (2.0 * p[2])
    return sigma, y, y1, y2, alpha, a1, a2


def _r_scaling(alpha, a1, a2, sigma, c0):
    return (sigma * a2 + a1 + 0.5 * cmath.sin(2.0 * alpha)
            - c0 * cmath.sin(alpha) / cmath.sqrt(sigma))


def _r_exponential(y, y1, y2, sigma, c0):
    return (y2 - y1 * y1 / y + y1 / sigma
            - (1.0 / (4.0 * sigma)) * (1.0 / y - y ** 3)
            + (c0 / (2.0 * sigma * cmath.sqrt(sigma))) * (1.0 - y * y))


def scaling_complex_transform_check(rng_seed=0, n_points=12) -> float:
    """The exponential substitution maps one scaling residual onto the other.

    With y = exp(-i alpha) the second-order scaling row times y/(i sigma)
    equals the rational row in y, identically in alpha and the constant.
    Checked at complex sigma off the real axis, where branch mistakes in the
    half-integer powers cannot hide.
    """
    rng = random.Random(rng_seed)
    worst = 0.0
    for _ in range(n_points):
        sigma, y, y1, y2, alpha, a1, a2 = _complex_sample(rng)
        c0 = complex(rng.uniform(-0.8, 0.8), rng.uniform(-0.8, 0.8))
        lhs = _r_exponential(y, y1, y2, sigma, c0)
        rhs = (y / (1j * sigma)) * _r_scaling(alpha, a1, a2, sigma, c0)
        worst = max(worst, abs(lhs - rhs))
    return worst


def scaled_complex_argument_check(rng_seed=0, n_points=10) -> float:
    """Rescaling the argument by +-2i matches the two signed rational forms.

    The sign of the imaginary argument and the sign in the equation are tied:
    z = 2i sigma lands on the + form, z = -2i sigma on the - form, and the
    residuals agree after dividing by the square of the scale.
    """
    rng = random.Random(rng_seed)
    worst = 0.0
    for _ in range(n_points):
        sigma, y, y1, y2, _, _, _ = _complex_sample(rng)
        base = _r_exponential(y, y1, y2, sigma, 0.0)
        for s in (1.0, -1.0):
            c = 2j * s
            z = c * sigma
            w, wz, wzz = y, y1 / c, y2 / (c * c)
            r = (wzz - wz * wz / w + wz / z
                 - s * (1j / (8.0 * z)) * (w ** 3 - 1.0 / w))
            worst = max(worst, abs(r - base / (c * c)))
    return worst
