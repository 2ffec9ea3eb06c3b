"""Reduced profile equations integrated as explicit second-order ODEs.

Each system is y'' = f(sigma, y, y') for one profile along the real
reduction variable, stepped with classical RK4.  State entries are
Grassmann numbers, so a nilpotent constant in the equation or in the
initial data propagates exactly alongside the float body.  Every sample
keeps the second derivative evaluated from the equation itself, which
gives order-2 jet data at the nodes without any differencing.

Four systems, by selector id:

  rebp    even profile of the traveling reduction,
          y'' = eps*(sin y cos y - K0 sin y), with conserved
          E = eps*y'^2/2 + cos(2y)/4 - K0 cos y
  ginv12  linear odd-sector profile over the elliptic background,
          y'' = -tan(a) a' y' + eps cos^2(a) y + eps cos(a) a'
  ginv17  same background, opposite forcing sign
  d16nu   damped odd profile of the scaling reduction,
          y'' = -(1/(2s) + tan(a) a') y' - (cos^2(a)/s) y
"""

from __future__ import annotations

import math
from bisect import bisect_left
from dataclasses import dataclass, field
from typing import Callable

from .analytic import COS, SIN
from .elliptic import jacobi
from .grassmann import (
    DEFAULT_CONTEXT,
    AlgebraContext,
    GrassmannNumber,
    apply_analytic,
    scalar,
)

ODE_SYSTEM_NAMES = ("rebp", "ginv12", "ginv17", "d16nu")


class NearSingular(RuntimeError):
    """A coefficient of the equation blows up inside the requested range."""


Rhs = Callable[[float, GrassmannNumber, GrassmannNumber], GrassmannNumber]


@dataclass(frozen=True)
class OdeSystem:
    name: str
    rhs: Rhs
    energy: Rhs | None = None
    background: Callable[[float], dict] | None = None
    meta: dict = field(default_factory=dict)


@dataclass(frozen=True)
class OdeSample:
    sigma: float
    value: GrassmannNumber
    d1: GrassmannNumber
    d2: GrassmannNumber


@dataclass
class Trajectory:
    system: OdeSystem
    step: float
    samples: list

    def final(self) -> OdeSample:
        return self.samples[-1]

    def grid(self):
        return [s.sigma for s in self.samples]

    def at(self, sigma: float, tol: float = 1e-9) -> OdeSample:
        sigmas = self.grid()
        i = bisect_left(sigmas, sigma)
        best = min(
            (j for j in (i - 1, i, i + 1) if 0 <= j < len(sigmas)),
            key=lambda j: abs(sigmas[j] - sigma),
        )
        if abs(sigmas[best] - sigma) > tol:
            raise KeyError(f"no trajectory node near sigma={sigma}")
        return self.samples[best]

    def profile_fn(self) -> "TrajectoryFn":
        return TrajectoryFn(self)


class TrajectoryFn:
    """Analytic-function view of a soul-free trajectory, derivatives 0..2.

    Lets trajectory output flow into the same jet machinery as closed-form
    profiles; the order cap is honest, nothing is differenced.
    """

    def __init__(self, traj: Trajectory):
        for s in traj.samples:
            if not s.value.soul().is_zero() or not s.d1.soul().is_zero():
                raise ValueError("trajectory carries soul; no float profile view")
        self.traj = traj

    def derivs(self, x, n):
        if n > 2:
            raise ValueError("trajectory nodes hold derivatives up to order 2")
        s = self.traj.at(x)
        return [s.value.body, s.d1.body, s.d2.body][: n + 1]


def _promote(v, ctx: AlgebraContext) -> GrassmannNumber:
    return v if isinstance(v, GrassmannNumber) else ctx.scalar(float(v))


def _check_eps(eps) -> float:
    eps = float(eps)
    if eps not in (-1.0, 1.0):
        raise ValueError(f"eps must be +1 or -1, got {eps}")
    return eps


# ------------------------------------------------------------------- systems


def traveling_profile_system(
    eps, coupling=0.0, ctx: AlgebraContext = DEFAULT_CONTEXT
) -> OdeSystem:
    """y'' = eps*(sin y cos y - K0 sin y); K0 may be a nilpotent even constant."""
    eps = _check_eps(eps)
    k0 = _promote(coupling, ctx)
    if not k0.is_even():
        raise ValueError("the coupling constant must be even")

    def rhs(sig, y, d1):
        s = apply_analytic(SIN, y)
        c = apply_analytic(COS, y)
        return (s * c - k0 * s) * eps

    def energy(sig, y, d1):
        return (
            d1 * d1 * (0.5 * eps)
            + apply_analytic(COS, y * 2.0) * 0.25
            - k0 * apply_analytic(COS, y)
        )

    return OdeSystem("rebp", rhs, energy=energy, meta={"eps": eps, "coupling": k0})


def _elliptic_background(modulus: float) -> Callable[[float], dict]:
    """Background a(s) = arcsin(k sn(s, k)), so cos a = dn and a' = k cn."""
    k = float(modulus)
    if not abs(k) < 1.0:
        raise ValueError(f"modulus must satisfy |k| < 1, got {k}")
    m = k * k

    def bg(sig: float) -> dict:
        trip = jacobi(sig, m)
        cos_a = trip.dn
        if abs(cos_a) < 1e-3:
            raise NearSingular(f"cos(alpha) = {cos_a} at sigma = {sig}")
        return {
            "alpha": math.asin(k * trip.sn),
            "alpha_d1": k * trip.cn,
            "cos_alpha": cos_a,
            "sin_alpha": k * trip.sn,
        }

    return bg


def odd_profile_system(
    name: str, eps, modulus, ctx: AlgebraContext = DEFAULT_CONTEXT
) -> OdeSystem:
    """The two linear odd-sector equations over the elliptic background.

    They differ only in the sign of the inhomogeneous term: "ginv12" drives
    with +eps cos(a) a', "ginv17" with -eps cos(a) a'.
    """
    if name not in ("ginv12", "ginv17"):
        raise ValueError(f"unknown odd-profile system {name!r}")
    eps = _check_eps(eps)
    force = 1.0 if name == "ginv12" else -1.0
    bg = _elliptic_background(modulus)

    def rhs(sig, y, d1):
        b = bg(sig)
        c = b["cos_alpha"]
        fric = b["sin_alpha"] * b["alpha_d1"] / c
        drive = force * eps * c * b["alpha_d1"]
        return d1 * (-fric) + y * (eps * c * c) + scalar(drive, y.ngen)

    return OdeSystem(
        name, rhs, background=bg, meta={"eps": eps, "modulus": float(modulus)}
    )


def scaling_odd_system(
    ctx: AlgebraContext = DEFAULT_CONTEXT, background: Callable[[float], dict] | None = None
) -> OdeSystem:
    """y'' = -(1/(2s) + tan(a) a') y' - (cos^2(a)/s) y, default background a = 0."""

    def rhs(sig, y, d1):
        if abs(sig) < 1e-9:
            raise NearSingular("the scaling reduction has a pole at sigma = 0")
        if background is None:
            cos_a, tan_term = 1.0, 0.0
        else:
            b = background(sig)
            cos_a = b["cos_alpha"]
            if abs(cos_a) < 1e-3:
                raise NearSingular(f"cos(alpha) = {cos_a} at sigma = {sig}")
            tan_term = b["sin_alpha"] * b["alpha_d1"] / cos_a
        fric = 0.5 / sig + tan_term
        return d1 * (-fric) + y * (-(cos_a * cos_a) / sig)

    return OdeSystem("d16nu", rhs, background=background)


def make_system(
    name: str,
    *,
    eps=-1.0,
    coupling=0.0,
    modulus=0.7,
    ctx: AlgebraContext = DEFAULT_CONTEXT,
) -> OdeSystem:
    if name == "rebp":
        return traveling_profile_system(eps, coupling, ctx)
    if name in ("ginv12", "ginv17"):
        return odd_profile_system(name, eps, modulus, ctx)
    if name == "d16nu":
        return scaling_odd_system(ctx)
    raise ValueError(f"unknown system {name!r}; have {ODE_SYSTEM_NAMES}")


# --------------------------------------------------------------- integration


def _rk4_step(system: OdeSystem, sig: float, y, d, h: float):
    k1d = system.rhs(sig, y, d)
    y2 = y + d * (h / 2)
    d2 = d + k1d * (h / 2)
    k2d = system.rhs(sig + h / 2, y2, d2)
    y3 = y + d2 * (h / 2)
    d3 = d + k2d * (h / 2)
    k3d = system.rhs(sig + h / 2, y3, d3)
    y4 = y + d3 * h
    d4 = d + k3d * h
    k4d = system.rhs(sig + h, y4, d4)
    ynew = y + (d + d2 * 2.0 + d3 * 2.0 + d4) * (h / 6)
    dnew = d + (k1d + k2d * 2.0 + k3d * 2.0 + k4d) * (h / 6)
    return ynew, dnew


def _advance(system, sig, y, d, h, drift_tol, depth):
    ynew, dnew = _rk4_step(system, sig, y, d, h)
    if drift_tol is not None and system.energy is not None and depth < 10:
        e0 = system.energy(sig, y, d)
        e1 = system.energy(sig + h, ynew, dnew)
        if (e1 - e0).norm() > drift_tol:
            ymid, dmid = _advance(system, sig, y, d, h / 2, drift_tol, depth + 1)
            return _advance(system, sig + h / 2, ymid, dmid, h / 2, drift_tol, depth + 1)
    return ynew, dnew


def integrate_profile_ode(
    system: OdeSystem,
    ics,
    sigma0: float,
    sigma1: float,
    step: float,
    *,
    ctx: AlgebraContext = DEFAULT_CONTEXT,
    drift_tol: float | None = None,
) -> Trajectory:
    """Classical RK4 from sigma0 to sigma1 (either direction) at fixed step.

    ics = (value, first derivative) at sigma0.  With drift_tol set and an
    energy functional available, any step whose energy drift exceeds the
    threshold is redone as halved substeps; samples stay on the outer grid.
    """
    if step <= 0.0:
        raise ValueError("step must be positive")
    span = sigma1 - sigma0
    if span == 0.0:
        raise ValueError("empty integration range")
    n = int(round(abs(span) / step))
    if n < 1 or abs(abs(span) - n * step) > 1e-9 * max(1.0, abs(span)):
        raise ValueError("range must be a whole number of steps")
    h = step if span > 0 else -step
    y = _promote(ics[0], ctx)
    d = _promote(ics[1], ctx)
    samples = [OdeSample(sigma0, y, d, system.rhs(sigma0, y, d))]
    for i in range(n):
        sig = sigma0 + i * h
        y, d = _advance(system, sig, y, d, h, drift_tol, 0)
        nxt = sigma0 + (i + 1) * h
        samples.append(OdeSample(nxt, y, d, system.rhs(nxt, y, d)))
    if h < 0:
        samples.reverse()
    return Trajectory(system, step, samples)


def integrate_two_sided(
    system: OdeSystem,
    ics,
    lo: float,
    hi: float,
    step: float,
    *,
    origin: float = 0.0,
    ctx: AlgebraContext = DEFAULT_CONTEXT,
    drift_tol: float | None = None,
) -> Trajectory:
    """One trajectory over [lo, hi] with the initial data posed at origin."""
    if not lo <= origin <= hi:
        raise ValueError(f"origin {origin} outside [{lo}, {hi}]")
    parts = []
    if lo < origin:
        parts.append(
            integrate_profile_ode(
                system, ics, origin, lo, step, ctx=ctx, drift_tol=drift_tol
            ).samples[:-1]
        )
    if origin < hi:
        parts.append(
            integrate_profile_ode(
                system, ics, origin, hi, step, ctx=ctx, drift_tol=drift_tol
            ).samples
        )
    if not parts:
        raise ValueError("empty integration range")
    samples = [s for chunk in parts for s in chunk]
    return Trajectory(system, step, samples)


def first_integral_check(traj: Trajectory) -> float:
    """Max norm of E(sigma) - E(start) along the trajectory."""
    if traj.system.energy is None:
        raise ValueError(f"system {traj.system.name!r} has no first integral")
    e0 = None
    worst = 0.0
    for s in traj.samples:
        e = traj.system.energy(s.sigma, s.value, s.d1)
        if e0 is None:
            e0 = e
        else:
            worst = max(worst, (e - e0).norm())
    return worst


def drift_ratio(system, ics, sigma0, sigma1, step, ctx=DEFAULT_CONTEXT) -> float:
    """First-integral drift at step h over drift at h/2; ~16 for RK4."""
    a = first_integral_check(integrate_profile_ode(system, ics, sigma0, sigma1, step, ctx=ctx))
    b = first_integral_check(
        integrate_profile_ode(system, ics, sigma0, sigma1, step / 2, ctx=ctx)
    )
    if b == 0.0:
        raise ValueError("zero drift at the halved step; nothing to compare")
    return a / b
