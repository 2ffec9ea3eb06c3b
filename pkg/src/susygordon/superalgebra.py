"""The five-generator symmetry superalgebra and its adjoint action.

Basis L, P_x, P_t (even), Q_x, Q_t (odd).  Elements live in the even
part of the superalgebra: every coefficient matches the parity of its
generator, so scalars stay even and odd generators always arrive with an
odd prefactor.  The bracket is the bilinear extension of the structure
table with the graded sign from commuting a coefficient past a
generator, [a E, b F] = (-1)^(E~ b~) a b [E, F].
"""

from __future__ import annotations

from dataclasses import dataclass
from math import exp as _fexp, factorial

from .analytic import EXP_RATIO
from .grassmann import (
    DEFAULT_CONTEXT,
    AlgebraContext,
    GrassmannNumber,
    Parity,
    ParityError,
    apply_analytic,
    exp_even,
)
from .prolongation import (
    COMPONENT_SIGNATURE,
    SSG_SIGNATURE,
    JetPoint,
    VectorFieldSpec,
    component_symmetry_spec,
    evaluate_spec,
    random_jet_point,
    ssg_symmetry_spec,
)


class OutOfIdeal(ValueError):
    """Closed-form adjoint action needs an argument without an L part."""


_BASIS = ("L", "Px", "Pt", "Qx", "Qt")
_BASIS_PARITY = {"L": 0, "Px": 0, "Pt": 0, "Qx": 1, "Qt": 1}

# nonzero rows of the supercommutation table, [row, column] -> {basis: weight}
STRUCTURE_TABLE = {
    ("L", "Px"): {"Px": 2.0},
    ("L", "Pt"): {"Pt": -2.0},
    ("L", "Qx"): {"Qx": 1.0},
    ("L", "Qt"): {"Qt": -1.0},
    ("Px", "L"): {"Px": -2.0},
    ("Pt", "L"): {"Pt": 2.0},
    ("Qx", "L"): {"Qx": -1.0},
    ("Qt", "L"): {"Qt": 1.0},
    ("Qx", "Qx"): {"Px": -2.0},
    ("Qt", "Qt"): {"Pt": -2.0},
}


@dataclass
class AlgebraElement:
    c_L: GrassmannNumber
    c_Px: GrassmannNumber
    c_Pt: GrassmannNumber
    c_Qx: GrassmannNumber
    c_Qt: GrassmannNumber

    def __post_init__(self):
        for name in ("c_L", "c_Px", "c_Pt"):
            v = getattr(self, name)
            if not (v.is_zero() or v.is_even()):
                raise ParityError(f"{name} must be even")
        for name in ("c_Qx", "c_Qt"):
            v = getattr(self, name)
            if not (v.is_zero() or v.is_odd()):
                raise ParityError(f"{name} must be odd")

    def coeff(self, basis: str) -> GrassmannNumber:
        return getattr(self, "c_" + basis)

    @classmethod
    def from_coeffs(cls, ctx: AlgebraContext, **kw) -> "AlgebraElement":
        vals = {}
        for b in _BASIS:
            v = kw.get(b, ctx.zero())
            if not isinstance(v, GrassmannNumber):
                v = ctx.scalar(v)
            vals["c_" + b] = v
        return cls(**vals)

    @classmethod
    def zero(cls, ctx: AlgebraContext = DEFAULT_CONTEXT) -> "AlgebraElement":
        return cls.from_coeffs(ctx)

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        return AlgebraElement(
            self.c_L + other.c_L,
            self.c_Px + other.c_Px,
            self.c_Pt + other.c_Pt,
            self.c_Qx + other.c_Qx,
            self.c_Qt + other.c_Qt,
        )

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self + (other * -1.0)

    def __mul__(self, a) -> "AlgebraElement":
        # even weights only, so left and right module actions agree
        if isinstance(a, GrassmannNumber) and not (a.is_zero() or a.is_even()):
            raise ParityError("algebra elements scale by even weights")
        return AlgebraElement(
            self.c_L * a, self.c_Px * a, self.c_Pt * a, self.c_Qx * a, self.c_Qt * a
        )

    __rmul__ = __mul__

    def norm(self) -> float:
        return max(self.coeff(b).norm() for b in _BASIS)

    def is_zero(self) -> bool:
        return all(self.coeff(b).is_zero() for b in _BASIS)


def basis_element(name: str, ctx: AlgebraContext = DEFAULT_CONTEXT) -> AlgebraElement:
    if name not in _BASIS:
        raise KeyError(name)
    one = ctx.one() if _BASIS_PARITY[name] == 0 else None
    if one is None:
        raise ParityError(f"{name} is odd; build it with an odd prefactor instead")
    return AlgebraElement.from_coeffs(ctx, **{name: one})


def bracket(X: AlgebraElement, Y: AlgebraElement) -> AlgebraElement:
    """Graded bracket, extended bilinearly over supernumber coefficients."""
    ngen = X.c_L.ngen
    acc = {b: GrassmannNumber(ngen) for b in _BASIS}
    for i in _BASIS:
        a = X.coeff(i)
        if a.is_zero():
            continue
        for j in _BASIS:
            b = Y.coeff(j)
            if b.is_zero():
                continue
            row = STRUCTURE_TABLE.get((i, j))
            if not row:
                continue
            sign = -1.0 if (_BASIS_PARITY[i] & _BASIS_PARITY[j]) else 1.0
            ab = a * b * sign
            for k, w in row.items():
                acc[k] = acc[k] + ab * w
    return AlgebraElement(acc["L"], acc["Px"], acc["Pt"], acc["Qx"], acc["Qt"])


def adjoint_exp(Y: AlgebraElement, X: AlgebraElement, series_terms: int = 16) -> AlgebraElement:
    """Ad_exp(Y) X as the truncated iterated-bracket series."""
    if series_terms < 1:
        raise ValueError("series_terms must be at least 1")
    acc = X
    term = X
    for n in range(1, series_terms):
        term = bracket(Y, term) * (1.0 / n)
        acc = acc + term
    return acc


def adjoint_truncation_bound(Y: AlgebraElement, X: AlgebraElement, series_terms: int) -> float:
    """Tail bound for the iterated-bracket series.

    Each bracket with Y rescales slots by at most 2|k|; the odd-pair
    feeds into the translation slots are nilpotent, so they enlarge the
    slot ceiling once instead of compounding.  Dropped terms therefore
    sum to below (2|k|)^n / n! e^{2|k|} times that ceiling.
    """
    feed = 2.0 * (Y.c_Qx.norm() * X.c_Qx.norm() + Y.c_Qt.norm() * X.c_Qt.norm())
    ceiling = X.norm() + feed
    two_k = Y.c_L * 2.0
    # actual powers of 2k, so a bodiless k truncates the tail exactly
    p = GrassmannNumber(Y.c_L.ngen, {0: 1.0 / factorial(series_terms)})
    for j in range(series_terms):
        p = p * two_k
    tail, j = 0.0, series_terms
    while not p.is_zero():
        tail += p.norm()
        j += 1
        p = p * two_k * (1.0 / j)
        if j > series_terms + 120:
            tail *= 2.0  # give up summing; the factorials dominate by here
            break
    return tail * ceiling


def adjoint_closed_form(Y: AlgebraElement, X: AlgebraElement) -> AlgebraElement:
    """Exact adjoint action on the translation-supertranslation ideal.

    Only the L part and the odd parts of Y enter; its translation parts
    commute with the ideal.  The (e^k - 1)/k factor is evaluated through
    its entire function, so bodiless k works without special cases.
    """
    if not X.c_L.is_zero():
        raise OutOfIdeal("closed form acts on the ideal spanned by P and Q slots")
    k = Y.c_L
    eta, lam = Y.c_Qx, Y.c_Qt
    alpha, beta = X.c_Px, X.c_Pt
    mu, nu = X.c_Qx, X.c_Qt
    ek = exp_even(k)
    e2k = exp_even(k * 2.0)
    em2k = exp_even(k * -2.0)
    ratio = apply_analytic(EXP_RATIO, k)
    new_Px = e2k * alpha + (eta * mu) * ek * ratio * 2.0
    new_Pt = em2k * beta + (lam * nu) * em2k * ratio * 2.0
    new_Qx = ek * mu
    new_Qt = exp_even(k * -1.0) * nu
    zero = GrassmannNumber(X.c_L.ngen)
    return AlgebraElement(zero, new_Px, new_Pt, new_Qx, new_Qt)


def solve_conjugation_to_L(
    V: AlgebraElement, max_iter: int = 12, tol: float = 1e-12
) -> tuple[AlgebraElement, float]:
    """Find Y in the ideal with Ad_exp(Y) V proportional to L.

    Newton iteration on the four ideal slots of the adjoint image, with
    the diagonal of the linearized system ([Y, L] shifts m, n, eta, lam
    by -2m, 2n, -eta, lam).  Converges in a couple of steps because the
    remaining couplings are nilpotent.
    """
    ctx_zero = GrassmannNumber(V.c_L.ngen)
    Y = AlgebraElement(ctx_zero, ctx_zero, ctx_zero, ctx_zero, ctx_zero)
    res = float("inf")
    for _ in range(max_iter):
        img = adjoint_exp(Y, V)
        res = max(img.c_Px.norm(), img.c_Pt.norm(), img.c_Qx.norm(), img.c_Qt.norm())
        if res < tol:
            break
        Y = AlgebraElement(
            ctx_zero,
            Y.c_Px + img.c_Px * 0.5,
            Y.c_Pt - img.c_Pt * 0.5,
            Y.c_Qx + img.c_Qx,
            Y.c_Qt - img.c_Qt,
        )
    return Y, res


# ------------------------------------------------------- realized generators


def realize(X: AlgebraElement, ctx: AlgebraContext = DEFAULT_CONTEXT) -> VectorFieldSpec:
    """The element as a concrete vector field on superspace."""
    return ssg_symmetry_spec(
        C1=X.c_L, C2=X.c_Px, C3=X.c_Pt, D1=X.c_Qx, D2=X.c_Qt, ctx=ctx
    )


def realized_bracket_coefficients(
    X: VectorFieldSpec, Y: VectorFieldSpec, p: JetPoint
) -> dict:
    """[X, Y] as a vector field, coefficient by coefficient at a point.

    Both fields are even, so the bracket is the plain commutator of their
    first-order actions on the coordinate functions.
    """
    names = [n for n, _ in p.sig.independents] + [n for n, _ in p.sig.dependents]
    ex, ey = evaluate_spec(X, p), evaluate_spec(Y, p)
    out = {}
    for a_target in names:
        left = p.ctx.zero()
        for a in names:
            left = left + ex[a].partial(()) * ey[a_target].partial((a,))
        right = p.ctx.zero()
        for a in names:
            right = right + ey[a].partial(()) * ex[a_target].partial((a,))
        out[a_target] = left - right
    return out


def verify_structure(
    realization: str = "superspace",
    n_points: int = 4,
    seed: int = 0,
    ctx: AlgebraContext = DEFAULT_CONTEXT,
) -> float:
    """Max deviation between realized commutators and the abstract table."""
    if realization == "superspace":
        mu, nu = ctx.gen("mu"), ctx.gen("nu")
        mu2, nu2 = ctx.gen("D1"), ctx.gen("D2")
        elements = [
            AlgebraElement.from_coeffs(ctx, L=1.0),
            AlgebraElement.from_coeffs(ctx, Px=1.0),
            AlgebraElement.from_coeffs(ctx, Pt=1.0),
            AlgebraElement.from_coeffs(ctx, Qx=mu),
            AlgebraElement.from_coeffs(ctx, Qx=mu2),
            AlgebraElement.from_coeffs(ctx, Qt=nu),
            AlgebraElement.from_coeffs(ctx, Qt=nu2),
        ]
        worst = 0.0
        for s in range(n_points):
            p = random_jet_point(SSG_SIGNATURE, 9000 + seed + s, ctx)
            for i, A in enumerate(elements):
                for B in elements[i:]:
                    got = realized_bracket_coefficients(realize(A, ctx), realize(B, ctx), p)
                    want = evaluate_spec(realize(bracket(A, B), ctx), p)
                    for name, val in got.items():
                        worst = max(worst, (val - want[name].partial(())).norm())
        return worst
    if realization == "component":
        D = component_symmetry_spec(C1=2.0, ctx=ctx)
        Px = component_symmetry_spec(C2=1.0, ctx=ctx)
        Pt = component_symmetry_spec(C3=1.0, ctx=ctx)
        # nonzero relations: [Px, D] = 2 Px and [Pt, D] = -2 Pt
        cases = [
            (Px, D, component_symmetry_spec(C2=2.0, ctx=ctx)),
            (Pt, D, component_symmetry_spec(C3=-2.0, ctx=ctx)),
            (Px, Pt, component_symmetry_spec(ctx=ctx)),
            (D, D, component_symmetry_spec(ctx=ctx)),
        ]
        worst = 0.0
        for s in range(n_points):
            p = random_jet_point(COMPONENT_SIGNATURE, 9500 + seed + s, ctx)
            for A, B, expect in cases:
                got = realized_bracket_coefficients(A, B, p)
                want = evaluate_spec(expect, p)
                for name, val in got.items():
                    worst = max(worst, (val - want[name].partial(())).norm())
        return worst
    raise ValueError(f"unknown realization {realization!r}")


# ---------------------------------------------------------- subalgebra data


@dataclass(frozen=True)
class SubalgebraTemplate:
    name: str
    expression: str
    slots: tuple[str, ...]
    picture: str  # "superspace" or "component"

    def payload(self) -> dict:
        return {
            "name": self.name,
            "expression": self.expression,
            "slots": list(self.slots),
            "picture": self.picture,
        }

    def instantiate(self, ctx: AlgebraContext = DEFAULT_CONTEXT, **params) -> AlgebraElement:
        if self.picture != "superspace":
            raise ValueError("only superspace templates instantiate to algebra elements")
        missing = set(self.slots) - set(params)
        if missing:
            raise KeyError(f"missing parameters: {sorted(missing)}")
        kw = {}
        terms = {
            "L": "L" in self.expression,
            "Px": "P_x" in self.expression,
            "Pt": "P_t" in self.expression,
        }
        if terms["L"]:
            kw["L"] = 1.0
        if terms["Px"]:
            kw["Px"] = 1.0
        if terms["Pt"]:
            eps = params.get("eps", 1.0)
            kw["Pt"] = eps if "eps*P_t" in self.expression else 1.0
        if "mu*Q_x" in self.expression:
            kw["Qx"] = params["mu"]
        if "nu*Q_t" in self.expression:
            kw["Qt"] = params["nu"]
        return AlgebraElement.from_coeffs(ctx, **kw)


def subalgebra_catalog() -> list[SubalgebraTemplate]:
    """The sixteen superspace one-dimensional subalgebra templates plus the
    five component ones.  Parameters are nonvanishing; eps is +1 or -1."""
    S = [
        ("S1", "L", ()),
        ("S2", "P_x", ()),
        ("S3", "P_t", ()),
        ("S4", "P_x + eps*P_t", ("eps",)),
        ("S5", "mu*Q_x", ("mu",)),
        ("S6", "P_x + mu*Q_x", ("mu",)),
        ("S7", "P_t + mu*Q_x", ("mu",)),
        ("S8", "P_x + eps*P_t + mu*Q_x", ("eps", "mu")),
        ("S9", "nu*Q_t", ("nu",)),
        ("S10", "P_x + nu*Q_t", ("nu",)),
        ("S11", "P_t + nu*Q_t", ("nu",)),
        ("S12", "P_x + eps*P_t + nu*Q_t", ("eps", "nu")),
        ("S13", "mu*Q_x + nu*Q_t", ("mu", "nu")),
        ("S14", "P_x + mu*Q_x + nu*Q_t", ("mu", "nu")),
        ("S15", "P_t + mu*Q_x + nu*Q_t", ("mu", "nu")),
        ("S16", "P_x + eps*P_t + mu*Q_x + nu*Q_t", ("eps", "mu", "nu")),
    ]
    L = [
        ("L1", "D", ()),
        ("L2", "P_x", ()),
        ("L3", "P_t", ()),
        ("L4", "P_x + P_t", ()),
        ("L5", "P_x - P_t", ()),
    ]
    return [SubalgebraTemplate(n, e, s, "superspace") for n, e, s in S] + [
        SubalgebraTemplate(n, e, s, "component") for n, e, s in L
    ]
