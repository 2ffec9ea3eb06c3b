"""Graded jet space, total derivatives, and vector-field prolongation.

One generic engine instantiated twice: once on the superspace picture
(independents x, t, theta1, theta2; one even dependent) and once on the
component picture (independents x, t; dependents u even, phi/psi odd).

Jet coordinates are stored in a canonical form: even derivative counts
plus an ascending tuple of odd directions, where a coordinate subscript
list is read left to right as successive applications (the leftmost
derivative acts first).  Appending an odd direction that must bubble left
past k higher-indexed odd entries costs a sign (-1)^k; a repeated odd
direction kills the coordinate.

Prolonged coefficients come from the graded recursion

    P^A  = D_A P - sum_B (D_A zeta^B) u_B
    P^AB = D_B P^A - sum_C (D_B zeta^C) u_AC

with every product kept in exactly this order, built symbolically once
per signature and then evaluated at sampled points.  The long-hand
closed forms live in prolong_expanded as an independent transcription.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations, product
from typing import Callable

from .analytic import COS, SIN
from .grassmann import (
    DEFAULT_CONTEXT,
    AlgebraContext,
    GrassmannNumber,
    Parity,
    apply_analytic,
    gen_derivative,
)
from .superjet import (
    JetSpec,
    SuperJet,
    jet_constant,
    jet_map,
    jet_partial,
    jet_variable,
)


class IncompleteJetPoint(KeyError):
    """A required jet coordinate is missing from the point."""


EVEN = Parity.EVEN
ODD = Parity.ODD


@dataclass(frozen=True)
class ProblemSignature:
    independents: tuple[tuple[str, Parity], ...]
    dependents: tuple[tuple[str, Parity], ...]
    order: int = 2

    def __post_init__(self):
        names = [n for n, _ in self.independents] + [n for n, _ in self.dependents]
        if len(set(names)) != len(names):
            raise ValueError("variable names must be distinct")

    def parity_of(self, name: str) -> Parity:
        for n, p in self.independents + self.dependents:
            if n == name:
                return p
        raise KeyError(name)

    def dir_index(self, name: str) -> int:
        for i, (n, _) in enumerate(self.independents + self.dependents):
            if n == name:
                return i
        raise KeyError(name)

    @property
    def even_independents(self) -> tuple[str, ...]:
        return tuple(n for n, p in self.independents if p is EVEN)

    @property
    def odd_independents(self) -> tuple[str, ...]:
        return tuple(n for n, p in self.independents if p is ODD)

    @property
    def even_dependents(self) -> tuple[str, ...]:
        return tuple(n for n, p in self.dependents if p is EVEN)

    @property
    def odd_dependents(self) -> tuple[str, ...]:
        return tuple(n for n, p in self.dependents if p is ODD)

    def coordinate_parity(self, dep: str, jeven, jodd) -> Parity:
        flips = len(jodd) & 1
        base = self.parity_of(dep)
        if flips == 0:
            return base
        return ODD if base is EVEN else EVEN


SSG_SIGNATURE = ProblemSignature(
    independents=(("x", EVEN), ("t", EVEN), ("theta1", ODD), ("theta2", ODD)),
    dependents=(("Phi", EVEN),),
)

COMPONENT_SIGNATURE = ProblemSignature(
    independents=(("x", EVEN), ("t", EVEN)),
    dependents=(("u", EVEN), ("phi", ODD), ("psi", ODD)),
)


def append_odd(sig: ProblemSignature, jodd: tuple, direction: str):
    """Insert an outermost odd derivative into canonical position."""
    if direction in jodd:
        return 0.0, jodd
    hops = sum(1 for o in jodd if sig.dir_index(o) > sig.dir_index(direction))
    out = tuple(sorted(jodd + (direction,), key=sig.dir_index))
    return (-1.0) ** hops, out


def coordinate_key(sig: ProblemSignature, dep: str, dirs=()):
    """(sign, key) for the coordinate reached by successive derivatives."""
    jeven = [0] * len(sig.even_independents)
    jodd: tuple = ()
    sign = 1.0
    for d in dirs:
        if d in sig.even_independents:
            jeven[sig.even_independents.index(d)] += 1
        else:
            s, jodd = append_odd(sig, jodd, d)
            sign *= s
            if sign == 0.0:
                return 0.0, None
    return sign, (dep, tuple(jeven), jodd)


@dataclass
class JetPoint:
    sig: ProblemSignature
    ctx: AlgebraContext
    base: dict
    coords: dict

    def get(self, key) -> GrassmannNumber:
        try:
            return self.coords[key]
        except KeyError:
            raise IncompleteJetPoint(f"jet coordinate {key} missing") from None

    def coordinate(self, dep: str, *dirs) -> GrassmannNumber:
        sign, key = coordinate_key(self.sig, dep, dirs)
        if key is None:
            return self.ctx.zero()
        v = self.get(key)
        return v if sign == 1.0 else v * sign

    def base_value(self, name: str) -> GrassmannNumber:
        try:
            return self.base[name]
        except KeyError:
            raise IncompleteJetPoint(f"base variable {name} missing") from None

    def replace_coords(self, updates: dict) -> "JetPoint":
        coords = dict(self.coords)
        coords.update(updates)
        return JetPoint(self.sig, self.ctx, dict(self.base), coords)


def all_coordinate_keys(sig: ProblemSignature, order: int | None = None):
    """Canonical jet coordinate keys up to the given order."""
    ne = len(sig.even_independents)
    keys = []
    for dep, _ in sig.dependents:
        for total in range((sig.order if order is None else order) + 1):
            for odd_count in range(min(total, len(sig.odd_independents)) + 1):
                for jodd in combinations(sig.odd_independents, odd_count):
                    rem = total - odd_count
                    for jeven in product(range(rem + 1), repeat=ne):
                        if sum(jeven) == rem:
                            keys.append((dep, jeven, jodd))
    return keys


def random_jet_point(
    sig: ProblemSignature,
    rng_seed,
    ctx: AlgebraContext = DEFAULT_CONTEXT,
    order: int | None = None,
) -> JetPoint:
    """Point with theta-free supernumber entries of the right parity.

    Odd values are capped at Grassmann degree 3 and even souls at degree
    2, drawn sparsely from the generators that are not reserved for the
    odd coordinates, so that products through the prolongation formulas
    stay nontrivial without saturating the algebra.  ``order`` deepens
    the point past the signature's order; total derivatives of top-order
    expressions reference those extra slots.
    """
    rng = random.Random(rng_seed)
    reserved = {ctx.roles["theta1"], ctx.roles["theta2"]}
    free = [i for i in range(ctx.generator_count) if i not in reserved]

    def even_value(body_scale=1.2):
        v = ctx.scalar(rng.uniform(-body_scale, body_scale))
        for _ in range(2):
            i, j = rng.sample(free, 2)
            v = v + ctx.gen(i) * ctx.gen(j) * rng.uniform(-0.5, 0.5)
        return v

    def odd_value():
        v = ctx.gen(rng.choice(free)) * rng.uniform(-1.0, 1.0)
        i, j, k = rng.sample(free, 3)
        return v + ctx.gen(i) * ctx.gen(j) * ctx.gen(k) * rng.uniform(-0.5, 0.5)

    base = {}
    for name in sig.even_independents:
        base[name] = ctx.scalar(rng.uniform(-1.5, 1.5))
    for name in sig.odd_independents:
        base[name] = ctx.gen(name)
    coords = {}
    for key in all_coordinate_keys(sig, order):
        dep, jeven, jodd = key
        par = sig.coordinate_parity(dep, jeven, jodd)
        coords[key] = even_value() if par is EVEN else odd_value()
    return JetPoint(sig, ctx, base, coords)


# ------------------------------------------------------- symbolic expressions


@dataclass(frozen=True)
class FnF:
    """Partial derivative of a vector-field coefficient function."""

    target: str
    derivs: tuple[str, ...]


@dataclass(frozen=True)
class CoordF:
    dep: str
    jeven: tuple[int, ...]
    jodd: tuple[str, ...]


@dataclass(frozen=True)
class BaseF:
    name: str


Factor = object
Term = tuple[float, tuple]
JetExpr = list


def factor_parity(sig: ProblemSignature, coef_parity: dict, f) -> int:
    if isinstance(f, BaseF):
        return 1 if sig.parity_of(f.name) is ODD else 0
    if isinstance(f, CoordF):
        return 1 if sig.coordinate_parity(f.dep, f.jeven, f.jodd) is ODD else 0
    p = coef_parity[f.target]
    flips = sum(1 for d in f.derivs if sig.parity_of(d) is ODD)
    return (p + flips) & 1


def append_fn_deriv(sig: ProblemSignature, derivs: tuple, direction: str):
    """Outermost partial on a coefficient function, canonically ordered."""
    if sig.parity_of(direction) is ODD:
        if direction in derivs:
            return 0.0, derivs
        hops = sum(
            1
            for d in derivs
            if sig.parity_of(d) is ODD and sig.dir_index(d) > sig.dir_index(direction)
        )
        sign = (-1.0) ** hops
    else:
        sign = 1.0
    out = tuple(sorted(derivs + (direction,), key=sig.dir_index))
    return sign, out


def collect(expr: JetExpr) -> JetExpr:
    acc: dict = {}
    for c, fs in expr:
        if c != 0.0:
            acc[fs] = acc.get(fs, 0.0) + c
    return [(c, fs) for fs, c in acc.items() if c != 0.0]


def total_derivative_expr(
    sig: ProblemSignature, coef_parity: dict, expr: JetExpr, direction: str
) -> JetExpr:
    """D_direction of a symbolic expression, graded Leibniz throughout."""
    dpar = 1 if sig.parity_of(direction) is ODD else 0
    out: JetExpr = []

    def d_factor(f):
        """D of a single factor as a list of (coeff, factor tuple)."""
        if isinstance(f, BaseF):
            return [(1.0, ())] if f.name == direction else []
        if isinstance(f, CoordF):
            if direction in sig.even_independents:
                je = list(f.jeven)
                je[sig.even_independents.index(direction)] += 1
                return [(1.0, (CoordF(f.dep, tuple(je), f.jodd),))]
            s, jodd = append_odd(sig, f.jodd, direction)
            if s == 0.0:
                return []
            return [(s, (CoordF(f.dep, f.jeven, jodd),))]
        # coefficient function: explicit partial plus chain rule through
        # every dependent, first-order coordinate to the left
        pieces = []
        s, dv = append_fn_deriv(sig, f.derivs, direction)
        if s != 0.0:
            pieces.append((s, (FnF(f.target, dv),)))
        for dep, _ in sig.dependents:
            sc, key = coordinate_key(sig, dep, (direction,))
            if key is None:
                continue
            s2, dv2 = append_fn_deriv(sig, f.derivs, dep)
            if s2 == 0.0:
                continue
            pieces.append((sc * s2, (CoordF(*key), FnF(f.target, dv2))))
        return pieces

    for c, fs in expr:
        left_par = 0
        for i, f in enumerate(fs):
            sign = (-1.0) ** (dpar * left_par)
            for dc, dfs in d_factor(f):
                out.append((c * sign * dc, fs[:i] + dfs + fs[i + 1 :]))
            left_par = (left_par + factor_parity(sig, coef_parity, f)) & 1
    return collect(out)


def expr_times_coord(expr: JetExpr, coord: CoordF) -> JetExpr:
    return [(c, fs + (coord,)) for c, fs in expr]


def expr_sub(a: JetExpr, b: JetExpr) -> JetExpr:
    return collect(a + [(-c, fs) for c, fs in b])


# ------------------------------------------------ vector field coefficients


@dataclass
class CoefficientFn:
    """One coefficient of a vector field, decomposed over odd dependents.

    ``sectors`` maps an ascending tuple of odd dependent names to a
    builder; the function is the sum over sectors of (odd monomial from
    the left) times (builder value).  Builders receive a dict of jets
    seeded with the even independents and even dependents and must return
    a SuperJet over those seeds of the requested order.  Dependence on
    odd independents lives inside the returned components as reserved
    Grassmann generators.
    """

    parity: Parity
    sectors: dict[tuple[str, ...], Callable]

    @classmethod
    def plain(cls, parity: Parity, builder: Callable) -> "CoefficientFn":
        return cls(parity, {(): builder})

    @classmethod
    def zero(cls, parity: Parity = EVEN) -> "CoefficientFn":
        return cls(parity, {})


@dataclass
class VectorFieldSpec:
    sig: ProblemSignature
    coefficients: dict

    def __post_init__(self):
        # an even geometric field: each coefficient's parity matches the
        # parity of the variable it multiplies
        for name, c in self.coefficients.items():
            if c.parity is not self.sig.parity_of(name):
                raise ValueError(f"coefficient of {name} must be {self.sig.parity_of(name)}")
            for S in c.sectors:
                if tuple(sorted(S, key=self.sig.dir_index)) != S:
                    raise ValueError(f"sector {S} not in canonical order")
                if any(n not in self.sig.odd_dependents for n in S):
                    raise ValueError(f"sector {S} may only list odd dependents")

    def parity_table(self) -> dict:
        return {name: (1 if c.parity is ODD else 0) for name, c in self.coefficients.items()}


class EvaluatedCoefficient:
    """A coefficient function frozen at a point, answering partials.

    Even partials come from the stored jets, partials along odd
    independents from generator derivatives of the jet components, and
    partials along odd dependents from sector bookkeeping.  A query lists
    derivative directions leftmost-first.
    """

    def __init__(self, fn: CoefficientFn, point: JetPoint):
        sig, ctx = point.sig, point.ctx
        self.sig, self.ctx = sig, ctx
        self.point = point
        seeds = sig.even_independents + sig.even_dependents
        spec = JetSpec(seeds, sig.order)
        jets = {}
        for name in sig.even_independents:
            jets[name] = jet_variable(spec, name, point.base_value(name))
        for name in sig.even_dependents:
            sgn, key = coordinate_key(sig, name, ())
            jets[name] = jet_variable(spec, name, point.get(key))
        self.state: dict[tuple, SuperJet] = {
            S: builder(jets) for S, builder in fn.sectors.items()
        }
        self._memo: dict = {}

    def partial(self, dirs: tuple = ()) -> GrassmannNumber:
        dirs = tuple(dirs)
        if dirs in self._memo:
            return self._memo[dirs]
        state = self.state
        sig, ctx = self.sig, self.ctx
        for d in dirs:
            if d in sig.even_independents or d in sig.even_dependents:
                state = {S: jet_partial(j, d) for S, j in state.items()}
            elif d in sig.odd_independents:
                idx = ctx.roles[d]
                new = {}
                for S, j in state.items():
                    sgn = (-1.0) ** len(S)
                    nj = jet_map(j, lambda v: gen_derivative(v, idx))
                    new[S] = nj if sgn == 1.0 else jet_map(nj, lambda v: v * sgn)
                state = new
            else:
                new = {}
                for S, j in state.items():
                    if d not in S:
                        continue
                    pos = S.index(d)
                    rest = S[:pos] + S[pos + 1 :]
                    sgn = (-1.0) ** pos
                    nj = j if sgn == 1.0 else jet_map(j, lambda v: v * sgn)
                    if rest in new:
                        new[rest] = new[rest] + nj
                    else:
                        new[rest] = nj
                state = new
        acc = ctx.zero()
        for S, j in state.items():
            term = j.value()
            for name in reversed(S):
                sgn, key = coordinate_key(sig, name, ())
                term = self.point.get(key) * term
            acc = acc + term
        self._memo[dirs] = acc
        return acc


def evaluate_spec(v: VectorFieldSpec, p: JetPoint) -> dict:
    return {name: EvaluatedCoefficient(fn, p) for name, fn in v.coefficients.items()}


def evaluate_expr(expr: JetExpr, coefvals: dict, p: JetPoint) -> GrassmannNumber:
    acc = p.ctx.zero()
    for c, fs in expr:
        term = p.ctx.scalar(c)
        for f in fs:
            if isinstance(f, CoordF):
                term = term * p.get((f.dep, f.jeven, f.jodd))
            elif isinstance(f, BaseF):
                term = term * p.base_value(f.name)
            else:
                term = term * coefvals[f.target].partial(f.derivs)
        acc = acc + term
    return acc


def total_derivative(
    p: JetPoint, expr: JetExpr, direction: str, coefvals=None, coef_parity=None
) -> GrassmannNumber:
    """Evaluate D_direction(expr) at the point.

    ``expr`` is a symbolic jet expression (see BaseF/CoordF/FnF).  Pure
    coordinate and base-variable expressions need no coefficient values;
    expressions mentioning coefficient functions need both their
    evaluations and their parity table.
    """
    dexpr = total_derivative_expr(p.sig, coef_parity or {}, expr, direction)
    return evaluate_expr(dexpr, coefvals or {}, p)


# --------------------------------------------------------- prolongation table


_TABLE_CACHE: dict = {}


class ProlongationTable:
    """Symbolic prolonged-coefficient expressions for one signature."""

    def __init__(self, sig: ProblemSignature, coef_parity: dict):
        self.sig = sig
        self.coef_parity = coef_parity
        self.first: dict = {}
        self.exprs: dict = {}

    def base_expr(self, dep: str) -> JetExpr:
        return [(1.0, (FnF(dep, ()),))]

    def first_order(self, dep: str, a: str) -> JetExpr:
        key = (dep, (a,))
        if key not in self.exprs:
            sig = self.sig
            e = total_derivative_expr(sig, self.coef_parity, self.base_expr(dep), a)
            for b, _ in sig.independents:
                dz = total_derivative_expr(
                    sig, self.coef_parity, [(1.0, (FnF(b, ()),))], a
                )
                sc, ckey = coordinate_key(sig, dep, (b,))
                if ckey is None:
                    continue
                e = expr_sub(e, [(c * sc, fs + (CoordF(*ckey),)) for c, fs in dz])
            self.exprs[key] = collect(e)
        return self.exprs[key]

    def second_order(self, dep: str, a: str, b: str) -> JetExpr:
        key = (dep, (a, b))
        if key not in self.exprs:
            sig = self.sig
            e = total_derivative_expr(
                sig, self.coef_parity, self.first_order(dep, a), b
            )
            for c_, _ in sig.independents:
                dz = total_derivative_expr(
                    sig, self.coef_parity, [(1.0, (FnF(c_, ()),))], b
                )
                sc, ckey = coordinate_key(sig, dep, (a, c_))
                if ckey is None:
                    continue
                e = expr_sub(e, [(cc * sc, fs + (CoordF(*ckey),)) for cc, fs in dz])
            self.exprs[key] = collect(e)
        return self.exprs[key]


def _table_for(v: VectorFieldSpec) -> ProlongationTable:
    key = (v.sig, tuple(sorted(v.parity_table().items())))
    if key not in _TABLE_CACHE:
        _TABLE_CACHE[key] = ProlongationTable(v.sig, v.parity_table())
    return _TABLE_CACHE[key]


SSG_PAIRS = (("x", "t"), ("t", "theta1"), ("x", "theta2"), ("theta1", "theta2"))


@dataclass
class ProlongedCoefficients:
    values: dict

    def get(self, dep: str, dirs: tuple) -> GrassmannNumber:
        return self.values[(dep, tuple(dirs))]


def prolong(v: VectorFieldSpec, p: JetPoint) -> ProlongedCoefficients:
    """All needed prolonged coefficients via the graded recursion."""
    table = _table_for(v)
    coefvals = evaluate_spec(v, p)
    out = {}
    if v.sig.odd_independents:
        dep = v.sig.dependents[0][0]
        for a, _ in v.sig.independents:
            out[(dep, (a,))] = evaluate_expr(table.first_order(dep, a), coefvals, p)
        for a, b in SSG_PAIRS:
            out[(dep, (a, b))] = evaluate_expr(table.second_order(dep, a, b), coefvals, p)
    else:
        for dep in ("u", "phi", "psi"):
            for a in ("x", "t"):
                out[(dep, (a,))] = evaluate_expr(table.first_order(dep, a), coefvals, p)
        out[("u", ("x", "t"))] = evaluate_expr(
            table.second_order("u", "x", "t"), coefvals, p
        )
    return ProlongedCoefficients(out)


# ------------------------------------------------- expanded closed-form route


def prolong_expanded(v: VectorFieldSpec, p: JetPoint) -> ProlongedCoefficients:
    """Term-by-term transcription of the fully expanded coefficient formulas."""
    coefvals = evaluate_spec(v, p)

    def f(target, *dirs):
        return coefvals[target].partial(tuple(dirs))

    def c(dep, *dirs):
        sgn, key = coordinate_key(v.sig, dep, dirs)
        if key is None:
            return p.ctx.zero()
        val = p.get(key)
        return val if sgn == 1.0 else val * sgn

    if v.sig.odd_independents:
        return _ssg_expanded(v, p, f, c)
    return _component_expanded(v, p, f, c)


def _ssg_expanded(v, p, f, c):
    x, t, o1, o2, P = "x", "t", "theta1", "theta2", "Phi"
    Px = (
        f(P, x) + f(P, P) * c(P, x)
        - f(x, x) * c(P, x) - f(x, P) * c(P, x) * c(P, x)
        - f(t, x) * c(P, t) - f(t, P) * c(P, x) * c(P, t)
        - f(o1, x) * c(P, o1) - f(o1, P) * c(P, x) * c(P, o1)
        - f(o2, x) * c(P, o2) - f(o2, P) * c(P, x) * c(P, o2)
    )
    Pt = (
        f(P, t) + f(P, P) * c(P, t)
        - f(x, t) * c(P, x) - f(x, P) * c(P, x) * c(P, t)
        - f(t, t) * c(P, t) - f(t, P) * c(P, t) * c(P, t)
        - f(o1, t) * c(P, o1) - f(o1, P) * c(P, t) * c(P, o1)
        - f(o2, t) * c(P, o2) - f(o2, P) * c(P, t) * c(P, o2)
    )
    Po1 = (
        f(P, o1) + f(P, P) * c(P, o1)
        - f(x, o1) * c(P, x) - f(x, P) * c(P, x) * c(P, o1)
        - f(t, o1) * c(P, t) - f(t, P) * c(P, t) * c(P, o1)
        - f(o1, o1) * c(P, o1)
        - f(o2, o1) * c(P, o2) + f(o2, P) * c(P, o1) * c(P, o2)
    )
    Po2 = (
        f(P, o2) + f(P, P) * c(P, o2)
        - f(x, o2) * c(P, x) - f(x, P) * c(P, x) * c(P, o2)
        - f(t, o2) * c(P, t) - f(t, P) * c(P, t) * c(P, o2)
        - f(o1, o2) * c(P, o1) - f(o1, P) * c(P, o1) * c(P, o2)
        - f(o2, o2) * c(P, o2)
    )
    Pxt = (
        f(P, x, t) + f(P, x, P) * c(P, t) + f(P, t, P) * c(P, x)
        + f(P, P, P) * c(P, x) * c(P, t) + f(P, P) * c(P, x, t)
        - f(x, x, t) * c(P, x) - f(x, x, P) * c(P, x) * c(P, t) - f(x, x) * c(P, x, t)
        - f(x, t, P) * c(P, x) * c(P, x) - f(x, P, P) * c(P, x) * c(P, x) * c(P, t)
        - 2.0 * f(x, P) * c(P, x) * c(P, x, t) - f(x, t) * c(P, x, x)
        - f(x, P) * c(P, t) * c(P, x, x)
        - f(t, x, t) * c(P, t) - f(t, t, P) * c(P, x) * c(P, t) - f(t, t) * c(P, x, t)
        - f(t, x, P) * c(P, t) * c(P, t) - f(t, P, P) * c(P, t) * c(P, t) * c(P, x)
        - 2.0 * f(t, P) * c(P, t) * c(P, x, t) - f(t, x) * c(P, t, t)
        - f(t, P) * c(P, x) * c(P, t, t)
        - f(o1, x, t) * c(P, o1) - f(o1, x, P) * c(P, t) * c(P, o1)
        - f(o1, t, P) * c(P, x) * c(P, o1) - f(o1, x) * c(P, t, o1)
        - f(o1, t) * c(P, x, o1) - f(o1, P, P) * c(P, x) * c(P, t) * c(P, o1)
        - f(o1, P) * c(P, x, t) * c(P, o1) - f(o1, P) * c(P, t, o1) * c(P, x)
        - f(o1, P) * c(P, x, o1) * c(P, t)
        - f(o2, x, t) * c(P, o2) - f(o2, x, P) * c(P, t) * c(P, o2)
        - f(o2, t, P) * c(P, x) * c(P, o2) - f(o2, x) * c(P, t, o2)
        - f(o2, t) * c(P, x, o2) - f(o2, P, P) * c(P, x) * c(P, t) * c(P, o2)
        - f(o2, P) * c(P, x, t) * c(P, o2) - f(o2, P) * c(P, t, o2) * c(P, x)
        - f(o2, P) * c(P, x, o2) * c(P, t)
    )
    Pto1 = (
        f(P, t, o1) + f(P, t, P) * c(P, o1) + f(P, o1, P) * c(P, t)
        + f(P, P, P) * c(P, t) * c(P, o1) + f(P, P) * c(P, t, o1)
        - f(x, t, o1) * c(P, x) - f(x, t, P) * c(P, x) * c(P, o1)
        - f(x, t) * c(P, x, o1) - f(x, o1, P) * c(P, x) * c(P, t)
        - f(x, P, P) * c(P, x) * c(P, t) * c(P, o1) - f(x, P) * c(P, t) * c(P, x, o1)
        - f(x, P) * c(P, x) * c(P, t, o1) - f(x, o1) * c(P, x, t)
        - f(x, P) * c(P, x, t) * c(P, o1)
        - f(t, t, o1) * c(P, t) - f(t, t, P) * c(P, t) * c(P, o1)
        - f(t, t) * c(P, t, o1) - f(t, o1, P) * c(P, t) * c(P, t)
        - f(t, P, P) * c(P, t) * c(P, t) * c(P, o1) - 2.0 * f(t, P) * c(P, t) * c(P, t, o1)
        - f(t, o1) * c(P, t, t) - f(t, P) * c(P, t, t) * c(P, o1)
        - f(o1, t, o1) * c(P, o1) - f(o1, o1, P) * c(P, t) * c(P, o1)
        - f(o1, o1) * c(P, t, o1)
        - f(o2, t, o1) * c(P, o2) + f(o2, t, P) * c(P, o1) * c(P, o2)
        - f(o2, t) * c(P, o1, o2) - f(o2, o1, P) * c(P, t) * c(P, o2)
        + f(o2, P, P) * c(P, t) * c(P, o1) * c(P, o2) + f(o2, P) * c(P, t, o1) * c(P, o2)
        - f(o2, P) * c(P, t) * c(P, o1, o2) - f(o2, o1) * c(P, t, o2)
        + f(o2, P) * c(P, o1) * c(P, t, o2)
    )
    Pxo2 = (
        f(P, x, o2) + f(P, x, P) * c(P, o2) + f(P, o2, P) * c(P, x)
        + f(P, P, P) * c(P, x) * c(P, o2) + f(P, P) * c(P, x, o2)
        - f(x, x, o2) * c(P, x) - f(x, x, P) * c(P, x) * c(P, o2)
        - f(x, x) * c(P, x, o2) - f(x, o2, P) * c(P, x) * c(P, x)
        - f(x, P, P) * c(P, x) * c(P, x) * c(P, o2) - 2.0 * f(x, P) * c(P, x) * c(P, x, o2)
        - f(x, o2) * c(P, x, x) - f(x, P) * c(P, x, x) * c(P, o2)
        - f(t, x, o2) * c(P, t) - f(t, x, P) * c(P, t) * c(P, o2)
        - f(t, x) * c(P, t, o2) - f(t, o2, P) * c(P, x) * c(P, t)
        - f(t, P, P) * c(P, x) * c(P, t) * c(P, o2) - f(t, P) * c(P, x) * c(P, t, o2)
        - f(t, P) * c(P, t) * c(P, x, o2) - f(t, o2) * c(P, x, t)
        - f(t, P) * c(P, x, t) * c(P, o2)
        - f(o1, x, o2) * c(P, o1) + f(o1, x, P) * c(P, o2) * c(P, o1)
        + f(o1, x) * c(P, o1, o2) - f(o1, o2, P) * c(P, x) * c(P, o1)
        + f(o1, P, P) * c(P, x) * c(P, o2) * c(P, o1) + f(o1, P) * c(P, x, o2) * c(P, o1)
        + f(o1, P) * c(P, x) * c(P, o1, o2) - f(o1, o2) * c(P, x, o1)
        + f(o1, P) * c(P, o2) * c(P, x, o1)
        - f(o2, x, o2) * c(P, o2) - f(o2, o2, P) * c(P, x) * c(P, o2)
        - f(o2, o2) * c(P, x, o2)
    )
    Po1o2 = (
        f(P, o1, o2) - f(P, o1, P) * c(P, o2) + f(P, o2, P) * c(P, o1)
        - f(P, P, P) * c(P, o1) * c(P, o2) + f(P, P) * c(P, o1, o2)
        - f(x, o1, o2) * c(P, x) + f(x, o1, P) * c(P, x) * c(P, o2)
        + f(x, o1) * c(P, x, o2) - f(x, o2, P) * c(P, x) * c(P, o1)
        + f(x, P, P) * c(P, x) * c(P, o1) * c(P, o2) + f(x, P) * c(P, o1) * c(P, x, o2)
        - f(x, P) * c(P, x) * c(P, o1, o2) - f(x, o2) * c(P, x, o1)
        - f(x, P) * c(P, o2) * c(P, x, o1)
        - f(t, o1, o2) * c(P, t) + f(t, o1, P) * c(P, t) * c(P, o2)
        + f(t, o1) * c(P, t, o2) - f(t, o2, P) * c(P, t) * c(P, o1)
        + f(t, P, P) * c(P, t) * c(P, o1) * c(P, o2) + f(t, P) * c(P, o1) * c(P, t, o2)
        - f(t, P) * c(P, t) * c(P, o1, o2) - f(t, o2) * c(P, t, o1)
        - f(t, P) * c(P, o2) * c(P, t, o1)
        - f(o1, o1, o2) * c(P, o1) + f(o1, o1, P) * c(P, o1) * c(P, o2)
        - f(o1, o1) * c(P, o1, o2)
        - f(o2, o1, o2) * c(P, o2) + f(o2, o2, P) * c(P, o1) * c(P, o2)
        - f(o2, o2) * c(P, o1, o2)
    )
    return ProlongedCoefficients(
        {
            ("Phi", (x,)): Px,
            ("Phi", (t,)): Pt,
            ("Phi", (o1,)): Po1,
            ("Phi", (o2,)): Po2,
            ("Phi", (x, t)): Pxt,
            ("Phi", (t, o1)): Pto1,
            ("Phi", (x, o2)): Pxo2,
            ("Phi", (o1, o2)): Po1o2,
        }
    )


def _component_expanded(v, p, f, c):
    # first-order coefficients for the phi_t and psi_x slots
    St = (
        f("phi", "t") + f("phi", "u") * c("u", "t")
        + f("phi", "phi") * c("phi", "t") + f("phi", "psi") * c("psi", "t")
        - f("x", "t") * c("phi", "x") - f("x", "u") * c("u", "t") * c("phi", "x")
        - f("x", "phi") * c("phi", "x") * c("phi", "t")
        - f("x", "psi") * c("phi", "x") * c("psi", "t")
        - f("t", "t") * c("phi", "t") - f("t", "u") * c("u", "t") * c("phi", "t")
        - f("t", "psi") * c("phi", "t") * c("psi", "t")
    )
    Px_ = (
        f("psi", "x") + f("psi", "u") * c("u", "x")
        + f("psi", "phi") * c("phi", "x") + f("psi", "psi") * c("psi", "x")
        - f("x", "x") * c("psi", "x") - f("x", "u") * c("u", "x") * c("psi", "x")
        + f("x", "phi") * c("phi", "x") * c("psi", "x")
        - f("t", "x") * c("psi", "t") - f("t", "u") * c("u", "x") * c("psi", "t")
        + f("t", "phi") * c("phi", "x") * c("psi", "t")
        + f("t", "psi") * c("psi", "x") * c("psi", "t")
    )
    return ProlongedCoefficients(
        {("phi", ("t",)): St, ("psi", ("x",)): Px_}
    )


# ----------------------------------------------------- on-shell substitution


def onshell_substitute(p: JetPoint, instance: ProblemSignature | None = None) -> JetPoint:
    """Constrain the point to the solution manifold of its instance."""
    if instance is not None and instance != p.sig:
        raise ValueError("instance does not match the point's signature")
    ctx = p.ctx
    if p.sig.odd_independents:
        th1 = p.base_value("theta1")
        th2 = p.base_value("theta2")
        sub = (
            th1 * th2 * p.coordinate("Phi", "x", "t")
            - th2 * p.coordinate("Phi", "t", "theta1")
            + th1 * p.coordinate("Phi", "x", "theta2")
            - apply_analytic(SIN, p.coordinate("Phi"))
        )
        _, key = coordinate_key(p.sig, "Phi", ("theta1", "theta2"))
        return p.replace_coords({key: sub})
    u = p.coordinate("u")
    phi, psi = p.coordinate("phi"), p.coordinate("psi")
    ux, ut = p.coordinate("u", "x"), p.coordinate("u", "t")
    phx, pst = p.coordinate("phi", "x"), p.coordinate("psi", "t")
    sh = apply_analytic(SIN, u * 0.5)
    ch = apply_analytic(COS, u * 0.5)
    sin_u = sh * ch * 2.0
    upd = {}

    def put(dep, dirs, val):
        _, key = coordinate_key(p.sig, dep, dirs)
        upd[key] = val

    put("u", ("x", "t"), -sin_u + phi * psi * sh * 2.0)
    put("phi", ("t",), -(psi * ch))
    put("psi", ("x",), phi * ch)
    # induced constraints on the stored second derivatives of the equations
    put("phi", ("x", "t"), -(phi * ch * ch) + psi * ux * sh * 0.5)
    put("psi", ("x", "t"), -(psi * ch * ch) - phi * ut * sh * 0.5)
    put("phi", ("t", "t"), -(pst * ch) + psi * ut * sh * 0.5)
    put("psi", ("x", "x"), phx * ch - phi * ux * sh * 0.5)
    return p.replace_coords(upd)


# ----------------------------------------------------------- symmetry checks


def symmetry_residual(v: VectorFieldSpec, p: JetPoint):
    """Criterion value(s) at the on-shell restriction of the point.

    Superspace instance: one even supernumber, zero for true symmetries.
    Component instance: the triple of slot conditions.
    """
    q = onshell_substitute(p)
    coefvals = evaluate_spec(v, q)
    pro = prolong(v, q)
    ctx = q.ctx
    if v.sig.odd_independents:
        th1 = q.base_value("theta1")
        th2 = q.base_value("theta2")
        rho = coefvals["theta1"].partial(())
        sig_ = coefvals["theta2"].partial(())
        Pi = coefvals["Phi"].partial(())
        cosP = apply_analytic(COS, q.coordinate("Phi"))
        return (
            rho * (th2 * q.coordinate("Phi", "x", "t") + q.coordinate("Phi", "x", "theta2"))
            - sig_ * (th1 * q.coordinate("Phi", "x", "t") + q.coordinate("Phi", "t", "theta1"))
            - Pi * cosP
            + pro.get("Phi", ("x", "t")) * (th1 * th2)
            + pro.get("Phi", ("t", "theta1")) * th2
            - pro.get("Phi", ("x", "theta2")) * th1
            - pro.get("Phi", ("theta1", "theta2"))
        )
    u = q.coordinate("u")
    phi, psi = q.coordinate("phi"), q.coordinate("psi")
    sh = apply_analytic(SIN, u * 0.5)
    ch = apply_analytic(COS, u * 0.5)
    cos_u = ch * ch - sh * sh
    U = coefvals["u"].partial(())
    S = coefvals["phi"].partial(())
    Ps = coefvals["psi"].partial(())
    r1 = pro.get("u", ("x", "t")) - (
        U * (-cos_u + ch * phi * psi) + S * (sh * 2.0) * psi + Ps * (sh * -2.0) * phi
    )
    r2 = pro.get("phi", ("t",)) - (U * 0.5 * sh * psi - Ps * ch)
    r3 = pro.get("psi", ("x",)) - (U * -0.5 * sh * phi + S * ch)
    return r1, r2, r3


# ------------------------------------------------------------ field builders


def _const_builder(value: GrassmannNumber):
    def build(jets):
        spec = next(iter(jets.values())).spec
        return jet_constant(spec, value)

    return build


def ssg_symmetry_spec(C1=0.0, C2=0.0, C3=0.0, D1=None, D2=None, ctx=DEFAULT_CONTEXT):
    """The general solved symmetry of the superspace equation.

    xi = -2 C1 x + C2 - D1 theta1, tau = 2 C1 t + C3 - D2 theta2,
    rho = -C1 theta1 + D1, sigma = C1 theta2 + D2, Pi = 0, with C's even
    and D's odd supernumbers.
    """
    th1, th2 = ctx.gen("theta1"), ctx.gen("theta2")
    zero = ctx.zero()
    D1 = D1 if D1 is not None else zero
    D2 = D2 if D2 is not None else zero
    C1 = C1 if isinstance(C1, GrassmannNumber) else ctx.scalar(C1)
    C2 = C2 if isinstance(C2, GrassmannNumber) else ctx.scalar(C2)
    C3 = C3 if isinstance(C3, GrassmannNumber) else ctx.scalar(C3)

    def xi(jets):
        return jets["x"] * (C1 * -2.0) + jet_constant(jets["x"].spec, C2 - D1 * th1)

    def tau(jets):
        return jets["t"] * (C1 * 2.0) + jet_constant(jets["t"].spec, C3 - D2 * th2)

    rho = _const_builder(C1 * -1.0 * th1 + D1)
    sigma = _const_builder(C1 * th2 + D2)
    return VectorFieldSpec(
        SSG_SIGNATURE,
        {
            "x": CoefficientFn.plain(EVEN, xi),
            "t": CoefficientFn.plain(EVEN, tau),
            "theta1": CoefficientFn.plain(ODD, rho),
            "theta2": CoefficientFn.plain(ODD, sigma),
            "Phi": CoefficientFn.zero(EVEN),
        },
    )


def ssg_named_generators(ctx: AlgebraContext = DEFAULT_CONTEXT) -> dict:
    """The five basis symmetries; odd ones carry their odd prefactor."""
    return {
        "L": ssg_symmetry_spec(C1=1.0, ctx=ctx),
        "P_x": ssg_symmetry_spec(C2=1.0, ctx=ctx),
        "P_t": ssg_symmetry_spec(C3=1.0, ctx=ctx),
        "mu*Q_x": ssg_symmetry_spec(D1=ctx.gen("mu"), ctx=ctx),
        "nu*Q_t": ssg_symmetry_spec(D2=ctx.gen("nu"), ctx=ctx),
    }


def ssg_shift_spec(ctx: AlgebraContext = DEFAULT_CONTEXT) -> VectorFieldSpec:
    """Pi = 1 and nothing else: not a symmetry (negative control)."""
    return VectorFieldSpec(
        SSG_SIGNATURE,
        {
            "x": CoefficientFn.zero(EVEN),
            "t": CoefficientFn.zero(EVEN),
            "theta1": CoefficientFn.zero(ODD),
            "theta2": CoefficientFn.zero(ODD),
            "Phi": CoefficientFn.plain(EVEN, _const_builder(ctx.one())),
        },
    )


def component_symmetry_spec(C1=0.0, C2=0.0, C3=0.0, ctx=DEFAULT_CONTEXT) -> VectorFieldSpec:
    """xi = C1 x + C2, tau = -C1 t + C3, U = 0, Sigma = -C1 phi/2, Psi = C1 psi/2."""
    C1f = float(C1)

    def xi(jets):
        return jets["x"] * C1f + jet_constant(jets["x"].spec, ctx.scalar(float(C2)))

    def tau(jets):
        return jets["t"] * -C1f + jet_constant(jets["t"].spec, ctx.scalar(float(C3)))

    return VectorFieldSpec(
        COMPONENT_SIGNATURE,
        {
            "x": CoefficientFn.plain(EVEN, xi),
            "t": CoefficientFn.plain(EVEN, tau),
            "u": CoefficientFn.zero(EVEN),
            "phi": CoefficientFn(ODD, {("phi",): _const_builder(ctx.scalar(-0.5 * C1f))}),
            "psi": CoefficientFn(ODD, {("psi",): _const_builder(ctx.scalar(0.5 * C1f))}),
        },
    )


def component_named_generators(ctx: AlgebraContext = DEFAULT_CONTEXT) -> dict:
    return {
        "P_x": component_symmetry_spec(C2=1.0, ctx=ctx),
        "P_t": component_symmetry_spec(C3=1.0, ctx=ctx),
        "D": component_symmetry_spec(C1=2.0, ctx=ctx),
    }


def component_shift_spec(ctx: AlgebraContext = DEFAULT_CONTEXT) -> VectorFieldSpec:
    return VectorFieldSpec(
        COMPONENT_SIGNATURE,
        {
            "x": CoefficientFn.zero(EVEN),
            "t": CoefficientFn.zero(EVEN),
            "u": CoefficientFn.plain(EVEN, _const_builder(ctx.one())),
            "phi": CoefficientFn.zero(ODD),
            "psi": CoefficientFn.zero(ODD),
        },
    )


def _scaled(builder, weight):
    return lambda jets: builder(jets) * weight


def _summed(b1, w1, b2, w2):
    return lambda jets: b1(jets) * w1 + b2(jets) * w2


def combine_specs(a, v: VectorFieldSpec, b, w: VectorFieldSpec) -> VectorFieldSpec:
    """a*v + b*w for even supernumber weights, coefficient by coefficient."""
    if v.sig is not w.sig:
        raise ValueError("cannot combine specs over different signatures")
    out = {}
    for name in v.coefficients:
        fv, fw = v.coefficients[name], w.coefficients[name]
        sectors: dict = {}
        for S, bld in fv.sectors.items():
            if S in fw.sectors:
                sectors[S] = _summed(bld, a, fw.sectors[S], b)
            else:
                sectors[S] = _scaled(bld, a)
        for S, bld in fw.sectors.items():
            if S not in sectors:
                sectors[S] = _scaled(bld, b)
        out[name] = CoefficientFn(fv.parity, sectors)
    return VectorFieldSpec(v.sig, out)
