"""Jets of supernumber-valued functions of commuting coordinates.

A ``SuperJet`` stores raw partial derivatives (not normalized Taylor
coefficients) up to a total order against a fixed tuple of even seed
names.  Components are Grassmann numbers, so a single jet carries a whole
superspace expansion; the seeds themselves always commute, which keeps the
Leibniz bookkeeping sign-free as long as factor order is preserved.

Composition with an analytic function uses Faa di Bruno in its set
partition form over index positions.  The base component must be even.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from typing import Callable

from .analytic import AnalyticFn
from .grassmann import GrassmannNumber, ParityError, scalar


@dataclass(frozen=True)
class JetSpec:
    seeds: tuple[str, ...]
    order: int = 2

    def __post_init__(self):
        if not self.seeds or len(set(self.seeds)) != len(self.seeds):
            raise ValueError(f"seed names must be distinct and nonempty: {self.seeds}")
        if self.order < 0:
            raise ValueError("negative jet order")

    def axis(self, seed: str) -> int:
        try:
            return self.seeds.index(seed)
        except ValueError:
            raise KeyError(f"unknown seed {seed!r}; have {self.seeds}") from None

    def indices(self):
        """All multi-indices with total degree <= order."""
        ranges = [range(self.order + 1)] * len(self.seeds)
        for J in product(*ranges):
            if sum(J) <= self.order:
                yield J


class SuperJet:
    __slots__ = ("spec", "ngen", "comp")

    def __init__(self, spec: JetSpec, ngen: int, comp: dict):
        self.spec = spec
        self.ngen = ngen
        self.comp = {J: v for J, v in comp.items() if not v.is_zero()}

    def get(self, J) -> GrassmannNumber:
        v = self.comp.get(tuple(J))
        return v if v is not None else scalar(0.0, self.ngen)

    def value(self) -> GrassmannNumber:
        return self.get((0,) * len(self.spec.seeds))

    def d(self, *seeds: str) -> GrassmannNumber:
        """Raw derivative component by seed names, e.g. jet.d('x', 'x', 't')."""
        J = [0] * len(self.spec.seeds)
        for s in seeds:
            J[self.spec.axis(s)] += 1
        return self.get(tuple(J))

    def __add__(self, other):
        return jet_add(self, other)

    def __sub__(self, other):
        return jet_add(self, jet_scale(other, -1.0))

    def __neg__(self):
        return jet_scale(self, -1.0)

    def __mul__(self, other):
        if isinstance(other, SuperJet):
            return jet_multiply(self, other)
        return jet_scale(self, other)

    def __rmul__(self, other):
        # scalar/Grassmann prefactor from the left
        return jet_scale(self, other, from_left=True)

    def __repr__(self):
        parts = ", ".join(f"{J}: {v}" for J, v in sorted(self.comp.items()))
        return f"SuperJet({self.spec.seeds}, order={self.spec.order}, {{{parts}}})"


def _check_same(a: SuperJet, b: SuperJet):
    if a.spec != b.spec:
        raise ValueError(f"jet spec mismatch: {a.spec} vs {b.spec}")
    if a.ngen != b.ngen:
        raise ValueError("jets over different Grassmann algebras")


def jet_constant(spec: JetSpec, value: GrassmannNumber) -> SuperJet:
    return SuperJet(spec, value.ngen, {(0,) * len(spec.seeds): value})


def jet_variable(spec: JetSpec, seed: str, value: GrassmannNumber) -> SuperJet:
    ax = spec.axis(seed)
    comp = {(0,) * len(spec.seeds): value}
    if spec.order >= 1:
        e = [0] * len(spec.seeds)
        e[ax] = 1
        comp[tuple(e)] = scalar(1.0, value.ngen)
    return SuperJet(spec, value.ngen, comp)


def jet_from_derivs(spec: JetSpec, comp: dict) -> SuperJet:
    """Wrap a raw {multi-index: GrassmannNumber} table as a jet."""
    ng = None
    for v in comp.values():
        ng = v.ngen
        break
    if ng is None:
        raise ValueError("empty component table")
    clean = {}
    for J, v in comp.items():
        J = tuple(J)
        if len(J) != len(spec.seeds) or sum(J) > spec.order or min(J) < 0:
            raise ValueError(f"bad multi-index {J} for {spec}")
        clean[J] = v
    return SuperJet(spec, ng, clean)


def jet_add(a: SuperJet, b: SuperJet) -> SuperJet:
    _check_same(a, b)
    comp = dict(a.comp)
    for J, v in b.comp.items():
        comp[J] = comp[J] + v if J in comp else v
    return SuperJet(a.spec, a.ngen, comp)


def jet_scale(a: SuperJet, c, from_left: bool = False) -> SuperJet:
    if isinstance(c, GrassmannNumber):
        if from_left:
            return SuperJet(a.spec, a.ngen, {J: c * v for J, v in a.comp.items()})
        return SuperJet(a.spec, a.ngen, {J: v * c for J, v in a.comp.items()})
    return SuperJet(a.spec, a.ngen, {J: v * c for J, v in a.comp.items()})


def _binom_multi(J, I) -> float:
    out = 1.0
    for j, i in zip(J, I):
        out *= math.comb(j, i)
    return out


def jet_multiply(a: SuperJet, b: SuperJet) -> SuperJet:
    """Componentwise Leibniz product; factor order a*b is preserved."""
    _check_same(a, b)
    comp: dict = {}
    for I, av in a.comp.items():
        for K, bv in b.comp.items():
            J = tuple(i + k for i, k in zip(I, K))
            if sum(J) > a.spec.order:
                continue
            term = av * bv
            w = _binom_multi(J, I)
            term = term * w if w != 1.0 else term
            comp[J] = comp[J] + term if J in comp else term
    return SuperJet(a.spec, a.ngen, comp)


def jet_partial(a: SuperJet, seed: str) -> SuperJet:
    """Shift one derivative slot down; the result is one order lower."""
    ax = a.spec.axis(seed)
    sub = JetSpec(a.spec.seeds, a.spec.order - 1)
    comp = {}
    for J, v in a.comp.items():
        if J[ax] == 0:
            continue
        K = list(J)
        K[ax] -= 1
        if sum(K) <= sub.order:
            comp[tuple(K)] = v
    return SuperJet(sub, a.ngen, comp)


def _set_partitions(n: int):
    return _set_partitions_of(list(range(n)))


def _set_partitions_of(items):
    if not items:
        yield []
        return
    head, tail = items[0], items[1:]
    for rest in _set_partitions_of(tail):
        for i in range(len(rest)):
            yield [rest[j] + ([head] if j == i else []) for j in range(len(rest))]
        yield [[head]] + rest


def _analytic_derivs_at(fn: AnalyticFn, a: GrassmannNumber, kmax: int):
    """[f(a), f'(a), ..., f^(kmax)(a)] for even a, via Taylor in the soul."""
    if not a.is_even():
        raise ParityError("analytic composition needs an even base component")
    b = a.body
    s = a.soul()
    powers = [scalar(1.0, a.ngen)]
    p = powers[0]
    while True:
        p = p * s
        if p.is_zero():
            break
        powers.append(p)
    ds = fn.derivs(b, kmax + len(powers) - 1)
    out = []
    for k in range(kmax + 1):
        acc = scalar(0.0, a.ngen)
        for j, pw in enumerate(powers):
            acc = acc + pw * (ds[k + j] / math.factorial(j))
        out.append(acc)
    return out


def jet_apply_analytic(a: SuperJet, fn: AnalyticFn) -> SuperJet:
    """fn composed onto an even jet.

    Each component of total degree d expands over set partitions of the d
    index positions.  Every component must be even: the composition only
    makes sense for an even-valued function, and evenness is what lets the
    chain rule factors commute without sign tracking.
    """
    for v in a.comp.values():
        if not v.is_even():
            raise ParityError("analytic composition needs an even jet")
    base = a.value()
    fs = _analytic_derivs_at(fn, base, a.spec.order)
    comp = {(0,) * len(a.spec.seeds): fs[0]}
    for J in a.spec.indices():
        d = sum(J)
        if d == 0:
            continue
        positions = []
        for ax, cnt in enumerate(J):
            positions.extend([ax] * cnt)
        acc = scalar(0.0, a.ngen)
        for part in _set_partitions(d):
            term = fs[len(part)]
            for block in part:
                K = [0] * len(a.spec.seeds)
                for pos in block:
                    K[positions[pos]] += 1
                term = term * a.get(tuple(K))
            acc = acc + term
        comp[J] = acc
    return SuperJet(a.spec, a.ngen, comp)


def jet_isclose(a: SuperJet, b: SuperJet, tol: float = 1e-12) -> bool:
    _check_same(a, b)
    keys = set(a.comp) | set(b.comp)
    return all((a.get(J) - b.get(J)).norm() <= tol for J in keys)


def jet_map(a: SuperJet, f: Callable[[GrassmannNumber], GrassmannNumber]) -> SuperJet:
    return SuperJet(a.spec, a.ngen, {J: f(v) for J, v in a.comp.items()})
