"""Exact arithmetic in a real Grassmann algebra with finitely many generators.

A supernumber is stored sparsely as a map from a generator subset (encoded as
a bitmask, bit i for generator xi, canonically ordered by ascending index) to
a double-precision coefficient.  The empty subset is the body, everything
else is the nilpotent soul.  Products carry the transposition sign that
arises from merging the two ascending index lists.

Analytic functions of even arguments reduce to finite Taylor sums because the
soul is nilpotent; ``apply_analytic`` implements that, given an object that
can evaluate derivative lists of the scalar function (see ``analytic``).
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from enum import Enum
from types import MappingProxyType


class Parity(Enum):
    EVEN = 0
    ODD = 1
    MIXED = 2


class ContextMismatch(ValueError):
    """Operands built over algebras with different generator counts."""


class NonInvertible(ZeroDivisionError):
    """Inversion of a (numerically) bodiless supernumber."""


class ParityError(ValueError):
    """A parity-checked operation received the wrong homogeneity."""


class DomainError(ValueError):
    """Scalar-function domain violated by the body (e.g. log of body <= 0)."""


_BODY_EPS = 1e-300

_SIGN_CACHE: dict[int, float] = {}


def _merge_sign(a: int, b: int) -> float:
    # Parity of the transposition count for merging two ascending generator
    # words: each generator of b hops over every generator of a with a
    # strictly larger index.
    key = (a << 32) | b
    s = _SIGN_CACHE.get(key)
    if s is None:
        n = 0
        bb = b
        while bb:
            low = bb & -bb
            n ^= (a >> low.bit_length()).bit_count() & 1
            bb ^= low
        s = -1.0 if n else 1.0
        _SIGN_CACHE[key] = s
    return s


class GrassmannNumber:
    """Element of the real Grassmann algebra on ``ngen`` generators."""

    __slots__ = ("ngen", "terms")
    __hash__ = None

    def __init__(self, ngen: int, terms: dict[int, float] | None = None):
        if ngen < 1 or ngen > 32:
            raise ValueError(f"generator count must be in 1..32, got {ngen}")
        self.ngen = ngen
        limit = 1 << ngen
        clean: dict[int, float] = {}
        if terms:
            for mask, coeff in terms.items():
                if mask < 0 or mask >= limit:
                    raise ValueError(f"mask {mask:#x} out of range for {ngen} generators")
                c = float(coeff)
                if c != 0.0:
                    clean[mask] = c
        self.terms = clean

    @classmethod
    def _make(cls, ngen: int, terms: dict[int, float]) -> "GrassmannNumber":
        # internal fast path: terms already validated and zero-free
        obj = object.__new__(cls)
        obj.ngen = ngen
        obj.terms = terms
        return obj

    # ------------------------------------------------------------------ body/soul

    @property
    def body(self) -> float:
        return self.terms.get(0, 0.0)

    def soul(self) -> "GrassmannNumber":
        return GrassmannNumber._make(
            self.ngen, {m: c for m, c in self.terms.items() if m != 0}
        )

    @property
    def parity(self) -> Parity:
        has_even = has_odd = False
        for m in self.terms:
            if m.bit_count() & 1:
                has_odd = True
            else:
                has_even = True
        if has_odd and has_even:
            return Parity.MIXED
        if has_odd:
            return Parity.ODD
        return Parity.EVEN

    def is_even(self) -> bool:
        return all((m.bit_count() & 1) == 0 for m in self.terms)

    def is_odd(self) -> bool:
        return all(m.bit_count() & 1 for m in self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def max_degree(self) -> int:
        return max((m.bit_count() for m in self.terms), default=0)

    def norm(self) -> float:
        """Max-abs coefficient; the norm used by every tolerance check."""
        return max((abs(c) for c in self.terms.values()), default=0.0)

    # ------------------------------------------------------------------ arithmetic

    def _coerce(self, other):
        if isinstance(other, GrassmannNumber):
            if other.ngen != self.ngen:
                raise ContextMismatch(
                    f"mixing algebras with {self.ngen} and {other.ngen} generators"
                )
            return other
        if isinstance(other, (int, float)):
            c = float(other)
            return GrassmannNumber._make(self.ngen, {0: c} if c != 0.0 else {})
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out = dict(self.terms)
        for m, c in o.terms.items():
            v = out.get(m, 0.0) + c
            if v == 0.0:
                out.pop(m, None)
            else:
                out[m] = v
        return GrassmannNumber._make(self.ngen, out)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out = dict(self.terms)
        for m, c in o.terms.items():
            v = out.get(m, 0.0) - c
            if v == 0.0:
                out.pop(m, None)
            else:
                out[m] = v
        return GrassmannNumber._make(self.ngen, out)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __neg__(self):
        return GrassmannNumber._make(self.ngen, {m: -c for m, c in self.terms.items()})

    def __pos__(self):
        return self

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            c = float(other)
            if c == 0.0:
                return GrassmannNumber._make(self.ngen, {})
            return GrassmannNumber._make(
                self.ngen, {m: v * c for m, v in self.terms.items()}
            )
        if not isinstance(other, GrassmannNumber):
            return NotImplemented
        if other.ngen != self.ngen:
            raise ContextMismatch(
                f"mixing algebras with {self.ngen} and {other.ngen} generators"
            )
        out: dict[int, float] = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                if ma & mb:
                    continue
                m = ma | mb
                v = ca * cb * _merge_sign(ma, mb)
                prev = out.get(m)
                out[m] = v if prev is None else prev + v
        return GrassmannNumber._make(
            self.ngen, {m: v for m, v in out.items() if v != 0.0}
        )

    def __rmul__(self, other):
        # reals are central, so scalar*G == G*scalar
        if isinstance(other, (int, float)):
            return self.__mul__(other)
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, float)):
            return self.__mul__(1.0 / float(other))
        if isinstance(other, GrassmannNumber):
            return self.__mul__(invert(other))
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, float)):
            return invert(self).__mul__(float(other))
        return NotImplemented

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers are defined")
        acc = GrassmannNumber._make(self.ngen, {0: 1.0})
        for _ in range(n):
            acc = acc * self
        return acc

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.terms == o.terms

    def __repr__(self):
        return to_text(self)

    __str__ = __repr__


# ---------------------------------------------------------------------- [OP]s


def multiply(a: GrassmannNumber, b: GrassmannNumber) -> GrassmannNumber:
    return a * b


def body_soul(a: GrassmannNumber) -> tuple[float, GrassmannNumber]:
    """Split off the real scalar part; body + soul reconstructs ``a``."""
    return a.body, a.soul()


def invert(a: GrassmannNumber) -> GrassmannNumber:
    """Two-sided inverse via the terminating geometric series.

    a = b(1 + n) with nilpotent n = soul/b, so 1/a = (1/b) sum_j (-n)^j and
    the sum stops as soon as a power of n vanishes.
    """
    b = a.body
    if abs(b) <= _BODY_EPS:
        raise NonInvertible("bodiless (or numerically bodiless) supernumber")
    n = a.soul() * (1.0 / b)
    acc = GrassmannNumber._make(a.ngen, {0: 1.0})
    p = GrassmannNumber._make(a.ngen, {0: 1.0})
    for j in range(1, a.ngen + 1):
        p = p * n
        if p.is_zero():
            break
        acc = acc + p if j % 2 == 0 else acc - p
    return acc * (1.0 / b)


def apply_analytic(f, a: GrassmannNumber) -> GrassmannNumber:
    """f(a) for even a: Taylor expansion around the body, cut off by nilpotency.

    ``f`` must expose ``derivs(x, n) -> [f(x), f'(x), ..., f^(n)(x)]``.
    """
    if not a.is_even():
        raise ParityError("apply_analytic needs an even argument")
    return soul_taylor(f, a)


def soul_taylor(f, a: GrassmannNumber) -> GrassmannNumber:
    """Taylor of f around the body with no parity demanded of the argument.

    Any supernumber commutes with its own powers, so the expansion is
    well-defined even for mixed arguments; ``apply_analytic`` is the
    parity-checked front door, this is the bare core.  Needed for residuals
    of fields whose odd components carry even supernumber coefficients.
    """
    b = a.body
    s = a.soul()
    powers = [GrassmannNumber._make(a.ngen, {0: 1.0})]
    p = powers[0]
    while True:
        p = p * s
        if p.is_zero():
            break
        powers.append(p)
    ds = f.derivs(b, len(powers) - 1)
    out = GrassmannNumber._make(a.ngen, {0: ds[0]} if ds[0] != 0.0 else {})
    fact = 1.0
    for j in range(1, len(powers)):
        fact *= j
        out = out + powers[j] * (ds[j] / fact)
    return out


class _Exp:
    def derivs(self, x, n):
        e = math.exp(x)
        return [e] * (n + 1)


class _Log:
    def derivs(self, x, n):
        if x <= 0.0:
            raise DomainError(f"log needs positive body, got {x}")
        out = [math.log(x)]
        for j in range(1, n + 1):
            out.append((-1.0) ** (j - 1) * math.factorial(j - 1) / x**j)
        return out


_EXP = _Exp()
_LOG = _Log()


def exp_even(a: GrassmannNumber) -> GrassmannNumber:
    return apply_analytic(_EXP, a)


def log_even(a: GrassmannNumber) -> GrassmannNumber:
    return apply_analytic(_LOG, a)


def sample_random(parity: Parity, max_degree: int, rng_seed, ngen: int = 8) -> GrassmannNumber:
    """Dense random supernumber of the requested parity.

    Coefficients are drawn uniformly from [-1, 1] for every generator subset
    of the requested parity with cardinality <= max_degree, in ascending
    combination order, so a fixed seed reproduces the value exactly.
    """
    if isinstance(parity, str):
        parity = Parity[parity.upper()]
    if parity is Parity.MIXED:
        raise ParityError("sample_random draws homogeneous values only")
    if max_degree > ngen:
        raise ValueError("max_degree exceeds the generator count")
    rng = random.Random(rng_seed)
    start = 0 if parity is Parity.EVEN else 1
    terms: dict[int, float] = {}
    for deg in range(start, max_degree + 1, 2):
        for combo in itertools.combinations(range(ngen), deg):
            mask = 0
            for i in combo:
                mask |= 1 << i
            c = rng.uniform(-1.0, 1.0)
            if c != 0.0:
                terms[mask] = c
    return GrassmannNumber._make(ngen, terms)


# ------------------------------------------------------------- odd derivatives


def gen_derivative(a: GrassmannNumber, i: int) -> GrassmannNumber:
    """Left derivative with respect to generator xi.

    Terms not containing the generator die; in the others the generator is
    moved to the front (sign = parity of the number of lower-index
    generators present) and stripped.
    """
    bit = 1 << i
    below = bit - 1
    out: dict[int, float] = {}
    for m, c in a.terms.items():
        if m & bit:
            sign = -1.0 if ((m & below).bit_count() & 1) else 1.0
            out[m ^ bit] = c * sign
    return GrassmannNumber._make(a.ngen, out)


def drop_gens(a: GrassmannNumber, gens_mask: int) -> GrassmannNumber:
    """Keep only the terms that involve none of the masked generators."""
    return GrassmannNumber._make(
        a.ngen, {m: c for m, c in a.terms.items() if not (m & gens_mask)}
    )


def involves_gens(a: GrassmannNumber, gens_mask: int) -> bool:
    return any(m & gens_mask for m in a.terms)


# ------------------------------------------------------------------ text form


def _fmt_coeff(c: float) -> str:
    if c == int(c) and abs(c) < 1e15:
        return str(int(c))
    return repr(c)


def to_text(a: GrassmannNumber) -> str:
    """Canonical rendering, e.g. ``3 + 7*x1^x2``; inverse of ``parse``."""
    if not a.terms:
        return "0"
    parts = []
    for mask in sorted(a.terms):
        c = a.terms[mask]
        if mask == 0:
            mono = None
        else:
            gens = []
            m = mask
            while m:
                low = m & -m
                gens.append(f"x{low.bit_length()}")
                m ^= low
            mono = "^".join(gens)
        if not parts:
            lead = _fmt_coeff(c)
            parts.append(lead if mono is None else f"{lead}*{mono}")
        else:
            op = " + " if c > 0 else " - "
            lead = _fmt_coeff(abs(c))
            parts.append(op + (lead if mono is None else f"{lead}*{mono}"))
    return "".join(parts)


def parse(text: str, ngen: int = 8) -> GrassmannNumber:
    """Parse the ``to_text`` grammar (signs, ``coef*xi^xj`` terms)."""
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty supernumber text")
    # split into signed terms
    out = GrassmannNumber._make(ngen, {})
    i = 0
    sign = 1.0
    if s[0] in "+-":
        sign = -1.0 if s[0] == "-" else 1.0
        i = 1
    term = ""
    pieces: list[tuple[float, str]] = []
    while i <= len(s):
        ch = s[i] if i < len(s) else None
        if ch in ("+", "-") or ch is None:
            if not term:
                raise ValueError(f"dangling sign in {text!r}")
            pieces.append((sign, term))
            if ch is not None:
                sign = -1.0 if ch == "-" else 1.0
            term = ""
        else:
            term += ch
        i += 1
    for sgn, t in pieces:
        if "*" in t:
            coef_s, _, mono = t.partition("*")
            coef = float(coef_s)
        elif t.startswith("x"):
            coef, mono = 1.0, t
        else:
            coef, mono = float(t), ""
        val = GrassmannNumber._make(ngen, {0: sgn * coef})
        if mono:
            for g in mono.split("^"):
                if not g.startswith("x"):
                    raise ValueError(f"bad generator {g!r} in {text!r}")
                idx = int(g[1:]) - 1
                if idx < 0 or idx >= ngen:
                    raise ValueError(f"generator {g} out of range for {ngen} generators")
                val = val * GrassmannNumber._make(ngen, {1 << idx: 1.0})
        out = out + val
    return out


# ------------------------------------------------------------------- context

DEFAULT_ROLES = MappingProxyType(
    {
        "theta1": 0,
        "theta2": 1,
        "mu": 2,
        "nu": 3,
        "D1": 4,
        "D2": 5,
        "mu0": 6,
        "lambda0": 7,
    }
)


@dataclass(frozen=True)
class AlgebraContext:
    """Generator count plus the naming convention for reserved indices.

    theta1/theta2 are the superspace coordinates; the rest are the free odd
    parameters a computation may use.  Arithmetic itself only cares about
    the generator count; the roles exist so call sites never hard-code
    indices.
    """

    generator_count: int = 8
    roles: MappingProxyType = field(default_factory=lambda: DEFAULT_ROLES)

    def __post_init__(self):
        idx = list(self.roles.values())
        if len(set(idx)) != len(idx):
            raise ValueError("reserved role indices must be pairwise distinct")
        if any(i < 0 or i >= self.generator_count for i in idx):
            raise ValueError("reserved role index out of range")
        if self.generator_count < 2 + sum(
            1 for name in self.roles if name not in ("theta1", "theta2")
        ) and ("theta1" in self.roles):
            # two theta slots plus one generator per free odd parameter
            raise ValueError("generator count too small for the reserved roles")

    def with_roles(self, **renames: int) -> "AlgebraContext":
        new = dict(self.roles)
        for name, idx in renames.items():
            for old, i in list(new.items()):
                if i == idx and old != name:
                    del new[old]
            new[name] = idx
        return AlgebraContext(self.generator_count, MappingProxyType(new))

    def gen(self, which) -> GrassmannNumber:
        """Generator by role name or raw index."""
        idx = self.roles[which] if isinstance(which, str) else which
        if idx < 0 or idx >= self.generator_count:
            raise ValueError(f"generator index {idx} out of range")
        return GrassmannNumber._make(self.generator_count, {1 << idx: 1.0})

    def scalar(self, x: float) -> GrassmannNumber:
        c = float(x)
        return GrassmannNumber._make(
            self.generator_count, {0: c} if c != 0.0 else {}
        )

    def zero(self) -> GrassmannNumber:
        return GrassmannNumber._make(self.generator_count, {})

    def one(self) -> GrassmannNumber:
        return GrassmannNumber._make(self.generator_count, {0: 1.0})

    def parse(self, text: str) -> GrassmannNumber:
        return parse(text, self.generator_count)

    def sample(self, parity: Parity, max_degree: int, rng_seed) -> GrassmannNumber:
        return sample_random(parity, max_degree, rng_seed, self.generator_count)

    def theta_mask(self) -> int:
        return (1 << self.roles["theta1"]) | (1 << self.roles["theta2"])


DEFAULT_CONTEXT = AlgebraContext()


def scalar(x: float, ngen: int = 8) -> GrassmannNumber:
    c = float(x)
    return GrassmannNumber._make(ngen, {0: c} if c != 0.0 else {})


def gen(i: int, ngen: int = 8) -> GrassmannNumber:
    if i < 0 or i >= ngen:
        raise ValueError(f"generator index {i} out of range")
    return GrassmannNumber._make(ngen, {1 << i: 1.0})


def isclose(a: GrassmannNumber, b, tol: float = 1e-12) -> bool:
    diff = a - b
    return diff.norm() <= tol
