"""Exact arithmetic in F_{p^D}.

One ambient field per computation: every field k, K used by a construction
lives inside a single F_{p^D} and is recognised as the fixed set of a
Frobenius power. Elements are stored as the base-p integer encoding of their
coefficient vector (``sum c_i p^i``); multiplication goes through discrete
log tables built once per context.

The defining polynomial is the lexicographically smallest monic irreducible
of degree D, coefficients compared from the highest degree down (equivalently
the smallest integer encoding of the non-leading coefficients).
"""

from __future__ import annotations

import functools
import os
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .errors import (
    BadSubfieldDegree,
    ContextMismatch,
    DegreeTooLarge,
    DivisionByZero,
    FieldTooLarge,
    MalformedInput,
    NotPrime,
)

DEFAULT_MAX_DEGREE = 12
DEFAULT_MAX_FIELD = 1 << 16


def max_field_size() -> int:
    """Upper bound on p**D; the SB_MAX_FIELD environment variable overrides it."""
    raw = os.environ.get("SB_MAX_FIELD")
    if raw:
        return int(raw)
    return DEFAULT_MAX_FIELD


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_power(q: int) -> tuple[int, int]:
    """Split q = p**e; raises NotPrime if q is not a prime power."""
    if q < 2:
        raise NotPrime(f"{q} is not a prime power")
    p = next(f for f in range(2, q + 1) if q % f == 0)
    e, r = 0, q
    while r % p == 0:
        r //= p
        e += 1
    if r != 1:
        raise NotPrime(f"{q} is not a prime power")
    return p, e


# -- polynomials over F_p, coefficient lists lowest degree first ------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: list[int], m: Sequence[int], p: int) -> list[int]:
    a = _trim([x % p for x in a])
    dm = len(m) - 1
    inv_lead = pow(m[-1], -1, p)
    while len(a) - 1 >= dm:
        c = (a[-1] * inv_lead) % p
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
        _trim(a)
    return a


def _poly_mul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def _poly_sub(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    out = [((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)]
    return _trim(out)


def _poly_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _poly_mod(a, b, p)
    return a


def _poly_powmod(base: list[int], e: int, m: Sequence[int], p: int) -> list[int]:
    result = [1]
    base = _poly_mod(base, m, p)
    while e:
        if e & 1:
            result = _poly_mod(_poly_mul(result, base, p), m, p)
        base = _poly_mod(_poly_mul(base, base, p), m, p)
        e >>= 1
    return result


def _prime_factors(n: int) -> list[int]:
    out, f = [], 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Rabin's test for a monic polynomial (coefficients lowest first)."""
    f = _trim(list(poly))
    d = len(f) - 1
    if d < 1:
        return False
    if d == 1:
        return True
    x = [0, 1]
    if _poly_sub(_poly_powmod(x, p**d, f, p), x, p):
        return False
    for r in _prime_factors(d):
        h = _poly_sub(_poly_powmod(x, p ** (d // r), f, p), x, p)
        if len(_poly_gcd(f, h, p)) != 1:
            return False
    return True


def smallest_irreducible(p: int, D: int) -> tuple[int, ...]:
    for code in range(p**D):
        low = [(code // p**i) % p for i in range(D)]
        poly = low + [1]
        if is_irreducible(poly, p):
            return tuple(poly)
    raise AssertionError("an irreducible polynomial always exists")


# -- context -----------------------------------------------------------------

class _Tables:
    __slots__ = ("exp", "log", "digits", "weights")

    def __init__(self, p: int, D: int, modulus: Sequence[int]):
        q = p**D
        self.weights = [p**i for i in range(D)]
        self.digits = [tuple((v // w) % p for w in self.weights) for v in range(q)]

        def encode(cs: Sequence[int]) -> int:
            return sum(c * w for c, w in zip(cs, self.weights))

        def mul(a: int, b: int) -> int:
            prod = _poly_mod(_poly_mul(self.digits[a], self.digits[b], p), modulus, p)
            return encode(prod)

        order = q - 1
        factors = _prime_factors(order) if order > 1 else []
        gen = None
        for g in range(1, q):
            gpoly = list(self.digits[g])
            if all(
                _poly_powmod(gpoly, order // r, modulus, p) != [1] for r in factors
            ):
                gen = g
                break
        assert gen is not None
        self.exp = [1] * order
        self.log = [-1] * q
        acc = 1
        for k in range(order):
            self.exp[k] = acc
            self.log[acc] = k
            acc = mul(acc, gen)


@dataclass(frozen=True)
class FieldContext:
    """The field F_p[t]/(modulus) of order p**D."""

    p: int
    D: int
    modulus: tuple[int, ...]
    _tables: _Tables = field(compare=False, repr=False)

    @property
    def order(self) -> int:
        return self.p**self.D

    # construction of elements
    def from_int(self, value: int) -> "FieldElement":
        if not 0 <= value < self.order:
            raise MalformedInput(f"encoding {value} out of range for F_{self.order}")
        return FieldElement(self, value)

    def from_coeffs(self, coeffs: Sequence[int]) -> "FieldElement":
        cs = list(coeffs)
        if len(cs) > self.D:
            cs = _poly_mod(cs, self.modulus, self.p)
        value = sum((c % self.p) * w for c, w in zip(cs, self._tables.weights))
        return FieldElement(self, value)

    def __call__(self, x) -> "FieldElement":
        """Coerce an int (constant), coefficient list or element into the field."""
        if isinstance(x, FieldElement):
            _check_ctx(self, x.ctx)
            return x
        if isinstance(x, bool):
            raise MalformedInput("booleans are not field elements")
        if isinstance(x, int):
            return FieldElement(self, x % self.p)
        if isinstance(x, (list, tuple)) and all(isinstance(c, int) for c in x):
            return self.from_coeffs(x)
        raise MalformedInput(f"cannot interpret {x!r} as an element of F_{self.order}")

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(self, 0)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(self, 1)

    @property
    def gen(self) -> "FieldElement":
        """The class of t."""
        return self.from_coeffs([0, 1])

    def elements(self) -> Iterator["FieldElement"]:
        for v in range(self.order):
            yield FieldElement(self, v)

    def subfield(self, e: int) -> list["FieldElement"]:
        """Elements of F_{p^e}, ordered by encoding."""
        return [FieldElement(self, v) for v in _subfield_values(self, e)]

    def to_json(self) -> dict:
        return {"p": self.p, "D": self.D, "modulus": list(self.modulus)}

    @staticmethod
    def from_json(obj: dict) -> "FieldContext":
        try:
            ctx = make_context(int(obj["p"]), int(obj.get("D", 1)))
        except (KeyError, TypeError) as exc:
            raise MalformedInput(f"bad field description: {obj!r}") from exc
        if "modulus" in obj and tuple(obj["modulus"]) != ctx.modulus:
            raise MalformedInput("modulus does not match the canonical one for (p, D)")
        return ctx


@functools.lru_cache(maxsize=None)
def _make_context(p: int, D: int) -> FieldContext:
    modulus = smallest_irreducible(p, D)
    return FieldContext(p, D, modulus, _Tables(p, D, modulus))


def make_context(p: int, D: int = 1, max_degree: int = DEFAULT_MAX_DEGREE) -> FieldContext:
    """Deterministic context for F_{p^D}; repeated calls return the same object."""
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if D < 1 or D > max_degree:
        raise DegreeTooLarge(f"degree {D} outside [1, {max_degree}]")
    if p**D > max_field_size():
        raise FieldTooLarge(f"field of order {p}^{D} exceeds bound {max_field_size()}")
    return _make_context(p, D)


@functools.lru_cache(maxsize=None)
def _subfield_values(ctx: FieldContext, e: int) -> tuple[int, ...]:
    if e < 1 or ctx.D % e:
        raise BadSubfieldDegree(f"{e} does not divide {ctx.D}")
    k = ctx.p**e
    return tuple(v for v in range(ctx.order) if _pow_value(ctx, v, k) == v)


def _check_ctx(a: FieldContext, b: FieldContext) -> None:
    if a is not b and a != b:
        raise ContextMismatch(f"F_{a.p}^{a.D} vs F_{b.p}^{b.D}")


def _pow_value(ctx: FieldContext, v: int, k: int) -> int:
    if v == 0:
        if k == 0:
            return 1
        if k < 0:
            raise DivisionByZero("zero has no inverse")
        return 0
    t = ctx._tables
    return t.exp[(t.log[v] * k) % (ctx.order - 1)]


class FieldElement:
    """Immutable element of a FieldContext."""

    __slots__ = ("ctx", "value")

    def __init__(self, ctx: FieldContext, value: int):
        object.__setattr__(self, "ctx", ctx)
        object.__setattr__(self, "value", value)

    def __setattr__(self, name, value):
        raise AttributeError("FieldElement is immutable")

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.ctx._tables.digits[self.value]

    def _coerce(self, other) -> "FieldElement | None":
        if isinstance(other, FieldElement):
            _check_ctx(self.ctx, other.ctx)
            return other
        if isinstance(other, int) and not isinstance(other, bool):
            return FieldElement(self.ctx, other % self.ctx.p)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        ctx = self.ctx
        if ctx.p == 2:
            return FieldElement(ctx, self.value ^ o.value)
        if ctx.D == 1:
            return FieldElement(ctx, (self.value + o.value) % ctx.p)
        t = ctx._tables
        a, b = t.digits[self.value], t.digits[o.value]
        p = ctx.p
        return FieldElement(ctx, sum(((x + y) % p) * w for x, y, w in zip(a, b, t.weights)))

    __radd__ = __add__

    def __neg__(self):
        ctx = self.ctx
        if ctx.p == 2 or self.value == 0:
            return self
        if ctx.D == 1:
            return FieldElement(ctx, ctx.p - self.value)
        t = ctx._tables
        p = ctx.p
        return FieldElement(ctx, sum(((-x) % p) * w for x, w in zip(t.digits[self.value], t.weights)))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.value == 0 or o.value == 0:
            return FieldElement(self.ctx, 0)
        t = self.ctx._tables
        return FieldElement(self.ctx, t.exp[(t.log[self.value] + t.log[o.value]) % (self.ctx.order - 1)])

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if self.value == 0:
            raise DivisionByZero("zero has no inverse")
        t = self.ctx._tables
        return FieldElement(self.ctx, t.exp[(-t.log[self.value]) % (self.ctx.order - 1)])

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int):
        return FieldElement(self.ctx, _pow_value(self.ctx, self.value, k))

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.value == other.value and (self.ctx is other.ctx or self.ctx == other.ctx)
        if isinstance(other, int) and not isinstance(other, bool):
            return self.value == other % self.ctx.p
        return NotImplemented

    def __hash__(self):
        return hash((self.ctx.p, self.ctx.D, self.value))

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
                terms.append(f"{c}{mono}" if c != 1 or not mono else mono)
        return " + ".join(reversed(terms)) or "0"

    def to_json(self) -> list[int]:
        return list(self.coeffs)


def arithmetic(x: FieldElement, y: FieldElement | None, op: str, k: int | None = None) -> FieldElement:
    """Dispatch form of the field operations: add, sub, mul, inv, pow."""
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "inv":
        return x.inverse()
    if op == "pow":
        return x**k
    raise MalformedInput(f"unknown operation {op!r}")


def frobenius(x: FieldElement, e: int) -> FieldElement:
    """x -> x^(p^e)."""
    if e < 0:
        raise MalformedInput("Frobenius exponent must be non-negative")
    ctx = x.ctx
    return FieldElement(ctx, _pow_value(ctx, x.value, pow(ctx.p, e % ctx.D)))


def in_subfield(x: FieldElement, e: int) -> bool:
    if e < 1 or x.ctx.D % e:
        raise BadSubfieldDegree(f"{e} does not divide {x.ctx.D}")
    return frobenius(x, e) == x


def element_from_json(ctx: FieldContext, obj) -> FieldElement:
    return ctx(obj)


def elements_from_json(ctx: FieldContext, objs: Iterable) -> list[FieldElement]:
    return [ctx(o) for o in objs]
