"""Brauer classes over Q as lists of local invariants.

Model assumption: the base field is Q. A class is a finite map
place -> invariant in Q/Z with at most one real place (invariant 0 or 1/2)
and invariants summing to 0 mod 1. Over a global field the index equals the
period, so ``index`` returns the period and a Severi-Brauer variety of
dimension d is minimal exactly when its period is d + 1.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Mapping, Sequence

from .errors import (
    BadFactorization,
    DimensionMismatch,
    DuplicatePlace,
    InvalidVariety,
    MalformedInput,
    NotCoprime,
    NotPrime,
    RealInvariantInvalid,
    ReciprocityViolated,
    SubgroupTooLarge,
)
from .fields import is_prime

REAL = "real"
DEFAULT_SUBGROUP_BOUND = 10**6


def _place_key(place) -> tuple[int, int]:
    return (1, 0) if place == REAL else (0, place)


def _normalize_place(place):
    if place == REAL:
        return REAL
    if isinstance(place, str):
        if not place.isdigit():
            raise MalformedInput(f"unknown place {place!r}")
        place = int(place)
    if isinstance(place, bool) or not isinstance(place, int):
        raise MalformedInput(f"unknown place {place!r}")
    if not is_prime(place):
        raise NotPrime(f"place {place} is not a prime")
    return place


@dataclass(frozen=True)
class BrauerClass:
    """Canonical local-invariant list: nonzero entries only, primes ascending, real last."""

    invariants: tuple[tuple[object, Fraction], ...] = ()

    def __iter__(self):
        return iter(self.invariants)

    def get(self, place) -> Fraction:
        return dict(self.invariants).get(place, Fraction(0))

    @property
    def is_trivial(self) -> bool:
        return not self.invariants

    def __repr__(self):
        body = ", ".join(f"{pl}: {inv}" for pl, inv in self.invariants)
        return f"BrauerClass({{{body}}})"

    def to_json(self) -> dict:
        return {
            "invariants": [
                {"place": str(pl), "num": inv.numerator, "den": inv.denominator}
                for pl, inv in self.invariants
            ]
        }

    @staticmethod
    def from_json(obj) -> "BrauerClass":
        if not isinstance(obj, dict) or not isinstance(obj.get("invariants"), list):
            raise MalformedInput("class JSON needs an 'invariants' list")
        entries = []
        for item in obj["invariants"]:
            try:
                num, den, place = item["num"], item["den"], item["place"]
            except (KeyError, TypeError) as exc:
                raise MalformedInput(f"bad invariant entry {item!r}") from exc
            if not all(isinstance(v, int) and not isinstance(v, bool) for v in (num, den)):
                raise MalformedInput(f"bad invariant entry {item!r}")
            if den < 1 or not 0 <= num < den or gcd(num, den) != 1:
                raise MalformedInput(f"invariant {num}/{den} is not a reduced fraction in [0, 1)")
            entries.append((place, Fraction(num, den)))
        return make_class(entries)


def make_class(entries: "Iterable[tuple[object, object]] | Mapping") -> BrauerClass:
    """Validate and canonicalise (place, invariant) pairs."""
    if isinstance(entries, Mapping):
        entries = entries.items()
    seen: dict = {}
    for place, inv in entries:
        place = _normalize_place(place)
        if place in seen:
            raise DuplicatePlace(f"place {place} given twice")
        seen[place] = Fraction(inv) % 1
    if seen.get(REAL, Fraction(0)) not in (Fraction(0), Fraction(1, 2)):
        raise RealInvariantInvalid(f"real invariant {seen[REAL]} is not 0 or 1/2")
    if sum(seen.values(), Fraction(0)) % 1 != 0:
        raise ReciprocityViolated("invariants do not sum to 0 mod 1")
    return _canonical(seen)


def _canonical(inv: Mapping) -> BrauerClass:
    items = sorted(((pl, v % 1) for pl, v in inv.items() if v % 1), key=lambda kv: _place_key(kv[0]))
    return BrauerClass(tuple(items))


def tensor(a: BrauerClass, b: BrauerClass) -> BrauerClass:
    out = dict(a.invariants)
    for pl, v in b.invariants:
        out[pl] = out.get(pl, Fraction(0)) + v
    return _canonical(out)


def inverse(a: BrauerClass) -> BrauerClass:
    return _canonical({pl: -v for pl, v in a.invariants})


def power(a: BrauerClass, k: int) -> BrauerClass:
    return _canonical({pl: k * v for pl, v in a.invariants})


def trivial() -> BrauerClass:
    return BrauerClass()


def period(a: BrauerClass) -> int:
    return lcm(1, *(v.denominator for _, v in a.invariants))


def index(a: BrauerClass) -> int:
    # index = period over a global field
    return period(a)


def min_dimension(a: BrauerClass) -> int:
    return index(a) - 1


def prime_factors(n: int) -> list[int]:
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


def in_subgroup(b: BrauerClass, a: BrauerClass) -> bool:
    """Is b a multiple of a?"""
    return any(power(a, k) == b for k in range(period(a)))


def same_subgroup(a: BrauerClass, b: BrauerClass) -> bool:
    return in_subgroup(b, a) and in_subgroup(a, b)


def subgroup_generated(classes: Sequence[BrauerClass], bound: int = DEFAULT_SUBGROUP_BOUND) -> frozenset[BrauerClass]:
    """All integer combinations, by breadth-first closure under tensor."""
    gens = [g for g in classes if not g.is_trivial]
    seen = {trivial()}
    queue = deque(seen)
    while queue:
        cur = queue.popleft()
        for g in gens:
            nxt = tensor(cur, g)
            if nxt not in seen:
                seen.add(nxt)
                if len(seen) > bound:
                    raise SubgroupTooLarge(f"subgroup has more than {bound} elements")
                queue.append(nxt)
    return frozenset(seen)


def primary_decompose(a: BrauerClass) -> list[BrauerClass]:
    """p-primary parts of a, one per prime dividing its period, each a multiple of a."""
    N = period(a)
    parts = []
    for p in prime_factors(N):
        pk = 1
        while N % (pk * p) == 0:
            pk *= p
        rest = N // pk
        parts.append(power(a, rest * pow(rest, -1, pk)))
    return parts


def crt_coefficients(u: int, v: int, N: int) -> tuple[int, int]:
    """Smallest positive (a, c), lexicographically, with a*u + c*v = 1 mod N."""
    if u < 2 or v < 2 or u * v != N:
        raise BadFactorization(f"{u} * {v} is not a factorisation of {N} with both factors >= 2")
    if gcd(u, v) != 1:
        raise NotCoprime(f"gcd({u}, {v}) = {gcd(u, v)}")
    # mod v the congruence reads a*u = 1, mod u it reads c*v = 1
    a = pow(u, -1, v)
    c = pow(v, -1, u)
    assert (a * u + c * v) % N == 1 % N
    assert gcd(a, v) == 1 and gcd(c, u) == 1
    return a, c


def coprime_split(N: int) -> tuple[int, int]:
    """u = full power of the smallest prime dividing N, v = N / u."""
    p = prime_factors(N)[0]
    u = 1
    while N % (u * p) == 0:
        u *= p
    return u, N // u


# -- Severi-Brauer varieties ---------------------------------------------------

@dataclass(frozen=True)
class SBVariety:
    cls: BrauerClass
    dim: int

    def __post_init__(self):
        if self.dim < 0:
            raise InvalidVariety("dimension must be non-negative")
        if (self.dim + 1) % index(self.cls):
            raise InvalidVariety(f"index {index(self.cls)} does not divide dim + 1 = {self.dim + 1}")

    @property
    def index(self) -> int:
        return index(self.cls)

    @property
    def is_minimal(self) -> bool:
        return self.index == self.dim + 1

    def to_json(self) -> dict:
        return {"class": self.cls.to_json(), "dim": self.dim}

    @staticmethod
    def from_json(obj) -> "SBVariety":
        if not isinstance(obj, dict) or "class" not in obj or "dim" not in obj:
            raise MalformedInput("variety JSON needs 'class' and 'dim'")
        if not isinstance(obj["dim"], int) or isinstance(obj["dim"], bool):
            raise MalformedInput("dim must be an integer")
        return SBVariety(BrauerClass.from_json(obj["class"]), obj["dim"])


def projective_space(dim: int) -> SBVariety:
    return SBVariety(trivial(), dim)


@dataclass(frozen=True)
class Birational:
    certificate: object


@dataclass(frozen=True)
class NotBirational:
    reason: str


@dataclass(frozen=True)
class Unknown:
    reason: str


def decide_birational(P: SBVariety, Q: SBVariety):
    """Birational(certificate) | NotBirational(reason) | Unknown(reason)."""
    from .certificates import build_certificate

    if P.dim != Q.dim:
        raise DimensionMismatch(f"dim {P.dim} vs dim {Q.dim}")
    if not same_subgroup(P.cls, Q.cls):
        return NotBirational("classes generate different subgroups of Br(k)")
    if P.index < P.dim + 1:
        return Birational(build_certificate(P, Q))
    if len(prime_factors(P.index)) != 1:
        # two or more primes; or index 1, where P = Q = P^0
        return Birational(build_certificate(P, Q))
    return Unknown("minimal with prime-power index: open case of Amitsur's conjecture")


@dataclass(frozen=True)
class StablyBirational:
    pass


@dataclass(frozen=True)
class NotStablyBirational:
    reason: str


def decide_stably_birational_products(Ps: Sequence[SBVariety], Qs: Sequence[SBVariety], bound: int = DEFAULT_SUBGROUP_BOUND):
    left = subgroup_generated([P.cls for P in Ps], bound)
    right = subgroup_generated([Q.cls for Q in Qs], bound)
    if left == right:
        return StablyBirational()
    return NotStablyBirational(f"subgroups of order {len(left)} and {len(right)} differ")
