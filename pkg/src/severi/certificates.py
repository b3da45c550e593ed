"""Birational-equivalence certificates between formal products of SB varieties.

A certificate is a start product, an end product and a list of moves. Each
move consumes some factors and produces others; the checker replays the moves
on a multiset and verifies every move's arithmetic side condition. The
geometry behind each move is the lemma named in its ``cites`` tag; the checker
verifies only that the lemma's hypotheses hold.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from math import gcd
from typing import Sequence, Union

from .brauer import (
    BrauerClass,
    SBVariety,
    coprime_split,
    crt_coefficients,
    index,
    period,
    power,
    prime_factors,
    projective_space,
    same_subgroup,
    tensor,
)
from .errors import InvalidVariety, MalformedInput, NotApplicable, PreconditionFailed, SeveriError


@dataclass(frozen=True)
class TensorFactor:
    """A factor presented as the Brauer product of two SB varieties."""

    left: SBVariety
    right: SBVariety

    @property
    def cls(self) -> BrauerClass:
        return tensor(self.left.cls, self.right.cls)

    @property
    def dim(self) -> int:
        return (self.left.dim + 1) * (self.right.dim + 1) - 1

    def to_json(self) -> dict:
        return {"tensor": [self.left.to_json(), self.right.to_json()]}


Factor = Union[SBVariety, TensorFactor]


def factor_from_json(obj) -> Factor:
    if isinstance(obj, dict) and "tensor" in obj:
        parts = obj["tensor"]
        if not isinstance(parts, list) or len(parts) != 2:
            raise MalformedInput("tensor factor needs exactly two parts")
        return TensorFactor(SBVariety.from_json(parts[0]), SBVariety.from_json(parts[1]))
    return SBVariety.from_json(obj)


KINDS = (
    "MinReduce", "MinExpand", "MergeProj", "SplitProj", "StableSwap",
    "PrimarySplit", "PrimaryMerge", "TensorExpand", "TensorContract", "IsoReplace",
)

CITES = {
    "MinReduce": "minimal subvariety lemma: P ~ P^min x P^r, r = dim P - dim P^min",
    "MinExpand": "minimal subvariety lemma: P^min x P^r ~ P, r = dim P - dim P^min",
    "MergeProj": "rationality: P^a x P^b ~ P^(a+b)",
    "SplitProj": "rationality: P^(a+b) ~ P^a x P^b",
    "StableSwap": "Amitsur: <P> = <Q> iff P x P^dim Q ~ Q x P^dim P",
    "PrimarySplit": "primary decomposition: minimal P ~= P1 (x) P2 for a coprime split of the index",
    "PrimaryMerge": "primary decomposition: P1 (x) P2 is the minimal variety in [P1][P2]",
    "TensorExpand": "product formula: P1 (x) P2 ~ P1 x P2 x P^(dim P1 * dim P2), coprime indices",
    "TensorContract": "product formula: P1 x P2 x P^(dim P1 * dim P2) ~ P1 (x) P2, coprime indices",
    "IsoReplace": "Brauer equivalence: minimal varieties in one class are isomorphic",
}


@dataclass(frozen=True)
class CertStep:
    kind: str
    consumed: tuple[Factor, ...]
    produced: tuple[Factor, ...]
    params: tuple[tuple[str, int], ...] = ()
    cites: str = ""

    def param(self, name: str):
        return dict(self.params).get(name)

    def to_json(self) -> dict:
        payload = {
            "consumed": [f.to_json() for f in self.consumed],
            "produced": [f.to_json() for f in self.produced],
        }
        payload.update(dict(self.params))
        return {"kind": self.kind, "payload": payload, "cites": self.cites}

    @staticmethod
    def from_json(obj) -> "CertStep":
        try:
            kind, payload = obj["kind"], obj["payload"]
            consumed = tuple(factor_from_json(f) for f in payload["consumed"])
            produced = tuple(factor_from_json(f) for f in payload["produced"])
        except (KeyError, TypeError) as exc:
            raise MalformedInput(f"bad certificate step: {exc}") from exc
        params = []
        for k, v in payload.items():
            if k in ("consumed", "produced"):
                continue
            if not isinstance(v, int) or isinstance(v, bool):
                raise MalformedInput(f"parameter {k} must be an integer")
            params.append((k, v))
        return CertStep(kind, consumed, produced, tuple(params), obj.get("cites", ""))


def step(kind: str, consumed: Sequence[Factor], produced: Sequence[Factor], **params) -> CertStep:
    return CertStep(kind, tuple(consumed), tuple(produced), tuple(sorted(params.items())), CITES[kind])


@dataclass(frozen=True)
class Certificate:
    start: tuple[Factor, ...]
    end: tuple[Factor, ...]
    steps: tuple[CertStep, ...] = field(default=())

    def to_json(self) -> dict:
        return {
            "start": [f.to_json() for f in self.start],
            "end": [f.to_json() for f in self.end],
            "steps": [s.to_json() for s in self.steps],
        }

    @staticmethod
    def from_json(obj) -> "Certificate":
        try:
            start = tuple(factor_from_json(f) for f in obj["start"])
            end = tuple(factor_from_json(f) for f in obj["end"])
            steps = tuple(CertStep.from_json(s) for s in obj["steps"])
        except (KeyError, TypeError) as exc:
            raise MalformedInput(f"bad certificate: {exc}") from exc
        return Certificate(start, end, steps)


# -- building --------------------------------------------------------------------

def nonminimal_route(P: SBVariety, Q: SBVariety) -> Certificate:
    """Reduce to the minimal cores, swap them against the leftover P^r, expand."""
    N = P.index
    d0 = N - 1
    r = P.dim - N + 1
    core_p, core_q = SBVariety(P.cls, d0), SBVariety(Q.cls, d0)
    big, small, rest = projective_space(r), projective_space(d0), projective_space(r - d0)
    steps = (
        step("MinReduce", [P], [core_p, big], r=r),
        step("SplitProj", [big], [small, rest]),
        step("StableSwap", [core_p, small], [core_q, small]),
        step("MergeProj", [small, rest], [big]),
        step("MinExpand", [core_q, big], [Q], r=r),
    )
    return Certificate((P,), (Q,), steps)


def minimal_route(P: SBVariety, Q: SBVariety) -> Certificate:
    """Split into coprime primary parts, expand the tensor product, swap both parts, contract."""
    N = P.index
    u, v = coprime_split(N)
    a, c = crt_coefficients(u, v, N)
    P1, P2 = SBVariety(power(P.cls, a * u), v - 1), SBVariety(power(P.cls, c * v), u - 1)
    Q1, Q2 = SBVariety(power(Q.cls, a * u), v - 1), SBVariety(power(Q.cls, c * v), u - 1)
    extra = projective_space((v - 1) * (u - 1))
    merged = SBVariety(tensor(Q1.cls, Q2.cls), Q.dim)
    coeffs = dict(u=u, v=v, a=a, c=c)
    steps = (
        step("PrimarySplit", [P], [TensorFactor(P1, P2)], **coeffs),
        step("TensorExpand", [TensorFactor(P1, P2)], [P1, P2, extra]),
        step("StableSwap", [P1, extra], [Q1, extra]),
        step("StableSwap", [P2, extra], [Q2, extra]),
        step("TensorContract", [Q1, Q2, extra], [TensorFactor(Q1, Q2)]),
        step("PrimaryMerge", [TensorFactor(Q1, Q2)], [merged], **coeffs),
        step("IsoReplace", [merged], [Q]),
    )
    return Certificate((P,), (Q,), steps)


def build_certificate(P: SBVariety, Q: SBVariety) -> Certificate:
    if P.dim != Q.dim:
        raise PreconditionFailed(f"dim {P.dim} vs dim {Q.dim}")
    if not same_subgroup(P.cls, Q.cls):
        raise PreconditionFailed("classes generate different subgroups")
    if P == Q:
        return Certificate((P,), (Q,), ())
    if P.index < P.dim + 1:
        return nonminimal_route(P, Q)
    if len(prime_factors(P.index)) >= 2:
        return minimal_route(P, Q)
    raise NotApplicable("minimal with prime-power index")


# -- checking --------------------------------------------------------------------

@dataclass(frozen=True)
class Valid:
    def __bool__(self):
        return True


@dataclass(frozen=True)
class Invalid:
    step: int
    reason: str

    def __bool__(self):
        return False


_ARITY = {
    "MinReduce": (1, 2), "MinExpand": (2, 1), "MergeProj": (2, 1), "SplitProj": (1, 2),
    "StableSwap": (2, 2), "PrimarySplit": (1, 1), "PrimaryMerge": (1, 1),
    "TensorExpand": (1, 3), "TensorContract": (3, 1), "IsoReplace": (1, 1),
}


def _plain(*fs) -> bool:
    return all(isinstance(f, SBVariety) for f in fs)


def _is_proj(f) -> bool:
    return isinstance(f, SBVariety) and f.cls.is_trivial


def _minimal(f: SBVariety) -> bool:
    return f.is_minimal


def _check_min(big: SBVariety, core: SBVariety, proj: SBVariety, r) -> str | None:
    if not _plain(big, core) or not _is_proj(proj):
        return "factor types"
    if core.cls != big.cls:
        return "class mismatch"
    if not _minimal(core):
        return "core not minimal"
    expected = big.dim - index(big.cls) + 1
    if r != expected or proj.dim != expected or expected < 0:
        return "dimension bookkeeping"
    return None


def _check_proj_sum(total: Factor, parts: Sequence[Factor]) -> str | None:
    if not all(_is_proj(f) for f in (total, *parts)):
        return "factor types"
    return None


def _check_swap(consumed, produced) -> str | None:
    x, y = consumed
    x2, y2 = produced
    if not _plain(x, x2) or not _is_proj(y) or not _is_proj(y2):
        return "factor types"
    if y != y2:
        return "projective factor not restored"
    if x.dim != x2.dim:
        return "dimension bookkeeping"
    if not same_subgroup(x.cls, x2.cls):
        return "subgroup mismatch"
    if y.dim < x.dim:
        return "projective factor too small"
    return None


def _check_primary(plain: Factor, tens: Factor, s: CertStep) -> str | None:
    if not isinstance(plain, SBVariety) or not isinstance(tens, TensorFactor):
        return "factor types"
    u, v, a, c = (s.param(k) for k in "uvac")
    if None in (u, v, a, c):
        return "missing coefficients"
    N = index(plain.cls)
    if not _minimal(plain):
        return "not minimal"
    if u < 2 or v < 2 or u * v != N:
        return "bad factorization"
    if gcd(u, v) != 1:
        return "not coprime"
    if (a * u + c * v) % N != 1 % N:
        return "coefficient congruence"
    P1, P2 = tens.left, tens.right
    if P1.cls != power(plain.cls, a * u) or P2.cls != power(plain.cls, c * v):
        return "class mismatch"
    if period(P1.cls) != v or period(P2.cls) != u:
        return "period mismatch"
    if P1.dim != v - 1 or P2.dim != u - 1:
        return "dimension bookkeeping"
    return None


def _check_tensor(tens: Factor, parts: Sequence[Factor]) -> str | None:
    p1, p2, proj = parts
    if not isinstance(tens, TensorFactor) or not _plain(p1, p2) or not _is_proj(proj):
        return "factor types"
    if (p1, p2) != (tens.left, tens.right):
        return "factor mismatch"
    if not (_minimal(p1) and _minimal(p2)):
        return "not minimal"
    if gcd(p1.dim + 1, p2.dim + 1) != 1:
        return "not coprime"
    if proj.dim != p1.dim * p2.dim:
        return "dimension bookkeeping"
    return None


def _check_step(s: CertStep) -> str | None:
    if s.kind not in _ARITY:
        return f"unknown step kind {s.kind!r}"
    if (len(s.consumed), len(s.produced)) != _ARITY[s.kind]:
        return "arity"
    if sum(f.dim for f in s.consumed) != sum(f.dim for f in s.produced):
        return "dimension bookkeeping"
    k, cons, prod = s.kind, s.consumed, s.produced
    if k == "MinReduce":
        return _check_min(cons[0], prod[0], prod[1], s.param("r"))
    if k == "MinExpand":
        return _check_min(prod[0], cons[0], cons[1], s.param("r"))
    if k == "MergeProj":
        return _check_proj_sum(prod[0], cons)
    if k == "SplitProj":
        return _check_proj_sum(cons[0], prod)
    if k == "StableSwap":
        return _check_swap(cons, prod)
    if k == "PrimarySplit":
        return _check_primary(cons[0], prod[0], s)
    if k == "PrimaryMerge":
        return _check_primary(prod[0], cons[0], s)
    if k == "TensorExpand":
        return _check_tensor(cons[0], prod)
    if k == "TensorContract":
        return _check_tensor(prod[0], cons)
    if k == "IsoReplace":
        x, y = cons[0], prod[0]
        if not _plain(x, y):
            return "factor types"
        if x.cls != y.cls:
            return "class mismatch"
        if x.dim != y.dim:
            return "dimension bookkeeping"
        if not (_minimal(x) and _minimal(y)):
            return "not minimal"
        return None
    raise AssertionError(k)


def check_certificate(cert: Certificate) -> Valid | Invalid:
    """Replay the moves; Invalid(step, reason) names the first failing step.

    A mismatch between the replayed product and ``end`` is reported at index
    len(steps).
    """
    state = Counter(cert.start)
    for i, s in enumerate(cert.steps):
        try:
            reason = _check_step(s)
        except SeveriError as exc:
            reason = f"malformed step: {exc}"
        if reason:
            return Invalid(i, reason)
        for f in s.consumed:
            if state[f] <= 0:
                return Invalid(i, "consumed factor not present")
            state[f] -= 1
        state.update(s.produced)
    state = +state
    if state != Counter(cert.end):
        return Invalid(len(cert.steps), "end product mismatch")
    return Valid()


def check_certificate_json(obj) -> Valid | Invalid:
    """Parse and check; parse failures (including invalid varieties) are Invalid at step -1."""
    try:
        cert = Certificate.from_json(obj)
    except (MalformedInput, InvalidVariety, SeveriError) as exc:
        return Invalid(-1, f"malformed certificate: {exc}")
    return check_certificate(cert)


def total_dimension(factors: Sequence[Factor]) -> int:
    return sum(f.dim for f in factors)
