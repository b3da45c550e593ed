"""Weil restrictions over finite fields in the split case.

A k'-point of Re_{K/k}(X) is a single K'-point; its conjugates under
sigma = Frobenius^base_e are derived on demand. Here k = F_q with
q = p^base_e and K = F_{q^d}, both inside the ambient field of the context.

Maps implemented (all birational, each defined on an explicit open set whose
complement raises a named GateError):

* ``weil_param_proj``: Re_{K/k}(P^s) --> A^{s d}, expanding the affine
  coordinates in the basis 1, theta, ..., theta^(d-1) of K over k.
* ``prop14_forward``: Re_{K/k}(P^n_K) --> P^n x A^{mn} for d = m + 1 <= n,
  through the conjugate span L(p0), the pointed-subspace bundle and the
  Weil parametrisation of p0 inside L(p0).
* ``thm2_forward``: P^N --> P^n x A^{nm} x P^m for the Segre ambient
  N = (n+1)(m+1) - 1, through the span-lemma transversal against the
  conjugates of L = segre(P^n x {p}).
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from math import gcd
from typing import Sequence

from . import linalg
from .errors import (
    ConfigError,
    DegenerateOrbit,
    GateError,
    MalformedInput,
    NotGeneral,
    OutsideChart,
    UnexpectedMeetDimension,
)
from .fields import FieldContext, FieldElement, frobenius, in_subfield, make_context, prime_power
from .projective import (
    LinSubspace,
    ProjPoint,
    bundle_fiber_coords,
    bundle_from_fiber,
    frame_coords,
    from_frame,
    is_general_for,
    is_rational,
    meet,
    point_frobenius,
    segre,
    span,
    subspace_frobenius,
    transversal,
)


@dataclass(frozen=True)
class ConjugateTuple:
    """A point over F_{q^d} standing for its orbit (p0, sigma p0, ..., sigma^(d-1) p0)."""

    ctx: FieldContext
    base_e: int
    d: int
    point: ProjPoint

    def __post_init__(self):
        if self.base_e < 1 or self.d < 1 or self.ctx.D % (self.base_e * self.d):
            raise ConfigError(f"base_e * d = {self.base_e * self.d} does not divide D = {self.ctx.D}")
        if not is_rational(self.point, self.base_e * self.d):
            raise MalformedInput("point is not defined over the extension field")

    def to_json(self) -> dict:
        return {"base_e": self.base_e, "d": self.d, "point": self.point.to_json()}

    @staticmethod
    def from_json(ctx: FieldContext, obj: dict) -> "ConjugateTuple":
        try:
            return ConjugateTuple(ctx, int(obj["base_e"]), int(obj["d"]), ProjPoint.from_json(ctx, obj["point"]))
        except (KeyError, TypeError) as exc:
            raise MalformedInput(f"bad conjugate tuple {obj!r}") from exc


def conjugates(t: ConjugateTuple) -> list[ProjPoint]:
    return [point_frobenius(t.point, t.base_e * i) for i in range(t.d)]


def conjugate_span(t: ConjugateTuple) -> LinSubspace:
    """Span of the orbit; its echelon basis is defined over the base field."""
    L = span(conjugates(t))
    if L.dim != t.d - 1:
        raise DegenerateOrbit(f"orbit spans a {L.dim}-plane, expected {t.d - 1}")
    assert is_rational(L, t.base_e)
    return L


# -- the basis 1, theta, ..., theta^(d-1) ------------------------------------

@functools.lru_cache(maxsize=None)
def extension_generator(ctx: FieldContext, base_e: int, d: int) -> FieldElement:
    """theta with F_q(theta) = F_{q^d}; t itself when F_{q^d} is the whole ambient field."""
    if base_e * d == ctx.D:
        return ctx.gen
    proper = [e for e in range(1, d) if d % e == 0]
    for x in sorted(ctx.subfield(base_e * d), key=lambda v: v.value):
        if not any(in_subfield(x, base_e * e) for e in proper):
            return x
    raise AssertionError("a generator always exists")


@functools.lru_cache(maxsize=None)
def _expansion_matrix(ctx: FieldContext, base_e: int, d: int) -> tuple[tuple[FieldElement, ...], ...]:
    # inverse of V[i][j] = (sigma^i theta)^j
    theta = extension_generator(ctx, base_e, d)
    V = [[frobenius(theta, base_e * i) ** j for j in range(d)] for i in range(d)]
    cols = []
    for k in range(d):
        unit = [ctx.one if i == k else ctx.zero for i in range(d)]
        cols.append(linalg.solve(ctx, V, unit))
    return tuple(tuple(cols[k][j] for k in range(d)) for j in range(d))


def expand(x: FieldElement, base_e: int, d: int) -> list[FieldElement]:
    """Coordinates c_j in F_q with x = sum c_j theta^j."""
    ctx = x.ctx
    if not in_subfield(x, base_e * d):
        raise MalformedInput("element is not in the extension field")
    conj = [frobenius(x, base_e * i) for i in range(d)]
    Vinv = _expansion_matrix(ctx, base_e, d)
    c = [sum((a * b for a, b in zip(row, conj)), ctx.zero) for row in Vinv]
    assert all(in_subfield(ci, base_e) for ci in c)
    return c


def contract(ctx: FieldContext, coeffs: Sequence[FieldElement], base_e: int, d: int) -> FieldElement:
    theta = extension_generator(ctx, base_e, d)
    out, power = ctx.zero, ctx.one
    for c in coeffs:
        out = out + ctx(c) * power
        power = power * theta
    return out


def _require_base(values: Sequence[FieldElement], base_e: int, what: str) -> None:
    if not all(in_subfield(v, base_e) for v in values):
        raise MalformedInput(f"{what} must have coordinates in the base field")


def weil_param_proj(t: ConjugateTuple) -> tuple[FieldElement, ...]:
    """Affine coordinates (s*d of them) of a point of Re_{K/k}(P^s) on the chart x0 != 0."""
    x = t.point
    if not x[0]:
        raise OutsideChart("coordinate 0 vanishes")
    out = []
    for c in x.coords[1:]:
        out.extend(expand(c, t.base_e, t.d))
    return tuple(out)


def weil_param_inverse(ctx: FieldContext, base_e: int, d: int, coords: Sequence[FieldElement]) -> ConjugateTuple:
    coords = [ctx(c) for c in coords]
    if len(coords) % d:
        raise MalformedInput(f"{len(coords)} coordinates is not a multiple of d = {d}")
    _require_base(coords, base_e, "Weil coordinates")
    ys = [contract(ctx, coords[i:i + d], base_e, d) for i in range(0, len(coords), d)]
    return ConjugateTuple(ctx, base_e, d, ProjPoint(ctx, (ctx.one, *ys)))


# -- Re_{K/k}(P^n_K) ~ P^n x A^{mn} --------------------------------------------

def _offset(i: int, j: int) -> int:
    # the affine part is centred at the moment-curve point [1 : theta : ... : theta^m],
    # whose orbit is independent, so a = 0 lands on a general tuple
    return 1 if i + 1 == j else 0


def prop14_forward(t: ConjugateTuple, trace: dict | None = None) -> tuple[ProjPoint, tuple[FieldElement, ...]]:
    """(x, a) in P^n x A^{mn} for a tuple on P^n over a degree d = m+1 extension.

    a = (fiber coordinates of L(p0) around x) ++ (the m*m non-constant Weil
    coordinates of p0 in the echelon frame of L(p0), shifted by the
    moment-curve point). The gcd condition is not checked here.
    """
    ctx, e, m, n = t.ctx, t.base_e, t.d - 1, t.point.N
    if m >= n:
        raise ConfigError(f"need m < n, got m = {m}, n = {n}")
    L = conjugate_span(t)
    y = frame_coords(L, t.point)
    if not y[0]:
        raise OutsideChart("leading frame coordinate of p0 vanishes")
    c = weil_param_proj(ConjugateTuple(ctx, e, t.d, y))
    z = [ctx.one] + [c[i * t.d] for i in range(m)]
    x = from_frame(L, z)
    fiber = bundle_fiber_coords(L, x)
    rest = [c[i * t.d + j] - _offset(i, j) for i in range(m) for j in range(1, t.d)]
    if trace is not None:
        trace.update({"subspace": L, "frame_point": y, "weil": tuple(c), "base_point": x})
    return x, tuple(fiber) + tuple(rest)


def prop14_inverse(x: ProjPoint, a: Sequence[FieldElement], d: int, base_e: int) -> ConjugateTuple:
    ctx, m, n = x.ctx, d - 1, x.N
    if m < 1 or m >= n:
        raise ConfigError(f"need 1 <= m < n, got m = {m}, n = {n}")
    a = [ctx(v) for v in a]
    if len(a) != m * n:
        raise MalformedInput(f"expected {m * n} affine coordinates, got {len(a)}")
    _require_base(x.coords, base_e, "base point")
    _require_base(a, base_e, "affine coordinates")
    split = m * (n - m)
    L = bundle_from_fiber(x, a[:split], m)
    z = frame_coords(L, x)
    if not z[0]:
        raise OutsideChart("leading frame coordinate of the base point vanishes")
    rest = a[split:]
    ys = [ctx.one]
    for i in range(m):
        coeffs = [z[i + 1]] + [rest[i * m + j - 1] + _offset(i, j) for j in range(1, d)]
        ys.append(contract(ctx, coeffs, base_e, d))
    t = ConjugateTuple(ctx, base_e, d, from_frame(L, ys))
    conjugate_span(t)
    return t


# -- the product map -------------------------------------------------------------

@dataclass(frozen=True)
class Thm2Config:
    """Split model of P_1 (x) P_2 with dim P_1 = n, dim P_2 = m over k = F_q."""

    ctx: FieldContext
    q: int
    base_e: int
    n: int
    m: int
    point: ProjPoint
    L: LinSubspace
    conjugates: tuple[LinSubspace, ...]

    @property
    def N(self) -> int:
        return (self.n + 1) * (self.m + 1) - 1

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "n": self.n,
            "m": self.m,
            "field": self.ctx.to_json(),
            "point": self.point.to_json(),
            "L": self.L.to_json(),
        }


def _lex_points(ctx: FieldContext, m: int):
    # canonical points of P^m ordered lexicographically on serialised coordinates
    elems = sorted(ctx.elements(), key=lambda v: v.coeffs)
    for j in range(m, -1, -1):
        head = (ctx.zero,) * j + (ctx.one,)
        for tail in itertools.product(elems, repeat=m - j):
            yield ProjPoint(ctx, head + tail)


@functools.lru_cache(maxsize=None)
def make_thm2_config(q: int, n: int, m: int) -> Thm2Config:
    p, base_e = prime_power(q)
    if m < 1 or n <= m:
        raise ConfigError(f"need 1 <= m < n, got n = {n}, m = {m}")
    if gcd(m + 1, n + 1) != 1:
        raise ConfigError(f"gcd(m+1, n+1) = {gcd(m + 1, n + 1)} is not 1")
    ctx = make_context(p, base_e * (m + 1))
    point = None
    for cand in _lex_points(ctx, m):
        orbit = [point_frobenius(cand, base_e * k) for k in range(m + 1)]
        if span(orbit).dim == m:
            point = cand
            break
    assert point is not None
    basis_pts = [ProjPoint(ctx, tuple(ctx.one if j == i else ctx.zero for j in range(n + 1))) for i in range(n + 1)]
    L = span([segre(e, point) for e in basis_pts])
    conj = tuple(subspace_frobenius(L, base_e * k) for k in range(m + 1))
    N = (n + 1) * (m + 1) - 1
    if sum(1 + C.dim for C in conj) != N + 1 or span(list(conj)).dim != N:
        raise ConfigError("conjugates of L do not span the Segre ambient space")
    return Thm2Config(ctx, q, base_e, n, m, point, L, conj)


def r_l_transversal(x: ProjPoint, cfg: Thm2Config) -> tuple[LinSubspace, list[ProjPoint]]:
    """The transversal M through x meeting every conjugate of L, and the meeting points."""
    if x.N != cfg.N:
        raise ConfigError(f"point lives in P^{x.N}, config needs P^{cfg.N}")
    _require_base(x.coords, cfg.base_e, "point")
    M = transversal(x, cfg.conjugates)
    pts = []
    for C in cfg.conjugates:
        Q = meet(M, C)
        if Q is None or Q.dim != 0:
            raise UnexpectedMeetDimension("transversal does not meet a conjugate in a single point")
        pts.append(ProjPoint(cfg.ctx, Q.basis[0]))
    return M, pts


def _tag(exc: GateError, stage: str) -> GateError:
    if exc.stage is None:
        exc.stage = stage
    return exc


def thm2_forward(
    x: ProjPoint, cfg: Thm2Config, trace: dict | None = None
) -> tuple[ProjPoint, tuple[FieldElement, ...], ProjPoint]:
    """x in P^N  -->  (x1 in P^n, a in A^{nm}, x2 in P^m)."""
    try:
        M, pts = r_l_transversal(x, cfg)
    except GateError as exc:
        raise _tag(exc, "transversal")
    u0 = frame_coords(cfg.L, pts[0])
    t = ConjugateTuple(cfg.ctx, cfg.base_e, cfg.m + 1, u0)
    inner: dict = {}
    try:
        x1, a = prop14_forward(t, inner)
    except GateError as exc:
        raise _tag(exc, "weil-restriction")
    assert is_rational(M, cfg.base_e)
    x2 = frame_coords(M, x)
    if trace is not None:
        trace.update({"L": cfg.L, "M": M, "pts": pts, "frame_point": u0, "prop14": inner})
    return x1, a, x2


def thm2_inverse(
    x1: ProjPoint, a: Sequence[FieldElement], x2: ProjPoint, cfg: Thm2Config, trace: dict | None = None
) -> ProjPoint:
    if x1.ctx != cfg.ctx or x2.ctx != cfg.ctx:
        raise ConfigError("field does not match the config")
    if x1.N != cfg.n or x2.N != cfg.m or len(a) != cfg.n * cfg.m:
        raise ConfigError(
            f"expected P^{cfg.n} x A^{cfg.n * cfg.m} x P^{cfg.m}, "
            f"got P^{x1.N} x A^{len(a)} x P^{x2.N}"
        )
    _require_base(x2.coords, cfg.base_e, "fiber point")
    try:
        t = prop14_inverse(x1, a, cfg.m + 1, cfg.base_e)
    except GateError as exc:
        raise _tag(exc, "weil-restriction")
    p0 = from_frame(cfg.L, t.point)
    pts = [point_frobenius(p0, cfg.base_e * k) for k in range(cfg.m + 1)]
    M = span(pts)
    if M.dim != cfg.m:
        raise DegenerateOrbit("meeting points do not span an m-plane", stage="fiber")
    x = from_frame(M, x2)
    if not is_general_for(x, cfg.conjugates, cfg.m):
        raise NotGeneral("reconstructed point is not general", stage="transversal")
    for C, pt in zip(cfg.conjugates, pts):
        Q = meet(M, C)
        if Q is None or Q.dim != 0:
            raise UnexpectedMeetDimension("fiber meets a conjugate in more than a point", stage="transversal")
    if trace is not None:
        trace.update({"L": cfg.L, "M": M, "pts": pts, "tuple": t})
    return x
