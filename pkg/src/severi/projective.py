"""Projective linear algebra over a finite field.

Subspaces are kept in reduced row-echelon form, so two subspaces are equal
exactly when their stored matrices are. Projection from a center L uses the
complement frame given by the non-pivot columns of L. Forms of degree r in
N+1 variables are coefficient vectors indexed by ``monomials(N + 1, r)``
(graded lexicographic: x0^r first, x_N^r last).
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from math import comb
from typing import Iterator, Sequence

from . import linalg
from .errors import (
    AmbientMismatch,
    BadDimensionSum,
    ContextMismatch,
    DegenerateConstraint,
    IndeterminacyLocus,
    MalformedInput,
    NotGeneral,
    NotInBigCell,
    NotSpanning,
    PointInCenter,
    PointNotOnSubspace,
    ZeroVector,
)
from .fields import FieldContext, FieldElement, frobenius


def _same_ctx(a: FieldContext, b: FieldContext) -> None:
    if a is not b and a != b:
        raise ContextMismatch(f"F_{a.p}^{a.D} vs F_{b.p}^{b.D}")


@dataclass(frozen=True)
class ProjPoint:
    """A point of P^N, normalised so that its first nonzero coordinate is 1."""

    ctx: FieldContext
    coords: tuple[FieldElement, ...]

    def __post_init__(self):
        cs = tuple(self.ctx(c) for c in self.coords)
        lead = next((c for c in cs if c), None)
        if lead is None:
            raise ZeroVector("all coordinates vanish")
        if lead != 1:
            inv = lead.inverse()
            cs = tuple(c * inv for c in cs)
        object.__setattr__(self, "coords", cs)

    @property
    def N(self) -> int:
        return len(self.coords) - 1

    @property
    def pivot(self) -> int:
        return next(i for i, c in enumerate(self.coords) if c)

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __repr__(self):
        return "[" + " : ".join(repr(c) for c in self.coords) + "]"

    def to_json(self) -> list:
        return [c.to_json() for c in self.coords]

    @staticmethod
    def from_json(ctx: FieldContext, obj) -> "ProjPoint":
        if not isinstance(obj, list) or not obj:
            raise MalformedInput(f"bad point {obj!r}")
        return ProjPoint(ctx, tuple(ctx(c) for c in obj))


@dataclass(frozen=True)
class LinSubspace:
    """A projective linear subspace given by its reduced row-echelon basis."""

    ctx: FieldContext
    basis: tuple[tuple[FieldElement, ...], ...]
    pivots: tuple[int, ...]

    @staticmethod
    def from_rows(ctx: FieldContext, rows: Sequence[Sequence]) -> "LinSubspace":
        rows = [tuple(ctx(c) for c in r) for r in rows]
        if not rows:
            raise ZeroVector("no rows")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise AmbientMismatch("rows of unequal length")
        red, piv = linalg.rref(ctx, rows)
        if not red:
            raise ZeroVector("rows span the zero space")
        return LinSubspace(ctx, tuple(red), tuple(piv))

    @staticmethod
    def full(ctx: FieldContext, N: int) -> "LinSubspace":
        return LinSubspace.from_rows(ctx, _identity(ctx, N + 1))

    @property
    def N(self) -> int:
        return len(self.basis[0]) - 1

    @property
    def dim(self) -> int:
        return len(self.basis) - 1

    def contains(self, x: "ProjPoint | LinSubspace") -> bool:
        _same_ctx(self.ctx, x.ctx)
        if x.N != self.N:
            raise AmbientMismatch(f"P^{x.N} vs P^{self.N}")
        rows = [x.coords] if isinstance(x, ProjPoint) else list(x.basis)
        return all(not any(_reduce(self, r)) for r in rows)

    def points(self, e: int | None = None) -> Iterator[ProjPoint]:
        """Points of the subspace whose frame coordinates lie in F_{p^e}."""
        for y in points(self.ctx, self.dim, e):
            yield from_frame(self, y)

    def __repr__(self):
        rows = "; ".join("(" + ", ".join(repr(c) for c in r) + ")" for r in self.basis)
        return f"LinSubspace[{rows}]"

    def to_json(self) -> list:
        return [[c.to_json() for c in r] for r in self.basis]

    @staticmethod
    def from_json(ctx: FieldContext, obj) -> "LinSubspace":
        if not isinstance(obj, list) or not obj:
            raise MalformedInput(f"bad subspace {obj!r}")
        return LinSubspace.from_rows(ctx, [[ctx(c) for c in row] for row in obj])


def _identity(ctx: FieldContext, n: int) -> list[tuple[FieldElement, ...]]:
    return [tuple(ctx.one if i == j else ctx.zero for j in range(n)) for i in range(n)]


def _reduce(L: LinSubspace, v: Sequence[FieldElement]) -> list[FieldElement]:
    """v minus its component along L, so that v vanishes at L's pivot columns."""
    v = list(v)
    for row, pc in zip(L.basis, L.pivots):
        f = v[pc]
        if f:
            v = [a - f * b for a, b in zip(v, row)]
    return v


def _complement(L: LinSubspace, v: Sequence[FieldElement]) -> list[FieldElement]:
    red = _reduce(L, v)
    piv = set(L.pivots)
    return [c for i, c in enumerate(red) if i not in piv]


def _lift(L: LinSubspace, w: Sequence[FieldElement]) -> list[FieldElement]:
    """Insert zeros at L's pivot columns (a section of the projection from L)."""
    out, it = [], iter(w)
    piv = set(L.pivots)
    for i in range(L.N + 1):
        out.append(L.ctx.zero if i in piv else next(it))
    return out


def _rows_of(item) -> list[tuple[FieldElement, ...]]:
    if isinstance(item, ProjPoint):
        return [item.coords]
    if isinstance(item, LinSubspace):
        return list(item.basis)
    raise MalformedInput(f"expected a point or subspace, got {type(item).__name__}")


def span(items: Sequence["ProjPoint | LinSubspace"]) -> LinSubspace:
    """Smallest linear subspace containing all items."""
    if not items:
        raise MalformedInput("span of an empty list")
    ctx, N = items[0].ctx, items[0].N
    rows = []
    for it in items:
        _same_ctx(ctx, it.ctx)
        if it.N != N:
            raise AmbientMismatch(f"P^{it.N} vs P^{N}")
        rows.extend(_rows_of(it))
    return LinSubspace.from_rows(ctx, rows)


def meet(A: LinSubspace, B: LinSubspace) -> LinSubspace | None:
    """Intersection of two subspaces; None when it is empty."""
    _same_ctx(A.ctx, B.ctx)
    if A.N != B.N:
        raise AmbientMismatch(f"P^{A.N} vs P^{B.N}")
    ctx, n = A.ctx, A.N + 1
    equations = linalg.nullspace(ctx, A.basis, n) + linalg.nullspace(ctx, B.basis, n)
    if not equations:
        return LinSubspace.full(ctx, A.N)
    sol = linalg.nullspace(ctx, equations, n)
    if not sol:
        return None
    return LinSubspace(ctx, tuple(sol), tuple(linalg.rref(ctx, sol)[1]))


def project_from(L: LinSubspace, x: ProjPoint) -> ProjPoint:
    """Image of x under the linear projection with center L, in P^{N - dim L - 1}."""
    _same_ctx(L.ctx, x.ctx)
    if x.N != L.N:
        raise AmbientMismatch(f"P^{x.N} vs P^{L.N}")
    w = _complement(L, x.coords)
    if not any(w):
        raise PointInCenter("point lies in the center of projection")
    return ProjPoint(L.ctx, tuple(w))


def project_subspace(L: LinSubspace, S: LinSubspace) -> LinSubspace | None:
    """Image of S under projection from L; None if S lies inside L."""
    _same_ctx(L.ctx, S.ctx)
    if S.N != L.N:
        raise AmbientMismatch(f"P^{S.N} vs P^{L.N}")
    rows = [_complement(L, r) for r in S.basis]
    rows = [r for r in rows if any(r)]
    if not rows or not rows[0]:
        return None
    return LinSubspace.from_rows(L.ctx, rows)


def frame_coords(L: LinSubspace, x: ProjPoint) -> ProjPoint:
    """Coordinates of x in the echelon frame of L (row order)."""
    y = tuple(x.coords[pc] for pc in L.pivots)
    if linalg.combine(L.ctx, y, L.basis) != x.coords:
        raise PointNotOnSubspace("point is not on the subspace")
    return ProjPoint(L.ctx, y)


def from_frame(L: LinSubspace, y: "ProjPoint | Sequence[FieldElement]") -> ProjPoint:
    coords = y.coords if isinstance(y, ProjPoint) else tuple(y)
    if len(coords) != L.dim + 1:
        raise AmbientMismatch(f"frame of P^{L.dim} needs {L.dim + 1} coordinates")
    return ProjPoint(L.ctx, linalg.combine(L.ctx, coords, L.basis))


def point_frobenius(x: ProjPoint, e: int) -> ProjPoint:
    return ProjPoint(x.ctx, tuple(frobenius(c, e) for c in x.coords))


def subspace_frobenius(L: LinSubspace, e: int) -> LinSubspace:
    return LinSubspace.from_rows(L.ctx, [[frobenius(c, e) for c in r] for r in L.basis])


def is_rational(item: "ProjPoint | LinSubspace", e: int) -> bool:
    """All stored coordinates lie in F_{p^e}."""
    rows = _rows_of(item)
    return all(frobenius(c, e) == c for r in rows for c in r)


def points(ctx: FieldContext, N: int, e: int | None = None) -> Iterator[ProjPoint]:
    """All points of P^N with coordinates in F_{p^e} (the whole field if e is None).

    Ordered by position of the leading 1, then by encoding of the tail.
    """
    elems = list(ctx.elements()) if e is None else ctx.subfield(e)
    for j in range(N + 1):
        head = (ctx.zero,) * j + (ctx.one,)
        for tail in itertools.product(elems, repeat=N - j):
            yield ProjPoint(ctx, head + tail)


def is_general_for(p: ProjPoint, Ls: Sequence[LinSubspace], n: int) -> bool:
    """True iff p avoids the span of every n of the n+1 subspaces."""
    if len(Ls) != n + 1:
        raise MalformedInput(f"expected {n + 1} subspaces, got {len(Ls)}")
    for L in Ls:
        _same_ctx(p.ctx, L.ctx)
        if L.N != p.N:
            raise AmbientMismatch(f"P^{L.N} vs P^{p.N}")
    if n == 0:
        return True
    for skip in range(n + 1):
        if span([L for i, L in enumerate(Ls) if i != skip]).contains(p):
            return False
    return True


def transversal(p: ProjPoint, Ls: Sequence[LinSubspace]) -> LinSubspace:
    """The unique n-plane through p meeting each of L_0..L_n.

    Requires sum(1 + dim L_i) = N + 1, the L_i spanning P^N and p general.
    Recursive: project from L_n, solve in the quotient, lift the meeting
    points back to the L_i, span with p.
    """
    if not Ls:
        raise MalformedInput("need at least one subspace")
    n = len(Ls) - 1
    for L in Ls:
        _same_ctx(p.ctx, L.ctx)
        if L.N != p.N:
            raise AmbientMismatch(f"P^{L.N} vs P^{p.N}")
    if sum(1 + L.dim for L in Ls) != p.N + 1:
        raise BadDimensionSum(f"sum of (1 + dim L_i) is not {p.N + 1}")
    if span(Ls).dim != p.N:
        raise NotSpanning("subspaces do not span the ambient space")
    if not is_general_for(p, Ls, n):
        raise NotGeneral("point lies in the span of some n of the subspaces")
    return _transversal(p, list(Ls))


def _transversal(p: ProjPoint, Ls: list[LinSubspace]) -> LinSubspace:
    n = len(Ls) - 1
    if n == 0:
        return span([p])
    center = Ls[-1]
    images = [project_subspace(center, L) for L in Ls[:-1]]
    if any(im is None for im in images):
        raise NotSpanning("subspaces are not independent")
    M_low = _transversal(project_from(center, p), images)
    meets = [p]
    for L, image in zip(Ls[:-1], images):
        q_low = meet(M_low, image)
        if q_low is None or q_low.dim != 0:
            raise NotGeneral("transversal meets a projected subspace in more than a point")
        projected_rows = [_complement(center, r) for r in L.basis]
        c = linalg.combination(L.ctx, projected_rows, q_low.basis[0])
        if c is None:
            raise NotSpanning("subspaces are not independent")
        meets.append(ProjPoint(L.ctx, linalg.combine(L.ctx, c, L.basis)))
    M = span(meets)
    if M.dim != n:
        raise NotGeneral("lifted points do not span an n-plane")
    return M


# -- Segre / Veronese --------------------------------------------------------

def segre(x: ProjPoint, y: ProjPoint) -> ProjPoint:
    """z_ij = x_i y_j, row-major."""
    _same_ctx(x.ctx, y.ctx)
    return ProjPoint(x.ctx, tuple(a * b for a in x.coords for b in y.coords))


@functools.lru_cache(maxsize=None)
def monomials(nvars: int, r: int) -> tuple[tuple[int, ...], ...]:
    """Exponent vectors of degree-r monomials in graded-lex order."""
    out = []
    for combo in itertools.combinations_with_replacement(range(nvars), r):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return tuple(out)


def _monomial_values(x: Sequence[FieldElement], r: int, ctx: FieldContext) -> list[FieldElement]:
    vals = []
    for e in monomials(len(x), r):
        v = ctx.one
        for c, k in zip(x, e):
            if k:
                v = v * c**k
        vals.append(v)
    return vals


def veronese(x: ProjPoint, r: int) -> ProjPoint:
    if r < 1:
        raise MalformedInput("Veronese degree must be positive")
    return ProjPoint(x.ctx, tuple(_monomial_values(x.coords, r, x.ctx)))


# -- forms -------------------------------------------------------------------

Poly = dict  # exponent tuple -> FieldElement


def _poly_mul(ctx: FieldContext, a: Poly, b: Poly) -> Poly:
    out: Poly = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(i + j for i, j in zip(ea, eb))
            out[e] = out.get(e, ctx.zero) + ca * cb
    return {e: c for e, c in out.items() if c}


def substitute(ctx: FieldContext, form: Sequence[FieldElement], r: int, B: Sequence[Sequence[FieldElement]]) -> list[FieldElement]:
    """Pull a degree-r form back along x = u B (u has len(B) coordinates).

    Returns the coefficient vector of the result over monomials(len(B), r).
    """
    k = len(B)
    nvars = len(B[0])
    linear = []
    for c in range(nvars):
        lf = {}
        for j in range(k):
            if B[j][c]:
                e = tuple(1 if i == j else 0 for i in range(k))
                lf[e] = B[j][c]
        linear.append(lf)
    one = {(0,) * k: ctx.one}
    powers: dict[tuple[int, int], Poly] = {}

    def power(c: int, m: int) -> Poly:
        if (c, m) not in powers:
            powers[(c, m)] = one if m == 0 else _poly_mul(ctx, power(c, m - 1), linear[c])
        return powers[(c, m)]

    acc: Poly = {}
    for coeff, e in zip(form, monomials(nvars, r)):
        if not coeff:
            continue
        term: Poly = {(0,) * k: coeff}
        for c, m in enumerate(e):
            if m:
                term = _poly_mul(ctx, term, power(c, m))
        for ee, cc in term.items():
            acc[ee] = acc.get(ee, ctx.zero) + cc
    return [acc.get(e, ctx.zero) for e in monomials(k, r)]


def restriction_matrix(ctx: FieldContext, N: int, r: int, L: LinSubspace) -> list[list[FieldElement]]:
    """Matrix (rows: monomials on L, cols: monomials on P^N) of restriction to L."""
    mons = monomials(N + 1, r)
    cols = []
    for i in range(len(mons)):
        unit = [ctx.one if j == i else ctx.zero for j in range(len(mons))]
        cols.append(substitute(ctx, unit, r, L.basis))
    return [list(row) for row in zip(*cols)]


@dataclass(frozen=True)
class FormBasis:
    """Basis of a space of degree-r forms on P^N, coefficients over monomials(N+1, r)."""

    ctx: FieldContext
    N: int
    r: int
    basis: tuple[tuple[FieldElement, ...], ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def to_json(self) -> dict:
        return {
            "N": self.N,
            "r": self.r,
            "monomials": [list(e) for e in monomials(self.N + 1, self.r)],
            "basis": [[c.to_json() for c in f] for f in self.basis],
        }


def restricted_form_space(
    ctx: FieldContext,
    N: int,
    r: int,
    constraints: Sequence[tuple[LinSubspace, Sequence[FieldElement]]],
) -> FormBasis:
    """Degree-r forms on P^N whose restriction to each L_i is a multiple of s_i.

    Each s_i is given in the echelon frame of L_i, over monomials(dim L_i + 1, r).
    """
    size = comb(N + r, r)
    rows = []
    for L, s in constraints:
        _same_ctx(ctx, L.ctx)
        if L.N != N:
            raise AmbientMismatch(f"P^{L.N} vs P^{N}")
        s = [ctx(c) for c in s]
        if len(s) != comb(L.dim + r, r):
            raise MalformedInput("form has the wrong number of coefficients for its subspace")
        if not any(s):
            raise DegenerateConstraint("constraint form is zero")
        R = restriction_matrix(ctx, N, r, L)
        for w in linalg.nullspace(ctx, [s], len(s)):
            rows.append([sum((wk * Rk[j] for wk, Rk in zip(w, R)), ctx.zero) for j in range(size)])
    if rows:
        basis = linalg.nullspace(ctx, rows, size)
    else:
        basis = _identity(ctx, size)
    return FormBasis(ctx, N, r, tuple(tuple(b) for b in basis))


def apply_forms(W: FormBasis, x: ProjPoint) -> ProjPoint:
    """[w_1(x) : ... : w_M(x)]."""
    _same_ctx(W.ctx, x.ctx)
    if x.N != W.N:
        raise AmbientMismatch(f"P^{x.N} vs P^{W.N}")
    vals = _monomial_values(x.coords, W.r, W.ctx)
    out = tuple(sum((c * v for c, v in zip(f, vals)), W.ctx.zero) for f in W.basis)
    if not any(out):
        raise IndeterminacyLocus("every form in the basis vanishes at the point")
    return ProjPoint(W.ctx, out)


# -- Grassmannian charts -----------------------------------------------------

def grass_big_cell(L: LinSubspace) -> tuple[FieldElement, ...]:
    """Non-pivot entries (row-major) of an m-plane whose pivots are 0..m."""
    m = L.dim
    if L.pivots != tuple(range(m + 1)):
        raise NotInBigCell(f"pivots {L.pivots} are not 0..{m}")
    return tuple(row[c] for row in L.basis for c in range(m + 1, L.N + 1))


def grass_from_cell(ctx: FieldContext, coords: Sequence[FieldElement], m: int, n: int) -> LinSubspace:
    width = n - m
    if m < 0 or width < 0 or len(coords) != (m + 1) * width:
        raise MalformedInput(f"big cell of grass({m}, P^{n}) has {(m + 1) * max(width, 0)} coordinates")
    rows = []
    for i in range(m + 1):
        head = [ctx.one if j == i else ctx.zero for j in range(m + 1)]
        rows.append(head + [ctx(c) for c in coords[i * width:(i + 1) * width]])
    return LinSubspace.from_rows(ctx, rows)


def bundle_fiber_coords(L: LinSubspace, p: ProjPoint) -> tuple[FieldElement, ...]:
    """Big-cell coordinates of L/p inside P^n/p, i.e. m(n-m) affine coordinates."""
    if not L.contains(p):
        raise PointNotOnSubspace("point is not on the subspace")
    if L.dim == 0:
        return ()
    center = span([p])
    quotient = project_subspace(center, L)
    return grass_big_cell(quotient)


def bundle_from_fiber(p: ProjPoint, coords: Sequence[FieldElement], m: int) -> LinSubspace:
    """Inverse of bundle_fiber_coords for a given point p and dimension m."""
    if m == 0:
        if coords:
            raise MalformedInput("a point has no fiber coordinates")
        return span([p])
    center = span([p])
    quotient = grass_from_cell(p.ctx, coords, m - 1, p.N - 1)
    rows = [p.coords] + [tuple(_lift(center, r)) for r in quotient.basis]
    return LinSubspace.from_rows(p.ctx, rows)
