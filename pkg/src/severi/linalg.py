"""Gaussian elimination over a FieldContext.

Matrices are lists of rows; rows are tuples of FieldElement. Nothing here
knows about projective geometry.
"""

from __future__ import annotations

from typing import Sequence

from .fields import FieldContext, FieldElement

Row = tuple[FieldElement, ...]


def rref(ctx: FieldContext, rows: Sequence[Sequence[FieldElement]]) -> tuple[list[Row], list[int]]:
    """Reduced row-echelon form with zero rows dropped, plus the pivot columns."""
    m = [list(r) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == len(m):
            break
        k = next((i for i in range(r, len(m)) if m[i][c]), None)
        if k is None:
            continue
        m[r], m[k] = m[k], m[r]
        inv = m[r][c].inverse()
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return [tuple(row) for row in m[:r]], pivots


def rank(ctx: FieldContext, rows: Sequence[Sequence[FieldElement]]) -> int:
    return len(rref(ctx, rows)[1])


def nullspace(ctx: FieldContext, rows: Sequence[Sequence[FieldElement]], ncols: int) -> list[Row]:
    """Basis of {w : A w = 0}, returned in reduced row-echelon form."""
    red, pivots = rref(ctx, rows) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        w = [ctx.zero] * ncols
        w[f] = ctx.one
        for row, pc in zip(red, pivots):
            w[pc] = -row[f]
        basis.append(tuple(w))
    return rref(ctx, basis)[0] if basis else []


def solve(ctx: FieldContext, A: Sequence[Sequence[FieldElement]], b: Sequence[FieldElement]) -> list[FieldElement] | None:
    """One solution x of A x = b, or None if the system is inconsistent."""
    ncols = len(A[0]) if A else 0
    aug = [list(row) + [bi] for row, bi in zip(A, b)]
    red, pivots = rref(ctx, aug)
    if ncols in pivots:
        return None
    x = [ctx.zero] * ncols
    for row, pc in zip(red, pivots):
        x[pc] = row[ncols]
    return x


def combination(ctx: FieldContext, rows: Sequence[Sequence[FieldElement]], v: Sequence[FieldElement]) -> list[FieldElement] | None:
    """Coefficients c with sum c_i rows_i = v, or None if v is not in the row span."""
    if not rows:
        return [] if not any(v) else None
    transposed = [[row[j] for row in rows] for j in range(len(v))]
    return solve(ctx, transposed, v)


def combine(ctx: FieldContext, coeffs: Sequence[FieldElement], rows: Sequence[Sequence[FieldElement]]) -> Row:
    out = [ctx.zero] * len(rows[0])
    for c, row in zip(coeffs, rows):
        if c:
            out = [a + c * b for a, b in zip(out, row)]
    return tuple(out)


def determinant(ctx: FieldContext, rows: Sequence[Sequence[FieldElement]]) -> FieldElement:
    m = [list(r) for r in rows]
    n = len(m)
    det = ctx.one
    for c in range(n):
        k = next((i for i in range(c, n) if m[i][c]), None)
        if k is None:
            return ctx.zero
        if k != c:
            m[c], m[k] = m[k], m[c]
            det = -det
        det = det * m[c][c]
        inv = m[c][c].inverse()
        for i in range(c + 1, n):
            if m[i][c]:
                f = m[i][c] * inv
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return det
