"""Brute-force reference computations.

These enumerate instead of solving and share no code path with the
algorithms they are used to check (beyond row reduction for canonical forms).
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Iterator, Sequence

from .brauer import BrauerClass, tensor, trivial
from .fields import FieldContext
from .projective import LinSubspace, ProjPoint, meet, span


def monic_polys(p: int, degree: int) -> Iterator[list[int]]:
    for low in itertools.product(range(p), repeat=degree):
        yield list(low) + [1]


def _divides(f: Sequence[int], g: Sequence[int], p: int) -> bool:
    # does monic f divide g over F_p
    g = list(g)
    df = len(f) - 1
    while len(g) - 1 >= df and any(g):
        c = g[-1] % p
        shift = len(g) - 1 - df
        for i, fi in enumerate(f):
            g[shift + i] = (g[shift + i] - c * fi) % p
        g.pop()
    return not any(x % p for x in g)


def irreducible_by_trial_division(poly: Sequence[int], p: int) -> bool:
    d = len(poly) - 1
    for k in range(1, d // 2 + 1):
        for f in monic_polys(p, k):
            if _divides(f, poly, p):
                return False
    return d >= 1


def first_irreducible(p: int, D: int) -> tuple[int, ...]:
    """Smallest monic irreducible, comparing coefficients from the top degree down."""
    cands = sorted(monic_polys(p, D), key=lambda f: list(reversed(f)))
    return tuple(next(f for f in cands if irreducible_by_trial_division(f, p)))


def rref_matrices(ctx: FieldContext, N: int, k: int, e: int | None = None) -> Iterator[LinSubspace]:
    """Every k-dimensional subspace of P^N (entries in F_{p^e}), once each."""
    elems = list(ctx.elements()) if e is None else ctx.subfield(e)
    for pivots in itertools.combinations(range(N + 1), k + 1):
        slots = [(i, c) for i, pc in enumerate(pivots) for c in range(pc + 1, N + 1) if c not in pivots]
        for values in itertools.product(elems, repeat=len(slots)):
            rows = [[ctx.zero] * (N + 1) for _ in pivots]
            for i, pc in enumerate(pivots):
                rows[i][pc] = ctx.one
            for (i, c), v in zip(slots, values):
                rows[i][c] = v
            yield LinSubspace(ctx, tuple(tuple(r) for r in rows), tuple(pivots))


def subspaces_through(p: ProjPoint, k: int, e: int | None = None) -> Iterator[LinSubspace]:
    """Every k-dimensional subspace through p, via the (k-1)-planes of P^N / p."""
    ctx, N = p.ctx, p.N
    if k == 0:
        yield span([p])
        return
    j = p.pivot
    for S in rref_matrices(ctx, N - 1, k - 1, e):
        lifted = [tuple(list(r[:j]) + [ctx.zero] + list(r[j:])) for r in S.basis]
        yield LinSubspace.from_rows(ctx, [p.coords, *lifted])


def transversals(p: ProjPoint, Ls: Sequence[LinSubspace], e: int | None = None) -> list[LinSubspace]:
    """All n-planes through p meeting every L_i, n = len(Ls) - 1."""
    n = len(Ls) - 1
    return [M for M in subspaces_through(p, n, e) if all(meet(M, L) is not None for L in Ls)]


def brute_force_crt(u: int, v: int, N: int) -> tuple[int, int] | None:
    for a in range(1, N + 1):
        for c in range(1, N + 1):
            if (a * u + c * v) % N == 1 % N:
                return a, c
    return None


def order_by_addition(a: BrauerClass, limit: int = 10**4) -> int:
    acc, k = a, 1
    while not acc.is_trivial:
        acc = tensor(acc, a)
        k += 1
        if k > limit:
            raise RuntimeError("order exceeds limit")
    return k


def multiples(a: BrauerClass, count: int) -> list[BrauerClass]:
    out, acc = [], trivial()
    for _ in range(count):
        out.append(acc)
        acc = tensor(acc, a)
    return out


def reciprocity_holds(a: BrauerClass) -> bool:
    return sum((v for _, v in a.invariants), Fraction(0)) % 1 == 0
