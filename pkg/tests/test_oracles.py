"""The brute-force oracles are checked against closed-form counts."""

import pytest

from severi import oracles
from severi.fields import make_context
from severi.projective import ProjPoint
from severi.verify import cyclic_class


def gaussian_binomial(n, k, q):
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def mobius(n):
    out, f = 1, 2
    while f * f <= n:
        if n % f == 0:
            n //= f
            if n % f == 0:
                return 0
            out = -out
        f += 1
    return -out if n > 1 else out


@pytest.mark.parametrize("p,D", [(2, 1), (2, 2), (2, 3), (2, 4), (2, 6), (3, 2), (3, 3), (5, 2)])
def test_irreducible_count(p, D):
    expected = sum(mobius(D // d) * p**d for d in range(1, D + 1) if D % d == 0) // D
    found = sum(oracles.irreducible_by_trial_division(f, p) for f in oracles.monic_polys(p, D))
    assert found == expected


@pytest.mark.parametrize("q,N,k", [(2, 3, 1), (3, 3, 1), (2, 4, 2), (5, 2, 1), (2, 3, 0)])
def test_subspace_enumeration_counts(q, N, k):
    ctx = make_context(q)
    subs = list(oracles.rref_matrices(ctx, N, k))
    assert len(subs) == gaussian_binomial(N + 1, k + 1, q)
    assert len(set(subs)) == len(subs)
    p = ProjPoint(ctx, (ctx.zero,) * N + (ctx.one,))
    through = list(oracles.subspaces_through(p, k))
    assert len(through) == gaussian_binomial(N, k, q)
    assert all(S.contains(p) and S.dim == k for S in through)


def test_crt_oracle():
    assert oracles.brute_force_crt(2, 3, 6) == (2, 1)
    assert oracles.brute_force_crt(2, 4, 8) is None


def test_order_oracle():
    for N in range(1, 20):
        assert oracles.order_by_addition(cyclic_class(N)) == N
