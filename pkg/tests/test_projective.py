import random
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from severi import linalg, oracles
from severi.errors import (
    AmbientMismatch,
    BadDimensionSum,
    DegenerateConstraint,
    IndeterminacyLocus,
    NotGeneral,
    NotInBigCell,
    NotSpanning,
    PointInCenter,
    PointNotOnSubspace,
    ZeroVector,
)
from severi.fields import make_context
from severi.projective import (
    LinSubspace,
    ProjPoint,
    apply_forms,
    bundle_fiber_coords,
    bundle_from_fiber,
    frame_coords,
    from_frame,
    grass_big_cell,
    grass_from_cell,
    is_general_for,
    meet,
    monomials,
    points,
    project_from,
    restricted_form_space,
    restriction_matrix,
    segre,
    span,
    transversal,
    veronese,
)
from severi.verify import random_invertible, random_point

F5, F7 = make_context(5), make_context(7)


def pt(ctx, *c):
    return ProjPoint(ctx, tuple(ctx(x) for x in c))


def sub(ctx, *rows):
    return LinSubspace.from_rows(ctx, [[ctx(x) for x in r] for r in rows])


def rows(L):
    return [[c.value for c in r] for r in L.basis]


L0 = sub(F5, (1, 0, 0, 0), (0, 1, 0, 0))
L1 = sub(F5, (0, 0, 1, 0), (0, 0, 0, 1))


def test_point_canonical_form():
    assert pt(F5, 0, 2, 4).coords == (F5(0), F5(1), F5(2))
    with pytest.raises(ZeroVector):
        pt(F5, 0, 0)


def test_span_examples():
    F3 = make_context(3)
    assert rows(span([pt(F3, 1, 0, 0), pt(F3, 0, 1, 0)])) == [[1, 0, 0], [0, 1, 0]]
    p = pt(F5, 1, 2, 3)
    assert span([p]).dim == 0 and span([p]).contains(p)
    assert rows(span([pt(F5, 1, 1, 1, 1), L0])) == [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 1]]
    with pytest.raises(AmbientMismatch):
        span([pt(F5, 1, 0), L0])


def test_meet_examples():
    A = sub(F5, (1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0))
    B = sub(F5, (1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 0, 1))
    assert rows(meet(A, B)) == [[1, 0, 0, 0], [0, 1, 0, 0]]
    assert meet(L0, L1) is None
    assert meet(A, A) == A


def test_project_from_examples():
    assert project_from(L0, pt(F5, 1, 1, 1, 1)) == pt(F5, 1, 1)
    assert project_from(L0, pt(F5, 0, 0, 1, 0)) == pt(F5, 1, 0)
    with pytest.raises(PointInCenter):
        project_from(L0, pt(F5, 1, 3, 0, 0))


def test_is_general_for_examples():
    assert is_general_for(pt(F5, 1, 1, 1, 1), [L0, L1], 1)
    assert not is_general_for(pt(F5, 1, 2, 0, 0), [L0, L1], 1)
    full = LinSubspace.full(F5, 3)
    assert all(is_general_for(p, [full], 0) for p in points(F5, 3))


def test_transversal_examples():
    p = pt(F5, 1, 1, 1, 1)
    M = transversal(p, [L0, L1])
    assert rows(M) == [[1, 1, 0, 0], [0, 0, 1, 1]]
    assert oracles.transversals(p, [L0, L1]) == [M]
    assert transversal(p, [LinSubspace.full(F5, 3)]) == span([p])
    with pytest.raises(NotGeneral):
        transversal(pt(F5, 1, 4, 0, 0), [L0, L1])
    with pytest.raises(BadDimensionSum):
        transversal(p, [sub(F5, (1, 0, 0, 0)), L1])
    with pytest.raises(NotSpanning):
        transversal(p, [L0, sub(F5, (1, 0, 0, 0), (0, 0, 1, 0))])


def _random_config(rng, ctx, N, parts):
    A = random_invertible(rng, ctx, N + 1)
    Ls, i = [], 0
    for k in parts:
        Ls.append(LinSubspace.from_rows(ctx, A[i:i + k]))
        i += k
    while True:
        p = random_point(rng, ctx, N)
        if is_general_for(p, Ls, len(Ls) - 1):
            return p, Ls


@pytest.mark.parametrize("q,N,parts", [(2, 3, (2, 2)), (3, 3, (2, 2)), (2, 4, (2, 2, 1)), (3, 4, (3, 2)), (2, 5, (2, 2, 2)), (2, 5, (3, 3)), (3, 2, (1, 1, 1))])
def test_transversal_matches_exhaustive_oracle(q, N, parts):
    ctx = make_context(q)
    rng = random.Random(q * 100 + N)
    for _ in range(4):
        p, Ls = _random_config(rng, ctx, N, parts)
        M = transversal(p, Ls)
        assert oracles.transversals(p, Ls) == [M]
        assert M.dim == len(Ls) - 1 and M.contains(p)
        assert all(meet(M, L) is not None for L in Ls)


def test_transversal_over_extension_field():
    F4 = make_context(2, 2)
    rng = random.Random(3)
    for _ in range(3):
        p, Ls = _random_config(rng, F4, 3, (2, 2))
        assert oracles.transversals(p, Ls) == [transversal(p, Ls)]


def test_segre_examples():
    assert segre(pt(F7, 1, 2), pt(F7, 1, 3)) == pt(F7, 1, 3, 2, 6)
    assert segre(pt(F7, 1, 0), pt(F7, 1, 0)) == pt(F7, 1, 0, 0, 0)


def test_veronese_examples():
    x = pt(F5, 1, 2, 3)
    assert veronese(x, 1) == x
    assert veronese(pt(F5, 1, 2), 2) == pt(F5, 1, 2, 4)
    assert veronese(pt(F5, 0, 1), 3) == pt(F5, 0, 0, 0, 1)


def test_monomial_order_is_graded_lex():
    assert monomials(3, 2) == ((2, 0, 0), (1, 1, 0), (1, 0, 1), (0, 2, 0), (0, 1, 1), (0, 0, 2))
    assert len(monomials(4, 3)) == comb(6, 3)


def _form(ctx, nvars, r, mon):
    return [ctx.one if e == mon else ctx.zero for e in monomials(nvars, r)]


def test_restricted_form_space_examples():
    s0 = _form(F7, 2, 2, (2, 0))
    s1 = _form(F7, 2, 2, (2, 0))  # x_2^2 in the frame of L1
    A, B = sub(F7, (1, 0, 0, 0), (0, 1, 0, 0)), sub(F7, (0, 0, 1, 0), (0, 0, 0, 1))
    W = restricted_form_space(F7, 3, 2, [(A, s0), (B, s1)])
    assert W.dim == 6
    assert restricted_form_space(F7, 3, 2, []).dim == 10
    H = sub(F7, (1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0))
    assert restricted_form_space(F7, 3, 1, [(H, _form(F7, 3, 1, (1, 0, 0)))]).dim == 2
    with pytest.raises(DegenerateConstraint):
        restricted_form_space(F7, 3, 2, [(A, [F7.zero] * 3)])
    # soundness: each basis form restricts to a multiple of s_i
    for L, s in ((A, s0), (B, s1)):
        R = restriction_matrix(F7, 3, 2, L)
        for w in W.basis:
            res = [sum((a * b for a, b in zip(row, w)), F7.zero) for row in R]
            assert linalg.rank(F7, [res, s]) <= 1
    y = apply_forms(W, pt(F7, 1, 1, 1, 1))
    assert y.N == 5
    with pytest.raises(IndeterminacyLocus):
        apply_forms(W, pt(F7, 0, 1, 0, 0))


def test_apply_full_space_is_veronese():
    W = restricted_form_space(F5, 2, 2, [])
    for x in points(F5, 2):
        assert apply_forms(W, x) == veronese(x, 2)


def test_grassmannian_big_cell():
    F3 = make_context(3)
    L = sub(F3, (1, 0, 1), (0, 1, 1))
    assert [c.value for c in grass_big_cell(L)] == [1, 1]
    assert grass_from_cell(F3, [F3(1), F3(1)], 1, 2) == L
    assert grass_from_cell(F3, [F3.zero] * 4, 1, 3) == sub(F3, (1, 0, 0, 0), (0, 1, 0, 0))
    with pytest.raises(NotInBigCell):
        grass_big_cell(sub(F3, (1, 0, 0), (0, 0, 1)))


def test_bundle_fiber_examples():
    F3 = make_context(3)
    full = LinSubspace.full(F3, 2)
    assert bundle_fiber_coords(full, pt(F3, 1, 0, 0)) == ()
    L = sub(F5, (1, 0, 0, 1), (0, 1, 0, 1))
    p = pt(F5, 1, 0, 0, 1)
    c = bundle_fiber_coords(L, p)
    assert [x.value for x in c] == [0, 1]
    assert c == grass_big_cell(LinSubspace.from_rows(F5, [project_from(span([p]), pt(F5, 0, 1, 0, 1)).coords]))
    assert bundle_from_fiber(p, c, 1) == L
    with pytest.raises(PointNotOnSubspace):
        bundle_fiber_coords(L, pt(F5, 0, 0, 1, 0))


def test_frame_roundtrip():
    L = sub(F5, (1, 0, 2, 0), (0, 1, 3, 4))
    for y in points(F5, 1):
        x = from_frame(L, y)
        assert L.contains(x) and frame_coords(L, x) == y


# -- properties ---------------------------------------------------------------

ctxs = st.sampled_from([make_context(2, 2), make_context(3), make_context(5), make_context(7)])


@st.composite
def point_pair(draw, max_dim=3):
    ctx = draw(ctxs)
    n, m = draw(st.integers(0, max_dim)), draw(st.integers(0, max_dim))
    seed = draw(st.integers(0, 2**32))
    rng = random.Random(seed)
    lam = ctx.from_int(draw(st.integers(1, ctx.order - 1)))
    return ctx, random_point(rng, ctx, n), random_point(rng, ctx, m), lam


@settings(max_examples=150)
@given(point_pair())
def test_segre_veronese_scale_invariance(data):
    ctx, x, y, lam = data
    xs = ProjPoint(ctx, tuple(lam * c for c in x.coords))
    assert segre(xs, y) == segre(x, y)
    assert veronese(xs, 2) == veronese(x, 2)
    z = segre(x, y)
    assert z.N == (x.N + 1) * (y.N + 1) - 1


@st.composite
def subspace_pair(draw):
    ctx = draw(ctxs)
    N = draw(st.integers(1, 4))
    rng = random.Random(draw(st.integers(0, 2**32)))
    k1, k2 = draw(st.integers(1, N + 1)), draw(st.integers(1, N + 1))
    A = LinSubspace.from_rows(ctx, [random_point(rng, ctx, N).coords for _ in range(k1)])
    B = LinSubspace.from_rows(ctx, [random_point(rng, ctx, N).coords for _ in range(k2)])
    return A, B


@settings(max_examples=150)
@given(subspace_pair())
def test_span_meet_dimension_formula(data):
    A, B = data
    S = span([A, B])
    M = meet(A, B)
    dm = -1 if M is None else M.dim
    assert A.dim + B.dim == S.dim + dm
    assert span([B, A]) == S
    # canonical: rebuilding from a shuffled basis gives identical rows
    assert LinSubspace.from_rows(A.ctx, list(reversed(A.basis))) == A
    if M is not None:
        assert all(A.contains(from_frame(M, y)) and B.contains(from_frame(M, y)) for y in points(M.ctx, M.dim) if M.dim <= 1)
