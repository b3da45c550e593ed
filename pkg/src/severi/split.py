"""Explicit maps realising certificates whose classes are all trivial.

In the split case every factor is a projective space over F_q and each move
has a concrete birational map on affine charts. Replaying a certificate on a
sampled point and then undoing it must return the point.
"""

from __future__ import annotations

from typing import Sequence

from .brauer import SBVariety, projective_space
from .certificates import Certificate, Factor, TensorFactor, check_certificate, step
from .errors import NotApplicable, OutsideChart
from .fields import FieldContext
from .projective import ProjPoint

State = list[tuple[Factor, ProjPoint]]


def _require_split(cert: Certificate) -> None:
    def split(f) -> bool:
        if isinstance(f, TensorFactor):
            return split(f.left) and split(f.right)
        return f.cls.is_trivial

    for f in (*cert.start, *cert.end, *(g for s in cert.steps for g in (*s.consumed, *s.produced))):
        if not split(f):
            raise NotApplicable("certificate involves a nontrivial class")


def _affine(x: ProjPoint) -> list:
    if not x.coords[0]:
        raise OutsideChart("point lies off the chart x_0 != 0")
    return list(x.coords[1:])  # canonical form already has x_0 = 1


def _point(ctx: FieldContext, affine: Sequence) -> ProjPoint:
    return ProjPoint(ctx, (ctx.one, *affine))


def _move(kind: str, produced: Sequence[Factor], pts: list[ProjPoint]) -> list[ProjPoint]:
    ctx = pts[0].ctx
    if kind == "SplitProj":
        a = produced[0].dim
        v = _affine(pts[0])
        return [_point(ctx, v[:a]), _point(ctx, v[a:])]
    if kind == "MergeProj":
        return [_point(ctx, _affine(pts[0]) + _affine(pts[1]))]
    if kind == "MinReduce":
        return [_point(ctx, []), pts[0]]
    if kind == "MinExpand":
        return [pts[1]]
    if kind in ("StableSwap", "IsoReplace", "PrimarySplit", "PrimaryMerge"):
        return list(pts)
    if kind == "TensorExpand":
        return [_point(ctx, [])] * 2 + [pts[0]]
    if kind == "TensorContract":
        return [pts[2]]
    raise NotApplicable(f"no split realisation for {kind}")


def _inverse_kind(kind: str) -> str:
    pairs = {
        "SplitProj": "MergeProj", "MinReduce": "MinExpand",
        "TensorExpand": "TensorContract", "PrimarySplit": "PrimaryMerge",
    }
    pairs.update({v: k for k, v in pairs.items()})
    return pairs.get(kind, kind)


def _plan(cert: Certificate) -> list[list[int]]:
    """For each move, the list positions its consumed factors are removed from.

    Matching depends only on the factors, so the plan is fixed by the
    certificate and the backward replay can undo it position by position.
    """
    names = list(cert.start)
    plan = []
    for s in cert.steps:
        idx = []
        for f in s.consumed:
            if f not in names:
                raise NotApplicable("consumed factor not present")
            i = names.index(f)
            idx.append(i)
            del names[i]
        names.extend(s.produced)
        plan.append(idx)
    return plan


def forward(cert: Certificate, points: Sequence[ProjPoint]) -> State:
    _require_split(cert)
    state = list(zip(cert.start, points))
    for s, idx in zip(cert.steps, _plan(cert)):
        pts = [state.pop(i)[1] for i in idx]
        state.extend(zip(s.produced, _move(s.kind, s.produced, pts)))
    return state


def backward(cert: Certificate, state: State) -> State:
    _require_split(cert)
    state = list(state)
    for s, idx in reversed(list(zip(cert.steps, _plan(cert)))):
        k = len(s.produced)
        pts = [x for _, x in state[len(state) - k:]]
        del state[len(state) - k:]
        back = _move(_inverse_kind(s.kind), s.consumed, pts)
        for i, f, x in reversed(list(zip(idx, s.consumed, back))):
            state.insert(i, (f, x))
    return state


def split_chain(d: int, cuts: Sequence[int]) -> Certificate:
    """P^d split into pieces of the given dimensions, then merged back in reverse order.

    The first piece is swapped against the last (both trivial) on the way.
    """
    assert sum(cuts) == d and all(c >= 1 for c in cuts)
    steps, rest = [], d
    pieces = []
    for c in cuts[:-1]:
        steps.append(step("SplitProj", [projective_space(rest)], [projective_space(c), projective_space(rest - c)]))
        pieces.append(c)
        rest -= c
    pieces.append(rest)
    first, last = projective_space(pieces[0]), projective_space(pieces[-1])
    if len(pieces) > 1 and pieces[-1] >= pieces[0]:
        steps.append(step("StableSwap", [first, last], [first, last]))
    acc = pieces[-1]
    for c in reversed(pieces[:-1]):
        steps.append(step("MergeProj", [projective_space(c), projective_space(acc)], [projective_space(c + acc)]))
        acc += c
    cert = Certificate((projective_space(d),), (projective_space(d),), tuple(steps))
    assert check_certificate(cert)
    return cert


def split_examples(d: int) -> list[Certificate]:
    from .certificates import nonminimal_route

    P = SBVariety(projective_space(d).cls, d)
    out = [nonminimal_route(P, P)]
    if d >= 2:
        out.append(split_chain(d, [1] * d))
        out.append(split_chain(d, [d - 1, 1]))
    return out
