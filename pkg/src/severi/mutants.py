"""A fixed suite of perturbed certificates, each breaking one side condition.

Every entry records the step index and reason the checker must report.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction

from .brauer import SBVariety, make_class, power, projective_space, trivial
from .certificates import Certificate, CertStep, TensorFactor, build_certificate, nonminimal_route, step


@dataclass(frozen=True)
class Mutant:
    name: str
    cert: Certificate
    step: int
    reason: str


def period6_pair() -> tuple[SBVariety, SBVariety]:
    a = make_class({2: Fraction(1, 6), 3: Fraction(5, 6)})
    return SBVariety(a, 5), SBVariety(power(a, 5), 5)


def period3_pair() -> tuple[SBVariety, SBVariety]:
    a = make_class({5: Fraction(1, 3), 7: Fraction(2, 3)})
    return SBVariety(a, 5), SBVariety(power(a, 2), 5)


def _with_step(cert: Certificate, i: int, new: CertStep | None) -> Certificate:
    steps = list(cert.steps)
    if new is None:
        del steps[i]
    else:
        steps[i] = new
    return replace(cert, steps=tuple(steps))


def _params(s: CertStep, **changes) -> CertStep:
    p = dict(s.params)
    for k, v in changes.items():
        if v is None:
            p.pop(k, None)
        else:
            p[k] = v
    return replace(s, params=tuple(sorted(p.items())))


def mutant_suite() -> list[Mutant]:
    P, Q = period6_pair()
    m = build_certificate(P, Q)
    s = m.steps
    P1, P2, extra = s[1].produced
    Q1, Q2, _ = s[4].consumed

    R, S = period3_pair()
    n = nonminimal_route(R, S)
    t = n.steps
    core_r, big = t[0].produced
    core_s = t[2].produced[0]

    out = [
        Mutant("tensor-expand extra dimension", _with_step(m, 1, replace(s[1], produced=(P1, P2, projective_space(3)))), 1, "dimension bookkeeping"),
        Mutant("primary-split coefficient a", _with_step(m, 0, _params(s[0], a=3)), 0, "coefficient congruence"),
        Mutant("primary-split trivial factorization", _with_step(m, 0, _params(s[0], u=1, v=6)), 0, "bad factorization"),
        Mutant("primary-split missing c", _with_step(m, 0, _params(s[0], c=None)), 0, "missing coefficients"),
        Mutant("swap into trivial class", _with_step(m, 2, replace(s[2], produced=(SBVariety(trivial(), Q1.dim), extra))), 2, "subgroup mismatch"),
        Mutant("swap keeps too little projective space", _with_step(m, 3, replace(s[3], produced=(SBVariety(Q2.cls, 3), projective_space(0)))), 3, "projective factor not restored"),
        Mutant("tensor-contract factor order", _with_step(m, 4, replace(s[4], produced=(TensorFactor(Q2, Q1),))), 4, "factor mismatch"),
        Mutant("primary-merge wrong class", _with_step(m, 5, replace(s[5], produced=(P,))), 5, "class mismatch"),
        Mutant("iso-replace across classes", _with_step(m, 6, replace(s[6], produced=(P,))), 6, "class mismatch"),
        Mutant("first swap dropped", _with_step(m, 2, None), 3, "consumed factor not present"),
        Mutant("end product altered", replace(m, end=(P,)), 7, "end product mismatch"),
        Mutant("unknown move", _with_step(m, 2, replace(s[2], kind="Teleport")), 2, "unknown step kind 'Teleport'"),
        Mutant("split replaced by merge", _with_step(m, 0, replace(s[0], kind="PrimaryMerge")), 0, "factor types"),
        Mutant("min-reduce wrong r", _with_step(n, 0, _params(t[0], r=4)), 0, "dimension bookkeeping"),
        Mutant("min-reduce core class", _with_step(n, 0, replace(t[0], produced=(SBVariety(core_s.cls, core_r.dim), big))), 0, "class mismatch"),
        Mutant("swap into different subgroup", _with_step(n, 2, replace(t[2], produced=(SBVariety(trivial(), core_s.dim), t[2].produced[1]))), 2, "subgroup mismatch"),
        Mutant("merge with wrong arity", _with_step(n, 3, replace(t[3], kind="SplitProj")), 3, "arity"),
        Mutant("min-expand missing r", _with_step(n, 4, _params(t[4], r=None)), 4, "dimension bookkeeping"),
        Mutant("start product altered", replace(n, start=(S,)), 0, "consumed factor not present"),
    ]
    # swap against a projective factor smaller than the swapped core
    one, two = projective_space(1), projective_space(2)
    small_swap = Certificate(
        (R,),
        (S,),
        (
            t[0],
            step("SplitProj", [big], [one, two]),
            step("StableSwap", [core_r, one], [core_s, one]),
            step("MergeProj", [one, two], [big]),
            t[4],
        ),
    )
    out.append(Mutant("swap projective factor too small", small_swap, 2, "projective factor too small"))
    return out
