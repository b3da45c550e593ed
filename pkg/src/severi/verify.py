"""Seeded verification harnesses behind ``sb verify``.

Sampling uses ``random.Random(seed)``, i.e. CPython's MT19937 Mersenne
Twister. Each harness returns a JSON-ready report whose content depends only
on its arguments; no timings or other run-dependent data go into it.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, gcd

from . import brauer as br
from . import linalg, oracles
from .errors import ConfigError, GateError
from .fields import FieldContext, frobenius, make_context, prime_power
from .projective import (
    LinSubspace,
    ProjPoint,
    _poly_mul,
    is_general_for,
    monomials,
    restricted_form_space,
    restriction_matrix,
    segre,
    span,
    substitute,
    transversal,
)
from .weil import (
    ConjugateTuple,
    extension_generator,
    make_thm2_config,
    prop14_forward,
    prop14_inverse,
    thm2_forward,
    thm2_inverse,
)

SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)


@dataclass
class RunConfig:
    seed: int = 0
    trials: int = 100
    q: int | None = None
    n: int | None = None
    m: int | None = None
    N: int | None = None
    r: int | None = None
    out: str | None = None
    extra: dict = field(default_factory=dict)


# -- sampling ------------------------------------------------------------------

def random_point(rng: random.Random, ctx: FieldContext, N: int, e: int | None = None) -> ProjPoint:
    elems = list(ctx.elements()) if e is None else ctx.subfield(e)
    while True:
        coords = [rng.choice(elems) for _ in range(N + 1)]
        if any(coords):
            return ProjPoint(ctx, tuple(coords))


def random_invertible(rng: random.Random, ctx: FieldContext, n: int, e: int | None = None):
    elems = list(ctx.elements()) if e is None else ctx.subfield(e)
    while True:
        rows = [tuple(rng.choice(elems) for _ in range(n)) for _ in range(n)]
        if linalg.determinant(ctx, rows):
            return rows


def random_class(rng: random.Random, max_period: int = 60) -> br.BrauerClass:
    P = rng.randint(1, max_period)
    places = rng.sample(SMALL_PRIMES, rng.randint(1, 4))
    inv = {pl: Fraction(rng.randrange(P), P) for pl in places[:-1]}
    if P % 2 == 0 and rng.random() < 0.5:
        inv[br.REAL] = Fraction(1, 2)
    inv[places[-1]] = -sum(inv.values(), Fraction(0)) % 1
    return br.make_class(inv)


def cyclic_class(N: int) -> br.BrauerClass:
    """A class of period exactly N: invariants 1/N at 2 and -1/N at 3."""
    return br.make_class({2: Fraction(1, N), 3: Fraction(-1, N)})


def _field(q: int) -> tuple[FieldContext, int]:
    p, e = prime_power(q)
    return make_context(p, e), e


# -- span lemma --------------------------------------------------------------------

def default_parts(N: int) -> tuple[int, ...]:
    """Sizes 1 + dim L_i: pairs (lines), plus a point if N + 1 is odd."""
    parts = [2] * ((N + 1) // 2)
    if (N + 1) % 2:
        parts.append(1)
    return tuple(parts)


def verify_span(q: int, N: int, trials: int, seed: int, parts: tuple[int, ...] | None = None) -> dict:
    ctx, e = _field(q)
    parts = parts or default_parts(N)
    if sum(parts) != N + 1 or min(parts) < 1:
        raise ConfigError(f"parts {parts} do not sum to N + 1 = {N + 1}")
    if q ** N > 10**6:
        raise ConfigError("exhaustive oracle limited to q^N <= 10^6")
    rng = random.Random(seed)
    agree = unique = rejected = 0
    for _ in range(trials):
        rows = random_invertible(rng, ctx, N + 1)
        Ls, i = [], 0
        for k in parts:
            Ls.append(LinSubspace.from_rows(ctx, rows[i:i + k]))
            i += k
        n = len(Ls) - 1
        while True:
            p = random_point(rng, ctx, N)
            if is_general_for(p, Ls, n):
                break
            rejected += 1
        M = transversal(p, Ls)
        found = oracles.transversals(p, Ls)
        unique += len(found) == 1
        agree += found == [M]
    return {
        "target": "span",
        "q": q,
        "N": N,
        "parts": list(parts),
        "seed": seed,
        "trials": trials,
        "agreements": agree,
        "unique": unique,
        "non_general_samples_rejected": rejected,
        "ok": agree == trials and unique == trials,
    }


# -- Weil restriction ------------------------------------------------------------

def verify_prop14(q: int, n: int, m: int, trials: int, seed: int) -> dict:
    p, base_e = prime_power(q)
    if m < 1 or m >= n:
        raise ConfigError(f"need 1 <= m < n, got n = {n}, m = {m}")
    ctx = make_context(p, base_e * (m + 1))
    rng = random.Random(seed)
    gates: Counter = Counter()
    passed = roundtrip = 0
    for _ in range(trials):
        t = ConjugateTuple(ctx, base_e, m + 1, random_point(rng, ctx, n))
        try:
            x, a = prop14_forward(t)
        except GateError as exc:
            gates[exc.gate] += 1
            continue
        passed += 1
        back = prop14_inverse(x, a, m + 1, base_e)
        if back == t and prop14_forward(back) == (x, a) and len(a) == m * n:
            roundtrip += 1
    failed = trials - passed
    return {
        "target": "prop14",
        "q": q,
        "n": n,
        "m": m,
        "seed": seed,
        "trials": trials,
        "gate_passing": passed,
        "roundtrips": roundtrip,
        "gate_failures": dict(sorted(gates.items())),
        "gate_failure_rate": round(failed / trials, 6) if trials else 0.0,
        "ok": roundtrip == passed,
    }


def verify_thm2(q: int, n: int, m: int, trials: int, seed: int) -> dict:
    cfg = make_thm2_config(q, n, m)
    rng = random.Random(seed)
    gates: Counter = Counter()
    passed = roundtrip = bookkeeping = 0
    for _ in range(trials):
        x = random_point(rng, cfg.ctx, cfg.N, cfg.base_e)
        try:
            x1, a, x2 = thm2_forward(x, cfg)
        except GateError as exc:
            gates[f"{exc.stage}:{exc.gate}"] += 1
            continue
        passed += 1
        bookkeeping += x1.N + len(a) + x2.N == cfg.N
        back = thm2_inverse(x1, a, x2, cfg)
        if back == x and thm2_forward(back, cfg) == (x1, a, x2):
            roundtrip += 1
    return {
        "target": "thm2",
        "q": q,
        "n": n,
        "m": m,
        "N": cfg.N,
        "seed": seed,
        "trials": trials,
        "gate_passing": passed,
        "roundtrips": roundtrip,
        "dimension_bookkeeping": bookkeeping,
        "gate_failures": dict(sorted(gates.items())),
        "ok": roundtrip == passed and bookkeeping == passed,
    }


def thm2_gate_census(q: int, n: int, m: int) -> dict:
    """Exhaustive count of gate failures of thm2_forward over P^N(F_q)."""
    from .projective import points

    cfg = make_thm2_config(q, n, m)
    total, gates = 0, Counter()
    for x in points(cfg.ctx, cfg.N, cfg.base_e):
        total += 1
        try:
            thm2_forward(x, cfg)
        except GateError as exc:
            gates[exc.gate] += 1
    return {"total": total, "failed": sum(gates.values()), "gates": dict(sorted(gates.items()))}


# -- forms on the Segre configuration ------------------------------------------------

def norm_form(ctx: FieldContext, base_e: int, m: int) -> list:
    """Norm of F_{q^{m+1}}/F_q in the basis 1, theta, ..., theta^m: anisotropic, degree m+1."""
    theta = extension_generator(ctx, base_e, m + 1)
    k = m + 1
    poly = {(0,) * k: ctx.one}
    for i in range(k):
        conj = frobenius(theta, base_e * i)
        linear = {tuple(1 if a == j else 0 for a in range(k)): conj**j for j in range(k)}
        poly = _poly_mul(ctx, poly, linear)
    return [poly.get(mon, ctx.zero) for mon in monomials(k, k)]


def _form_power(ctx: FieldContext, form: list, nvars: int, deg: int, t: int) -> list:
    base = {mon: c for mon, c in zip(monomials(nvars, deg), form) if c}
    acc = {(0,) * nvars: ctx.one}
    for _ in range(t):
        acc = _poly_mul(ctx, acc, base)
    return [acc.get(mon, ctx.zero) for mon in monomials(nvars, deg * t)]


def segre_configuration(ctx: FieldContext, n: int, m: int) -> list[LinSubspace]:
    """L_i = segre({e_i} x P^m) for the coordinate points e_0..e_n of P^n."""
    def unit(k, i):
        return ProjPoint(ctx, tuple(ctx.one if j == i else ctx.zero for j in range(k + 1)))

    return [span([segre(unit(n, i), unit(m, j)) for j in range(m + 1)]) for i in range(n + 1)]


def lemma17_setup(q: int, n: int, m: int, r: int):
    p, base_e = prime_power(q)
    if r < 1 or r % (m + 1):
        raise ConfigError(f"r = {r} must be a positive multiple of m + 1 = {m + 1}")
    ctx = make_context(p, base_e * (m + 1))
    N = (n + 1) * (m + 1) - 1
    s = _form_power(ctx, norm_form(ctx, base_e, m), m + 1, m + 1, r // (m + 1))
    Ls = segre_configuration(ctx, n, m)
    W = restricted_form_space(ctx, N, r, [(L, s) for L in Ls])
    return ctx, base_e, Ls, s, W


def slice_rank(W, n: int, y: ProjPoint) -> int:
    """Rank of the forms of W pulled back along x -> segre(x, y)."""
    ctx = W.ctx
    B = [segre(ProjPoint(ctx, tuple(ctx.one if j == i else ctx.zero for j in range(n + 1))), y).coords for i in range(n + 1)]
    return linalg.rank(ctx, [substitute(ctx, w, W.r, B) for w in W.basis])


def verify_lemma17(q: int, n: int, m: int, r: int, trials: int, seed: int) -> dict:
    ctx, base_e, Ls, s, W = lemma17_setup(q, n, m, r)
    N = (n + 1) * (m + 1) - 1
    expected_dim = comb(N + r, r) - (n + 1) * (comb(m + r, r) - 1)
    sound = 0
    for w in W.basis:
        ok = True
        for L in Ls:
            R = restriction_matrix(ctx, N, r, L)
            restricted = [sum((a * b for a, b in zip(row, w)), ctx.zero) for row in R]
            ok &= linalg.rank(ctx, [restricted, s]) <= 1
        sound += ok
    rng = random.Random(seed)
    target = comb(n + r, r)
    full = 0
    ranks = []
    for _ in range(trials):
        y = random_point(rng, ctx, m, base_e)
        rk = slice_rank(W, n, y)
        ranks.append(rk)
        full += rk == target
    return {
        "target": "lemma17",
        "q": q,
        "n": n,
        "m": m,
        "r": r,
        "seed": seed,
        "trials": trials,
        "dim_W": W.dim,
        "expected_dim_W": expected_dim,
        "sound_basis_elements": sound,
        "veronese_rank": target,
        "full_rank_slices": full,
        "ok": W.dim == expected_dim and sound == W.dim and full == trials,
    }


# -- Brauer group ------------------------------------------------------------------

def check_class_laws(a: br.BrauerClass, b: br.BrauerClass, c: br.BrauerClass, k: int) -> dict[str, bool]:
    results = {}
    outs = [br.tensor(a, b), br.inverse(a), br.power(a, k)]
    results["reciprocity"] = all(oracles.reciprocity_holds(o) for o in outs)
    results["associativity"] = br.tensor(br.tensor(a, b), c) == br.tensor(a, br.tensor(b, c))
    results["identity"] = br.tensor(a, br.trivial()) == a
    results["inverse"] = br.tensor(a, br.inverse(a)).is_trivial
    results["period_oracle"] = br.period(a) == oracles.order_by_addition(a)
    parts = br.primary_decompose(a)
    recombined = br.trivial()
    for part in parts:
        recombined = br.tensor(recombined, part)
    periods = [br.period(part) for part in parts]
    prime_powers = all(len(br.prime_factors(x)) == 1 for x in periods)
    coprime = all(gcd(x, y) == 1 for i, x in enumerate(periods) for y in periods[i + 1:])
    product = 1
    for x in periods:
        product *= x
    results["primary_decomposition"] = (
        recombined == a
        and prime_powers
        and coprime
        and product == br.period(a)
        and all(br.in_subgroup(part, a) for part in parts)
    )
    return results


def verify_brauer_laws(trials: int, seed: int, max_period: int = 60) -> dict:
    rng = random.Random(seed)
    passes: Counter = Counter()
    for _ in range(trials):
        a, b, c = (random_class(rng, max_period) for _ in range(3))
        k = rng.randint(-70, 70)
        for name, ok in check_class_laws(a, b, c, k).items():
            passes[name] += ok
    return {
        "target": "brauer-laws",
        "seed": seed,
        "trials": trials,
        "max_period": max_period,
        "passes": dict(sorted(passes.items())),
        "ok": all(v == trials for v in passes.values()),
    }


# -- split-case realisation of certificates -----------------------------------------

def verify_split(q: int, d: int, trials: int, seed: int) -> dict:
    from . import split
    from .certificates import check_certificate

    ctx, e = _field(q)
    rng = random.Random(seed)
    certs = split.split_examples(d)
    valid = sum(bool(check_certificate(c)) for c in certs)
    roundtrips = off_chart = 0
    for i in range(trials):
        cert = certs[i % len(certs)]
        pts = [random_point(rng, ctx, f.dim) for f in cert.start]
        try:
            state = split.forward(cert, pts)
        except GateError:
            off_chart += 1
            continue
        end_ok = sorted(map(repr, (f for f, _ in state))) == sorted(map(repr, cert.end))
        back = split.backward(cert, state)
        roundtrips += end_ok and [x for _, x in back] == pts
    return {
        "target": "split",
        "q": q,
        "d": d,
        "seed": seed,
        "trials": trials,
        "certificates": len(certs),
        "valid_certificates": valid,
        "off_chart": off_chart,
        "roundtrips": roundtrips,
        "ok": valid == len(certs) and roundtrips == trials - off_chart,
    }
