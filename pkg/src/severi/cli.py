"""The ``sb`` command.

Exit codes: 0 birational / valid / all checks pass, 1 not birational /
invalid / some check failed, 2 unknown, 3 input or configuration error
(diagnostic on stderr, nothing on stdout).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import brauer as br
from . import verify
from .certificates import check_certificate_json
from .errors import SeveriError
from .fields import FieldContext, make_context, prime_power
from .projective import LinSubspace, ProjPoint, restricted_form_space, segre, transversal, veronese

EXIT_OK, EXIT_NO, EXIT_UNKNOWN, EXIT_INPUT = 0, 1, 2, 3


class InputError(Exception):
    pass


def load_json(arg: str):
    """Inline JSON, or the path of a file containing JSON."""
    text = arg
    if not arg.lstrip().startswith(("{", "[")) and Path(arg).is_file():
        text = Path(arg).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"not valid JSON or a readable file: {arg!r} ({exc.msg})") from exc


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True)


def emit(obj, out: str | None = None) -> None:
    text = dumps(obj)
    if out:
        Path(out).write_text(text + "\n")
    print(text)


# -- brauer ------------------------------------------------------------------------

def _cls(arg):
    return br.BrauerClass.from_json(load_json(arg))


def _var(arg):
    return br.SBVariety.from_json(load_json(arg))


def cmd_brauer(args) -> int:
    sub = args.sub
    if sub == "tensor":
        emit(br.tensor(_cls(args.a), _cls(args.b)).to_json(), args.out)
        return EXIT_OK
    if sub == "period":
        a = _cls(args.a)
        emit({"period": br.period(a), "index": br.index(a), "min_dimension": br.min_dimension(a)}, args.out)
        return EXIT_OK
    if sub == "decompose":
        emit({"parts": [p.to_json() for p in br.primary_decompose(_cls(args.a))]}, args.out)
        return EXIT_OK
    if sub == "same-subgroup":
        same = br.same_subgroup(_cls(args.a), _cls(args.b))
        emit({"same_subgroup": same}, args.out)
        return EXIT_OK if same else EXIT_NO
    if sub == "decide":
        verdict = br.decide_birational(_var(args.a), _var(args.b))
        if isinstance(verdict, br.Birational):
            cert = verdict.certificate.to_json()
            if args.out:
                Path(args.out).write_text(dumps(cert) + "\n")
            print(dumps({"verdict": "birational", "steps": len(cert["steps"]), "certificate": cert}))
            return EXIT_OK
        if isinstance(verdict, br.NotBirational):
            print(dumps({"verdict": "not-birational", "reason": verdict.reason}))
            return EXIT_NO
        print(dumps({"verdict": "unknown", "reason": verdict.reason}))
        return EXIT_UNKNOWN
    if sub == "check-cert":
        res = check_certificate_json(load_json(args.a))
        if res:
            emit({"valid": True}, args.out)
            return EXIT_OK
        emit({"valid": False, "step": res.step, "reason": res.reason}, args.out)
        return EXIT_NO
    raise AssertionError(sub)


# -- geometry ----------------------------------------------------------------------

def _field(doc: dict) -> FieldContext:
    if "field" in doc:
        return FieldContext.from_json(doc["field"])
    if "q" in doc:
        p, e = prime_power(int(doc["q"]))
        return make_context(p, e)
    raise InputError("input needs 'q' or 'field'")


def _get(doc: dict, key: str):
    if key not in doc:
        raise InputError(f"input is missing {key!r}")
    return doc[key]


def cmd_geom(args) -> int:
    doc = load_json(args.input)
    if not isinstance(doc, dict):
        raise InputError("geometry input must be a JSON object")
    ctx = _field(doc)
    sub = args.sub
    if sub == "transversal":
        p = ProjPoint.from_json(ctx, _get(doc, "point"))
        Ls = [LinSubspace.from_json(ctx, rows) for rows in _get(doc, "subspaces")]
        M = transversal(p, Ls)
        emit({"field": ctx.to_json(), "transversal": M.to_json()}, args.out)
    elif sub == "segre":
        x = ProjPoint.from_json(ctx, _get(doc, "x"))
        y = ProjPoint.from_json(ctx, _get(doc, "y"))
        emit({"field": ctx.to_json(), "point": segre(x, y).to_json()}, args.out)
    elif sub == "veronese":
        x = ProjPoint.from_json(ctx, _get(doc, "x"))
        r = _get(doc, "r")
        if not isinstance(r, int) or r < 1:
            raise InputError("r must be a positive integer")
        emit({"field": ctx.to_json(), "point": veronese(x, r).to_json()}, args.out)
    elif sub == "forms":
        N, r = _get(doc, "N"), _get(doc, "r")
        if not all(isinstance(v, int) and v >= 0 for v in (N, r)):
            raise InputError("N and r must be non-negative integers")
        cons = []
        for item in _get(doc, "constraints"):
            L = LinSubspace.from_json(ctx, _get(item, "subspace"))
            cons.append((L, [ctx(c) for c in _get(item, "form")]))
        W = restricted_form_space(ctx, N, r, cons)
        emit({"field": ctx.to_json(), "dim": W.dim, **W.to_json()}, args.out)
    else:
        raise AssertionError(sub)
    return EXIT_OK


# -- verification ------------------------------------------------------------------

VERIFY_DEFAULTS = {
    "span": dict(q=5, N=3),
    "prop14": dict(q=3, n=2, m=1),
    "thm2": dict(q=3, n=2, m=1),
    "lemma17": dict(q=7, n=1, m=1),
    "brauer-laws": dict(),
    "split": dict(q=5, N=4),
}


def run_config(args) -> verify.RunConfig:
    d = VERIFY_DEFAULTS[args.target]
    pick = lambda name: getattr(args, name) if getattr(args, name) is not None else d.get(name)
    return verify.RunConfig(
        seed=args.seed,
        trials=args.trials,
        q=pick("q"),
        n=pick("n"),
        m=pick("m"),
        N=pick("N"),
        r=args.r,
        out=args.out,
    )


def cmd_verify(args) -> int:
    cfg = run_config(args)
    t = args.target
    if cfg.trials < 0:
        raise InputError("--trials must be non-negative")
    if t == "span":
        report = verify.verify_span(cfg.q, cfg.N, cfg.trials, cfg.seed)
    elif t == "prop14":
        report = verify.verify_prop14(cfg.q, cfg.n, cfg.m, cfg.trials, cfg.seed)
    elif t == "thm2":
        report = verify.verify_thm2(cfg.q, cfg.n, cfg.m, cfg.trials, cfg.seed)
    elif t == "lemma17":
        r = cfg.r if cfg.r is not None else cfg.m + 1
        report = verify.verify_lemma17(cfg.q, cfg.n, cfg.m, r, cfg.trials, cfg.seed)
    elif t == "brauer-laws":
        report = verify.verify_brauer_laws(cfg.trials, cfg.seed)
    elif t == "split":
        report = verify.verify_split(cfg.q, cfg.N, cfg.trials, cfg.seed)
    else:
        raise AssertionError(t)
    emit(report, cfg.out)
    return EXIT_OK if report["ok"] else EXIT_NO


# -- parser ------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sb", description="Severi-Brauer birationality tools")
    top = ap.add_subparsers(dest="group", required=True)

    b = top.add_parser("brauer", help="Brauer classes, decisions and certificates")
    bs = b.add_subparsers(dest="sub", required=True)
    for name, nargs, helptext in (
        ("tensor", 2, "tensor product of two classes"),
        ("period", 1, "period, index and minimal dimension"),
        ("decompose", 1, "primary decomposition"),
        ("same-subgroup", 2, "do the classes generate the same subgroup (exit 0 yes, 1 no)"),
        ("decide", 2, "decide birationality of two SB varieties"),
        ("check-cert", 1, "check a certificate (exit 0 valid, 1 invalid)"),
    ):
        p = bs.add_parser(name, help=helptext)
        p.add_argument("a", help="JSON text or path")
        if nargs == 2:
            p.add_argument("b", help="JSON text or path")
        p.add_argument("--out", help="also write the result (the certificate for decide) here")

    g = top.add_parser("geom", help="projective geometry over finite fields")
    gs = g.add_subparsers(dest="sub", required=True)
    for name in ("transversal", "segre", "veronese", "forms"):
        p = gs.add_parser(name)
        p.add_argument("input", help="JSON text or path")
        p.add_argument("--out")

    v = top.add_parser("verify", help="seeded property suites")
    v.add_argument("target", choices=sorted(VERIFY_DEFAULTS))
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--trials", type=int, default=100)
    for flag in ("q", "n", "m", "N", "r"):
        v.add_argument(f"--{flag}", type=int)
    v.add_argument("--out")
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    handler = {"brauer": cmd_brauer, "geom": cmd_geom, "verify": cmd_verify}[args.group]
    try:
        return handler(args)
    except (SeveriError, InputError, OSError, ValueError, TypeError, KeyError) as exc:
        print(f"sb: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
