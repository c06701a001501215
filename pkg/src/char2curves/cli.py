"""Command line front end.  Exit codes: 0 ok, 1 violation found, 2 usage error."""
from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from pathlib import Path

from .boxes import ENUMERATION_CAP, check_miracle
from .curves import (
    DegenerateCurveError,
    curve_from_json,
    kill_coefficient,
    make_monic,
    reduce_odd,
)
from .explorer import (
    CountCache,
    classify,
    enumerate_normal_forms,
    forced_zero_indices,
    constraints_satisfiable,
    supersingular_parameter_bound,
    verify_geer,
    verify_thm1,
    verify_thm2,
)
from .slopecert import CertificateQuery, keylemma_check_i, keylemma_check_ii, theorem3_slope
from .twoadic import c_series, c_series_stable, lemma_b, lemma_c, lemma_d, lift_curve, slope_parameter
from .zeta import is_supersingular, l_polynomial, newton_polygon, np1, two_rank

EXHAUSTIVE_CAP = 12


class UsageError(Exception):
    pass


def _emit(obj) -> None:
    print(json.dumps(obj, sort_keys=True, separators=(",", ":")))


def _load_curve(path: str):
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    return curve_from_json(text)


def _odd_form(c):
    return c if c.is_odd_reduced else reduce_odd(c)


def _cache(args):
    return None if args.no_cache else CountCache.from_env()


def _lift(args, c):
    c = make_monic(_odd_form(c), allow_extension=False)
    rng = random.Random(args.seed) if args.seed is not None else None
    return c, lift_curve(c, args.K, rng)


def cmd_np(args) -> int:
    c = _odd_form(_load_curve(args.curve))
    L = l_polynomial(c, cache=_cache(args))
    poly = newton_polygon(L)
    out = {
        "curve": c.to_json(),
        "L": list(L.b),
        "np": poly.to_json(),
        "np1": str(np1(poly)),
        "supersingular": is_supersingular(poly),
        "two_rank": two_rank(poly),
    }
    if c.genus >= 3 and c.is_monic:
        out["theorem3"] = theorem3_slope(c).to_json()
    _emit(out)
    return 0


def cmd_classify(args) -> int:
    if args.ext * args.genus > args.cap:
        raise UsageError(f"e*g = {args.ext * args.genus} exceeds --cap {args.cap}")
    zero = {int(x) for x in args.zero.split(",")} if args.zero else set()
    status = 0
    stream = enumerate_normal_forms(args.genus, args.ext, zero, cap=args.cap)
    for rec in classify(stream, cache=_cache(args)):
        print(rec.line())
        if not rec.consistent:
            status = 1
    return status


def cmd_reduce(args) -> int:
    c = _odd_form(_load_curve(args.curve))
    if args.monic or args.kill is not None:
        c = make_monic(c, allow_extension=args.extend)
    if args.kill is None:
        _emit(c.to_json())
        return 0
    for out in kill_coefficient(c, args.kill, args.searchdeg):
        _emit(out.to_json())
    return 0


def cmd_cseries(args) -> int:
    c, a = _lift(args, _load_curve(args.curve))
    if args.stable:
        s = c_series_stable(a, args.R, method=args.method)
    else:
        if args.N is None:
            raise UsageError("--N is required unless --stable is given")
        s = c_series(a, args.N, args.R, method=args.method)
    for r in range(args.R + 1):
        o = s.ord2(r)
        _emit({"r": r, "residue": list(s.coeff(r)), "ord2": o if o < s.K else f"ge{s.K}"})
    return 0


def cmd_miracle(args) -> int:
    rep = check_miracle(args.d, args.r, cap=args.cap)
    print(rep.line())
    return 0 if rep.passed else 1


def cmd_lemma(args) -> int:
    c, a = _lift(args, _load_curve(args.curve))
    g = c.genus
    h = slope_parameter(g)
    if args.which == "lemma-b":
        R = (1 << (args.b * h + args.bp)) - 1
    else:
        R = (1 << (args.b * h)) - 1
    s = c_series_stable(a, R)
    if args.which == "lemma-b":
        lhs, rhs, ok = lemma_b(s, h, args.b, args.bp)
    elif args.which == "lemma-c":
        lhs, rhs, ok = lemma_c(s, a, h, args.b)
    else:
        if g != (1 << h) - 2:
            raise UsageError(f"lemma-d needs g = 2^h - 2, got g = {g}")
        lhs, rhs, ok = lemma_d(s, a, h, args.b)
    _emit({"lemma": args.which, "g": g, "h": h, "b": args.b, "mod": f"2^{args.b + 1}",
           "lhs": list(lhs), "rhs": list(rhs), "holds": ok})
    return 0 if ok else 1


def cmd_keylemma(args) -> int:
    c, a = _lift(args, _load_curve(args.curve))
    q = CertificateQuery(Fraction(args.lam), args.nmax, args.mmax, n0=args.n0, K=args.K_cert)
    if args.part2:
        if args.n0 is None:
            raise UsageError("--part2 needs --n0")
        rep = keylemma_check_ii(a, q, args.j)
    else:
        rep = keylemma_check_i(a, q)
    _emit(rep.to_json())
    return 1 if rep.verdict == "violation-found" else 0


def _sweep(rep) -> int:
    print(rep.line())
    return 0 if rep.passed else 1


def cmd_geer(args) -> int:
    return _sweep(verify_geer(args.n, args.ext, args.samples, args.seed))


def cmd_thm1(args) -> int:
    return _sweep(verify_thm1(args.ext, cache=_cache(args)))


def cmd_thm2(args) -> int:
    return _sweep(verify_thm2(args.ext, cache=_cache(args)))


def cmd_bound(args) -> int:
    g = args.genus
    _emit({
        "genus": g,
        "bound": supersingular_parameter_bound(g),
        "forced_zero": sorted(forced_zero_indices(g)),
        "satisfiable": constraints_satisfiable(g),
    })
    return 0


def _add_lift_args(p, K=8):
    p.add_argument("--K", type=int, default=K, help="2-adic precision of the lift")
    p.add_argument("--seed", type=int, default=None,
                   help="randomise the higher digits of the lift with this seed")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="char2curves",
        description="Newton polygons and 2-adic invariants of y^2 - y = f(x) over GF(2^e).",
    )
    ap.add_argument("--no-cache", action="store_true",
                    help="ignore the count cache even if $CHAR2CURVES_CACHE is set")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("np", help="L-polynomial and Newton polygon of one curve")
    p.add_argument("curve", help="curve JSON file, '-' for stdin")
    p.set_defaults(func=cmd_np)

    p = sub.add_parser("classify", help="sweep monic odd normal forms")
    p.add_argument("--genus", type=int, required=True)
    p.add_argument("--ext", type=int, required=True, help="e in GF(2^e)")
    p.add_argument("--zero", default="", help="comma separated odd indices forced to 0")
    p.add_argument("--cap", type=int, default=EXHAUSTIVE_CAP, help="limit on e*g")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("reduce", help="odd normal form, optionally killing one coefficient")
    p.add_argument("curve")
    p.add_argument("--monic", action="store_true")
    p.add_argument("--extend", action="store_true", help="allow a field extension for make_monic")
    p.add_argument("--kill", type=int, default=None)
    p.add_argument("--searchdeg", type=int, default=1)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("cseries", help="C_r(N) or stable C_r as JSON lines")
    p.add_argument("curve")
    p.add_argument("--N", type=int, default=None)
    p.add_argument("--R", type=int, required=True)
    p.add_argument("--stable", action="store_true")
    p.add_argument("--method", choices=["auto", "powers", "newton"], default="auto")
    _add_lift_args(p)
    p.set_defaults(func=cmd_cseries)

    p = sub.add_parser("verify", help="run one of the checks")
    vs = p.add_subparsers(dest="check", required=True)

    q = vs.add_parser("miracle")
    q.add_argument("--d", type=int, required=True)
    q.add_argument("--r", type=int, required=True)
    q.add_argument("--cap", type=int, default=ENUMERATION_CAP)
    q.set_defaults(func=cmd_miracle)

    for name in ("lemma-b", "lemma-c", "lemma-d"):
        q = vs.add_parser(name)
        q.add_argument("--curve", required=True)
        q.add_argument("--b", type=int, required=True)
        if name == "lemma-b":
            q.add_argument("--bp", type=int, required=True)
        _add_lift_args(q)
        q.set_defaults(func=cmd_lemma, which=name)

    q = vs.add_parser("keylemma")
    q.add_argument("--curve", required=True)
    q.add_argument("--lambda", dest="lam", required=True, help="rational such as 1/3")
    q.add_argument("--nmax", type=int, default=6)
    q.add_argument("--mmax", type=int, default=8)
    q.add_argument("--part2", action="store_true")
    q.add_argument("--j", type=int, default=1)
    q.add_argument("--n0", type=int, default=None)
    q.add_argument("--precision", dest="K_cert", type=int, default=None,
                   help="working precision (default ceil(n*lambda) + 2)")
    _add_lift_args(q)
    q.set_defaults(func=cmd_keylemma)

    q = vs.add_parser("geer")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--ext", type=int, default=1)
    q.add_argument("--samples", type=int, default=None)
    q.add_argument("--seed", type=int, default=0)
    q.set_defaults(func=cmd_geer)

    for name, fn in (("thm1", cmd_thm1), ("thm2", cmd_thm2)):
        q = vs.add_parser(name)
        q.add_argument("--ext", type=int, default=1)
        q.set_defaults(func=fn)

    p = sub.add_parser("bound", help="coefficient count bounding the supersingular locus")
    p.add_argument("--genus", type=int, required=True)
    p.set_defaults(func=cmd_bound)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ValueError, DegenerateCurveError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
