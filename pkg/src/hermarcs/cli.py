"""Command line entry point.  Every command prints one JSON report.

Exit codes: 0 when every check in the report holds, 2 when a claim or an
oracle comparison is refuted (the report is still printed), 1 on usage or
construction errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time
from dataclasses import asdict

from . import FORMAT_VERSION, __version__
from .aschreier import (
    CurveParams,
    classify,
    closed_count,
    count_brute,
    count_closed,
    genus,
    hasse_weil_interval,
    sweep,
    witnesses,
)
from .charsums import closed_index, closed_to_cyclo, weil_brute, weil_closed
from .geometry import (
    Arc,
    build_arc,
    r_of_ell,
    secant_distribution,
    verify_complete,
    verify_theorem_case,
)
from .gf import Field

EXIT_OK, EXIT_ERROR, EXIT_REFUTED = 0, 1, 2


class UsageError(Exception):
    pass


def parse_element(F: Field, text: str, name: str) -> int:
    """Coefficient CSV in the power basis, lowest degree first; one entry is the constant."""
    shape = f"{name} must be 1 or {F.m} comma-separated residues in [0, {F.p})"
    try:
        coeffs = [int(t) for t in text.split(",")]
    except ValueError:
        raise UsageError(f"malformed {name}={text!r}: {shape}") from None
    if len(coeffs) not in (1, F.m):
        raise UsageError(f"{name}={text!r} has {len(coeffs)} entries: {shape}")
    if any(not 0 <= c < F.p for c in coeffs):
        raise UsageError(f"{name}={text!r} has an out-of-range residue: {shape}")
    return F.from_coeffs(coeffs)


def _poly_str(coeffs) -> str:
    terms = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        if not c:
            continue
        mono = "1" if k == 0 else ("x" if k == 1 else f"x^{k}")
        terms.append(mono if c == 1 and k else f"{c}{'*' + mono if k else ''}")
    return " + ".join(terms)


def _field(args) -> Field:
    try:
        return Field(args.p, args.n, args.l)
    except ValueError as e:
        raise UsageError(str(e)) from None


def _curve(args, F: Field) -> CurveParams:
    r = args.r if args.r is not None else r_of_ell(F.ell)
    a = parse_element(F, args.a, "a")
    b = parse_element(F, args.b, "b")
    c = parse_element(F, args.c, "c")
    try:
        return CurveParams(F, r, a, b, c)
    except ValueError as e:
        raise UsageError(str(e)) from None


# --- commands ----------------------------------------------------------------------

def cmd_field_info(args):
    F = _field(args)
    res = {
        "q": F.q,
        "Q": F.Q,
        "degree": F.m,
        "modulus_poly": _poly_str(F.modulus),
        "generator": F.to_coeffs(F.generator),
        "base_field_size": int(len(F.base_elements)),
    }
    return F, res, EXIT_OK


def cmd_count(args):
    F = _field(args)
    cp = _curve(args, F)
    res = {"params": cp.to_dict()}
    mode = args.mode or "closed"
    if mode in ("closed", "both"):
        res["N_closed"] = count_closed(cp)
        res["branch"] = _branch(cp)
    if mode in ("brute", "both"):
        res["N_brute"] = count_brute(cp)
    code = EXIT_OK
    if mode == "both":
        res["match"] = res["N_closed"] == res["N_brute"]
        code = EXIT_OK if res["match"] else EXIT_REFUTED
    return F, res, code


def _branch(cp: CurveParams) -> str:
    return closed_count(cp.field, cp.a, cp.b, cp.r).branch


def cmd_classify(args):
    F = _field(args)
    cp = _curve(args, F)
    v = classify(cp)
    res = {"params": cp.to_dict(), **v.to_dict(), "N_projective": v.N_closed + 1}
    try:
        g = genus(F.q, cp.r)
    except ValueError:
        g = None
    if g is not None:
        lo, hi = hasse_weil_interval(F.q, F.ell, g)
        res.update({"genus": g, "hasse_weil": [lo, hi], "within_hasse_weil": lo <= v.N_closed + 1 <= hi})
    w = witnesses(cp)
    res["witnesses"] = asdict(w)
    return F, res, EXIT_OK if v.consistent else EXIT_REFUTED


def cmd_sweep(args):
    F = _field(args)
    r = args.r if args.r is not None else r_of_ell(F.ell)
    res = sweep(F, r, sample=args.sample, seed=args.seed, workers=args.workers)
    res.update({"r": r, "seed": args.seed, "sample": args.sample})
    return F, res, EXIT_OK if res["match"] else EXIT_REFUTED


def cmd_weil(args):
    F = _field(args)
    cp = _curve(args, F)
    v = weil_closed(F, cp.a, cp.b, cp.c, cp.r)
    brute = weil_brute(F, cp.a, cp.b, cp.c, cp.r)
    emb = closed_to_cyclo(v, F)
    match = emb == brute.embed(closed_index(F.p))
    res = {
        "params": cp.to_dict(),
        "closed": asdict(v),
        "brute_coeffs": list(brute.coeffs),
        "brute_index": brute.m,
        "norm_sq": list(brute.norm_sq().coeffs),
        "match": match,
    }
    return F, res, EXIT_OK if match else EXIT_REFUTED


def _arc_claims(arc: Arc, dist, rep) -> bool:
    return len(arc) == arc.claimed_N and dist.max_size == arc.claimed_d and rep.is_complete


def cmd_arc_build(args):
    F = _field(args)
    try:
        arc = build_arc(F, args.case, args.subset_seed)
    except (ValueError, RuntimeError) as e:
        raise UsageError(str(e)) from None
    if args.out:
        arc.save(args.out)
    res = {"case": arc.case, "claimed_N": arc.claimed_N, "claimed_d": arc.claimed_d,
           "N": len(arc), "out": args.out,
           "meta": {k: v for k, v in arc.meta.items() if k != "subset"}}
    return F, res, EXIT_OK


def _load_arc(path) -> Arc:
    try:
        return Arc.load(path)
    except (OSError, KeyError, ValueError) as e:
        raise UsageError(f"cannot read arc file {path}: {e}") from None


def cmd_arc_verify(args):
    arc = _load_arc(args.inp)
    dist = secant_distribution(arc)
    d = arc.claimed_d if arc.claimed_d is not None else dist.max_size
    rep = verify_complete(arc, d, dist)
    ok = _arc_claims(arc, dist, rep) if arc.claimed_d is not None else rep.is_complete
    res = {"case": arc.case, "claimed_N": arc.claimed_N, "actual_N": len(arc),
           "claimed_d": arc.claimed_d, "distribution": dist.to_dict(),
           "completeness": rep.to_dict(), "confirmed": ok}
    return arc.field, res, EXIT_OK if ok else EXIT_REFUTED


def cmd_arc_census(args):
    arc = _load_arc(args.inp)
    dist = secant_distribution(arc)
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["secant_size", "line_count"])
            for k, v in sorted(dist.histogram.items()):
                w.writerow([k, v])
    res = {"N": len(arc), "distribution": dist.to_dict(), "csv": args.csv,
           "double_counting": int(dist.counts.sum()) == len(arc) * (arc.field.Q + 1)}
    return arc.field, res, EXIT_OK


def cmd_arc_check(args):
    F = _field(args)
    try:
        res = verify_theorem_case(F, args.case, args.subset_seed)
    except (ValueError, RuntimeError) as e:
        raise UsageError(str(e)) from None
    return F, res, EXIT_OK if res["confirmed"] else EXIT_REFUTED


# --- parser ------------------------------------------------------------------------

def _field_args(sp):
    sp.add_argument("--p", type=int, required=True, help="characteristic")
    sp.add_argument("--n", type=int, default=1, help="q = p^n")
    sp.add_argument("--l", type=int, required=True, help="extension degree over F_q")


def _curve_args(sp):
    sp.add_argument("--r", type=int, default=None, help="default: smallest r >= l/2 coprime to l")
    sp.add_argument("--a", default="1")
    sp.add_argument("--b", default="0")
    sp.add_argument("--c", default="0")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hermarcs", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version",
                    version=f"hermarcs {__version__} (report format {FORMAT_VERSION})")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("field-info", help="field construction details")
    _field_args(sp)
    sp.set_defaults(func=cmd_field_info)

    sp = sub.add_parser("count", help="affine point count N(a, b, c)")
    _field_args(sp)
    _curve_args(sp)
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--closed", dest="mode", action="store_const", const="closed")
    g.add_argument("--brute", dest="mode", action="store_const", const="brute")
    g.add_argument("--both", dest="mode", action="store_const", const="both")
    sp.set_defaults(func=cmd_count)

    sp = sub.add_parser("classify", help="maximal / minimal verdict")
    _field_args(sp)
    _curve_args(sp)
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("sweep", help="closed vs brute counts over all or sampled (a, b, c)")
    _field_args(sp)
    sp.add_argument("--r", type=int, default=None)
    sp.add_argument("--sample", type=int, default=None, help="number of random triples; omit for all")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("weil", help="Weil sum, closed form against exact summation")
    _field_args(sp)
    _curve_args(sp)
    sp.set_defaults(func=cmd_weil)

    arc = sub.add_parser("arc", help="arc constructions and their verification")
    asub = arc.add_subparsers(dest="arc_command", required=True)

    sp = asub.add_parser("build")
    _field_args(sp)
    sp.add_argument("--case", default="auto")
    sp.add_argument("--subset-seed", type=int, default=None)
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_arc_build)

    sp = asub.add_parser("verify")
    sp.add_argument("--in", dest="inp", required=True)
    sp.set_defaults(func=cmd_arc_verify)

    sp = asub.add_parser("census")
    sp.add_argument("--in", dest="inp", required=True)
    sp.add_argument("--csv", default=None)
    sp.set_defaults(func=cmd_arc_census)

    sp = asub.add_parser("check-theorem")
    _field_args(sp)
    sp.add_argument("--case", default="auto")
    sp.add_argument("--subset-seed", type=int, default=None)
    sp.set_defaults(func=cmd_arc_check)
    return ap


def _jsonable(o):
    if hasattr(o, "item"):
        return o.item()
    if hasattr(o, "tolist"):
        return o.tolist()
    raise TypeError(f"cannot serialize {type(o).__name__}")


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_ERROR
    t0 = time.perf_counter()
    try:
        F, result, code = args.func(args)
    except UsageError as e:
        print(json.dumps({"command": argv, "error": str(e)}), file=sys.stdout)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR
    report = {
        "command": argv,
        "tool": {"name": "hermarcs", "version": __version__, "format": FORMAT_VERSION},
        "field": F.spec(),
        "result": result,
        "exit_code": code,
        "elapsed_s": round(time.perf_counter() - t0, 3),
    }
    print(json.dumps(report, indent=1, sort_keys=True, default=_jsonable))
    return code


if __name__ == "__main__":
    sys.exit(main())
