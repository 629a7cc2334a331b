"""Command-line front end.

Subcommands: check, probterm, compare, refine, examples {list, run}.
Exit codes: 0 success/Holds, 1 usage or file/type errors, 2 inconclusive
(the deep checks are semidecisions, so "don't know" must not look like
either success or refutation).  All probabilities print as exact fractions;
--approx adds a 6-decimal rendering for reading comfort.
"""

import argparse
import json
import os
import random
import sys
from fractions import Fraction

from .corpus import CATALOGUE, corpus
from .delay import eqlim_upto, probterm_seq
from .densem import STANDARD, STEP_FAITHFUL, Interp
from .opsem import Evaluator
from .parser import ParseError, load_file, pretty_ty
from .rational import parse_rat
from .relate import RelateCfg, refine_check
from .syntax import UnitT
from .typecheck import TypecheckError, elaborate

__all__ = ["main"]

MODES = ("op", "den", "den-steps")


def _delay_of(term, mode):
    t2, ty = elaborate(term)
    if mode == "op":
        return ty, Evaluator().eval(t2)
    if mode == "den":
        return ty, Interp(STANDARD).interp(t2)
    if mode == "den-steps":
        return ty, Interp(STEP_FAITHFUL).interp(t2)
    raise ValueError("unknown mode %r" % mode)


def _print_seq(seq, fmt, approx, out):
    if fmt == "json":
        doc = seq.to_json()
        if approx:
            doc["approx"] = ["%.6f" % float(v) for v in seq]
        out.write(json.dumps(doc, indent=2) + "\n")
        return
    out.write("depth  probterm%s\n" % ("  approx" if approx else ""))
    for n, v in enumerate(seq):
        line = "%5d  %s" % (n, v)
        if approx:
            line += "  %.6f" % float(v)
        out.write(line + "\n")


def cmd_check(args, out):
    term = load_file(args.file)
    _, ty = elaborate(term)
    out.write(pretty_ty(ty) + "\n")
    return 0


def cmd_probterm(args, out):
    term = load_file(args.file)
    _, d = _delay_of(term, args.mode)
    seq = probterm_seq(d, args.depth)
    _print_seq(seq, args.format, args.approx, out)
    return 0


def cmd_compare(args, out):
    mode_a = args.mode_a or args.mode
    mode_b = args.mode_b or args.mode
    ta = load_file(args.file_a)
    tb = load_file(args.file_b)
    ty_a, da = _delay_of(ta, mode_a)
    ty_b, db = _delay_of(tb, mode_b)
    if not isinstance(ty_a, UnitT) or not isinstance(ty_b, UnitT):
        raise TypecheckError("compare needs Unit programs, got %s and %s"
                             % (pretty_ty(ty_a), pretty_ty(ty_b)))
    fa = probterm_seq(da, args.depth)
    fb = probterm_seq(db, args.depth)
    ok = eqlim_upto(fa, fb, args.eps)
    doc = {"holds": ok, "eps": str(args.eps), "depth": args.depth,
           "mode_a": mode_a, "mode_b": mode_b,
           "max_a": str(max(fa)), "max_b": str(max(fb))}
    if args.format == "json":
        out.write(json.dumps(doc, indent=2) + "\n")
    elif ok:
        out.write("eqlim holds at eps=%s, depth=%d (max %s vs %s)\n"
                  % (args.eps, args.depth, doc["max_a"], doc["max_b"]))
    else:
        out.write("inconclusive at eps=%s, depth=%d (max %s vs %s); "
                  "larger depth or eps may settle it\n"
                  % (args.eps, args.depth, doc["max_a"], doc["max_b"]))
    return 0 if ok else 2


def cmd_refine(args, out):
    ta = load_file(args.file_a)
    tb = load_file(args.file_b)
    cfg = RelateCfg(fuel=args.fuel, horizon=args.horizon, eps=args.eps)
    verdict = refine_check(ta, tb, cfg)
    if args.format == "json":
        out.write(json.dumps(verdict.to_json(), indent=2) + "\n")
    else:
        head = "Holds" if verdict.holds else "Unknown"
        out.write("%s: %s (fuel=%d, horizon=%d, eps=%s)\n"
                  % (head, verdict.reason, args.fuel, args.horizon, args.eps))
        out.write(json.dumps(verdict.trace, indent=2) + "\n")
    return 0 if verdict.holds else 2


def cmd_examples(args, out):
    if args.what == "list":
        for name, blurb in CATALOGUE:
            out.write("%-14s %s\n" % (name, blurb))
        return 0
    term = corpus(args.name)
    t2, ty = elaborate(term)
    out.write("type: %s\n" % pretty_ty(ty))
    _, d = _delay_of(t2, args.mode)
    seq = probterm_seq(d, args.depth)
    _print_seq(seq, args.format, args.approx, out)
    return 0


def _rat(text):
    try:
        v = parse_rat(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError("not a rational: %r" % text)
    if v < 0:
        raise argparse.ArgumentTypeError("eps must be >= 0")
    return v


def _add_common(sp, depth=True, fmt=True):
    if depth:
        sp.add_argument("--depth", type=int, default=64,
                        help="run depth for termination tables (default 64)")
    if fmt:
        sp.add_argument("--format", choices=("table", "json"), default="table")
        sp.add_argument("--approx", action="store_true",
                        help="also print 6-decimal approximations")


def build_parser():
    ap = argparse.ArgumentParser(
        prog="probfpc",
        description="Workbench for a probabilistic language with recursive "
                    "types: typechecking, exact evaluation, termination "
                    "tables, semantics comparison, refinement checking.")
    ap.add_argument("--seed", type=int, default=None,
                    help="seed for randomized helpers (or env PROBFPC_SEED)")
    sub = ap.add_subparsers(dest="cmd", required=True)

    sp = sub.add_parser("check", help="typecheck a .pfpc file, print its type")
    sp.add_argument("file")
    sp.set_defaults(fn=cmd_check)

    sp = sub.add_parser("probterm",
                        help="termination probabilities by run depth")
    sp.add_argument("file")
    sp.add_argument("--mode", choices=MODES, default="op")
    _add_common(sp)
    sp.set_defaults(fn=cmd_probterm)

    sp = sub.add_parser("compare",
                        help="eqlim comparison of two Unit programs")
    sp.add_argument("file_a")
    sp.add_argument("file_b")
    sp.add_argument("--mode", choices=MODES, default="op",
                    help="semantics for both sides unless overridden")
    sp.add_argument("--mode-a", choices=MODES, default=None)
    sp.add_argument("--mode-b", choices=MODES, default=None)
    sp.add_argument("--eps", type=_rat, default=Fraction(1, 1024))
    _add_common(sp)
    sp.set_defaults(fn=cmd_compare)

    sp = sub.add_parser("refine",
                        help="bounded refinement check between two programs")
    sp.add_argument("file_a")
    sp.add_argument("file_b")
    sp.add_argument("--fuel", type=int, default=6)
    sp.add_argument("--horizon", type=int, default=64)
    sp.add_argument("--eps", type=_rat, default=Fraction(1, 1024))
    _add_common(sp, depth=False)
    sp.set_defaults(fn=cmd_refine)

    sp = sub.add_parser("examples", help="catalogue of built-in programs")
    ex = sp.add_subparsers(dest="what", required=True)
    lst = ex.add_parser("list")
    lst.set_defaults(fn=cmd_examples, what="list")
    run = ex.add_parser("run")
    run.add_argument("name", help="catalogue name, e.g. geo or id_hes(1/2,Nat)")
    run.add_argument("--mode", choices=MODES, default="op")
    _add_common(run)
    run.set_defaults(fn=cmd_examples, what="run")

    return ap


def main(argv=None, out=None, err=None):
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    ap = build_parser()
    args = ap.parse_args(argv)
    seed = args.seed
    if seed is None and os.environ.get("PROBFPC_SEED"):
        try:
            seed = int(os.environ["PROBFPC_SEED"])
        except ValueError:
            err.write("probfpc: ignoring non-integer PROBFPC_SEED\n")
    if seed is not None:
        random.seed(seed)
    try:
        return args.fn(args, out)
    except (ParseError, TypecheckError) as e:
        err.write("probfpc: %s\n" % e)
        return 1
    except OSError as e:
        err.write("probfpc: %s\n" % e)
        return 1
    except KeyError as e:
        err.write("probfpc: %s\n" % e)
        return 1


if __name__ == "__main__":
    sys.exit(main())
