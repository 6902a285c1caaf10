"""Command line entry point: ``fewdist <verb> ...``.

Exit status is 1 when any exact check is VIOLATED, 2 on usage or input
errors, 0 otherwise (UNDECIDED only warns).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path

from .balance import PowerTerm, balance_exponents, derive_line_exponent, per_term_exponents
from .census import align_line_to_x_axis, census, cs_bound_report, q1_by_candidates, translate_line_to_origin
from .constructions import InfeasibleError, grid, line_plus_bulk, random_set, unbalanced_lattice
from .energy import (
    UNDECIDED,
    VIOLATED,
    ConvexFn,
    dyadic_decomposition_check,
    holder_chain_check,
    li_inequality_check,
    lr_ratio_report,
    rich_containment_check,
)
from .exact import CanonicalLine, PointSet, metric_name, scalar
from .experiment import ConfigError, ExperimentConfig, run_experiment
from .hyperbolas import (
    build_family,
    coincidence_structure,
    incidence_ratio_report,
    incidences,
    pseudoparabola_check,
)
from .intervals import DEFAULT_PRECISION, PRECISION_CAP
from .stats import bipartite_distinct, distinct_distances, max_line_richness, profiles_to_csv

log = logging.getLogger("fewdist")


def _scalars(text: str | None) -> list:
    if not text:
        return []
    return [scalar(v) for v in text.split(",") if v.strip()]


def _line(text: str) -> CanonicalLine:
    a, b, c = text.split(",")
    return CanonicalLine.of(Fraction(a), Fraction(b), Fraction(c))


def _term(text: str) -> PowerTerm:
    m_exp, n_exp = text.split(",")
    return PowerTerm(Fraction(m_exp), Fraction(n_exp))


def _fn(text: str) -> ConvexFn:
    if text == "square":
        return ConvexFn.square()
    if text.startswith("quad:"):
        kappa, c = text[len("quad:"):].split(",")
        return ConvexFn.quad(scalar(kappa), scalar(c))
    raise argparse.ArgumentTypeError(f"function must be 'square' or 'quad:KAPPA,C', got {text!r}")


def _load_points(path: str) -> PointSet:
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    return PointSet.loads(text)


def _emit(obj, args, name: str):
    text = json.dumps(obj, indent=1, sort_keys=True, default=str)
    print(text)
    if getattr(args, "out_dir", None):
        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / name).write_text(text + "\n")


def _status(verdicts) -> int:
    verdicts = list(verdicts)
    if UNDECIDED in verdicts:
        log.warning("%d check(s) UNDECIDED at the precision cap", verdicts.count(UNDECIDED))
    return 1 if VIOLATED in verdicts else 0


# -- verbs ---------------------------------------------------------------------

def cmd_gen(args) -> int:
    if args.family == "grid":
        P = grid(args.a, args.b)
    elif args.family == "unbalanced":
        P = unbalanced_lattice(args.n, Fraction(args.eps))
    elif args.family == "random":
        P = random_set(args.n, args.coord_bound, args.seed)
    else:
        P = line_plus_bulk(_line(args.line), args.m, args.n, args.seed, args.coord_bound)
    text = P.dumps()
    if args.output:
        Path(args.output).write_text(text + "\n")
    else:
        print(text)
    return 0


def cmd_stats(args) -> int:
    P = _load_points(args.points)
    metrics = [metric_name(m) for m in args.metric]
    profiles = [distinct_distances(P, m) for m in metrics]
    sys.stdout.write(profiles_to_csv(profiles))
    line, m = max_line_richness(P, exclude_axis_parallel=args.exclude_axis_parallel)
    summary = {
        "n": len(P),
        "profiles": [p.to_json() if args.histogram else {"metric": p.metric, "distinct_count": p.distinct_count}
                     for p in profiles],
        "rich_line": None if line is None else [line.a, line.b, line.c],
        "richness": m,
    }
    if args.out_dir:
        _emit(summary, args, "stats.json")
    else:
        print(json.dumps({"rich_line": summary["rich_line"], "richness": m}))
    return 0


def _prepare(P: PointSet, metric: str, line_text: str | None):
    """Pick the line, normalize it, return (A, P', kappa, line)."""
    if line_text:
        line = _line(line_text)
    else:
        line, _ = max_line_richness(P, exclude_axis_parallel=(metric == "rectangular"))
        if line is None:
            raise ValueError("no admissible line through two points")
    if metric == "euclidean":
        Pn = align_line_to_x_axis(P, line)
        return PointSet(p for p in Pn if p.y == 0), Pn, None, line
    Pn, kappa = translate_line_to_origin(P, line)
    return PointSet(p for p in Pn if p.y == kappa * p.x), Pn, kappa, line


def cmd_census(args) -> int:
    metric = metric_name(args.metric)
    P = _load_points(args.points)
    A, Pn, kappa, line = _prepare(P, metric, args.line)
    cen = census(A, Pn, metric, kappa)
    prof = bipartite_distinct(A, Pn, metric)
    rep = cs_bound_report(cen, prof)
    rep["line"] = [line.a, line.b, line.c]
    if args.verify_candidates:
        q1, worst = q1_by_candidates(A, Pn, metric, kappa)
        rep["q1_by_candidates"] = q1
        rep["max_candidates"] = worst
    _emit(rep, args, "census.json")
    ok = rep["cs_holds"] and rep["q1_holds"] and rep["q2_holds"] is not False
    if args.verify_candidates:
        ok = ok and rep["q1_by_candidates"] == rep["q1"] and rep["max_candidates"] <= 4
    return 0 if ok else 1


def cmd_family(args) -> int:
    metric = metric_name(args.metric)
    P = _load_points(args.points)
    A, Pn, kappa, line = _prepare(P, metric, args.line)
    fam = build_family(Pn, metric, kappa)
    cen = census(A, Pn, metric, kappa)
    inc = incidences(A, fam)
    co = coincidence_structure(fam)
    pp = pseudoparabola_check(fam, args.sample, args.seed)
    ratio = incidence_ratio_report(A, Pn, fam, args.precision_bits)
    out = {
        "line": [line.a, line.b, line.c],
        "family": fam.to_json(),
        "incidences": inc,
        "q2": cen.q2,
        "incidences_equal_q2": inc == cen.q2,
        "coincidence": co,
        "pseudoparabola": pp,
        "incidence_ratio": ratio,
    }
    _emit(out, args, "family.json")
    return 0 if inc == cen.q2 and co["holds"] and co["b_side_ok"] and pp["holds"] else 1


def cmd_energy(args) -> int:
    A, B, C = _scalars(args.A), _scalars(args.B), _scalars(args.C)
    f = args.f
    prec, cap = args.precision_bits, args.precision_cap
    if args.check == "li":
        rep = li_inequality_check(A, B or A, prec, cap)
    elif args.check == "holder":
        rep = holder_chain_check(A, prec, cap)
    elif args.check == "lr":
        rep = lr_ratio_report(f, A, B or [0], prec)
    elif args.check == "rich":
        rep = rich_containment_check(f, A, B or A, C or [0], args.t)
    else:
        rep = dyadic_decomposition_check(A, F=B or None, delta=args.delta, f=f if C else None,
                                         C=C or None, precision=prec)
    _emit(rep, args, f"energy_{args.check}.json")
    return _status([rep["verdict"]])


def cmd_sweep(args) -> int:
    config = ExperimentConfig.load(
        args.config,
        seed=args.seed,
        precision_bits=args.precision_bits,
        out_dir=args.out_dir,
        jobs=args.jobs,
    )
    result = run_experiment(config)
    summary = result["summary"]
    print(json.dumps(summary, indent=1, sort_keys=True))
    return _status(r["verdict"] for r in result["rows"])


def cmd_balance(args) -> int:
    if args.term:
        lhs = _term(args.lhs)
        terms = [_term(t) for t in args.term]
        exps = per_term_exponents(lhs, terms)
        out = {
            "lhs": str(lhs),
            "terms": [str(t) for t in terms],
            "per_term": [str(e) for e in exps],
            "exponent": str(balance_exponents(lhs, terms)),
        }
    else:
        out = derive_line_exponent(metric_name(args.metric)).to_json()
    _emit(out, args, "balance.json")
    return 0


# -- parser ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="PRNG seed")
    common.add_argument("--precision-bits", type=int, default=None,
                        help=f"starting interval precision (default {DEFAULT_PRECISION})")
    common.add_argument("--out-dir", default=None, help="also write JSON/CSV output here")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="fewdist", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("gen", parents=[common], help="generate a point set (JSON on stdout)")
    p.add_argument("family", choices=["grid", "unbalanced", "random", "line"])
    p.add_argument("--a", type=int, default=3)
    p.add_argument("--b", type=int, default=3)
    p.add_argument("--n", type=int, default=16)
    p.add_argument("--m", type=int, default=4)
    p.add_argument("--eps", default="1/2")
    p.add_argument("--coord-bound", type=int, default=10)
    p.add_argument("--line", default="0,1,0", help="a,b,c for a*x + b*y = c")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("stats", parents=[common], help="distinct-distance profiles and line richness")
    p.add_argument("points", help="point-set JSON file, or - for stdin")
    p.add_argument("--metric", action="append", default=None,
                   help="euclidean, rectangular or minkowski (repeatable)")
    p.add_argument("--exclude-axis-parallel", action="store_true")
    p.add_argument("--histogram", action="store_true")
    p.set_defaults(func=cmd_stats)

    for verb, func, hint in (("census", cmd_census, "quadruple census and Cauchy-Schwarz report"),
                             ("family", cmd_family, "hyperbola family, incidences and coincidences")):
        p = sub.add_parser(verb, parents=[common], help=hint)
        p.add_argument("points")
        p.add_argument("--metric", default="euclidean")
        p.add_argument("--line", default=None, help="a,b,c; default: the richest admissible line")
        if verb == "census":
            p.add_argument("--verify-candidates", action="store_true",
                           help="recount Q1 by solving for q explicitly")
        else:
            p.add_argument("--sample", type=int, default=1000)
        p.set_defaults(func=func)

    p = sub.add_parser("energy", parents=[common], help="energy inequality checks on integer/rational sets")
    p.add_argument("check", choices=["li", "holder", "lr", "rich", "dyadic"])
    p.add_argument("--A", required=True, help="comma separated values")
    p.add_argument("--B", default=None)
    p.add_argument("--C", default=None)
    p.add_argument("--t", type=int, default=2)
    p.add_argument("--f", type=_fn, default=ConvexFn.square(), help="square or quad:KAPPA,C")
    p.add_argument("--delta", default=None)
    p.add_argument("--precision-cap", type=int, default=PRECISION_CAP)
    p.set_defaults(func=cmd_energy)

    p = sub.add_parser("sweep", parents=[common], help="run a configured experiment sweep")
    p.add_argument("config", help="JSON or TOML config file")
    p.add_argument("--jobs", type=int, default=None)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("balance", parents=[common], help="exponent balancing")
    p.add_argument("--metric", default="euclidean")
    p.add_argument("--lhs", default="2,1", help="m_exp,n_exp of the left-hand side")
    p.add_argument("--term", action="append", help="m_exp,n_exp (repeatable); default: derive")
    p.set_defaults(func=cmd_balance)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.verb != "sweep":
        if args.seed is None:
            args.seed = 0
        if args.precision_bits is None:
            args.precision_bits = DEFAULT_PRECISION
    if getattr(args, "metric", None) is None and args.verb == "stats":
        args.metric = ["euclidean"]
    try:
        return args.func(args)
    except (ValueError, InfeasibleError, ConfigError, OSError) as exc:
        print(f"fewdist: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
