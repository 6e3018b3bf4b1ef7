"""Command line interface.

Every run prints a configuration header, one JSON record per check and a
tab-separated summary.  Exit status: 0 when every check passes, 1 when a
mathematical check fails, 2 on input or precision errors, 64 on usage
errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import __version__
from .basefield import working_precision
from .config import load_tower, read_description, tower_to_json
from .errors import CharPError, PrecisionExhausted
from .extfield import derivative, evaluate_poly
from .hopfgal import (build_closure, hopf_act, hopf_fixed_basis, hopf_to_json, integral_tH,
                      verify_tH_properties)
from .nbgtest import (Tester, construct_x_sequence, counterexample_for_b, is_p_power,
                      sweep_verify, theorem_verdict, with_retry, x_basis_rank)
from .ramify import ramification_data, trace_dual_check

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_USAGE = 0, 1, 2, 64
DEFAULT_PREC = 64
SUMMARY_COLUMNS = ("residue", "verdict", "samples", "failures", "witness")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def build_parser():
    parser = _Parser(prog="charp-nbg", description="Normal basis generators in characteristic p.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = _Parser(add_help=False)
    common.add_argument("--tower", required=True, help="tower JSON file or shipped name")
    common.add_argument("--prec", type=int, help="relative precision for inexact inversions")
    common.add_argument("--format", choices=("json", "tsv"), default="json")
    common.add_argument("--seed", type=int, default=7)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("build", parents=[common], help="construct a tower and print its invariants")
    sub.add_parser("different", parents=[common], help="different exponent with its cross-checks")
    sub.add_parser("hopf-basis", parents=[common], help="K-basis of the fixed algebra E[N]^G")
    p = sub.add_parser("nbg-test", parents=[common], help="test one element")
    p.add_argument("--rho", required=True)
    p.add_argument("--method", choices=("trace", "galois", "hopf", "all"), default="all")
    p = sub.add_parser("counterexample", parents=[common], help="non-generator of valuation b")
    p.add_argument("--b", type=int, required=True)
    p = sub.add_parser("verify-theorem", parents=[common], help="sweep every residue class")
    p.add_argument("--samples", type=int, default=100)
    return parser


def resolve_precision(args, desc):
    if args.prec is not None:
        return args.prec
    if os.environ.get("CHARP_NBG_PREC"):
        return int(os.environ["CHARP_NBG_PREC"])
    return desc.get("prec") or DEFAULT_PREC


class Report:
    def __init__(self, out, fmt):
        self.out = out
        self.fmt = fmt
        self.summary = []
        self.ok = True

    def record(self, kind, **data):
        if self.fmt == "json":
            self.out.write(json.dumps({"kind": kind, **data}, sort_keys=True, default=_jsonable) + "\n")

    def check(self, name, passed, **data):
        self.ok &= bool(passed)
        self.record("check", name=name, passed=bool(passed), **data)

    def row(self, *cells):
        self.summary.append(cells)

    def finish(self, columns):
        self.out.write("\t".join(columns) + "\n")
        for cells in self.summary:
            self.out.write("\t".join(str(c) for c in cells) + "\n")


def _jsonable(x):
    if x == float("inf"):
        return "inf"
    return repr(x)


def cmd_build(tower, args, rep):
    e, f = tower.e, tower.f
    rep.record("tower", degree=tower.degree, e=e, f=f,
               basis=[tower.format(b) for b in tower.basis()],
               basis_valuations=tower.basis_valuations(),
               steps=[{"kind": s.kind, "name": s.name, "degree": s.degree, "e": s.e, "f": s.f}
                      for s in tower.steps])
    rep.check("fundamental_identity", e * f == tower.degree, n=tower.degree, e=e, f=f)
    for k in range(1, tower.height + 1):
        g = tower.gen(k)
        cp = tower.relative_charpoly(g)
        dval = evaluate_poly(derivative(cp), g, tower)
        rep.check(f"separable_step_{k}", not dval.is_zero())
    rep.row("-", "tower", "-", 0 if rep.ok else 1, f"n={tower.degree} e={e} f={f}")
    return SUMMARY_COLUMNS


def cmd_different(tower, args, rep):
    data = ramification_data(tower)
    rep.record("different", **data.to_json(tower))
    rep.check("different_consistent", data.checks["consistent"], w=data.w,
              w_transitivity=data.checks["w_transitivity"], w_hilbert=data.checks["w_hilbert"])
    rep.check("tame_bound", data.w >= data.e - 1)
    if data.e == data.n:
        dual = trace_dual_check(tower, data, samples=50, seed=args.seed)
        rep.check("trace_dual", dual["contained"] and dual["witness"] is not None, **dual)
    rep.row("-", data.checks["check"], "-", 0 if rep.ok else 1,
            f"e={data.e} f={data.f} w={data.w} uniformizer={tower.format(data.pi_uniformizer)}")
    return SUMMARY_COLUMNS


def cmd_hopf(tower, args, rep):
    H = hopf_fixed_basis(build_closure(tower))
    rep.record("hopf_basis", structure=H.kind, closure=H.tower_E.describe(), basis=hopf_to_json(H))
    report = verify_tH_properties(H)
    rep.check("tH_properties", report["ok"], **report)
    rep.check("dimension", H.n == tower.degree, dimension=H.n)
    t = integral_tH(H)
    rho = tower.parse(" + ".join(tower.names()) or "1")
    rep.check("tH_acts_as_trace", hopf_act(H, t, rho) == tower.embed(tower.trace(rho)), rho=tower.format(rho))
    rep.row("-", H.kind, H.n, 0 if rep.ok else 1, f"dim_K H = {H.n}")
    return SUMMARY_COLUMNS


def cmd_nbg(tower, args, rep):
    rho = tower.parse(args.rho)
    tester = Tester(tower)
    methods = tester.methods() if args.method == "all" else [args.method]
    verdicts = [with_retry(tester.run, rho, m) for m in methods]
    for v in verdicts:
        rep.record("verdict", rho=tower.format(rho), **v.to_json())
    agree = len({v.is_generator for v in verdicts}) <= 1
    rep.check("methods_agree", agree, methods=methods)
    val = tower.valuation(rho)
    cell = "generator" if verdicts and verdicts[0].is_generator else "not a generator"
    rep.row(f"{val % tower.degree} mod {tower.degree}", cell, 1, 0 if agree else 1,
            f"v={val}; " + "; ".join(f"{v.method}={v.is_generator}" for v in verdicts))
    return SUMMARY_COLUMNS


def cmd_counterexample(tower, args, rep):
    data = ramification_data(tower)
    verdict = theorem_verdict(data.n, data.e, data.w, args.b, tower.p)
    rep.record("theorem_verdict", b=args.b, n=data.n, e=data.e, w=data.w, **verdict.to_json())
    wit = counterexample_for_b(tower, data, args.b, seed=args.seed)
    rep.record("counterexample", **wit.to_json(tower))
    rep.check("counterexample_valid", wit.proof["valid"])
    rep.row(f"{args.b % data.n} mod {data.n}", f"counterexample({wit.branch})", 1,
            0 if wit.proof["valid"] else 1, tower.format(wit.rho))
    return SUMMARY_COLUMNS


def cmd_verify(tower, args, rep):
    data = ramification_data(tower)
    rep.record("ramification", **data.to_json(tower))
    if is_p_power(data.n, tower.p):
        xs = construct_x_sequence(tower, data)
        audit = xs.audit(data.e, data.w)
        rank = x_basis_rank(tower, xs)
        rep.check("x_sequence", audit["valuations_ok"] and audit["traces_ok"] and rank in (None, data.n),
                  rank=rank, elements=[tower.format(x) for x in xs.elements], **audit)
    rows, records, methods = sweep_verify(tower, data, samples=args.samples, seed=args.seed)
    rep.record("methods", methods=methods)
    for r in records:
        rep.record(r.pop("kind"), **r)
    for row in rows:
        rep.check(f"residue_{row.residue}", row.failures == 0, verdict=row.verdict,
                  samples=row.samples, generators=row.generators, failures=row.failures)
        rep.row(f"{row.residue} mod {data.n}", row.verdict, row.samples, row.failures, row.witness)
    return SUMMARY_COLUMNS


COMMANDS = {
    "build": cmd_build, "different": cmd_different, "hopf-basis": cmd_hopf,
    "nbg-test": cmd_nbg, "counterexample": cmd_counterexample, "verify-theorem": cmd_verify,
}


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        sys.stderr.write(str(exc) + "\n")
        return EXIT_USAGE
    rep = Report(out, args.format)
    try:
        desc = read_description(args.tower)
        prec = resolve_precision(args, desc)
        config = {k: v for k, v in vars(args).items() if k not in ("tower",)}
        rep.record("config", tower=desc, tower_source=os.path.basename(str(args.tower)),
                   precision=prec, **config)
        with working_precision(prec):
            tower, _ = load_tower(desc)
            rep.record("tower_description", **tower_to_json(tower, prec))
            columns = COMMANDS[args.command](tower, args, rep)
    except PrecisionExhausted as exc:
        rep.record("error", error="PrecisionExhausted", message=str(exc))
        sys.stderr.write(f"precision exhausted: {exc}\n")
        return EXIT_INPUT
    except (CharPError, OSError, ValueError) as exc:
        rep.record("error", error=type(exc).__name__, message=str(exc))
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    rep.finish(columns)
    return EXIT_OK if rep.ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
