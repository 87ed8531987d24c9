"""Command-line front end: ``python3 -m queerkit <command> ...``."""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction

from . import classical as cl
from . import quantum as qu
from .freealg import Element, FuelExhausted, element_from_json, element_to_json, parse_element
from .tensor_rep import Phi_r, hecke_clifford_generators, phi_r, sergeev_generators, supercommutant_dim, tensor_space
from .verify import CorpusConfig, build_corpus, coverage_report, is_quantum, missing_labels, run_corpus

__all__ = ["main", "run", "build_parser", "infer_rank"]


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return v


def _q0(text: str) -> Fraction:
    try:
        v = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc
    if v == 0:
        raise argparse.ArgumentTypeError("q0 must be nonzero")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=_positive)
    common.add_argument("--r", type=_nonneg)
    common.add_argument("--q0", type=_q0, help="rational specialization of q")
    common.add_argument("--engine", choices=("L", "X", "classical"), default=None)
    common.add_argument("--format", choices=("json", "table"), default="table")
    common.add_argument("--only", help="corpus id or label prefix")
    common.add_argument("--seed", type=int, default=0)

    p = argparse.ArgumentParser(prog="queerkit", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)
    nf = sub.add_parser("nf", parents=[common], help="normal form of an element")
    nf.add_argument("expr", nargs="?", help="inline expression or JSON; read from stdin when omitted")
    sub.add_parser("basis", parents=[common], help="the PBW basis of the Schur quotient")
    sub.add_parser("dim", parents=[common], help="dimensions of the Schur quotient and its zero part")
    rep = sub.add_parser("rep", parents=[common], help="the operator of an element on V^(x)r")
    rep.add_argument("expr")
    sub.add_parser("commutant", parents=[common], help="supercommutant dimension of the Sergeev/Hecke-Clifford action")
    corpus = sub.add_parser("corpus", parents=[common], help="run the identity corpus")
    corpus.add_argument("--n-max", type=_positive, default=4)
    corpus.add_argument("--exp-max", type=_positive, default=3)
    corpus.add_argument("--jobs", type=_positive, default=1)
    sub.add_parser("covercheck", parents=[common], help="label coverage of the corpus")
    return p


def infer_rank(x: Element) -> int:
    """Smallest n whose alphabet contains every letter of ``x``."""
    n = 1
    for word in x.terms:
        for g in word:
            if g.family in ("one", "one_q"):
                n = max(n, len(g.idx))
            elif g.idx:
                n = max(n, max(abs(v) for v in g.idx))
    return n


def _read_element(text: str) -> Element:
    text = text.strip()
    if text.startswith("["):
        return element_from_json(json.loads(text))
    return parse_element(text)


def _emit_element(x: Element, fmt: str, out) -> None:
    print(json.dumps(element_to_json(x)) if fmt == "json" else str(x), file=out)


def _cmd_nf(args, out) -> int:
    text = args.expr if args.expr is not None else sys.stdin.read()
    x = _read_element(text)
    engine = args.engine or ("X" if is_quantum(x) else "classical")
    n = args.n or infer_rank(x)
    if args.r is None and any(g.family == "one" for w in x.terms for g in w):
        raise _Usage("idempotents 1_(..) need --r")
    if engine == "L":
        if args.r is not None:
            raise _Usage("--r is not available on the L engine")
        y = qu.l_normal_form(x, n)
    elif engine == "X":
        y = (qu.quantum_schur_rules(n, args.r) if args.r is not None else qu.lusztig_rules(n)).normal_form(x)
    else:
        y = (cl.schur_rules(n, args.r) if args.r is not None else cl.classical_rules(n)).normal_form(x)
    _emit_element(y, args.format, out)
    return 0


def _need(args, *names):
    missing = [f"--{v}" for v in names if getattr(args, v) is None]
    if missing:
        raise _Usage(f"{args.command} needs {' '.join(missing)}")


def _cmd_basis(args, out) -> int:
    _need(args, "n", "r")
    quantum = args.engine in ("L", "X")
    basis = qu.quantum_schur_basis(args.n, args.r) if quantum else cl.schur_basis(args.n, args.r)
    if args.format == "json":
        print(json.dumps([{"label": lab, "element": element_to_json(el)} for lab, el in basis]), file=out)
    else:
        for lab, el in basis:
            print(f"A0={lab['A0']} A1={lab['A1']}  {el}", file=out)
        print(f"{len(basis)} basis elements", file=out)
    return 0


def _cmd_dim(args, out) -> int:
    _need(args, "n", "r")
    full, zero = cl.dim_schur(args.n, args.r), cl.dim_schur_zero(args.n, args.r)
    if args.format == "json":
        print(json.dumps({"n": args.n, "r": args.r, "dim": full, "dim_zero": zero}), file=out)
    else:
        print(f"dim Q({args.n},{args.r}) = {full}; dim Q0({args.n},{args.r}) = {zero}", file=out)
    return 0


def _cmd_rep(args, out) -> int:
    _need(args, "r")
    x = _read_element(args.expr)
    n = args.n or infer_rank(x)
    quantum = args.engine in ("L", "X") or (args.engine is None and is_quantum(x))
    op = Phi_r(x, n, args.r, args.q0) if quantum else phi_r(x, n, args.r)
    if args.format == "json":
        print(op.dumps(), file=out)
    else:
        print(f"dim {op.dim}, parity {op.parity}", file=out)
        for i, j, v in op.entries():
            print(f"{i} {j} {v}", file=out)
    return 0


def _cmd_commutant(args, out) -> int:
    _need(args, "n", "r")
    sp = tensor_space(args.n, args.r)
    if args.engine in ("L", "X"):
        gens = hecke_clifford_generators(args.n, args.r, args.q0)
    else:
        gens = sergeev_generators(args.n, args.r)
    d = supercommutant_dim(gens, sp.dim, sp.parities)
    if args.format == "json":
        print(json.dumps({"n": args.n, "r": args.r, "supercommutant_dim": d}), file=out)
    else:
        print(f"supercommutant dim ({args.n},{args.r}) = {d}", file=out)
    return 0


def _cmd_corpus(args, out) -> int:
    config = CorpusConfig(n_max=args.n_max, exp_max=args.exp_max, q0=args.q0, only=args.only)
    corpus = build_corpus(config)
    if args.seed:
        # shuffle the evaluation order to shake out cache dependence; the report keeps corpus order
        order = list(range(len(corpus)))
        random.Random(args.seed).shuffle(order)
        report = run_corpus(config, [corpus[k] for k in order], jobs=args.jobs)
        back = sorted(range(len(order)), key=order.__getitem__)
        report.results = [report.results[k] for k in back]
    else:
        report = run_corpus(config, corpus, jobs=args.jobs)
    print(json.dumps(report.to_json(), indent=1) if args.format == "json" else report.table(), file=out)
    return 0 if report.ok and not report.disagreements else 1


def _cmd_covercheck(args, out) -> int:
    cover = coverage_report()
    if args.only:
        cover = {k: v for k, v in cover.items() if k.startswith(args.only)}
    missing = missing_labels(cover, list(cover))
    if args.format == "json":
        print(json.dumps({"coverage": cover, "missing": missing}, indent=1), file=out)
    else:
        for label, ids in cover.items():
            print(f"{label}: {len(ids)} ids", file=out)
        for label in missing:
            print(f"MISSING {label}", file=out)
    return 1 if missing else 0


class _Usage(Exception):
    pass


_COMMANDS = {
    "nf": _cmd_nf,
    "basis": _cmd_basis,
    "dim": _cmd_dim,
    "rep": _cmd_rep,
    "commutant": _cmd_commutant,
    "corpus": _cmd_corpus,
    "covercheck": _cmd_covercheck,
}


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args, out)
    except _Usage as exc:
        print(f"queerkit {args.command}: {exc}", file=sys.stderr)
        return 2
    except (ValueError, KeyError, IndexError, FuelExhausted) as exc:
        print(f"queerkit {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())
