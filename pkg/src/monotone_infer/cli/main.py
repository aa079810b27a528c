"""monotone-infer: command-line front end.

Exit codes: 0 invariant found or check passed, 1 unsafe or verification
failure, 2 inconclusive (including an abstract fixpoint that meets Bad),
3 parse or usage error, 4 certification failure.
"""

from __future__ import annotations

import argparse
import functools
import json
import os
import sys
import time
from typing import Dict, Optional, Sequence

from .. import __version__
from .. import oracle as O
from ..absint import ai_direct, ai_efficient, lambda_bound
from ..core.logic import LogicError, iff, neg, vocabulary
from ..core.system import FormatError, format_formula, format_system, parse_basis, parse_formula, parse_system, \
    parse_tree
from ..core.dtree import tree_formula
from ..infer import ENGINES, INVARIANT, RESTART, UNSAFE, SoundnessError, backward_itp, infer_with_restarts, \
    invariant_failures
from ..learn import OracleInconsistency, TruthTableTeacher, cdnf_learn
from ..sat.queries import QueryCounter, solve
from . import bench
from . import generators as G

EXIT_OK, EXIT_UNSAFE, EXIT_INCONCLUSIVE, EXIT_USAGE, EXIT_CERT = range(5)
SCHEMA = "monotone-infer/report-v1"
SEED_ENV = "MONOTONE_INFER_SEED"
# Largest n for which reports include brute-force sizes and cross-checks.
EXACT_CHECK_LIMIT = 8


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _load_system(path: str):
    try:
        return parse_system(_read(path))
    except (FormatError, LogicError) as exc:
        raise UsageError(f"{path}: {exc}") from None


def _emit(report: Dict, args) -> None:
    report = {"schema": SCHEMA, "version": __version__, **report}
    if not getattr(args, "timing", False):
        report.pop("seconds", None)
    for key, value in report.items():
        if isinstance(value, dict):
            value = " ".join(f"{k}={v}" for k, v in value.items())
        elif isinstance(value, (list, tuple)):
            value = " ".join(str(v) for v in value)
        print(f"{key}: {value}")
    if getattr(args, "json", None):
        with open(args.json, "w") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
            fh.write("\n")


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{SEED_ENV} must be an integer, got {raw!r}") from None


# ---------------------------------------------------------------------------
# subcommands


def cmd_infer(args) -> int:
    ts = _load_system(args.system)
    if args.s < 0 or args.max_restarts < 0:
        raise UsageError("--s and --max-restarts must be non-negative")
    engine = ENGINES[args.algo]
    if args.backwards:
        engine = functools.partial(backward_itp, engine=engine)
    start = time.perf_counter()
    try:
        res = infer_with_restarts(ts, engine, s=args.s, max_restarts=args.max_restarts)
    except SoundnessError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    out = res.outcome
    outcome = {INVARIANT: "invariant", UNSAFE: "unsafe", RESTART: "inconclusive"}[out.status]
    report = {"command": "infer", "algorithm": args.algo + ("+backwards" if args.backwards else ""),
              "outcome": outcome, "s": out.s, "restarts": res.restarts, "iterations": res.iterations,
              "queries": res.queries.as_dict(), "gate": out.stats.gate.as_dict()}
    if out.found:
        report["invariant"] = format_formula(out.invariant)
        if ts.n <= EXACT_CHECK_LIMIT:
            S = O.ExplicitSet.from_formula(out.invariant, vocabulary(ts.n))
            cnf, dnf = O.min_cnf_size(S), O.min_dnf_size(S)
            report["bounds"] = {"invariant_cnf": cnf, "invariant_dnf": dnf,
                                "cnf_dnf_n2": cnf * dnf * ts.n ** 2}
    elif out.status == UNSAFE and out.reached is not None:
        report["reached"] = "".join("1" if b else "0" for b in out.reached)
    report["seconds"] = round(time.perf_counter() - start, 3)
    _emit(report, args)
    return {INVARIANT: EXIT_OK, UNSAFE: EXIT_UNSAFE, RESTART: EXIT_INCONCLUSIVE}[out.status]


def _same_iterates(a, b) -> bool:
    if len(a) != len(b):
        return False
    counter = QueryCounter()
    return all(solve(neg(iff(x.formula(), y.formula())), counter) is None for x, y in zip(a, b))


def cmd_ai(args) -> int:
    ts = _load_system(args.system)
    if args.basis:
        try:
            basis = parse_basis(_read(args.basis), ts.n)
        except (FormatError, LogicError) as exc:
            raise UsageError(f"{args.basis}: {exc}") from None
    else:
        basis = ts.basis
    if not basis:
        raise UsageError("empty basis: give --basis or add basis lines to the system file")
    run = ai_efficient if args.mode == "efficient" else ai_direct
    res = run(ts, basis)
    lam = lambda_bound(ts, basis)
    report = {"command": "ai", "algorithm": f"ai-{args.mode}", "outcome": "safe" if res.safe else "inconclusive",
              "iterations": res.iterations, "lambda": lam.value, "tr_factors": list(lam.tr_factors),
              "init_factors": list(lam.init_factors), "term_counts": [len(x.dnf()) for x in res.trace],
              "queries": res.queries.as_dict(), "gate": res.gate.as_dict(),
              "fixpoint": format_formula(res.fixpoint.formula())}
    if ts.n <= EXACT_CHECK_LIMIT:
        other = ai_direct(ts, basis) if args.mode == "efficient" else ai_efficient(ts, basis)
        report["modes_agree"] = _same_iterates(res.trace, other.trace)
    report["seconds"] = round(res.seconds, 3)
    _emit(report, args)
    return EXIT_OK if res.safe else EXIT_INCONCLUSIVE


def cmd_learn(args) -> int:
    n = args.n
    if n is None or n < 0:
        raise UsageError("--n is required and must be non-negative")
    if n > O.CAPS["set"]:
        raise UsageError(f"--n {n} exceeds the exhaustive-teacher cap of {O.CAPS['set']}")
    text = _read(args.target)
    try:
        target = tree_formula(parse_tree(text, n)) if text.lstrip().startswith("(node") or \
            text.lstrip().startswith("(leaf") else parse_formula(text, n, allow_primed=False)
    except (FormatError, LogicError) as exc:
        raise UsageError(f"{args.target}: {exc}") from None
    teacher = TruthTableTeacher(target, n)
    start = time.perf_counter()
    try:
        res = cdnf_learn(teacher.eq, teacher.mq, n)
    except OracleInconsistency as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    ok = teacher.equivalent(res.formula)
    _emit({"command": "learn", "algorithm": "cdnf-learn", "outcome": "equivalent" if ok else "different",
           "eq_queries": res.eq_queries, "mq_queries": res.mq_queries, "parts": len(res.hypothesis.parts),
           "hypothesis": format_formula(res.formula), "seconds": round(time.perf_counter() - start, 3)}, args)
    return EXIT_OK if ok else EXIT_UNSAFE


def cmd_gen(args) -> int:
    seed = _seed(args)
    if args.n is None:
        raise UsageError("--n is required")
    try:
        gen = G.generate(args.family, args.n, seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    except G.CertificationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CERT
    meta = [f"family {gen.family}", f"n {args.n}", f"seed {seed}", f"s {gen.s}",
            f"invariant {format_formula(gen.invariant)}"]
    if gen.cnf_size is not None:
        meta.append(f"invariant_cnf {gen.cnf_size}")
    if gen.dnf_size is not None:
        meta.append(f"invariant_dnf {gen.dnf_size}")
    if gen.leaves is not None:
        meta.append(f"leaves {gen.leaves}")
    if gen.backwards:
        meta.append("direction backwards")
    text = "".join(f"; {line}\n" for line in meta) + format_system(gen.system)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_verify(args) -> int:
    ts = _load_system(args.system)
    try:
        inv = parse_formula(_read(args.invariant), ts.n, allow_primed=False)
    except (FormatError, LogicError) as exc:
        raise UsageError(f"{args.invariant}: {exc}") from None
    failures = invariant_failures(ts, inv)
    for name, witness in failures:
        if isinstance(witness, tuple) and len(witness) == 2 and not isinstance(witness[0], bool):
            w = " -> ".join("".join("1" if b else "0" for b in x) for x in witness)
        else:
            w = "".join("1" if b else "0" for b in witness)
        print(f"FAIL {name}: {w}")
    if not failures:
        print("PASS initiation consecution safety")
    return EXIT_UNSAFE if failures else EXIT_OK


def cmd_bench(args) -> int:
    try:
        results = bench.run_suite(args.suite)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None
    for r in results:
        print(r.line() if args.timing else r.line().rsplit(";", 1)[0])
    if args.json:
        with open(args.json, "w") as fh:
            json.dump({"schema": SCHEMA, "version": __version__, "suite": args.suite,
                       "criteria": [r.as_dict() for r in results]}, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return EXIT_OK if all(r.passed for r in results) else EXIT_UNSAFE


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="monotone-infer", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(q, json_out=True):
        if json_out:
            q.add_argument("--json", metavar="PATH", help="also write the report as JSON")
        q.add_argument("--timing", action="store_true", help="include wall-clock time in the report")

    q = sub.add_parser("infer", help="infer an inductive invariant")
    q.add_argument("system")
    q.add_argument("--algo", choices=sorted(ENGINES), default="cdnf-itp")
    q.add_argument("--s", type=int, default=0, help="initial BMC depth")
    q.add_argument("--max-restarts", type=int, default=8)
    q.add_argument("--backwards", action="store_true", help="run on the reversed system and negate")
    common(q)
    q.set_defaults(func=cmd_infer)

    q = sub.add_parser("ai", help="abstract interpretation over a monotone basis")
    q.add_argument("system")
    q.add_argument("--basis", metavar="FILE", help="one cube per line (default: basis lines of the system)")
    q.add_argument("--mode", choices=("efficient", "direct"), default="efficient")
    common(q)
    q.set_defaults(func=cmd_ai)

    q = sub.add_parser("learn", help="learn a target formula or decision tree exactly")
    q.add_argument("target")
    q.add_argument("--n", type=int)
    common(q)
    q.set_defaults(func=cmd_learn)

    q = sub.add_parser("gen", help="generate a certified benchmark system")
    q.add_argument("family", choices=G.FAMILIES)
    q.add_argument("--n", type=int)
    q.add_argument("--seed", type=int, help=f"default: ${SEED_ENV} or 0")
    q.add_argument("-o", "--output", metavar="PATH")
    q.set_defaults(func=cmd_gen)

    q = sub.add_parser("verify", help="check a formula is an inductive invariant")
    q.add_argument("system")
    q.add_argument("invariant")
    q.set_defaults(func=cmd_verify)

    q = sub.add_parser("bench", help="run an acceptance suite")
    q.add_argument("--suite", default="acceptance", help=f"one of {', '.join(bench.SUITES)}")
    common(q)
    q.set_defaults(func=cmd_bench)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
