"""Acceptance experiments: each runs a batch of instances and checks bounds against brute force."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence

from ..absint import QUERY_CONSTANT, ai_direct, ai_efficient, lambda_bound, query_budget
from ..core.dtree import random_tree, tree_formula
from ..core.logic import Cube, Var, dnf_formula, vocabulary
from ..infer import INVARIANT, backward_itp, cdnf_itp, dual_itp, invariant_failures
from ..learn import TruthTableTeacher, cdnf_learn
from ..monotone import efficient_mono
from ..sat.queries import formula_oracle
from .. import oracle as O
from . import generators as G


@dataclass
class CriterionResult:
    ident: int
    title: str
    passed: bool
    measured: str
    bound: str
    runs: int = 0
    seconds: float = 0.0
    failures: List[str] = field(default_factory=list)

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return (f"criterion {self.ident:2d} {verdict}  {self.title}: measured {self.measured}; "
                f"bound {self.bound}; runs {self.runs}; {self.seconds:.1f}s")

    def as_dict(self) -> dict:
        return {"id": self.ident, "title": self.title, "passed": self.passed, "measured": self.measured,
                "bound": self.bound, "runs": self.runs, "seconds": round(self.seconds, 3),
                "failures": self.failures[:10]}


class _Tally:
    def __init__(self, ident: int, title: str):
        self.ident = ident
        self.title = title
        self.runs = 0
        self.failures: List[str] = []
        self.worst = 0.0
        self.worst_text = "-"

    def check(self, ok: bool, what: str) -> None:
        self.runs += 1
        if not ok:
            self.failures.append(what)

    def ratio(self, used: float, allowed: float, text: str) -> None:
        r = used / allowed if allowed else (0.0 if used == 0 else float("inf"))
        if r >= self.worst:
            self.worst = r
            self.worst_text = text

    def result(self, bound: str, seconds: float, measured: Optional[str] = None) -> CriterionResult:
        if measured is None:
            measured = f"worst {self.worst_text} (ratio {self.worst:.3f})" if self.worst_text != "-" else \
                f"{self.runs - len(self.failures)}/{self.runs} agree"
        return CriterionResult(self.ident, self.title, not self.failures and self.runs > 0, measured, bound,
                               self.runs, seconds, self.failures)


# ---------------------------------------------------------------------------
# monotonization


def _random_dnf(rng: random.Random, n: int) -> List[Cube]:
    terms = []
    for _ in range(rng.randint(1, 5)):
        vs = rng.sample(range(n), rng.randint(1, n))
        terms.append(Cube.from_mapping({Var(i): rng.random() < 0.5 for i in vs}))
    return terms


def _random_partial_cube(rng: random.Random, n: int) -> Cube:
    vs = rng.sample(range(n), rng.randint(0, n))
    return Cube.from_mapping({Var(i): rng.random() < 0.5 for i in vs})


def monotonization_experiment(seed: int = 1, count: int = 500, max_n: int = 8) -> List[CriterionResult]:
    start = time.perf_counter()
    rng = random.Random(seed)
    c1 = _Tally(1, "monotonization equals brute-force monotonization")
    c2 = _Tally(2, "monotonization query and iteration bounds")
    c3 = _Tally(3, "output terms are exactly the prime implicants (n <= 6)")
    for k in range(count):
        n = rng.randint(1, max_n)
        V = vocabulary(n)
        phi = _random_dnf(rng, n)
        b = _random_partial_cube(rng, n)
        out = efficient_mono(formula_oracle(dnf_formula(phi), V), b)
        exact = O.exact_monotonize(O.ExplicitSet.from_cubes(phi, V), b)
        tag = f"case {k} (n={n}, b={b})"
        c1.check(O.ExplicitSet.from_cubes(out.terms, V) == exact, tag)
        allowed = (n * n + n + 1) * len(out.terms)
        c2.check(out.queries <= allowed and out.iterations <= len(out.terms), tag)
        c2.ratio(out.queries, allowed, f"{out.queries} queries vs {allowed}")
        if n <= 6:
            c3.check(set(out.terms) == set(O.prime_implicants(exact, b)), tag)
    secs = time.perf_counter() - start
    return [c1.result("exact set equality", secs),
            c2.result("queries <= (n^2+n+1)*terms, iterations <= terms", secs),
            c3.result("exact term-set equality", secs)]


# ---------------------------------------------------------------------------
# inference


def _certified(build: Callable, n: int, rng: random.Random, retries: int = 20) -> G.Generated:
    for _ in range(retries):
        try:
            return build(n, rng)
        except G.CertificationError:
            continue
    raise G.CertificationError(f"no certified instance after {retries} attempts")


def _fenced_batch(seed: int, count: int) -> List[G.Generated]:
    """Half n=6, half n=8, cycling through the two-bits, tree and monotone families."""
    builders = [G.two_bits, lambda n, r: G.fenced_tree(n, r, leaves=r.randint(4, 10)), G.fenced_monotone]
    return [_certified(builders[k % 3], 6 if k % 2 == 0 else 8, random.Random(seed * 1000 + k))
            for k in range(count)]


def cdnf_experiment(seed: int = 4, count: int = 50) -> List[CriterionResult]:
    start = time.perf_counter()
    c4 = _Tally(4, "CDNF inference on fenced systems: success and query bounds")
    c5 = _Tally(5, "every blocking monotonization equals the monotonization of I (n = 6)")
    for k, gen in enumerate(_fenced_batch(seed, count)):
        n = gen.system.n
        I = gen.invariant_set()
        cnf = O.min_cnf_size(I) if n == 6 else gen.cnf_size
        dnf = O.min_dnf_size(I) if n == 6 else gen.dnf_size
        out = cdnf_itp(gen.system, gen.s)
        q = out.stats.queries
        tag = f"{gen.family} #{k} n={n} s={gen.s}"
        verified = out.status == INVARIANT and not invariant_failures(gen.system, out.invariant)
        bmc_allowed = cnf * dnf * (n * n + n + 1)
        c4.check(verified and q.inductiveness <= cnf and q.bmc <= bmc_allowed,
                 f"{tag}: {out.status}, checks {q.inductiveness}/{cnf}, bmc {q.bmc}/{bmc_allowed}")
        c4.ratio(q.inductiveness, cnf, f"{q.inductiveness} checks vs |I|cnf={cnf} ({tag})")
        if n == 6:
            for sigma, H in out.blocks:
                same = O.ExplicitSet.from_cubes(H.terms, vocabulary(n)) == O.exact_monotonize(I, sigma.cube())
                c5.check(same, f"{tag}: block at {sigma}")
    secs = time.perf_counter() - start
    return [c4.result("verified; checks <= |I|cnf; bmc <= |I|cnf*|I|dnf*(n^2+n+1)", secs),
            c5.result("exact set equality", secs)]


def tree_experiment(seed: int = 6, count: int = 30, n: int = 6) -> List[CriterionResult]:
    start = time.perf_counter()
    c6 = _Tally(6, "decision-tree invariants: checks <= m, bmc <= m^2 (n^2+n+1)")
    for k in range(count):
        rng = random.Random(seed * 1000 + k)
        gen = _certified(lambda n, r: G.fenced_tree(n, r, leaves=r.randint(2, 10)), n, rng)
        m = gen.leaves
        out = cdnf_itp(gen.system, gen.s)
        q = out.stats.queries
        bmc_allowed = m * m * (n * n + n + 1)
        ok = out.status == INVARIANT and q.inductiveness <= m and q.bmc <= bmc_allowed
        c6.check(ok, f"tree #{k} m={m}: checks {q.inductiveness}, bmc {q.bmc}")
        c6.ratio(q.inductiveness, m, f"{q.inductiveness} checks vs m={m}")
    return [c6.result("checks <= m and bmc <= m^2*(n^2+n+1)", time.perf_counter() - start)]


def backwards_experiment(seed: int = 7, count: int = 20) -> List[CriterionResult]:
    start = time.perf_counter()
    c7 = _Tally(7, "backwards-fenced systems solved through the reversed system")
    for k in range(count):
        n = 6 if k % 2 == 0 else 8
        rng = random.Random(seed * 1000 + k)
        gen = _certified(G.backwards_fenced, n, rng)
        out = backward_itp(gen.system, gen.s)
        ok = out.status == INVARIANT and not invariant_failures(gen.system, out.invariant)
        c7.check(ok, f"system #{k} n={n}: {out.status}")
    return [c7.result("verified invariant", time.perf_counter() - start)]


def dual_experiment(seed: int = 12, count: int = 30, n: int = 6) -> List[CriterionResult]:
    start = time.perf_counter()
    c12 = _Tally(12, "clause-based inference on monotone fenced invariants: iterations <= |I|cnf")
    for k in range(count):
        rng = random.Random(seed * 1000 + k)
        gen = _certified(G.fenced_monotone, n, rng)
        cnf = O.min_cnf_size(gen.invariant_set())
        out = dual_itp(gen.system, gen.s)
        it = out.stats.iterations
        c12.check(out.status == INVARIANT and it <= cnf, f"system #{k}: {out.status}, {it} iterations vs {cnf}")
        c12.ratio(it, cnf, f"{it} iterations vs |I|cnf={cnf}")
    return [c12.result("converges; iterations <= |I|cnf", time.perf_counter() - start)]


# ---------------------------------------------------------------------------
# abstract interpretation


def ai_experiment(seed: int = 8, count: int = 100, parity_sizes: Sequence[int] = (5, 7, 9)) -> List[CriterionResult]:
    start = time.perf_counter()
    c8 = _Tally(8, "table-based, direct and brute-force iterates coincide")
    c9 = _Tally(9, "iterations <= lambda bound; parity Tr factor = n")
    c10 = _Tally(10, f"total queries <= {QUERY_CONSTANT}*(n^2*L + (n+m)*L^2)")
    rng = random.Random(seed)
    cases = []
    for k in range(count):
        n = rng.randint(1, 5)
        ts = G.random_system(n, rng)
        basis = G.random_basis(n, rng, rng.randint(1, 2))
        cases.append((f"random #{k} n={n} m={len(basis)}", ts, basis, None))
    for n in parity_sizes:
        ts = G.parity_system(n)
        cases.append((f"parity n={n}", ts, ts.basis, n))
    for tag, ts, basis, parity_n in cases:
        n, m = ts.n, len(basis)
        eff = ai_efficient(ts, basis)
        lam = lambda_bound(ts, basis)
        if parity_n is None:
            direct = ai_direct(ts, basis)
            exact = O.exact_abstract_fixpoint(ts, basis)
            V = vocabulary(n)
            same = len(eff.trace) == len(direct.trace) == len(exact) and all(
                O.ExplicitSet.from_formula(a.formula(), V) == c == O.ExplicitSet.from_formula(b.formula(), V)
                for a, b, c in zip(eff.trace, direct.trace, exact))
            c8.check(same, tag)
        ok9 = eff.iterations <= lam.value and all(len(x.dnf()) <= lam.value for x in eff.trace)
        if parity_n is not None:
            ok9 = ok9 and lam.tr_factors == (parity_n,)
        c9.check(ok9, f"{tag}: {eff.iterations} iterations, lambda {lam.value}, tr factors {lam.tr_factors}")
        c9.ratio(eff.iterations, lam.value, f"{eff.iterations} iterations vs lambda={lam.value} ({tag})")
        allowed = query_budget(n, m, lam.value)
        c10.check(eff.queries.total <= allowed, f"{tag}: {eff.queries.total} queries vs {allowed}")
        c10.ratio(eff.queries.total, allowed, f"{eff.queries.total} queries vs {allowed} ({tag})")
    secs = time.perf_counter() - start
    return [c8.result("exact equality at every iteration", secs),
            c9.result("iterations <= lambda; term counts <= lambda; parity Tr factor == n", secs),
            c10.result(f"constant {QUERY_CONSTANT}", secs)]


# ---------------------------------------------------------------------------
# learning


def learn_experiment(seed: int = 11, count: int = 100) -> List[CriterionResult]:
    start = time.perf_counter()
    c11 = _Tally(11, "exact learning of decision-tree targets")
    rng = random.Random(seed)
    for k in range(count):
        n = rng.randint(1, 8)
        t = random_tree(rng, n, rng.randint(1, 8))
        target = tree_formula(t)
        teacher = TruthTableTeacher(target, n)
        res = cdnf_learn(teacher.eq, teacher.mq, n)
        S = O.ExplicitSet.from_formula(target, vocabulary(n))
        cnf, dnf = O.min_cnf_size(S), O.min_dnf_size(S)
        allowed = cnf * (n * dnf + 1) + 1
        ok = teacher.equivalent(res.formula) and res.eq_queries <= allowed
        c11.check(ok, f"target #{k} n={n}: eq {res.eq_queries} vs {allowed}")
        c11.ratio(res.eq_queries, allowed, f"{res.eq_queries} eq queries vs {allowed}")
    return [c11.result("equivalent; eq <= |f|cnf*(n*|f|dnf+1)+1", time.perf_counter() - start)]


EXPERIMENTS: Dict[str, Callable[[], List[CriterionResult]]] = {
    "monotonization": monotonization_experiment,
    "cdnf": cdnf_experiment,
    "trees": tree_experiment,
    "backwards": backwards_experiment,
    "ai": ai_experiment,
    "learn": learn_experiment,
    "dual": dual_experiment,
}

# Reduced instance counts for a quick end-to-end run.
SMOKE = {
    "monotonization": dict(count=40, max_n=6),
    "cdnf": dict(count=4),
    "trees": dict(count=4),
    "backwards": dict(count=2),
    "ai": dict(count=8, parity_sizes=(5,)),
    "learn": dict(count=10),
    "dual": dict(count=4),
}

SUITES: Dict[str, Sequence[str]] = {
    "acceptance": tuple(EXPERIMENTS),
    "bounds": tuple(EXPERIMENTS),
    "smoke": tuple(SMOKE),
    "empty": (),
}


def run_suite(name: str) -> List[CriterionResult]:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; known suites: {', '.join(SUITES)}")
    overrides = SMOKE if name == "smoke" else {}
    results = [r for key in SUITES[name] for r in EXPERIMENTS[key](**overrides.get(key, {}))]
    return sorted(results, key=lambda r: r.ident)
