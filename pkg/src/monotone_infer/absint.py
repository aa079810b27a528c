"""Kleene iteration in the monotone-span domain of a fixed basis.

An abstract element is a conjunction of DNFs, one per basis cube.  Two
implementations of the same iteration are provided:

``ai_direct``
    recomputes the monotone hull of the post-image each round by running
    efficient_mono against an implicit post-image oracle;
``ai_efficient``
    monotonizes ``Tr | Init'`` once per basis cube and then builds each
    iterate by picking the table terms whose pre-state half meets the
    previous iterate.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from .core.logic import (Cube, Formula, TermList, conj, dnf_formula, disj, neg, normalize_terms, prime,
                         prune_subsumed, two_vocabulary, vocabulary)
from .core.system import TransitionSystem
from .monotone import Monotonization, efficient_mono
from .sat.queries import Backend, QueryCounter, SatOracle, formula_oracle, solve


def cube_join(basis: Sequence[Cube]) -> Cube:
    """Literals common to every basis cube."""
    if not basis:
        raise ValueError("empty basis")
    common = dict(basis[0].polarity)
    for b in basis[1:]:
        common = {v: p for v, p in common.items() if b.get(v) == p}
    return Cube.from_mapping(common)


def reflect(d: Cube) -> Cube:
    return Cube.from_mapping({v: not p for v, p in d.polarity.items()})


def restrict_term(t: Cube, copy: int) -> Cube:
    """The literals of t over one vocabulary copy (0 = pre-state, 1 = post-state)."""
    return t.restrict(copy)


def transformer_cube(basis: Sequence[Cube], j: int) -> Cube:
    """reflect(join(B)) on the pre-state vocabulary together with b_j on the post-state one."""
    return reflect(cube_join(basis)).conjoin(basis[j].rename({0: 1}))


@dataclass(frozen=True)
class AbstractElement:
    components: Tuple[TermList, ...]
    index: int

    def formula(self) -> Formula:
        return conj(*(dnf_formula(c) for c in self.components))

    def dnf(self) -> TermList:
        """The conjunction multiplied out into one subsumption-pruned DNF."""
        out = []
        for combo in itertools.product(*self.components):
            acc: Optional[Cube] = Cube()
            for t in combo:
                acc = acc.conjoin(t)
                if acc is None:
                    break
            if acc is not None:
                out.append(acc)
        return prune_subsumed(out)


@dataclass
class AIResult:
    fixpoint: AbstractElement
    trace: List[AbstractElement]
    iterations: int
    queries: QueryCounter
    gate: QueryCounter = field(default_factory=QueryCounter)
    table: Tuple[Monotonization, ...] = ()
    safe: Optional[bool] = None
    seconds: float = 0.0


def _check_basis(ts: TransitionSystem, basis: Sequence[Cube]) -> Tuple[Cube, ...]:
    basis = tuple(basis)
    if not basis:
        raise ValueError("empty basis")
    V = set(vocabulary(ts.n))
    for b in basis:
        if not b.dom() <= V:
            raise ValueError(f"basis cube {b} is not over the unprimed vocabulary")
    return basis


def _implies(a: Formula, b: Formula, counter: QueryCounter, backend: Optional[Backend]) -> bool:
    return solve(conj(a, neg(b)), counter, "plain", backend) is None


def _init_monos(ts: TransitionSystem, basis, counter, backend) -> Tuple[Monotonization, ...]:
    init = formula_oracle(ts.init, vocabulary(ts.n), counter, backend=backend)
    return tuple(efficient_mono(init, b) for b in basis)


def _first_iterate(monos: Sequence[Monotonization]) -> AbstractElement:
    return AbstractElement(tuple(m.terms for m in monos), 0)


def _finish(ts, trace, counter, start, backend, table=()) -> AIResult:
    gate = QueryCounter()
    fix = trace[-1]
    safe = solve(conj(fix.formula(), ts.bad), gate, "plain", backend) is None
    return AIResult(fix, trace, fix.index, counter, gate, tuple(table), safe, time.perf_counter() - start)


def _iterate(step, counter, backend, max_iterations, first) -> List[AbstractElement]:
    trace = [first]
    prev: Formula = disj()
    while not _implies(trace[-1].formula(), prev, counter, backend):
        if max_iterations is not None and trace[-1].index >= max_iterations:
            raise RuntimeError(f"no convergence within {max_iterations} iterations")
        prev = trace[-1].formula()
        trace.append(step(trace[-1]))
    return trace


def ai_direct(ts: TransitionSystem, basis: Sequence[Cube], backend: Optional[Backend] = None,
              max_iterations: Optional[int] = None) -> AIResult:
    """Each iterate is the hull of tr(previous) | Init, via an implicit post-image oracle."""
    start = time.perf_counter()
    basis = _check_basis(ts, basis)
    counter = QueryCounter()
    V = vocabulary(ts.n)

    def step(xi: AbstractElement) -> AbstractElement:
        post = SatOracle(disj(conj(xi.formula(), ts.tr), prime(ts.init)), V, counter, "plain",
                         read_vocab=vocabulary(ts.n, 1), theta_map={0: 1}, backend=backend)
        return AbstractElement(tuple(efficient_mono(post, b).terms for b in basis), xi.index + 1)

    first = _first_iterate(_init_monos(ts, basis, counter, backend))
    trace = _iterate(step, counter, backend, max_iterations, first)
    return _finish(ts, trace, counter, start, backend)


def abstract_tr(ts: TransitionSystem, basis: Sequence[Cube], counter: Optional[QueryCounter] = None,
                backend: Optional[Backend] = None, split: bool = True,
                init_monos: Optional[Sequence[Monotonization]] = None) -> Tuple[Monotonization, ...]:
    """Per basis cube, the monotonization of Tr | Init' over both vocabularies.

    Monotonization distributes over disjunction, so by default the Tr part
    is monotonized over both vocabularies and the Init part over the
    unprimed one (then primed, leaving the pre-state free).  With
    ``split=False`` the disjunction is monotonized in one call; the result
    is equivalent, but since efficient_mono keeps every literal outside the
    basis cube's domain, the Init' terms then repeat once per pre-state
    assignment outside that domain.  ``init_monos`` may supply the Init
    monotonizations when the caller already has them.
    """
    basis = _check_basis(ts, basis)
    counter = counter if counter is not None else QueryCounter()
    W = two_vocabulary(ts.n)
    if not split:
        oracle = formula_oracle(disj(ts.tr, prime(ts.init)), W, counter, backend=backend)
        return tuple(efficient_mono(oracle, transformer_cube(basis, j)) for j in range(len(basis)))
    tr_oracle = formula_oracle(ts.tr, W, counter, backend=backend)
    if init_monos is None:
        init_monos = _init_monos(ts, basis, counter, backend)
    out = []
    for j, init_part in enumerate(init_monos):
        tr_part = efficient_mono(tr_oracle, transformer_cube(basis, j))
        terms = normalize_terms(tr_part.terms + tuple(t.rename({0: 1}) for t in init_part.terms))
        out.append(Monotonization(terms, transformer_cube(basis, j), tr_part.iterations + init_part.iterations,
                                  tr_part.queries + init_part.queries))
    return tuple(out)


def ai_efficient(ts: TransitionSystem, basis: Sequence[Cube], backend: Optional[Backend] = None,
                 max_iterations: Optional[int] = None) -> AIResult:
    """Iterates assembled from a precomputed transformer table."""
    start = time.perf_counter()
    basis = _check_basis(ts, basis)
    counter = QueryCounter()
    init_monos = _init_monos(ts, basis, counter, backend)
    table = abstract_tr(ts, basis, counter, backend, init_monos=init_monos)
    halves = [[(restrict_term(t, 0), restrict_term(t, 1).rename({1: 0})) for t in comp.terms] for comp in table]

    def step(xi: AbstractElement) -> AbstractElement:
        oracle = formula_oracle(xi.formula(), vocabulary(ts.n), counter, backend=backend)
        memo = {}
        kept = []
        for comp in halves:
            posts = []
            for pre, post in comp:
                if pre not in memo:
                    memo[pre] = oracle.intersects(pre)
                if memo[pre]:
                    posts.append(post)
            kept.append(normalize_terms(posts))
        return AbstractElement(tuple(kept), xi.index + 1)

    trace = _iterate(step, counter, backend, max_iterations, _first_iterate(init_monos))
    return _finish(ts, trace, counter, start, backend, table)


@dataclass(frozen=True)
class LambdaBound:
    value: int
    tr_factors: Tuple[int, ...]
    init_factors: Tuple[int, ...]


def lambda_bound(ts: TransitionSystem, basis: Sequence[Cube], counter: Optional[QueryCounter] = None,
                 backend: Optional[Backend] = None) -> LambdaBound:
    """Product over basis cubes of the DNF sizes of the Tr and Init monotonizations."""
    basis = _check_basis(ts, basis)
    counter = counter if counter is not None else QueryCounter()
    tr_oracle = formula_oracle(ts.tr, two_vocabulary(ts.n), counter, backend=backend)
    init_oracle = formula_oracle(ts.init, vocabulary(ts.n), counter, backend=backend)
    trs, inits = [], []
    value = 1
    for j, b in enumerate(basis):
        trs.append(len(efficient_mono(tr_oracle, transformer_cube(basis, j))))
        inits.append(len(efficient_mono(init_oracle, b)))
        value *= trs[-1] + inits[-1]
    return LambdaBound(value, tuple(trs), tuple(inits))


# Implementation constant for the total-query budget of ai_efficient.
QUERY_CONSTANT = 4


def query_budget(n: int, m: int, lam: int, constant: int = QUERY_CONSTANT) -> int:
    """Allowed total queries for the table-based iteration."""
    return constant * (n * n * lam + (n + m) * lam * lam)
