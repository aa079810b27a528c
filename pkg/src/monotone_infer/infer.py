"""Interpolation-style invariant inference driven by bounded reachability.

Both engines start from the candidate ``not Bad`` and repeatedly strengthen
it with a conjunct that excludes the pre-state of a counterexample to
induction while still containing every state reachable in ``s`` steps:

* ``dual_itp`` adds a minimal clause;
* ``cdnf_itp`` adds the monotonization of R_s with respect to that state.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Tuple, Union

from .core.logic import Clause, Formula, State, conj, neg, vocabulary
from .core.system import TransitionSystem
from .monotone import Monotonization, efficient_mono
from .sat.queries import Backend, QueryCounter, SatOracle, check_inductive, reach_oracle, solve

INVARIANT = "invariant"
UNSAFE = "unsafe"
RESTART = "restart"


class ContractError(ValueError):
    pass


class SoundnessError(RuntimeError):
    def __init__(self, message: str, failures):
        super().__init__(message)
        self.failures = failures


@dataclass(frozen=True)
class CandidateInvariant:
    """``not Bad`` conjoined with clauses and monotonizations."""

    base: Formula
    conjuncts: Tuple[Union[Clause, Monotonization], ...] = ()

    def strengthen(self, c: Union[Clause, Monotonization]) -> "CandidateInvariant":
        return CandidateInvariant(self.base, self.conjuncts + (c,))

    def formula(self) -> Formula:
        parts = [self.base]
        for c in self.conjuncts:
            parts.append(c.to_formula() if isinstance(c, Clause) else c.formula())
        return conj(*parts)


@dataclass
class RunStats:
    queries: QueryCounter = field(default_factory=QueryCounter)
    gate: QueryCounter = field(default_factory=QueryCounter)
    iterations: int = 0
    seconds: float = 0.0

    def as_dict(self):
        return {"queries": self.queries.as_dict(), "gate": self.gate.as_dict(),
                "iterations": self.iterations, "seconds": round(self.seconds, 6)}


@dataclass(frozen=True)
class InferenceOutcome:
    status: str
    s: int
    stats: RunStats
    invariant: Optional[Formula] = None
    candidate: Optional[CandidateInvariant] = None
    counterexamples: Tuple[State, ...] = ()
    blocks: Tuple[Tuple[State, Monotonization], ...] = ()
    reached: Optional[State] = None

    @property
    def found(self) -> bool:
        return self.status == INVARIANT


# ---------------------------------------------------------------------------
# soundness gate


def invariant_failures(ts: TransitionSystem, inv: Formula, counter: Optional[QueryCounter] = None,
                       backend: Optional[Backend] = None):
    """Check Init => I, I & Tr => I', I => not Bad.

    Returns a list of (condition, witness) for every violated condition;
    witnesses are a State, or a (pre, post) pair for consecution.
    """
    V = vocabulary(ts.n)
    failures = []
    model = solve(conj(ts.init, neg(inv)), counter, "plain", backend)
    if model is not None:
        failures.append(("initiation", State(model.get(v, False) for v in V)))
    cti = check_inductive(ts, inv, counter, backend)
    if cti is not None:
        failures.append(("consecution", cti))
    model = solve(conj(inv, ts.bad), counter, "plain", backend)
    if model is not None:
        failures.append(("safety", State(model.get(v, False) for v in V)))
    return failures


def soundness_gate(ts: TransitionSystem, inv: Formula, counter: Optional[QueryCounter] = None,
                   backend: Optional[Backend] = None) -> None:
    failures = invariant_failures(ts, inv, counter, backend)
    if failures:
        desc = "; ".join(f"{name} fails at {w}" for name, w in failures)
        raise SoundnessError(f"returned formula is not an inductive invariant: {desc}", failures)


# ---------------------------------------------------------------------------
# engines


def minimal_clause(sigma: State, ts: TransitionSystem, s: int, counter: Optional[QueryCounter] = None,
                   oracle: Optional[SatOracle] = None, check: bool = True) -> Clause:
    """A clause over the negated literals of sigma that R_s implies, with no droppable literal.

    Literals are tried for removal once each, in ascending variable order.
    """
    R = oracle if oracle is not None else reach_oracle(ts, s, counter)
    if check and R.intersects(sigma.cube()):
        raise ContractError(f"state {sigma} is reachable within {s} steps")
    clause = sigma.cube().negate()
    for v in vocabulary(ts.n):
        smaller = clause.without(v)
        if not R.intersects(smaller.negate()):
            clause = smaller
    return clause


def _run(ts: TransitionSystem, s: int, block: Callable, backend: Optional[Backend],
         gate: bool, max_iterations: Optional[int]) -> InferenceOutcome:
    if s < 0:
        raise ValueError("s must be nonnegative")
    start = time.perf_counter()
    stats = RunStats()
    R = reach_oracle(ts, s, stats.queries, backend)
    cand = CandidateInvariant(neg(ts.bad))
    ctis: List[State] = []
    blocks = []

    def done(status, **kw):
        stats.seconds = time.perf_counter() - start
        return InferenceOutcome(status, s, stats, candidate=cand, counterexamples=tuple(ctis),
                                blocks=tuple(blocks), **kw)

    hit = R.witness(ts.bad)
    if hit is not None:
        return done(UNSAFE, reached=hit)
    while True:
        phi = cand.formula()
        cti = check_inductive(ts, phi, stats.queries, backend)
        if cti is None:
            if gate:
                soundness_gate(ts, phi, stats.gate, backend)
            return done(INVARIANT, invariant=phi)
        if max_iterations is not None and stats.iterations >= max_iterations:
            raise RuntimeError(f"no convergence within {max_iterations} iterations")
        sigma = cti[0]
        stats.iterations += 1
        ctis.append(sigma)
        if R.intersects(sigma.cube()):
            return done(RESTART, reached=sigma)
        conjunct = block(sigma, R)
        if isinstance(conjunct, Monotonization):
            blocks.append((sigma, conjunct))
        cand = cand.strengthen(conjunct)


def dual_itp(ts: TransitionSystem, s: int, backend: Optional[Backend] = None, gate: bool = True,
             max_iterations: Optional[int] = None) -> InferenceOutcome:
    """Strengthen by minimal clauses that exclude counterexample pre-states."""
    return _run(ts, s, lambda sigma, R: minimal_clause(sigma, ts, s, oracle=R, check=False),
                backend, gate, max_iterations)


def cdnf_itp(ts: TransitionSystem, s: int, backend: Optional[Backend] = None, gate: bool = True,
             max_iterations: Optional[int] = None) -> InferenceOutcome:
    """Strengthen by the monotonization of R_s relative to each counterexample pre-state."""
    return _run(ts, s, lambda sigma, R: efficient_mono(R, sigma.cube()), backend, gate, max_iterations)


def reverse_system(ts: TransitionSystem) -> TransitionSystem:
    """(Bad, inverse Tr, Init)."""
    return ts.reversed()


def backward_itp(ts: TransitionSystem, s: int, engine: Callable = cdnf_itp, backend: Optional[Backend] = None,
                 gate: bool = True) -> InferenceOutcome:
    """Run an engine on the reversed system and negate what it finds.

    An invariant J of the reversed system contains Bad, is closed under
    predecessors and misses Init, so its negation is an invariant of ``ts``.
    """
    out = engine(reverse_system(ts), s, backend=backend, gate=False)
    if out.status != INVARIANT:
        return out
    inv = neg(out.invariant)
    if gate:
        soundness_gate(ts, inv, out.stats.gate, backend)
    return InferenceOutcome(INVARIANT, s, out.stats, invariant=inv, candidate=out.candidate,
                            counterexamples=out.counterexamples, blocks=out.blocks)


ENGINES = {"cdnf-itp": cdnf_itp, "dual-itp": dual_itp}


@dataclass(frozen=True)
class DriverResult:
    outcome: InferenceOutcome
    restarts: int
    queries: QueryCounter
    iterations: int


def infer_with_restarts(ts: TransitionSystem, engine: Callable = cdnf_itp, s: int = 0, max_restarts: int = 8,
                        backend: Optional[Backend] = None) -> DriverResult:
    """Rerun the engine with s <- max(1, 2s) while it asks for a restart."""
    total = QueryCounter()
    iterations = 0
    restarts = 0
    while True:
        out = engine(ts, s, backend=backend)
        for kind, count in out.stats.queries.as_dict().items():
            setattr(total, kind, getattr(total, kind) + count)
        iterations += out.stats.iterations
        if out.status != RESTART or restarts >= max_restarts:
            return DriverResult(out, restarts, total, iterations)
        restarts += 1
        s = max(1, 2 * s)

