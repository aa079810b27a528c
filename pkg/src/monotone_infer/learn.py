"""Exact learning of CDNF targets from equivalence and membership queries."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .core.logic import Cube, Formula, State, TermList, conj, dnf_formula, vocabulary
from .monotone import moncube
from .oracle import ExplicitSet, truth_table

EquivalenceOracle = Callable[[Formula], Optional[State]]
MembershipOracle = Callable[[State], bool]


class OracleInconsistency(RuntimeError):
    def __init__(self, message: str, state: State):
        super().__init__(f"{message} (state {state})")
        self.state = state


@dataclass(frozen=True)
class Hypothesis:
    """Conjunction of DNFs H_i, each monotone with respect to its state b_i."""

    parts: Tuple[Tuple[TermList, State], ...] = ()

    def formula(self) -> Formula:
        return conj(*(dnf_formula(h) for h, _ in self.parts))

    def holds(self, x: State) -> bool:
        asg = x.assignment()
        return all(any(t.holds(asg) for t in h) for h, _ in self.parts)

    @property
    def basis(self) -> Tuple[State, ...]:
        return tuple(b for _, b in self.parts)


@dataclass(frozen=True)
class LearnResult:
    formula: Formula
    hypothesis: Hypothesis
    eq_queries: int
    mq_queries: int


class _CountingMQ:
    def __init__(self, mq: MembershipOracle):
        self.mq = mq
        self.calls = 0

    def __call__(self, x: State) -> bool:
        self.calls += 1
        return bool(self.mq(x))


def gen_mq(sigma: State, b: State, mq: MembershipOracle, check: bool = True) -> Cube:
    """Walk sigma toward b through members of the target; return moncube of the endpoint."""
    if check and not mq(sigma):
        raise OracleInconsistency("walk started from a non-member", sigma)
    v = sigma
    walked = True
    while walked:
        walked = False
        for j in range(len(v)):
            if b[j] == v[j]:
                continue
            x = v.with_bit(j, b[j])
            if mq(x):
                v = x
                walked = True
    return moncube(v, b.cube())


def cdnf_learn(eq: EquivalenceOracle, mq: MembershipOracle, n: int,
               max_rounds: Optional[int] = None) -> LearnResult:
    """Learn a target exactly as a conjunction of monotonized DNFs.

    A counterexample satisfying the hypothesis opens a new empty DNF based
    at that state; one violating it extends every DNF it violates with a
    walked-down term.  Counterexamples that contradict earlier answers
    abort with :class:`OracleInconsistency`.
    """
    counting = _CountingMQ(mq)
    parts: List[Tuple[List[Cube], State]] = []
    labels: Dict[State, bool] = {}
    eq_calls = 0
    while True:
        hyp = Hypothesis(tuple((tuple(h), b) for h, b in parts))
        eq_calls += 1
        x = eq(hyp.formula())
        if x is None:
            return LearnResult(hyp.formula(), hyp, eq_calls, counting.calls)
        x = State(x)
        if len(x) != n:
            raise OracleInconsistency(f"counterexample has {len(x)} bits, expected {n}", x)
        if max_rounds is not None and eq_calls > max_rounds:
            raise RuntimeError(f"no convergence within {max_rounds} equivalence queries")
        negative = hyp.holds(x)
        if labels.setdefault(x, not negative) == negative:
            raise OracleInconsistency("equivalence oracle classified a counterexample both ways", x)
        if counting(x) == negative:
            raise OracleInconsistency("membership oracle contradicts the equivalence counterexample", x)
        if negative:
            parts.append(([], x))
            continue
        asg = x.assignment()
        grown = 0
        for h, b in parts:
            if not any(t.holds(asg) for t in h):
                h.append(gen_mq(x, b, counting, check=False))
                grown += 1
        assert grown, "a positive counterexample violates at least one part"


def learn_monotonization(eq: EquivalenceOracle, mq: MembershipOracle, b: State) -> Tuple[TermList, int]:
    """Learn a target known to be b-monotone as a single DNF (fixed basis state)."""
    terms: List[Cube] = []
    eq_calls = 0
    while True:
        eq_calls += 1
        x = eq(dnf_formula(terms))
        if x is None:
            return tuple(terms), eq_calls
        x = State(x)
        if any(t.holds(x.assignment()) for t in terms):
            raise OracleInconsistency("target is not b-monotone or the oracle is inconsistent", x)
        terms.append(gen_mq(x, b, mq))


class TruthTableTeacher:
    """Exhaustive teacher for a target over n variables; counterexamples are lowest-index."""

    def __init__(self, target: Formula, n: int):
        self.n = n
        self.vocab = vocabulary(n)
        self.table = truth_table(target, self.vocab)
        self.eq_calls = 0
        self.mq_calls = 0

    @classmethod
    def from_set(cls, S: ExplicitSet) -> "TruthTableTeacher":
        obj = cls.__new__(cls)
        obj.n, obj.vocab, obj.table = S.n, vocabulary(S.n), S.bits.copy()
        obj.eq_calls = obj.mq_calls = 0
        return obj

    def eq(self, h: Formula) -> Optional[State]:
        self.eq_calls += 1
        diff = np.flatnonzero(truth_table(h, self.vocab) != self.table)
        return State.from_int(int(diff[0]), self.n) if len(diff) else None

    def mq(self, x: Sequence[bool]) -> bool:
        self.mq_calls += 1
        return bool(self.table[State(x).to_int()])

    def equivalent(self, f: Formula) -> bool:
        return bool(np.array_equal(truth_table(f, self.vocab), self.table))
