"""SAT queries with accounting: plain checks, BMC, inductiveness."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, Mapping, Optional, Protocol, Sequence, Tuple, Union

from ..core.logic import (Cube, Formula, State, Var, conj, disj, equal_states, neg, prime, rename_copies,
                          variables, vocabulary)
from ..core.system import TransitionSystem
from .cnf import CnfEncoder
from .solver import CdclSolver

KINDS = ("plain", "bmc", "inductiveness")


@dataclass
class QueryCounter:
    plain: int = 0
    bmc: int = 0
    inductiveness: int = 0

    def tick(self, kind: str) -> None:
        if kind not in KINDS:
            raise ValueError(f"unknown query kind {kind!r}")
        setattr(self, kind, getattr(self, kind) + 1)

    @property
    def total(self) -> int:
        return self.plain + self.bmc + self.inductiveness

    def as_dict(self) -> Dict[str, int]:
        return {"plain": self.plain, "bmc": self.bmc, "inductiveness": self.inductiveness}

    def snapshot(self) -> "QueryCounter":
        return QueryCounter(self.plain, self.bmc, self.inductiveness)


class SolverSession(Protocol):
    def solve(self, extra: Iterable[Sequence[int]] = (), num_vars: Optional[int] = None): ...


class Backend(Protocol):
    def session(self, num_vars: int, clauses) -> SolverSession: ...


class BuiltinBackend:
    def session(self, num_vars: int, clauses) -> CdclSolver:
        return CdclSolver(num_vars, clauses)


DEFAULT_BACKEND = BuiltinBackend()


def _backend(backend: Optional[Backend]) -> Backend:
    return backend if backend is not None else DEFAULT_BACKEND


def solve(f: Formula, counter: Optional[QueryCounter] = None, kind: str = "plain",
          backend: Optional[Backend] = None) -> Optional[Dict[Var, bool]]:
    """A satisfying assignment over the variables of ``f``, or None."""
    if counter is not None:
        counter.tick(kind)
    enc = CnfEncoder()
    enc.assert_formula(f)
    for v in sorted(variables(f)):
        enc.var(v)
    model = _backend(backend).session(enc.num_vars, enc.clauses).solve()
    if model is None:
        return None
    return {v: model[i] for v, i in enc.all_var_ids().items()}


def is_sat(f: Formula, counter: Optional[QueryCounter] = None, kind: str = "plain",
           backend: Optional[Backend] = None) -> bool:
    return solve(f, counter, kind, backend) is not None


Theta = Union[Cube, Formula]


class SatOracle:
    """Intersection oracle for a set given implicitly by a formula.

    ``witness(theta)`` answers SAT(base AND theta).  ``theta`` and the
    returned state are over ``vocab``; ``theta_map`` renames theta's copies
    into the base's vocabulary and ``read_vocab`` names the solver variables
    the witness is read from (e.g. the last copy of a BMC unrolling).
    """

    def __init__(self, base: Formula, vocab: Sequence[Var], counter: Optional[QueryCounter] = None,
                 kind: str = "plain", *, read_vocab: Optional[Sequence[Var]] = None,
                 theta_map: Optional[Mapping[int, int]] = None, backend: Optional[Backend] = None):
        self.vocab = tuple(vocab)
        self.read_vocab = tuple(read_vocab) if read_vocab is not None else self.vocab
        self.theta_map = dict(theta_map) if theta_map else None
        self.counter = counter if counter is not None else QueryCounter()
        self.kind = kind
        self.base = base
        self.calls = 0
        enc = CnfEncoder()
        enc.assert_formula(base)
        for v in self.read_vocab:
            enc.var(v)
        self._enc = enc
        self._read_ids = [enc.var(v) for v in self.read_vocab]
        self._session = _backend(backend).session(enc.num_vars, enc.clauses)

    def _rename(self, theta: Theta) -> Theta:
        if self.theta_map is None:
            return theta
        if isinstance(theta, Cube):
            return theta.rename(self.theta_map)
        mapping = {c: self.theta_map.get(c, c) for c in {v.copy for v in variables(theta)}}
        return rename_copies(theta, mapping)

    def witness(self, theta: Optional[Theta] = None) -> Optional[State]:
        self.counter.tick(self.kind)
        self.calls += 1
        child = CnfEncoder(parent=self._enc)
        if theta is not None:
            theta = self._rename(theta)
            if isinstance(theta, Cube):
                child.assert_cube(theta)
            else:
                child.assert_formula(theta)
        model = self._session.solve(child.clauses, child.num_vars)
        if model is None:
            return None
        return State(model[i] for i in self._read_ids)

    def intersects(self, theta: Optional[Theta] = None) -> bool:
        return self.witness(theta) is not None


def formula_oracle(phi: Formula, vocab: Sequence[Var], counter: Optional[QueryCounter] = None,
                   kind: str = "plain", backend: Optional[Backend] = None) -> SatOracle:
    return SatOracle(phi, vocab, counter, kind, backend=backend)


# ---------------------------------------------------------------------------
# transition-system queries


def unroll(ts: TransitionSystem, s: int) -> Formula:
    """Init at copy 0 and s stuttering-or-Tr steps up to copy s."""
    parts = [ts.init]
    for k in range(s):
        step = rename_copies(ts.tr, {0: k, 1: k + 1})
        frame = equal_states(vocabulary(ts.n, k), vocabulary(ts.n, k + 1))
        parts.append(disj(step, frame))
    return conj(*parts)


def bmc_reach_formula(ts: TransitionSystem, s: int, psi: Formula) -> Formula:
    """Satisfiable iff some state reachable in at most s steps satisfies psi."""
    if s < 0:
        raise ValueError("s must be nonnegative")
    return conj(unroll(ts, s), rename_copies(psi, {0: s}))


def reach_oracle(ts: TransitionSystem, s: int, counter: Optional[QueryCounter] = None,
                 backend: Optional[Backend] = None) -> SatOracle:
    """Intersection oracle for R_s, the states reachable in at most s steps."""
    return SatOracle(unroll(ts, s), vocabulary(ts.n), counter, "bmc",
                     read_vocab=vocabulary(ts.n, s), theta_map={0: s}, backend=backend)


def check_inductive(ts: TransitionSystem, candidate: Formula, counter: Optional[QueryCounter] = None,
                    backend: Optional[Backend] = None) -> Optional[Tuple[State, State]]:
    """None if candidate AND Tr implies candidate'; otherwise a counterexample to induction."""
    model = solve(conj(candidate, ts.tr, neg(prime(candidate))), counter, "inductiveness", backend)
    if model is None:
        return None
    pre = State(model.get(v, False) for v in vocabulary(ts.n, 0))
    post = State(model.get(v, False) for v in vocabulary(ts.n, 1))
    return pre, post
