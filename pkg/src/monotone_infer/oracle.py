"""Brute-force reference semantics over explicit state sets.

Everything here works on truth tables (numpy bool arrays indexed by the
integer encoding of a state, bit i = i-th vocabulary position) and never
calls the SAT layer, so it can serve as an independent check of the
symbolic algorithms.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .core.logic import (And, Atom, Const, Cube, Formula, Iff, Not, Or, State, Var, Xor, two_vocabulary,
                         vocabulary)
from .core.system import TransitionSystem

CAPS = {"set": 20, "loop": 12}


class CapExceeded(ValueError):
    pass


def _check_cap(n: int, which: str = "set") -> None:
    if n > CAPS[which]:
        raise CapExceeded(f"{n} variables exceeds the {which} cap of {CAPS[which]}")


def truth_table(f: Formula, vocab: Sequence[Var]) -> np.ndarray:
    n = len(vocab)
    _check_cap(n)
    idx = np.arange(1 << n, dtype=np.int64)
    pos = {v: i for i, v in enumerate(vocab)}
    memo: Dict[int, np.ndarray] = {}

    def go(g: Formula) -> np.ndarray:
        hit = memo.get(id(g))
        if hit is not None:
            return hit
        if isinstance(g, Atom):
            if g.var not in pos:
                raise KeyError(f"{g.var} not in vocabulary")
            out = ((idx >> pos[g.var]) & 1).astype(bool)
        elif isinstance(g, Const):
            out = np.full(1 << n, g.value, dtype=bool)
        elif isinstance(g, Not):
            out = ~go(g.arg)
        elif isinstance(g, And):
            out = np.ones(1 << n, dtype=bool)
            for a in g.args:
                out = out & go(a)
        elif isinstance(g, Or):
            out = np.zeros(1 << n, dtype=bool)
            for a in g.args:
                out = out | go(a)
        elif isinstance(g, Xor):
            out = np.zeros(1 << n, dtype=bool)
            for a in g.args:
                out = out ^ go(a)
        elif isinstance(g, Iff):
            out = go(g.left) == go(g.right)
        else:
            raise TypeError(f"not a formula: {g!r}")
        memo[id(g)] = out
        return out

    return go(f)


@dataclass(frozen=True, eq=False)
class ExplicitSet:
    n: int
    bits: np.ndarray

    def __post_init__(self):
        _check_cap(self.n)
        if self.bits.shape != (1 << self.n,):
            raise ValueError("bitmap size does not match n")

    @classmethod
    def empty(cls, n: int) -> "ExplicitSet":
        return cls(n, np.zeros(1 << n, dtype=bool))

    @classmethod
    def full(cls, n: int) -> "ExplicitSet":
        return cls(n, np.ones(1 << n, dtype=bool))

    @classmethod
    def from_formula(cls, f: Formula, vocab: Sequence[Var]) -> "ExplicitSet":
        return cls(len(vocab), truth_table(f, vocab))

    @classmethod
    def from_states(cls, states: Iterable[Sequence[bool]], n: int) -> "ExplicitSet":
        bits = np.zeros(1 << n, dtype=bool)
        for s in states:
            bits[State(s).to_int()] = True
        return cls(n, bits)

    @classmethod
    def from_cubes(cls, cubes: Iterable[Cube], vocab: Sequence[Var]) -> "ExplicitSet":
        """Union of the cubes (a DNF)."""
        n = len(vocab)
        idx = np.arange(1 << n, dtype=np.int64)
        pos = {v: i for i, v in enumerate(vocab)}
        bits = np.zeros(1 << n, dtype=bool)
        for c in cubes:
            care = val = 0
            for v, p in c.polarity.items():
                care |= 1 << pos[v]
                if p:
                    val |= 1 << pos[v]
            bits |= (idx & care) == val
        return cls(n, bits)

    @classmethod
    def from_predicate(cls, n: int, pred) -> "ExplicitSet":
        return cls(n, np.array([bool(pred(State.from_int(i, n))) for i in range(1 << n)], dtype=bool))

    def __and__(self, other: "ExplicitSet") -> "ExplicitSet":
        return ExplicitSet(self.n, self.bits & other.bits)

    def __or__(self, other: "ExplicitSet") -> "ExplicitSet":
        return ExplicitSet(self.n, self.bits | other.bits)

    def __invert__(self) -> "ExplicitSet":
        return ExplicitSet(self.n, ~self.bits)

    def __sub__(self, other: "ExplicitSet") -> "ExplicitSet":
        return ExplicitSet(self.n, self.bits & ~other.bits)

    def __eq__(self, other) -> bool:
        return isinstance(other, ExplicitSet) and self.n == other.n and bool(np.array_equal(self.bits, other.bits))

    def __le__(self, other: "ExplicitSet") -> bool:
        return not bool(np.any(self.bits & ~other.bits))

    def __len__(self) -> int:
        return int(self.bits.sum())

    def __contains__(self, state) -> bool:
        return bool(self.bits[State(state).to_int()])

    def is_empty(self) -> bool:
        return not bool(self.bits.any())

    def states(self) -> List[State]:
        return [State.from_int(int(i), self.n) for i in np.flatnonzero(self.bits)]

    def first(self) -> Optional[State]:
        nz = np.flatnonzero(self.bits)
        return State.from_int(int(nz[0]), self.n) if len(nz) else None


def _axis_view(bits: np.ndarray, n: int, i: int) -> np.ndarray:
    """View with axis 1 indexing bit i."""
    return bits.reshape(1 << (n - i - 1), 2, 1 << i)


def _cube_positions(b: Cube, vocab: Sequence[Var]) -> List[Tuple[int, bool]]:
    pos = {v: i for i, v in enumerate(vocab)}
    out = []
    for v, p in b.polarity.items():
        if v not in pos:
            raise KeyError(f"{v} not in vocabulary")
        out.append((pos[v], p))
    return sorted(out)


def exact_monotonize(S: ExplicitSet, b: Cube, vocab: Optional[Sequence[Var]] = None) -> ExplicitSet:
    """{x : exists v in S with v <=_b x}: close S under flipping bits away from b."""
    vocab = vocab if vocab is not None else vocabulary(S.n)
    out = S.bits.copy()
    for i, bv in _cube_positions(b, vocab):
        view = _axis_view(out, S.n, i)
        src, dst = (1, 0) if bv else (0, 1)
        view[:, dst, :] |= view[:, src, :]
    return ExplicitSet(S.n, out)


def is_b_monotone(S: ExplicitSet, b: Cube, vocab: Optional[Sequence[Var]] = None) -> bool:
    return exact_monotonize(S, b, vocab) == S


def exact_alpha(S: ExplicitSet, basis: Sequence[Cube], vocab: Optional[Sequence[Var]] = None) -> ExplicitSet:
    """Monotone hull: intersection of the monotonizations over the basis cubes."""
    out = ExplicitSet.full(S.n)
    for b in basis:
        out = out & exact_monotonize(S, b, vocab)
    return out


def prime_implicants(S: ExplicitSet, b: Cube, vocab: Optional[Sequence[Var]] = None) -> Tuple[Cube, ...]:
    """Irredundant DNF of a b-monotone set made of b-shaped terms.

    The terms are ``moncube(v, b)`` for the <=_b-minimal members v of S.
    When b is a full cube these are exactly the prime implicants of S;
    for a partial b every term keeps all literals outside dom(b).
    """
    vocab = tuple(vocab) if vocab is not None else vocabulary(S.n)
    if not is_b_monotone(S, b, vocab):
        raise ValueError("set is not b-monotone")
    minimal = S.bits.copy()
    cube_pos = _cube_positions(b, vocab)
    for i, bv in cube_pos:
        view_s = _axis_view(S.bits, S.n, i)
        view_m = _axis_view(minimal, S.n, i)
        # a member that disagrees with b at i is not minimal if its neighbour toward b is a member
        far, near = (0, 1) if bv else (1, 0)
        view_m[:, far, :] &= ~view_s[:, near, :]
    bval = dict(cube_pos)
    terms = []
    for code in np.flatnonzero(minimal):
        st = State.from_int(int(code), S.n)
        lits = {}
        for i, v in enumerate(vocab):
            if i not in bval or st[i] != bval[i]:
                lits[v] = st[i]
        terms.append(Cube.from_mapping(lits))
    return tuple(terms)


# ---------------------------------------------------------------------------
# reachability, boundary, fence


def transition_matrix(ts: TransitionSystem) -> np.ndarray:
    """R[pre, post] as a dense bool matrix."""
    _check_cap(2 * ts.n)
    table = truth_table(ts.tr, two_vocabulary(ts.n))
    return table.reshape(1 << ts.n, 1 << ts.n).T.copy()


def post_image(ts: TransitionSystem, S: ExplicitSet, matrix: Optional[np.ndarray] = None) -> ExplicitSet:
    R = transition_matrix(ts) if matrix is None else matrix
    return ExplicitSet(ts.n, R[S.bits].any(axis=0))


def reachable_upto(ts: TransitionSystem, s: int, matrix: Optional[np.ndarray] = None) -> ExplicitSet:
    R = transition_matrix(ts) if matrix is None else matrix
    reach = truth_table(ts.init, vocabulary(ts.n))
    for _ in range(s):
        nxt = reach | R[reach].any(axis=0)
        if np.array_equal(nxt, reach):
            break
        reach = nxt
    return ExplicitSet(ts.n, reach)


def backward_reachable_upto(ts: TransitionSystem, s: int, matrix: Optional[np.ndarray] = None) -> ExplicitSet:
    """States that reach Bad in at most s steps."""
    R = transition_matrix(ts) if matrix is None else matrix
    reach = truth_table(ts.bad, vocabulary(ts.n))
    for _ in range(s):
        nxt = reach | R[:, reach].any(axis=1)
        if np.array_equal(nxt, reach):
            break
        reach = nxt
    return ExplicitSet(ts.n, reach)


def reachable(ts: TransitionSystem) -> ExplicitSet:
    return reachable_upto(ts, 1 << ts.n)


def boundary(I: ExplicitSet) -> ExplicitSet:
    """Members of I with a Hamming neighbour outside I."""
    out = np.zeros_like(I.bits)
    for i in range(I.n):
        view = _axis_view(I.bits, I.n, i)
        flipped = view[:, ::-1, :].reshape(-1)
        out |= I.bits & ~flipped
    return ExplicitSet(I.n, out)


def fence_check(ts: TransitionSystem, I: ExplicitSet, s: int,
                matrix: Optional[np.ndarray] = None) -> Tuple[bool, Optional[State]]:
    """Is the boundary of I contained in R_s?  Returns a witness on failure."""
    missing = boundary(I) - reachable_upto(ts, s, matrix)
    return missing.is_empty(), missing.first()


def backward_fence_check(ts: TransitionSystem, I: ExplicitSet, s: int,
                         matrix: Optional[np.ndarray] = None) -> Tuple[bool, Optional[State]]:
    """Does every state of the outer boundary of I reach Bad within s steps?"""
    missing = boundary(~I) - backward_reachable_upto(ts, s, matrix)
    return missing.is_empty(), missing.first()


def is_inductive_invariant(ts: TransitionSystem, I: ExplicitSet, matrix: Optional[np.ndarray] = None) -> bool:
    V = vocabulary(ts.n)
    init = ExplicitSet.from_formula(ts.init, V)
    bad = ExplicitSet.from_formula(ts.bad, V)
    return init <= I and (I & bad).is_empty() and post_image(ts, I, matrix) <= I


# ---------------------------------------------------------------------------
# exact DNF / CNF sizes


def all_prime_implicants(S: ExplicitSet) -> List[Tuple[int, int]]:
    """Prime implicants of S as (care-mask, value) pairs."""
    n = S.n
    _check_cap(n, "loop")
    N = 1 << n
    idx = np.arange(N, dtype=np.int64)
    members = idx[S.bits]
    implicant: Dict[int, np.ndarray] = {}
    for care in range(N):
        free = n - bin(care).count("1")
        counts = np.bincount(members & care, minlength=N)
        implicant[care] = counts == (1 << free)
    primes = []
    for care in range(N):
        imp = implicant[care]
        for val in np.flatnonzero(imp):
            val = int(val)
            if val & ~care:
                continue
            prime = True
            c = care
            while c:
                bit = c & -c
                c ^= bit
                if implicant[care ^ bit][val & ~bit]:
                    prime = False
                    break
            if prime:
                primes.append((care, val))
    return primes


def _min_cover(S: ExplicitSet, primes: List[Tuple[int, int]]) -> int:
    members = np.flatnonzero(S.bits)
    if len(members) == 0:
        return 0
    from scipy.optimize import Bounds, LinearConstraint, milp

    A = np.zeros((len(members), len(primes)), dtype=float)
    for j, (care, val) in enumerate(primes):
        A[:, j] = (members & care) == val
    res = milp(c=np.ones(len(primes)), constraints=LinearConstraint(A, lb=1, ub=np.inf),
               integrality=np.ones(len(primes)), bounds=Bounds(0, 1))
    if not res.success:
        raise RuntimeError(f"set cover failed: {res.message}")
    return int(round(res.fun))


def min_dnf_size(S: ExplicitSet) -> int:
    """Exact number of terms in a smallest DNF for S."""
    return _min_cover(S, all_prime_implicants(S))


def min_cnf_size(S: ExplicitSet) -> int:
    """Exact number of clauses in a smallest CNF for S."""
    return min_dnf_size(~S)


def min_cnf(S: ExplicitSet) -> List[Cube]:
    """A smallest CNF for S, returned as the cubes of the complement it excludes."""
    comp = ~S
    primes = all_prime_implicants(comp)
    members = np.flatnonzero(comp.bits)
    if len(members) == 0:
        return []
    from scipy.optimize import Bounds, LinearConstraint, milp

    A = np.zeros((len(members), len(primes)), dtype=float)
    for j, (care, val) in enumerate(primes):
        A[:, j] = (members & care) == val
    res = milp(c=np.ones(len(primes)), constraints=LinearConstraint(A, lb=1, ub=np.inf),
               integrality=np.ones(len(primes)), bounds=Bounds(0, 1))
    chosen = [primes[j] for j in np.flatnonzero(np.round(res.x) > 0.5)]
    out = []
    for care, val in chosen:
        out.append(Cube.from_mapping({Var(i): bool(val >> i & 1) for i in range(S.n) if care >> i & 1}))
    return out


# ---------------------------------------------------------------------------
# abstract interpretation reference


def exact_abstract_iterate(ts: TransitionSystem, basis: Sequence[Cube], xi: Optional[ExplicitSet],
                           matrix: Optional[np.ndarray] = None) -> ExplicitSet:
    """alpha(tr(gamma(xi)) | Init); with xi None this is the first iterate alpha(Init)."""
    V = vocabulary(ts.n)
    init = ExplicitSet.from_formula(ts.init, V)
    concrete = init if xi is None else post_image(ts, xi, matrix) | init
    return exact_alpha(concrete, basis, V)


def exact_abstract_fixpoint(ts: TransitionSystem, basis: Sequence[Cube]) -> List[ExplicitSet]:
    """Every iterate xi_0, xi_1, ... up to and including the first repeated one."""
    R = transition_matrix(ts)
    trace = [exact_abstract_iterate(ts, basis, None, R)]
    while True:
        nxt = exact_abstract_iterate(ts, basis, trace[-1], R)
        trace.append(nxt)
        if nxt <= trace[-2]:
            return trace
