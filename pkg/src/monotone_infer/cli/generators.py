"""Benchmark system families with a known, oracle-certified invariant.

Every fenced family uses the same recipe: pick an invariant set I, let Tr
move between I-states that differ in at most one bit (plus optional random
jumps inside I) and let states outside I flip any single bit, seed Init inside I so that every boundary state of I is
reached within a small number of steps, and take Bad to be the negation of
one clause of a CNF of I.  The generator then certifies the fence condition
and inductiveness by brute force before returning.
"""

from __future__ import annotations

import random
from functools import lru_cache
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..core.dtree import DecisionTree, random_tree, size, tree_formula
from ..core.logic import (Clause, Cube, Formula, Not, State, Var, atom, cnf_formula, conj, disj, dnf_formula, neg,
                          prime, vocabulary, xor)
from ..core.system import TransitionSystem
from .. import oracle as O


class CertificationError(RuntimeError):
    pass


@dataclass(frozen=True)
class Generated:
    system: TransitionSystem
    invariant: Formula
    s: int
    family: str
    cnf_size: Optional[int] = None
    dnf_size: Optional[int] = None
    leaves: Optional[int] = None
    backwards: bool = False
    notes: dict = field(default_factory=dict)

    def invariant_set(self) -> O.ExplicitSet:
        return O.ExplicitSet.from_formula(self.invariant, vocabulary(self.system.n))


# ---------------------------------------------------------------------------
# parity


def parity_system(n: int) -> TransitionSystem:
    """From the all-zero state, jump to any state of even weight; Bad is odd weight."""
    if n < 1 or n % 2 == 0:
        raise ValueError("parity family needs odd n")
    zero = conj(*(neg(atom(i)) for i in range(n)))
    tr = conj(zero, neg(xor(*(atom(i, 1) for i in range(n)))))
    bad = xor(*(atom(i) for i in range(n)))
    return TransitionSystem(n, zero, tr, bad, basis=(State([True] * n).cube(),))


def parity(n: int) -> Generated:
    ts = parity_system(n)
    inv = neg(ts.bad)
    return Generated(ts, inv, 1, "parity", notes={"basis": "all ones"})


# ---------------------------------------------------------------------------
# generic fenced construction


def at_most_one_change(n: int) -> Formula:
    diffs = [xor(atom(i), atom(i, 1)) for i in range(n)]
    return conj(*(Not(conj(diffs[i], diffs[j])) for i in range(n) for j in range(i + 1, n)))


def _states_formula(states: Sequence[State]) -> Formula:
    return dnf_formula(s.cube() for s in states)


def _bfs_depths(n: int, R: np.ndarray, init: np.ndarray) -> np.ndarray:
    depth = np.full(1 << n, -1, dtype=np.int64)
    frontier = init.copy()
    depth[frontier] = 0
    d = 0
    while frontier.any():
        d += 1
        nxt = R[frontier].any(axis=0) & (depth < 0)
        depth[nxt] = d
        frontier = nxt
    return depth


def fenced_system(inv: Formula, clauses: Sequence[Clause], n: int, rng: random.Random, *, family: str,
                  jumps: int = 0, init_fraction: float = 0.15, max_s: int = 3,
                  cnf_size: Optional[int] = None, dnf_size: Optional[int] = None,
                  leaves: Optional[int] = None) -> Generated:
    V = vocabulary(n)
    I = O.ExplicitSet.from_formula(inv, V)
    if I.is_empty() or len(I) == 1 << n:
        raise CertificationError("invariant must be neither empty nor everything")
    members = I.states()
    one_flip = at_most_one_change(n)
    step = disj(conj(inv, prime(inv), one_flip), conj(neg(inv), one_flip))
    pairs = []
    for _ in range(jumps):
        a, b = rng.choice(members), rng.choice(members)
        pairs.append(conj(a.cube().to_formula(), prime(b.cube().to_formula())))
    tr = disj(step, *pairs)
    probe = TransitionSystem(n, inv, tr, neg(inv))
    R = O.transition_matrix(probe)
    border = O.boundary(I).bits
    k = max(1, int(round(init_fraction * len(members))))
    init_idx = set(State(s).to_int() for s in rng.sample(members, min(k, len(members))))
    while True:
        seed = np.zeros(1 << n, dtype=bool)
        seed[list(init_idx)] = True
        depth = _bfs_depths(n, R, seed)
        missing = np.flatnonzero(border & (depth < 0))
        far = np.flatnonzero(border & (depth > max_s))
        if len(missing):
            init_idx.add(int(missing[0]))
        elif len(far):
            init_idx.add(int(far[np.argmax(depth[far])]))
        else:
            break
    s = int(depth[border].max()) if border.any() else 0
    init = _states_formula([State.from_int(i, n) for i in sorted(init_idx)])
    clause = rng.choice(list(clauses))
    bad = clause.negate().to_formula()
    ts = TransitionSystem(n, init, tr, bad)
    gen = Generated(ts, inv, s, family, cnf_size, dnf_size, leaves)
    certify(gen)
    return gen


def certify(gen: Generated) -> None:
    ts = gen.system
    I = gen.invariant_set()
    R = O.transition_matrix(ts)
    if not O.is_inductive_invariant(ts, I, R):
        raise CertificationError(f"{gen.family}: declared invariant is not inductive")
    if gen.backwards:
        ok, witness = O.backward_fence_check(ts, I, gen.s, R)
    else:
        ok, witness = O.fence_check(ts, I, gen.s, R)
    if not ok:
        raise CertificationError(f"{gen.family}: fence fails at {witness} for s={gen.s}")


# ---------------------------------------------------------------------------
# families


def two_bits_invariant(n: int) -> Tuple[Formula, List[Clause]]:
    """At least two bits are 0 and at least two bits are 1, as 2n clauses."""
    clauses = []
    for i in range(n):
        others = [Var(j) for j in range(n) if j != i]
        clauses.append(Clause.from_mapping({v: False for v in others}))
        clauses.append(Clause.from_mapping({v: True for v in others}))
    return cnf_formula(clauses), clauses


@lru_cache(maxsize=None)
def _two_bits_sizes(n: int) -> Tuple[int, int]:
    inv, _ = two_bits_invariant(n)
    S = O.ExplicitSet.from_formula(inv, vocabulary(n))
    return O.min_cnf_size(S), O.min_dnf_size(S)


def two_bits(n: int, rng: random.Random, **kw) -> Generated:
    if n < 4:
        raise ValueError("two-bits family needs n >= 4")
    inv, clauses = two_bits_invariant(n)
    cnf, dnf = _two_bits_sizes(n)
    return fenced_system(inv, clauses, n, rng, family="two-bits", cnf_size=cnf, dnf_size=dnf, **kw)


def _clauses_of(S: O.ExplicitSet) -> List[Clause]:
    return [c.negate() for c in O.min_cnf(S)]


def _nontrivial_tree(n: int, leaves: int, rng: random.Random) -> DecisionTree:
    while True:
        t = random_tree(rng, n, leaves)
        S = O.ExplicitSet.from_formula(tree_formula(t), vocabulary(n))
        if not S.is_empty() and len(S) < 1 << n:
            return t


def fenced_tree(n: int, rng: random.Random, leaves: Optional[int] = None, **kw) -> Generated:
    """Invariant given by a random decision tree."""
    m = leaves if leaves is not None else rng.randint(3, 10)
    t = _nontrivial_tree(n, m, rng)
    inv = tree_formula(t)
    S = O.ExplicitSet.from_formula(inv, vocabulary(n))
    return fenced_system(inv, _clauses_of(S), n, rng, family="fenced-random", cnf_size=O.min_cnf_size(S),
                         dnf_size=O.min_dnf_size(S), leaves=size(t), **kw)


def fenced_monotone(n: int, rng: random.Random, terms: Optional[int] = None, **kw) -> Generated:
    """Invariant given by a random monotone (positive) DNF."""
    while True:
        k = terms if terms is not None else rng.randint(2, 4)
        cubes = [Cube.from_mapping({Var(i): True for i in rng.sample(range(n), rng.randint(1, 3))})
                 for _ in range(k)]
        inv = dnf_formula(cubes)
        S = O.ExplicitSet.from_formula(inv, vocabulary(n))
        if len(S) < 1 << n:
            break
    return fenced_system(inv, _clauses_of(S), n, rng, family="monotone", cnf_size=O.min_cnf_size(S),
                         dnf_size=O.min_dnf_size(S), **kw)


def backwards_fenced(n: int, rng: random.Random, **kw) -> Generated:
    """Reverse of a forwards-fenced tree system; the invariant is the complement."""
    fwd = fenced_tree(n, rng, **kw)
    ts = fwd.system.reversed()
    inv = neg(fwd.invariant)
    S = O.ExplicitSet.from_formula(inv, vocabulary(n))
    gen = Generated(ts, inv, fwd.s, "backwards-fenced", O.min_cnf_size(S), O.min_dnf_size(S), backwards=True)
    certify(gen)
    return gen


def _random_cube(rng: random.Random, pool: Sequence[Var], k: int) -> Cube:
    return Cube.from_mapping({v: rng.random() < 0.5 for v in rng.sample(list(pool), k)})


def random_system(n: int, rng: random.Random, max_terms: int = 6) -> TransitionSystem:
    """Unstructured system: Init a few near-full cubes, Tr a random two-vocabulary DNF."""
    V = vocabulary(n)
    W = V + vocabulary(n, 1)
    init = dnf_formula(_random_cube(rng, V, rng.randint(max(0, n - 1), n)) for _ in range(rng.randint(1, 2)))
    tr = dnf_formula(_random_cube(rng, W, rng.randint(2, 2 * n)) for _ in range(rng.randint(0, max_terms)))
    bad = _random_cube(rng, V, n).to_formula()
    return TransitionSystem(n, init, tr, bad)


def random_basis(n: int, rng: random.Random, m: int) -> Tuple[Cube, ...]:
    return tuple(_random_cube(rng, vocabulary(n), rng.randint(1, n)) for _ in range(m))


FAMILIES = ("parity", "two-bits", "fenced-random", "monotone", "backwards-fenced")


def generate(family: str, n: int, seed: int, retries: int = 20) -> Generated:
    """Build a certified instance of a family; raises CertificationError when retries run out."""
    if family == "parity":
        return parity(n)
    builders = {"two-bits": two_bits, "fenced-random": fenced_tree, "monotone": fenced_monotone,
                "backwards-fenced": backwards_fenced}
    if family not in builders:
        raise ValueError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")
    rng = random.Random(seed)
    last = None
    for _ in range(retries):
        try:
            return builders[family](n, rng)
        except CertificationError as exc:
            last = exc
    raise CertificationError(f"no certified {family} instance after {retries} attempts: {last}")
