"""Boolean decision trees and their DNF/CNF readings."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import List, Sequence, Tuple, Union

from .logic import Clause, ClauseList, Cube, Formula, Literal, LogicError, TermList, Var, conj, disj, neg, atom


@dataclass(frozen=True)
class Leaf:
    value: bool


@dataclass(frozen=True)
class Node:
    var: int
    low: "DecisionTree"
    high: "DecisionTree"


DecisionTree = Union[Leaf, Node]


def check_tree(t: DecisionTree, n: int = None) -> None:
    """Raise if some root-to-leaf path tests a variable twice (or out of range)."""
    stack = [(t, frozenset())]
    while stack:
        node, seen = stack.pop()
        if isinstance(node, Leaf):
            continue
        if node.var in seen:
            raise LogicError(f"variable p{node.var} tested twice on one path")
        if node.var < 0 or (n is not None and node.var >= n):
            raise LogicError(f"variable p{node.var} outside the vocabulary")
        stack.append((node.low, seen | {node.var}))
        stack.append((node.high, seen | {node.var}))


def size(t: DecisionTree) -> int:
    if isinstance(t, Leaf):
        return 1
    return size(t.low) + size(t.high)


def tree_eval(t: DecisionTree, state: Sequence[bool]) -> bool:
    while isinstance(t, Node):
        t = t.high if state[t.var] else t.low
    return t.value


def _paths(t: DecisionTree, prefix: Tuple[Literal, ...] = ()):
    if isinstance(t, Leaf):
        yield prefix, t.value
        return
    v = Var(t.var)
    yield from _paths(t.low, prefix + (Literal(v, False),))
    yield from _paths(t.high, prefix + (Literal(v, True),))


def dt_to_dnf(t: DecisionTree) -> TermList:
    return tuple(Cube(path) for path, value in _paths(t) if value)


def dt_to_cnf(t: DecisionTree) -> ClauseList:
    return tuple(Clause(-lit for lit in path) for path, value in _paths(t) if not value)


def tree_formula(t: DecisionTree) -> Formula:
    """If-then-else encoding, linear in the tree size."""
    if isinstance(t, Leaf):
        return conj() if t.value else disj()
    lo, hi = tree_formula(t.low), tree_formula(t.high)
    x = atom(t.var)
    return disj(conj(neg(x), lo), conj(x, hi))


def random_tree(rng: random.Random, n: int, leaves: int) -> DecisionTree:
    """Random tree with exactly ``leaves`` leaves (capped by what n allows)."""

    def build(k: int, free: List[int]) -> DecisionTree:
        if k <= 1 or not free:
            return Leaf(rng.random() < 0.5)
        var = rng.choice(free)
        rest = [v for v in free if v != var]
        cap = 2 ** len(rest)
        lo_min = max(1, k - cap)
        lo_max = min(k - 1, cap)
        k_lo = rng.randint(lo_min, lo_max)
        return Node(var, build(k_lo, rest), build(k - k_lo, rest))

    return build(min(leaves, 2 ** n), list(range(n)))


def format_tree(t: DecisionTree) -> str:
    if isinstance(t, Leaf):
        return f"(leaf {'true' if t.value else 'false'})"
    return f"(node p{t.var} {format_tree(t.low)} {format_tree(t.high)})"
