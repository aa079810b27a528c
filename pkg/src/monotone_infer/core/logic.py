"""Variables, literals, cubes, clauses, states and the formula AST.

A variable is an ``(index, copy)`` pair: copy 0 is the current-state
vocabulary, copy 1 the primed (post-state) vocabulary, and higher copies
are used when a transition relation is unrolled.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, Mapping, NamedTuple, Optional, Sequence, Tuple


class LogicError(ValueError):
    pass


class InconsistentCubeError(LogicError):
    pass


class MissingVariableError(LogicError):
    def __init__(self, var: "Var"):
        super().__init__(f"assignment does not define {var}")
        self.var = var


class Var(NamedTuple):
    index: int
    copy: int = 0

    def __str__(self) -> str:
        if self.copy == 0:
            return f"p{self.index}"
        if self.copy == 1:
            return f"p{self.index}'"
        return f"p{self.index}@{self.copy}"

    def primed(self) -> "Var":
        return Var(self.index, self.copy + 1)

    def at(self, copy: int) -> "Var":
        return Var(self.index, copy)


def vocabulary(n: int, copy: int = 0) -> Tuple[Var, ...]:
    return tuple(Var(i, copy) for i in range(n))


def two_vocabulary(n: int) -> Tuple[Var, ...]:
    """Unprimed variables followed by primed ones."""
    return vocabulary(n, 0) + vocabulary(n, 1)


class Literal(NamedTuple):
    var: Var
    positive: bool = True

    def __neg__(self) -> "Literal":
        return Literal(self.var, not self.positive)

    def __str__(self) -> str:
        return str(self.var) if self.positive else f"~{self.var}"

    def holds(self, assignment: Mapping[Var, bool]) -> bool:
        try:
            return assignment[self.var] == self.positive
        except KeyError:
            raise MissingVariableError(self.var) from None


def _lit_key(lit: Literal):
    return (lit.var.copy, lit.var.index, lit.positive)


class _LiteralSet:
    """Shared behavior of cubes and clauses: at most one literal per variable."""

    __slots__ = ("_polarity", "_hash")
    _kind = "literal set"

    def __init__(self, literals: Iterable[Literal] = ()):
        polarity: Dict[Var, bool] = {}
        for lit in literals:
            prev = polarity.get(lit.var)
            if prev is not None and prev != lit.positive:
                raise InconsistentCubeError(
                    f"{self._kind} would contain both {lit.var} and ~{lit.var}")
            polarity[lit.var] = lit.positive
        self._polarity = polarity
        self._hash = None

    @classmethod
    def from_mapping(cls, polarity: Mapping[Var, bool]):
        obj = cls.__new__(cls)
        obj._polarity = dict(polarity)
        obj._hash = None
        return obj

    @property
    def literals(self) -> Tuple[Literal, ...]:
        return tuple(sorted((Literal(v, p) for v, p in self._polarity.items()), key=_lit_key))

    @property
    def polarity(self) -> Mapping[Var, bool]:
        return self._polarity

    def dom(self) -> frozenset:
        return frozenset(self._polarity)

    def get(self, var: Var) -> Optional[bool]:
        return self._polarity.get(var)

    def __contains__(self, lit: Literal) -> bool:
        return self._polarity.get(lit.var) == lit.positive

    def __iter__(self) -> Iterator[Literal]:
        return iter(self.literals)

    def __len__(self) -> int:
        return len(self._polarity)

    def __eq__(self, other) -> bool:
        return type(self) is type(other) and self._polarity == other._polarity

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((type(self).__name__, frozenset(self._polarity.items())))
        return self._hash

    def copies(self) -> frozenset:
        return frozenset(v.copy for v in self._polarity)

    def restrict(self, copy: int):
        return type(self).from_mapping({v: p for v, p in self._polarity.items() if v.copy == copy})

    def rename(self, mapping: Mapping[int, int]):
        return type(self).from_mapping(
            {Var(v.index, mapping.get(v.copy, v.copy)): p for v, p in self._polarity.items()})

    def negated_literals(self) -> Tuple[Literal, ...]:
        return tuple(-lit for lit in self.literals)

    def issubset(self, other) -> bool:
        return all(other._polarity.get(v) == p for v, p in self._polarity.items())


class Cube(_LiteralSet):
    """Conjunction of a consistent set of literals; the empty cube is true."""

    __slots__ = ()
    _kind = "cube"

    def holds(self, assignment: Mapping[Var, bool]) -> bool:
        return all(lit.holds(assignment) for lit in self.literals)

    def with_literal(self, lit: Literal) -> "Cube":
        return Cube(self.literals + (lit,))

    def without(self, var: Var) -> "Cube":
        return Cube.from_mapping({v: p for v, p in self._polarity.items() if v != var})

    def conjoin(self, other: "Cube") -> Optional["Cube"]:
        """Conjunction of two cubes, or None when they clash."""
        merged = dict(self._polarity)
        for v, p in other._polarity.items():
            if merged.setdefault(v, p) != p:
                return None
        return Cube.from_mapping(merged)

    def negate(self) -> "Clause":
        return Clause.from_mapping({v: not p for v, p in self._polarity.items()})

    def to_formula(self) -> "Formula":
        return conj(*(lit_formula(lit) for lit in self.literals))

    def __str__(self) -> str:
        if not self._polarity:
            return "true"
        return " & ".join(str(lit) for lit in self.literals)

    def __repr__(self) -> str:
        return f"Cube({self})"


class Clause(_LiteralSet):
    """Disjunction of literals over distinct variables; the empty clause is false."""

    __slots__ = ()
    _kind = "clause"

    def holds(self, assignment: Mapping[Var, bool]) -> bool:
        return any(lit.holds(assignment) for lit in self.literals)

    def negate(self) -> Cube:
        return Cube.from_mapping({v: not p for v, p in self._polarity.items()})

    def without(self, var: Var) -> "Clause":
        return Clause.from_mapping({v: p for v, p in self._polarity.items() if v != var})

    def to_formula(self) -> "Formula":
        return disj(*(lit_formula(lit) for lit in self.literals))

    def __str__(self) -> str:
        if not self._polarity:
            return "false"
        return " | ".join(str(lit) for lit in self.literals)

    def __repr__(self) -> str:
        return f"Clause({self})"


TermList = Tuple[Cube, ...]
ClauseList = Tuple[Clause, ...]


def normalize_terms(terms: Iterable[Cube]) -> TermList:
    """Drop duplicate terms, keeping first occurrences in order."""
    return tuple(dict.fromkeys(terms))


def normalize_clauses(clauses: Iterable[Clause]) -> ClauseList:
    return tuple(dict.fromkeys(clauses))


def prune_subsumed(terms: Iterable[Cube]) -> TermList:
    """Remove duplicates and every term that is a strict superset of another term."""
    uniq = sorted(normalize_terms(terms), key=len)
    kept = []
    for t in uniq:
        if not any(k.issubset(t) for k in kept):
            kept.append(t)
    return tuple(kept)


class State(tuple):
    """A total Boolean assignment, stored positionally.

    Position ``i`` refers to the i-th variable of whatever vocabulary the
    state is aligned with (by default ``p0 .. p{n-1}``).
    """

    __slots__ = ()

    def __new__(cls, bits: Iterable = ()):
        return super().__new__(cls, (bool(b) for b in bits))

    @classmethod
    def from_str(cls, text: str) -> "State":
        if any(ch not in "01" for ch in text):
            raise LogicError(f"bad state literal {text!r}")
        return cls(ch == "1" for ch in text)

    @classmethod
    def from_int(cls, value: int, n: int) -> "State":
        return cls((value >> i) & 1 for i in range(n))

    def to_int(self) -> int:
        out = 0
        for i, b in enumerate(self):
            if b:
                out |= 1 << i
        return out

    def flip(self, i: int) -> "State":
        bits = list(self)
        bits[i] = not bits[i]
        return State(bits)

    def with_bit(self, i: int, value: bool) -> "State":
        bits = list(self)
        bits[i] = value
        return State(bits)

    def weight(self) -> int:
        return sum(self)

    def cube(self, vocab: Optional[Sequence[Var]] = None) -> Cube:
        vocab = vocab if vocab is not None else vocabulary(len(self))
        return Cube.from_mapping(dict(zip(vocab, self)))

    def assignment(self, vocab: Optional[Sequence[Var]] = None) -> Dict[Var, bool]:
        vocab = vocab if vocab is not None else vocabulary(len(self))
        return dict(zip(vocab, self))

    def __str__(self) -> str:
        return "".join("1" if b else "0" for b in self)

    def __repr__(self) -> str:
        return f"State({str(self)!r})"


def state_of(assignment: Mapping[Var, bool], vocab: Sequence[Var]) -> State:
    try:
        return State(assignment[v] for v in vocab)
    except KeyError as exc:
        raise MissingVariableError(exc.args[0]) from None


# ---------------------------------------------------------------------------
# Formula AST


class Formula:
    __slots__ = ()

    def __and__(self, other: "Formula") -> "Formula":
        return conj(self, other)

    def __or__(self, other: "Formula") -> "Formula":
        return disj(self, other)

    def __invert__(self) -> "Formula":
        return neg(self)


@dataclass(frozen=True)
class Const(Formula):
    value: bool


@dataclass(frozen=True)
class Atom(Formula):
    var: Var


@dataclass(frozen=True)
class Not(Formula):
    arg: Formula


@dataclass(frozen=True)
class And(Formula):
    args: Tuple[Formula, ...]


@dataclass(frozen=True)
class Or(Formula):
    args: Tuple[Formula, ...]


@dataclass(frozen=True)
class Xor(Formula):
    """True iff an odd number of arguments hold."""
    args: Tuple[Formula, ...]


@dataclass(frozen=True)
class Iff(Formula):
    left: Formula
    right: Formula


TRUE = Const(True)
FALSE = Const(False)


def atom(index: int, copy: int = 0) -> Atom:
    return Atom(Var(index, copy))


def lit_formula(lit: Literal) -> Formula:
    a = Atom(lit.var)
    return a if lit.positive else Not(a)


def neg(f: Formula) -> Formula:
    if isinstance(f, Const):
        return FALSE if f.value else TRUE
    if isinstance(f, Not):
        return f.arg
    return Not(f)


def conj(*args: Formula) -> Formula:
    flat = []
    for a in args:
        if isinstance(a, Const):
            if not a.value:
                return FALSE
            continue
        if isinstance(a, And):
            flat.extend(a.args)
        else:
            flat.append(a)
    if not flat:
        return TRUE
    if len(flat) == 1:
        return flat[0]
    return And(tuple(flat))


def disj(*args: Formula) -> Formula:
    flat = []
    for a in args:
        if isinstance(a, Const):
            if a.value:
                return TRUE
            continue
        if isinstance(a, Or):
            flat.extend(a.args)
        else:
            flat.append(a)
    if not flat:
        return FALSE
    if len(flat) == 1:
        return flat[0]
    return Or(tuple(flat))


def xor(*args: Formula) -> Formula:
    return Xor(tuple(args))


def iff(left: Formula, right: Formula) -> Formula:
    return Iff(left, right)


def dnf_formula(terms: Iterable[Cube]) -> Formula:
    return disj(*(t.to_formula() for t in terms))


def cnf_formula(clauses: Iterable[Clause]) -> Formula:
    return conj(*(c.to_formula() for c in clauses))


def evaluate(f: Formula, assignment: Mapping[Var, bool]) -> bool:
    if isinstance(f, Atom):
        try:
            return bool(assignment[f.var])
        except KeyError:
            raise MissingVariableError(f.var) from None
    if isinstance(f, Not):
        return not evaluate(f.arg, assignment)
    if isinstance(f, And):
        return all(evaluate(a, assignment) for a in f.args)
    if isinstance(f, Or):
        return any(evaluate(a, assignment) for a in f.args)
    if isinstance(f, Const):
        return f.value
    if isinstance(f, Xor):
        return sum(evaluate(a, assignment) for a in f.args) % 2 == 1
    if isinstance(f, Iff):
        return evaluate(f.left, assignment) == evaluate(f.right, assignment)
    raise TypeError(f"not a formula: {f!r}")


def variables(f: Formula) -> frozenset:
    out = set()
    stack = [f]
    seen = set()
    while stack:
        g = stack.pop()
        if id(g) in seen:
            continue
        seen.add(id(g))
        if isinstance(g, Atom):
            out.add(g.var)
        elif isinstance(g, Not):
            stack.append(g.arg)
        elif isinstance(g, (And, Or, Xor)):
            stack.extend(g.args)
        elif isinstance(g, Iff):
            stack.extend((g.left, g.right))
    return frozenset(out)


def copies(f: Formula) -> frozenset:
    return frozenset(v.copy for v in variables(f))


def rename_copies(f: Formula, mapping: Mapping[int, int]) -> Formula:
    """Re-tag every variable occurrence ``p@c`` as ``p@mapping[c]``.

    The mapping must cover every copy occurring in ``f``; pass identity
    entries for copies that should stay put.
    """
    missing = copies(f) - set(mapping)
    if missing:
        raise LogicError(f"copy mapping does not cover copies {sorted(missing)}")
    memo: Dict[int, Formula] = {}

    def go(g: Formula) -> Formula:
        hit = memo.get(id(g))
        if hit is not None:
            return hit
        if isinstance(g, Atom):
            out = Atom(Var(g.var.index, mapping[g.var.copy]))
        elif isinstance(g, Const):
            out = g
        elif isinstance(g, Not):
            out = Not(go(g.arg))
        elif isinstance(g, And):
            out = And(tuple(go(a) for a in g.args))
        elif isinstance(g, Or):
            out = Or(tuple(go(a) for a in g.args))
        elif isinstance(g, Xor):
            out = Xor(tuple(go(a) for a in g.args))
        elif isinstance(g, Iff):
            out = Iff(go(g.left), go(g.right))
        else:
            raise TypeError(f"not a formula: {g!r}")
        memo[id(g)] = out
        return out

    return go(f)


def prime(f: Formula) -> Formula:
    """Move a single-vocabulary formula to the primed copy."""
    extra = copies(f) - {0}
    if extra:
        raise LogicError("prime expects a formula over the unprimed vocabulary")
    return rename_copies(f, {0: 1})


def unprime(f: Formula) -> Formula:
    extra = copies(f) - {1}
    if extra:
        raise LogicError("unprime expects a formula over the primed vocabulary")
    return rename_copies(f, {1: 0})


def substitute(f: Formula, mapping: Mapping[Var, Formula]) -> Formula:
    """Replace atoms by formulas (used for bit-flip cofactors)."""
    memo: Dict[int, Formula] = {}

    def go(g: Formula) -> Formula:
        hit = memo.get(id(g))
        if hit is not None:
            return hit
        if isinstance(g, Atom):
            out = mapping.get(g.var, g)
        elif isinstance(g, Const):
            out = g
        elif isinstance(g, Not):
            out = Not(go(g.arg))
        elif isinstance(g, And):
            out = And(tuple(go(a) for a in g.args))
        elif isinstance(g, Or):
            out = Or(tuple(go(a) for a in g.args))
        elif isinstance(g, Xor):
            out = Xor(tuple(go(a) for a in g.args))
        else:
            out = Iff(go(g.left), go(g.right))
        memo[id(g)] = out
        return out

    return go(f)


def equal_states(vocab_a: Sequence[Var], vocab_b: Sequence[Var]) -> Formula:
    """Pointwise equality of two aligned vocabularies."""
    return conj(*(Iff(Atom(a), Atom(b)) for a, b in zip(vocab_a, vocab_b)))
