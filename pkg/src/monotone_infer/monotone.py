"""b-monotone order, monotonization of DNFs, and oracle-driven monotonization.

States are positional and aligned with a vocabulary (a tuple of Vars);
the basis cube ``b`` may mention any subset of that vocabulary, including
primed variables when the vocabulary spans two copies.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Union

from .core.logic import Cube, Formula, State, TermList, Var, dnf_formula, neg, normalize_terms, vocabulary
from .sat.queries import SatOracle


def _vocab(n: int, vocab: Optional[Sequence[Var]]) -> Sequence[Var]:
    if vocab is None:
        return vocabulary(n)
    if len(vocab) != n:
        raise ValueError(f"state of length {n} does not match vocabulary of size {len(vocab)}")
    return vocab


def _basis_bits(b: Cube, vocab: Sequence[Var]) -> List[Optional[bool]]:
    """b's value per vocabulary position (None outside dom(b))."""
    out = [b.get(v) for v in vocab]
    stray = b.dom() - set(vocab)
    if stray:
        raise ValueError(f"basis cube mentions variables outside the vocabulary: {sorted(map(str, stray))}")
    return out


def leq_b(v: State, x: State, b: Cube, vocab: Optional[Sequence[Var]] = None) -> bool:
    """v <=_b x: x differs from v only by moving away from b on dom(b)."""
    bits = _basis_bits(b, _vocab(len(v), vocab))
    for vi, xi, bi in zip(v, x, bits):
        if vi != xi and (bi is None or vi != bi):
            return False
    return True


def project(x: State, b: Cube, vocab: Optional[Sequence[Var]] = None) -> State:
    bits = _basis_bits(b, _vocab(len(x), vocab))
    return State(xi if bi is None else bi for xi, bi in zip(x, bits))


def hamming_interval(x: State, y: State, vocab: Optional[Sequence[Var]] = None) -> Cube:
    """Smallest cube containing both states."""
    vocab = _vocab(len(x), vocab)
    return Cube.from_mapping({v: xi for v, xi, yi in zip(vocab, x, y) if xi == yi})


def moncube(v: State, b: Cube, vocab: Optional[Sequence[Var]] = None) -> Cube:
    """Literals of v that do not occur in b."""
    vocab = _vocab(len(v), vocab)
    return Cube.from_mapping({p: vi for p, vi in zip(vocab, v) if b.get(p) != vi})


def monotonize_dnf(phi: Sequence[Cube], b: Cube) -> TermList:
    """Drop from every term the literals it shares with b."""
    return normalize_terms(Cube.from_mapping({v: p for v, p in t.polarity.items() if b.get(v) != p})
                           for t in phi)


@dataclass(frozen=True)
class Monotonization:
    terms: TermList
    basis: Cube
    iterations: int = 0
    queries: int = 0

    def formula(self) -> Formula:
        return dnf_formula(self.terms)

    def __len__(self) -> int:
        return len(self.terms)


def monotone_hull(phi: Union[Sequence[Cube], SatOracle], basis: Sequence[Cube]) -> List[Monotonization]:
    """One monotonization per basis cube; their conjunction is the hull.

    ``phi`` is either a DNF (monotonized syntactically) or an intersection
    oracle (monotonized by :func:`efficient_mono`).
    """
    if isinstance(phi, SatOracle):
        return [efficient_mono(phi, b) for b in basis]
    return [Monotonization(monotonize_dnf(phi, b), b) for b in basis]


def generalize(oracle: SatOracle, b: Cube, sigma: State, vocab: Optional[Sequence[Var]] = None) -> State:
    """Walk sigma toward b while the states below it still meet the oracle's set.

    Flipping position j is accepted iff the Hamming interval between the
    flipped state and its projection on b intersects the set.  Passes over
    the positions repeat in ascending order until one makes no flip.

    A rejected flip stays rejected: moving v toward b only shrinks the
    interval tested for that position.  Rejections are therefore remembered
    and not re-queried, which leaves the result unchanged and spends at
    most one query per position.
    """
    vocab = _vocab(len(sigma), vocab if vocab is not None else oracle.vocab)
    bits = _basis_bits(b, vocab)
    v = sigma
    rejected = set()
    walked = True
    while walked:
        walked = False
        for j, bj in enumerate(bits):
            if bj is None or v[j] == bj or j in rejected:
                continue
            x = v.with_bit(j, bj)
            if oracle.intersects(hamming_interval(x, project(x, b, vocab), vocab)):
                v = x
                walked = True
            else:
                rejected.add(j)
    return v


def efficient_mono(oracle: SatOracle, b: Cube, vocab: Optional[Sequence[Var]] = None) -> Monotonization:
    """DNF of the b-monotonization of the oracle's set, one generalized term per round."""
    vocab = tuple(vocab) if vocab is not None else oracle.vocab
    start = oracle.calls
    terms: List[Cube] = []
    iterations = 0
    while True:
        sigma = oracle.witness(neg(dnf_formula(terms)))
        if sigma is None:
            break
        iterations += 1
        v = generalize(oracle, b, sigma, vocab)
        terms.append(moncube(v, b, vocab))
    return Monotonization(tuple(terms), b, iterations, oracle.calls - start)

