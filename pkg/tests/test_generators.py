import itertools

import pytest

from monotone_infer import oracle as O
from monotone_infer.cli import generators as G
from monotone_infer.core.logic import vocabulary


def test_parity_relation_is_exact():
    n = 5
    ts = G.parity_system(n)
    R = O.transition_matrix(ts)
    for pre, post in itertools.product(range(1 << n), repeat=2):
        expected = pre == 0 and bin(post).count("1") % 2 == 0
        assert R[pre, post] == expected


def test_parity_requires_odd_n():
    with pytest.raises(ValueError):
        G.parity_system(4)


def test_parity_invariant_certifies():
    G.certify(G.parity(5))


def test_two_bits_invariant_semantics_and_size():
    n = 6
    gen = G.generate("two-bits", n, 0)
    expected = O.ExplicitSet.from_predicate(n, lambda x: 2 <= sum(x) <= n - 2)
    assert gen.invariant_set() == expected
    assert gen.cnf_size == 12 == 2 * n
    assert gen.dnf_size == 15   # frozen from the exact set-cover oracle
    assert O.min_cnf_size(expected) == 12


@pytest.mark.parametrize("family", ["two-bits", "fenced-random", "monotone"])
@pytest.mark.parametrize("seed", [0, 7])
def test_forward_families_are_fenced(family, seed):
    gen = G.generate(family, 6, seed)
    I = gen.invariant_set()
    assert O.is_inductive_invariant(gen.system, I)
    assert O.fence_check(gen.system, I, gen.s) == (True, None)
    assert 0 <= gen.s <= 3


def test_fenced_random_seed_seven():
    gen = G.generate("fenced-random", 6, 7)
    assert O.fence_check(gen.system, gen.invariant_set(), gen.s)[0]
    assert gen.leaves is not None and 1 <= gen.leaves <= 10


def test_backwards_family_certified():
    gen = G.generate("backwards-fenced", 6, 1)
    assert gen.backwards
    I = gen.invariant_set()
    assert O.is_inductive_invariant(gen.system, I)
    assert O.backward_fence_check(gen.system, I, gen.s) == (True, None)


def test_bad_is_negated_clause_of_invariant():
    gen = G.generate("fenced-random", 6, 3)
    bad = O.ExplicitSet.from_formula(gen.system.bad, vocabulary(6))
    assert (bad & gen.invariant_set()).is_empty() and not bad.is_empty()


def test_generation_is_deterministic():
    a, b = G.generate("fenced-random", 6, 11), G.generate("fenced-random", 6, 11)
    assert a.system == b.system and a.s == b.s


def test_unknown_family_and_bad_sizes():
    with pytest.raises(ValueError):
        G.generate("nope", 6, 0)
    with pytest.raises(ValueError):
        G.generate("two-bits", 3, 0)


def test_certification_failure_after_retries(monkeypatch):
    def broken(n, rng):
        raise G.CertificationError("never fenced")

    monkeypatch.setattr(G, "fenced_tree", broken)
    with pytest.raises(G.CertificationError):
        G.generate("fenced-random", 6, 0, retries=3)


def test_fenced_system_rejects_trivial_invariant():
    import random
    from monotone_infer.core.logic import conj
    with pytest.raises(G.CertificationError):
        G.fenced_system(conj(), [], 3, random.Random(0), family="x")
