import random

import pytest
from hypothesis import given
import hypothesis.strategies as st

from monotone_infer import oracle as O
from monotone_infer.core.dtree import random_tree, tree_formula
from monotone_infer.core.logic import State, atom, conj, disj, dnf_formula, vocabulary, xor
from monotone_infer.learn import OracleInconsistency, TruthTableTeacher, cdnf_learn, gen_mq, learn_monotonization
from monotone_infer.monotone import leq_b


def test_true_target_needs_one_query():
    t = TruthTableTeacher(conj(), 3)
    res = cdnf_learn(t.eq, t.mq, 3)
    assert res.eq_queries == 1 and t.equivalent(res.formula)


def test_false_target():
    t = TruthTableTeacher(disj(), 3)
    res = cdnf_learn(t.eq, t.mq, 3)
    assert res.eq_queries == 2 and t.equivalent(res.formula)


@pytest.mark.parametrize("seed", range(30))
def test_random_trees_learned_exactly_within_bound(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 7)
    f = tree_formula(random_tree(rng, n, rng.randint(1, 8)))
    t = TruthTableTeacher(f, n)
    res = cdnf_learn(t.eq, t.mq, n)
    assert t.equivalent(res.formula)
    S = O.ExplicitSet.from_formula(f, vocabulary(n))
    assert res.eq_queries <= O.min_cnf_size(S) * (n * O.min_dnf_size(S) + 1) + 1
    assert res.mq_queries == t.mq_calls


def test_parity_learned():
    f = xor(*(atom(i) for i in range(4)))
    t = TruthTableTeacher(f, 4)
    assert t.equivalent(cdnf_learn(t.eq, t.mq, 4).formula)


@given(st.integers(1, 5).flatmap(lambda n: st.tuples(
    st.just(n), st.lists(st.booleans(), min_size=1 << n, max_size=1 << n), st.integers(0, (1 << n) - 1))))
def test_gen_mq_walks_to_minimal_member(case):
    n, bits, bcode = case
    S = O.ExplicitSet.from_predicate(n, lambda x: bits[State(x).to_int()])
    if S.is_empty():
        return
    t = TruthTableTeacher.from_set(S)
    b = State.from_int(bcode, n)
    sigma = S.first()
    term = gen_mq(sigma, b, t.mq)
    # with a full basis state the term pins down the endpoint v
    v = State(term.get(var) if term.get(var) is not None else b[i] for i, var in enumerate(vocabulary(n)))
    assert v in S and leq_b(v, sigma, b.cube())
    for j in range(n):
        if v[j] != b[j]:
            assert v.with_bit(j, b[j]) not in S


def test_learn_monotonization_of_monotone_target():
    f = disj(atom(0), conj(atom(1), atom(2)))
    t = TruthTableTeacher(f, 3)
    terms, calls = learn_monotonization(t.eq, t.mq, State.from_str("000"))
    assert t.equivalent(dnf_formula(terms)) and calls == len(terms) + 1 == 3


def test_inconsistent_membership_oracle_aborts():
    t = TruthTableTeacher(atom(0), 2)
    with pytest.raises(OracleInconsistency):
        cdnf_learn(t.eq, lambda x: not t.mq(x), 2)


def test_contradicting_equivalence_oracle_aborts():
    answers = iter([State.from_str("10"), State.from_str("10"), State.from_str("10")])
    flip = {"n": 0}

    def eq(h):
        return next(answers)

    def mq(x):
        flip["n"] += 1
        return flip["n"] == 1

    with pytest.raises(OracleInconsistency):
        cdnf_learn(eq, mq, 2)


def test_wrong_length_counterexample_aborts():
    with pytest.raises(OracleInconsistency):
        cdnf_learn(lambda h: State.from_str("1"), lambda x: True, 2)


def test_round_cap():
    t = TruthTableTeacher(xor(atom(0), atom(1), atom(2)), 3)
    with pytest.raises(RuntimeError):
        cdnf_learn(t.eq, t.mq, 3, max_rounds=1)
