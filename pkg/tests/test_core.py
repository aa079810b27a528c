import itertools
import random

import pytest
from hypothesis import given
import hypothesis.strategies as st

from monotone_infer.core.dtree import (Leaf, Node, dt_to_cnf, dt_to_dnf, format_tree, random_tree, size, tree_eval,
                                       tree_formula)
from monotone_infer.core.logic import (Clause, Cube, InconsistentCubeError, Literal, LogicError, State, Var, atom,
                                       cnf_formula, conj, copies, disj, dnf_formula, evaluate, iff, neg, prime,
                                       prune_subsumed, rename_copies, substitute, unprime, variables, vocabulary, xor)
from monotone_infer.core.system import (FormatError, TransitionSystem, format_formula, format_system, parse_basis,
                                        parse_cube, parse_formula, parse_system, parse_tree)

from conftest import dnfs, partial_cubes, states


def all_states(n):
    return [State.from_int(i, n) for i in range(1 << n)]


def test_var_and_literal_text():
    assert str(Var(3)) == "p3"
    assert str(Var(3, 1)) == "p3'"
    assert str(-Literal(Var(0), True)) == "~p0"


def test_cube_rejects_complementary_literals():
    with pytest.raises(InconsistentCubeError):
        Cube([Literal(Var(0), True), Literal(Var(0), False)])


def test_cube_conjoin_conflict_is_none():
    a = Cube.from_mapping({Var(0): True})
    b = Cube.from_mapping({Var(0): False, Var(1): True})
    assert a.conjoin(b) is None
    assert a.conjoin(Cube.from_mapping({Var(1): True})) == Cube.from_mapping({Var(0): True, Var(1): True})


def test_state_round_trips():
    s = State.from_str("1011")
    assert s.to_int() == 0b1101
    assert State.from_int(s.to_int(), 4) == s
    assert s.flip(1) == State.from_str("1111")
    assert s.weight() == 3
    with pytest.raises(LogicError):
        State.from_str("12")


@given(st.integers(1, 5).flatmap(lambda n: st.tuples(st.just(n), partial_cubes(n), states(n))))
def test_cube_negation_is_clause_complement(case):
    n, c, s = case
    asg = s.assignment()
    assert c.holds(asg) != c.negate().holds(asg)
    assert c.negate().negate() == c


@given(st.integers(1, 4).flatmap(lambda n: st.tuples(st.just(n), dnfs(n), states(n))))
def test_dnf_formula_matches_cube_semantics(case):
    n, terms, s = case
    asg = s.assignment()
    assert evaluate(dnf_formula(terms), asg) == any(t.holds(asg) for t in terms)
    clauses = [t.negate() for t in terms]
    assert evaluate(cnf_formula(clauses), asg) == all(c.holds(asg) for c in clauses)


@given(st.integers(1, 4).flatmap(lambda n: st.tuples(st.just(n), dnfs(n, 6))))
def test_prune_subsumed_preserves_semantics(case):
    n, terms = case
    pruned = prune_subsumed(terms)
    for s in all_states(n):
        asg = s.assignment()
        assert any(t.holds(asg) for t in terms) == any(t.holds(asg) for t in pruned)
    for a, b in itertools.permutations(pruned, 2):
        assert not a.issubset(b)


def test_builders_simplify_constants():
    p = atom(0)
    assert evaluate(conj(), {}) is True
    assert evaluate(disj(), {}) is False
    assert conj(p, conj()) == p
    assert neg(neg(p)) == p


def test_xor_iff_semantics():
    f = xor(atom(0), atom(1), atom(2))
    for s in all_states(3):
        assert evaluate(f, s.assignment()) == (s.weight() % 2 == 1)
    g = iff(atom(0), atom(1))
    for s in all_states(2):
        assert evaluate(g, s.assignment()) == (s[0] == s[1])


def test_prime_unprime_and_copies():
    f = conj(atom(0), neg(atom(1, 1)))
    assert copies(f) == {0, 1}
    assert copies(prime(atom(0))) == {1}
    assert unprime(prime(atom(2))) == atom(2)
    assert variables(rename_copies(f, {0: 1, 1: 2})) == {Var(0, 1), Var(1, 2)}


def test_substitute_replaces_variables():
    f = conj(atom(0), atom(1))
    g = substitute(f, {Var(1): neg(atom(2))})
    for s in all_states(3):
        assert evaluate(g, s.assignment()) == (s[0] and not s[2])


FORMULAS = ["p0", "(not p1)", "(and p0 p1' (or p2 (not p0')))", "(xor p0 p1 p2)", "(iff p0 p1)", "true",
            "false"]


@pytest.mark.parametrize("text", FORMULAS)
def test_formula_text_round_trip(text):
    f = parse_formula(text, 3)
    assert parse_formula(format_formula(f), 3) == f


def test_parse_errors_carry_position():
    with pytest.raises(FormatError) as info:
        parse_formula("(and p0 p9)", 3)
    assert "p9" in str(info.value)
    with pytest.raises(FormatError):
        parse_formula("(and p0", 3)
    with pytest.raises(FormatError):
        parse_formula("p0'", 3, allow_primed=False)


SYSTEM = """vars 3 ; three bits
init (and (not p0) (not p1) (not p2))
trans (or (and p0' p1') (iff p2' p2))
bad (and p0 p1 p2)
basis (and p0 p1 p2)
"""


def test_system_round_trip():
    ts = parse_system(SYSTEM)
    assert ts.n == 3
    assert ts.basis == (parse_cube("(and p0 p1 p2)"),)
    assert parse_system(format_system(ts)) == ts


@pytest.mark.parametrize("text", ["init true", "vars 2\ninit true\ntrans true",
                                  "vars 2\ninit true\ntrans true\nbad p0'",
                                  "vars 2\ninit true\ninit true\ntrans true\nbad true",
                                  "vars 2\nfoo true"])
def test_system_parse_errors(text):
    with pytest.raises(FormatError):
        parse_system(text)


def test_system_rejects_stray_variables():
    with pytest.raises(LogicError):
        TransitionSystem(2, atom(5), atom(0), atom(1))


def test_reversed_system_swaps_roles():
    ts = parse_system(SYSTEM)
    rev = ts.reversed()
    assert rev.init == ts.bad and rev.bad == ts.init
    for pre, post in itertools.product(all_states(3), repeat=2):
        fwd = {**pre.assignment(), **post.assignment(vocabulary(3, 1))}
        bwd = {**post.assignment(), **pre.assignment(vocabulary(3, 1))}
        assert evaluate(ts.tr, fwd) == evaluate(rev.tr, bwd)


def test_basis_file_parsing():
    basis = parse_basis("; comment\n(and p0 p1)\n\n(not p2)\n", 3)
    assert len(basis) == 2
    with pytest.raises(FormatError):
        parse_basis("(or p0 p1)\n", 3)


def test_tree_parse_and_size():
    t = parse_tree("(node p0 (leaf false) (node p1 (leaf true) (leaf false)))", 2)
    assert t == Node(0, Leaf(False), Node(1, Leaf(True), Leaf(False)))
    assert size(t) == 3
    assert parse_tree(format_tree(t), 2) == t
    assert [tree_eval(t, s) for s in all_states(2)] == [False, True, False, False]


@pytest.mark.parametrize("seed", range(20))
def test_tree_dnf_and_cnf_agree_with_tree(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 5)
    t = random_tree(rng, n, rng.randint(1, 8))
    terms, clauses = dt_to_dnf(t), dt_to_cnf(t)
    f = tree_formula(t)
    for s in all_states(n):
        asg = s.assignment()
        expected = tree_eval(t, s)
        assert any(c.holds(asg) for c in terms) == expected
        assert all(c.holds(asg) for c in clauses) == expected
        assert evaluate(f, asg) == expected
    assert len(terms) + len(clauses) == size(t)


def test_random_tree_caps_leaves():
    t = random_tree(random.Random(0), 2, 50)
    assert size(t) <= 4


def test_clause_without_and_issubset():
    c = Clause.from_mapping({Var(0): True, Var(1): False})
    assert c.without(Var(0)) == Clause.from_mapping({Var(1): False})
    assert c.without(Var(0)).issubset(c)
