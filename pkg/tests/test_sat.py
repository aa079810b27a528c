import itertools
import sys

import pytest
from hypothesis import given
import hypothesis.strategies as st

from monotone_infer.core.logic import State, atom, conj, disj, evaluate, neg, vocabulary, xor
from monotone_infer.core.system import parse_system
from monotone_infer.sat.cnf import encode_cnf
from monotone_infer.sat.dimacs import ExternalBackend, parse_dimacs, parse_solver_output, to_dimacs
from monotone_infer.sat.queries import (QueryCounter, bmc_reach_formula, check_inductive, formula_oracle, is_sat,
                                        reach_oracle, solve)
from monotone_infer.sat.solver import CdclSolver, solve_cnf
from monotone_infer import oracle as O

from conftest import partial_cubes


def brute_sat(num_vars, clauses):
    for bits in itertools.product([False, True], repeat=num_vars):
        if all(any(bits[abs(l) - 1] == (l > 0) for l in c) for c in clauses):
            return True
    return False


def cnfs(max_vars=8, max_clauses=30):
    return st.integers(1, max_vars).flatmap(lambda nv: st.tuples(
        st.just(nv),
        st.lists(st.lists(st.integers(1, nv).flatmap(lambda v: st.sampled_from([v, -v])), min_size=1, max_size=4),
                 max_size=max_clauses)))


@given(cnfs())
def test_cdcl_agrees_with_brute_force(case):
    nv, clauses = case
    model = solve_cnf(nv, clauses)
    assert (model is not None) == brute_sat(nv, clauses)
    if model is not None:
        assert all(any(model[abs(l)] == (l > 0) for l in c) for c in clauses)


@pytest.mark.parametrize("holes", [3, 4, 5])
def test_pigeonhole_is_unsat(holes):
    pigeons = holes + 1
    var = lambda p, h: p * holes + h + 1
    clauses = [[var(p, h) for h in range(holes)] for p in range(pigeons)]
    clauses += [[-var(p, h), -var(q, h)] for h in range(holes) for p in range(pigeons) for q in range(p + 1, pigeons)]
    assert solve_cnf(pigeons * holes, clauses) is None


def test_solver_sessions_drop_extra_clauses():
    s = CdclSolver(2, [[1, 2]])
    assert s.solve([[-1], [-2]]) is None
    assert s.solve() is not None
    assert s.solve([[-1]])[2] is True


def test_empty_clause_is_unsat():
    assert solve_cnf(1, [[]]) is None


@given(st.integers(1, 4).flatmap(lambda n: st.tuples(st.just(n), partial_cubes(n), partial_cubes(n))))
def test_tseitin_encoding_is_equisatisfiable(case):
    n, a, b = case
    f = xor(a.to_formula(), neg(b.to_formula()), atom(0))
    clauses, ids = encode_cnf(f)
    nv = max([abs(l) for c in clauses for l in c] + [0])
    truth = any(evaluate(f, State.from_int(i, n).assignment()) for i in range(1 << n))
    assert (solve_cnf(nv, clauses) is not None) == truth


def test_solve_returns_model_of_formula():
    f = conj(atom(0), neg(atom(1)), disj(atom(2), atom(1)))
    m = solve(f)
    assert evaluate(f, m)
    assert solve(conj(atom(0), neg(atom(0)))) is None


def test_counter_counts_each_solve_by_kind():
    c = QueryCounter()
    is_sat(atom(0), c, "plain")
    is_sat(atom(0), c, "bmc")
    is_sat(atom(0), c, "bmc")
    assert c.as_dict() == {"plain": 1, "bmc": 2, "inductiveness": 0}
    assert c.total == 3
    with pytest.raises(ValueError):
        c.tick("other")


def test_oracle_witness_and_intersects():
    V = vocabulary(3)
    o = formula_oracle(conj(atom(0), atom(1)), V)
    w = o.witness()
    assert w[0] and w[1]
    assert not o.intersects(State.from_str("010").cube())
    assert o.calls == 2


COUNTER = """vars 3
init (and (not p0) (not p1) (not p2))
trans (and (iff p0' (not p0)) (iff p1' (xor p1 p0)) (iff p2' (xor p2 (and p0 p1))))
bad (and p0 p1 p2)
"""


@pytest.mark.parametrize("s", [0, 1, 2, 3, 6, 7])
def test_reach_oracle_matches_explicit_reachability(s):
    ts = parse_system(COUNTER)
    R = reach_oracle(ts, s)
    exact = O.reachable_upto(ts, s)
    for i in range(8):
        x = State.from_int(i, 3)
        assert R.intersects(x.cube()) == (x in exact)


def test_bmc_formula_reaches_bad_at_depth_seven():
    ts = parse_system(COUNTER)
    assert not is_sat(bmc_reach_formula(ts, 6, ts.bad))
    assert is_sat(bmc_reach_formula(ts, 7, ts.bad))


def test_check_inductive_returns_cti():
    ts = parse_system(COUNTER)
    cand = neg(ts.bad)
    pre, post = check_inductive(ts, cand)
    assert not evaluate(ts.bad, pre.assignment()) and evaluate(ts.bad, post.assignment())
    assert check_inductive(ts, disj(atom(0), neg(atom(0)))) is None


def test_dimacs_round_trip():
    text = to_dimacs(3, [[1, -2], [3]])
    assert parse_dimacs("c hello\n" + text) == (3, [[1, -2], [3]])
    with pytest.raises(ValueError):
        parse_dimacs("1 2 0\n")


def test_parse_solver_output_forms():
    assert parse_solver_output("s UNSATISFIABLE\n", 2) is None
    assert parse_solver_output("s SAT\nv 1 -2 0\n", 2) == [False, True, False]
    with pytest.raises(RuntimeError):
        parse_solver_output("c nothing\n", 1)


def test_external_backend_through_subprocess():
    backend = ExternalBackend([sys.executable, "-c", "from monotone_infer.sat.dimacs import main; main()"])
    f = conj(atom(0), disj(neg(atom(0)), atom(1)))
    m = solve(f, backend=backend)
    assert m is not None and evaluate(f, m)
    assert solve(conj(f, neg(atom(1))), backend=backend) is None
