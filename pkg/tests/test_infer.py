import random

import pytest

from monotone_infer import oracle as O
from monotone_infer.cli import generators as G
from monotone_infer.core.logic import State, atom, conj, vocabulary
from monotone_infer.core.system import parse_system
from monotone_infer.infer import (INVARIANT, RESTART, UNSAFE, ContractError, SoundnessError, backward_itp,
                                  cdnf_itp, dual_itp, infer_with_restarts, invariant_failures, minimal_clause,
                                  reverse_system, soundness_gate)
from monotone_infer.sat.queries import QueryCounter

COUNTER = """vars 3
init (and (not p0) (not p1) (not p2))
trans (and (iff p0' (not p0)) (iff p1' (xor p1 p0)) (iff p2' (xor p2 (and p0 p1))))
bad (and p0 p1 p2)
"""


def exact_ok(ts, inv):
    return O.is_inductive_invariant(ts, O.ExplicitSet.from_formula(inv, vocabulary(ts.n)))


@pytest.mark.parametrize("engine", [cdnf_itp, dual_itp])
@pytest.mark.parametrize("n", [3, 5])
def test_parity_invariant_found(engine, n):
    gen = G.parity(n)
    out = engine(gen.system, gen.s)
    assert out.status == INVARIANT
    assert exact_ok(gen.system, out.invariant)
    assert invariant_failures(gen.system, out.invariant) == []


def test_unsafe_when_bad_within_bound():
    ts = parse_system(COUNTER)
    out = cdnf_itp(ts, 7)
    assert out.status == UNSAFE and out.reached == State.from_str("111")
    assert out.stats.queries.bmc == 1 and out.stats.queries.inductiveness == 0


def test_restart_when_cti_is_reachable():
    out = cdnf_itp(parse_system(COUNTER), 0)
    assert out.status == RESTART
    assert out.reached == State.from_str("000")


def test_driver_doubles_bound_until_verdict():
    res = infer_with_restarts(parse_system(COUNTER), cdnf_itp, s=0, max_restarts=8)
    assert res.outcome.status == UNSAFE
    assert (res.restarts, res.outcome.s) == (4, 8)   # s = 0, 1, 2, 4, 8


def test_driver_gives_up_after_cap():
    res = infer_with_restarts(parse_system(COUNTER), cdnf_itp, s=0, max_restarts=1)
    assert res.outcome.status == RESTART and res.restarts == 1


def test_counters_add_up_across_restarts():
    ts = parse_system(COUNTER)
    res = infer_with_restarts(ts, dual_itp, s=0, max_restarts=8)
    total = QueryCounter()
    s = 0
    for _ in range(res.restarts + 1):
        out = dual_itp(ts, s)
        for k, v in out.stats.queries.as_dict().items():
            setattr(total, k, getattr(total, k) + v)
        s = max(1, 2 * s)
    assert total.as_dict() == res.queries.as_dict()


def test_soundness_gate_reports_each_condition():
    ts = parse_system(COUNTER)
    fails = dict(invariant_failures(ts, atom(0)))
    assert set(fails) == {"initiation", "consecution", "safety"}
    with pytest.raises(SoundnessError) as info:
        soundness_gate(ts, atom(0))
    assert len(info.value.failures) == 3
    assert [name for name, _ in invariant_failures(ts, conj())] == ["safety"]


@pytest.mark.parametrize("seed", range(6))
def test_minimal_clause_is_minimal(seed):
    gen = G.generate("fenced-random", 5, seed)
    ts, s = gen.system, gen.s
    R = O.reachable_upto(ts, s)
    rng = random.Random(seed)
    outside = (~R).states()
    sigma = rng.choice(outside)
    clause = minimal_clause(sigma, ts, s)
    V = vocabulary(ts.n)
    allowed = O.ExplicitSet.from_cubes([clause.negate()], V)
    assert sigma in allowed and (allowed & R).is_empty()
    for lit in clause:
        smaller = O.ExplicitSet.from_cubes([clause.without(lit.var).negate()], V)
        assert not (smaller & R).is_empty()


def test_minimal_clause_rejects_reachable_state():
    with pytest.raises(ContractError):
        minimal_clause(State.from_str("000"), parse_system(COUNTER), 0)


@pytest.mark.parametrize("family, n, seed", [("two-bits", 6, 0), ("two-bits", 6, 1), ("fenced-random", 6, 2),
                                             ("fenced-random", 6, 3), ("monotone", 6, 4), ("fenced-random", 5, 5)])
def test_cdnf_blocks_equal_monotonization_of_invariant(family, n, seed):
    gen = G.generate(family, n, seed)
    I = gen.invariant_set()
    out = cdnf_itp(gen.system, gen.s)
    assert out.status == INVARIANT and exact_ok(gen.system, out.invariant)
    assert out.stats.queries.inductiveness <= O.min_cnf_size(I)
    for sigma, H in out.blocks:
        assert O.ExplicitSet.from_cubes(H.terms, vocabulary(n)) == O.exact_monotonize(I, sigma.cube())


@pytest.mark.parametrize("seed", range(4))
def test_dual_iterations_within_cnf_size(seed):
    gen = G.generate("monotone", 6, seed)
    out = dual_itp(gen.system, gen.s)
    assert out.status == INVARIANT and exact_ok(gen.system, out.invariant)
    assert out.stats.iterations <= O.min_cnf_size(gen.invariant_set())


@pytest.mark.parametrize("seed", range(4))
def test_backward_pipeline_returns_invariant(seed):
    gen = G.generate("backwards-fenced", 6, seed)
    out = backward_itp(gen.system, gen.s)
    assert out.status == INVARIANT and exact_ok(gen.system, out.invariant)


def test_reverse_system_is_involution():
    ts = parse_system(COUNTER)
    rr = reverse_system(reverse_system(ts))
    assert (rr.init, rr.bad, rr.n) == (ts.init, ts.bad, ts.n)
    M, MM = O.transition_matrix(ts), O.transition_matrix(rr)
    assert (M == MM).all()


def test_runs_are_deterministic():
    gen = G.generate("two-bits", 6, 3)
    a = cdnf_itp(gen.system, gen.s)
    b = cdnf_itp(gen.system, gen.s)
    assert a.invariant == b.invariant and a.stats.queries.as_dict() == b.stats.queries.as_dict()
