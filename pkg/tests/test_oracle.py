import pytest

from opmpc import InfeasibleQueryError, OracleTooLarge, Query, oracle_solve
from opmpc.instances import gen_random
from opmpc.oracle import capped_subset_count, exhaustive_optimum, feasible_sets

from .conftest import D, P2, P3, S
from .corpus import case


def test_example_optimum(example_net, example_query):
    best = oracle_solve(example_net, example_query)
    assert (best.sequence, best.cost, best.score) == ((P2, P3), 9, 1.4)


def test_all_caps_zero(example_net):
    best = oracle_solve(example_net, Query(S, D, 100, (0, 0)))
    assert best.sequence == () and best.score == 0 and best.cost == 7


def test_loose_budget_takes_everything(example_net):
    best = oracle_solve(example_net, Query(S, D, 10_000, (4, 4)))
    assert sorted(best.sequence) == [0, 1, 2, 3]


def test_infeasible_query(example_net):
    with pytest.raises(InfeasibleQueryError):
        oracle_solve(example_net, Query(S, D, 6, (1, 1)))


def test_size_guard():
    inst = gen_random(1, 14, 2)
    q = Query(0, 1, 10_000, (14, 14))
    assert capped_subset_count(inst.bind(q)) == 1 << 14
    with pytest.raises(OracleTooLarge):
        oracle_solve(inst, q, limit=1000)


def test_counting_matches_enumeration():
    for seed in range(10):
        inst, q = case(seed)
        prob = inst.bind(q)
        unbounded = Query(q.s, q.d, 10**9, q.max_k)
        assert len(feasible_sets(inst.bind(unbounded))) == capped_subset_count(prob)


def test_score_only_shortcut_agrees():
    for seed in range(30):
        inst, q = case(seed)
        assert exhaustive_optimum(inst.bind(q)) == oracle_solve(inst, q).score
