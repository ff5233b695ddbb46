import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from opmpc import (
    InfeasibleQueryError,
    Query,
    SearchConfig,
    SearchState,
    check_feasible,
    extend_greedily,
    greedy_baseline,
    oracle_solve,
    resume,
    solve,
    worst_case_nodes,
)
from opmpc.search import PartialSolution

from .conftest import D, P1, P2, P3, P4, S
from .corpus import case


def test_greedy_trace_on_example(example_net, example_query):
    # utilities from s: p1 .9/11, p2 .5/8, p3 .9/8, p4 .5/8 -> p3; then p4 (.5/4)
    it = greedy_baseline(example_net, example_query)
    assert it.sequence == (P3, P4) and it.cost == 9 and it.score == 1.4


def test_greedy_leaves_full_base_alone(example_net, example_query):
    base = PartialSolution(frozenset({P2, P3}), (P2, P3), 9, 1.4, 0.0, 1.4, 0)
    it = extend_greedily(example_net, example_query, base)
    assert it.sequence == (P2, P3) and it.cost == 9


def test_greedy_single_candidate(example_net):
    q = Query(S, D, 10, (0, 1))
    # p2 (.5/8) and p4 (.5/8) tie on utility and score: lower id wins
    assert greedy_baseline(example_net, q).sequence == (P2,)


def test_greedy_with_nothing_allowed(example_net):
    assert greedy_baseline(example_net, Query(S, D, 10, (0, 0))).sequence == ()
    assert greedy_baseline(example_net, Query(S, D, 7, (1, 1))).sequence == ()


def test_expand_is_canonical(example_net):
    q = Query(S, D, 100, (2, 2))
    st_ = SearchState(example_net, q, SearchConfig.exact())
    root = st_._make(frozenset(), (), 7)
    assert sorted(min(c.pois) for c in st_.expand(root)) == [P1, P2, P3, P4]
    node = st_._make(frozenset({P2, P3}), (P2, P3), 9)
    assert [sorted(c.pois) for c in st_.expand(node)] == [[P2, P3, P4]]


def test_expand_keeps_feasible_child(example_net, example_query):
    st_ = SearchState(example_net, example_query, SearchConfig.exact())
    node = st_._make(frozenset({P3}), (P3,), 8)
    kids = st_.expand(node)
    assert [(sorted(k.pois), k.cost) for k in kids] == [([P3, P4], 9)]


def test_exact_solution_on_example(example_net, example_query):
    out = solve(example_net, example_query, SearchConfig.exact())
    assert out.best.score == 1.4 and out.best.cost == 9
    assert out.alpha == 1.0 and out.optimal_flag


def test_cut_factor_example(example_net, example_query):
    out = solve(example_net, example_query, SearchConfig(cut_factor=2.0))
    assert out.best.score >= 0.7


def test_budget_equal_to_direct_route(example_net):
    out = solve(example_net, Query(S, D, 7, (1, 1)), SearchConfig.exact())
    assert out.best.sequence == () and out.best.score == 0 and out.alpha == 1.0


def test_infeasible_query(example_net):
    with pytest.raises(InfeasibleQueryError):
        solve(example_net, Query(S, D, 6, (1, 1)))


def test_config_validation():
    with pytest.raises(ValueError):
        SearchConfig(greedy_threshold=1.5)
    with pytest.raises(ValueError):
        SearchConfig(cut_factor=0.9)
    with pytest.raises(ValueError):
        SearchConfig(max_queue_len=0)


def test_worst_case_examples(example_net):
    q = Query(S, D, 100, (1, 1))  # all four POIs reachable, lambda = 2
    assert worst_case_nodes(example_net, q) == 12
    assert worst_case_nodes(example_net, q, 2) == 4
    assert worst_case_nodes(example_net, Query(S, D, 100, (0, 0))) == 1


def test_zero_budget_resume_changes_nothing():
    inst, q = case(23)
    state = SearchState(inst, q, SearchConfig.exact())
    first = state.run(0.0)
    again, _ = resume(state, 0.0)
    assert (again.best, again.alpha, again.stats.expanded) == (first.best, first.alpha, first.stats.expanded)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 199))
def test_resumed_search_matches_uninterrupted(seed):
    inst, q = case(seed)
    straight = solve(inst, q, SearchConfig.exact())
    state = SearchState(inst, q, SearchConfig.exact())
    alphas, scores = [], []
    out = state.run(0.0)
    while not out.terminated:
        alphas.append(out.alpha)
        scores.append(out.best.score)
        out, state = resume(state, 0.0005)
    alphas.append(out.alpha)
    scores.append(out.best.score)
    assert out.best == straight.best and out.stats.expanded == straight.stats.expanded
    assert alphas == sorted(alphas) and scores == sorted(scores)
    # a finished state stays finished
    assert resume(state, 1.0)[0].best == out.best


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 199), limit=st.integers(1, 6), cut=st.sampled_from([1.0, 1.3]))
def test_bounded_queue_never_overflows_and_stays_feasible(seed, limit, cut):
    inst, q = case(seed)
    state = SearchState(inst, q, SearchConfig(cut_factor=cut, max_queue_len=limit, debug=True))
    original = state.deque.push

    def push(sol):
        original(sol)
        assert len(state.deque) <= limit
        assert check_feasible(inst, q, sol.order).ok

    state.deque.push = push
    out = state.run()
    assert check_feasible(inst, q, out.best).ok
    assert out.best.score >= greedy_baseline(inst, q).score
    assert out.best.score >= out.alpha * oracle_solve(inst, q).score - 1e-9


def test_debug_mode_catches_nothing_on_corpus_sample():
    for seed in range(20):
        inst, q = case(seed)
        solve(inst, q, SearchConfig.exact(debug=True))
        SearchState(inst, q, SearchConfig.exact(exhaustive=True, debug=True)).run()
