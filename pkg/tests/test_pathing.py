import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from opmpc import Query, best_order, itinerary_cost
from opmpc.instances import gen_random
from opmpc.oracle import enumerate_orders
from opmpc.pathing import PathCache, solve_order

from .conftest import P1, P2, P3


def test_two_poi_order(example_net, example_query):
    path = best_order(example_net, example_query, {P2, P3})
    assert path.order == (P2, P3) and path.cost == 9
    assert itinerary_cost(example_net, example_query, [P3, P2]) == 13


def test_single_and_empty(example_net, example_query):
    assert best_order(example_net, example_query, {P1}).cost == 11
    empty = best_order(example_net, example_query, set())
    assert empty.order == () and empty.cost == 7


def test_rejects_unknown_poi(example_net, example_query):
    with pytest.raises(ValueError):
        best_order(example_net, example_query, {9})


def _instance(seed, n=9):
    inst = gen_random(seed, n, 2, max_edge=6, max_visit=3)
    nodes = inst.graph.nodes
    return inst, Query(nodes[0], nodes[-1], 10_000, (n, n))


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 50_000), data=st.data())
def test_dp_equals_permutation_enumeration(seed, data):
    # small weights make ties common, which exercises the tie-break
    inst, q = _instance(seed)
    prob = inst.bind(q)
    pois = data.draw(st.sets(st.integers(0, inst.n - 1), max_size=7))
    assert solve_order(prob, pois) == enumerate_orders(prob, pois)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 50_000), data=st.data())
def test_adding_a_poi_never_shortens_the_route(seed, data):
    inst, q = _instance(seed)
    prob = inst.bind(q)
    pois = data.draw(st.sets(st.integers(0, inst.n - 1), max_size=6))
    extra = data.draw(st.integers(0, inst.n - 1).filter(lambda p: p not in pois))
    assert solve_order(prob, pois | {extra}).cost >= solve_order(prob, pois).cost


def test_cost_is_below_every_permutation():
    inst, q = _instance(3, n=6)
    prob = inst.bind(q)
    pois = {0, 1, 2, 3, 4}
    best = solve_order(prob, pois)
    assert all(best.cost <= prob.sequence_cost(p) for p in itertools.permutations(pois))


def test_cache_reuses_results():
    inst, q = _instance(5, n=6)
    cache = PathCache(inst.bind(q))
    first = cache(frozenset({1, 2}))
    assert cache(frozenset({2, 1})) is first and cache.hits == 1
