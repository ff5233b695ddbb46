import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from opmpc import Query, SchemaError, check_feasible, itinerary_cost, itinerary_score
from opmpc.instances import gen_random

from .conftest import D, P1, P2, P3, P4, S


def test_example_costs(example_net, example_query):
    assert itinerary_cost(example_net, example_query, [P1]) == 11
    assert itinerary_cost(example_net, example_query, [P2, P3]) == 9
    assert itinerary_cost(example_net, example_query, [P2, P3, P4]) == 10


def test_empty_itinerary_uses_shortest_path(example_net, example_query):
    # s-p2-p3-d = 2 + 2 + 3
    assert itinerary_cost(example_net, example_query, []) == 7


def test_example_scores(example_net):
    assert itinerary_score(example_net, [P1]) == 0.9
    assert itinerary_score(example_net, [P2, P3]) == 1.4
    assert itinerary_score(example_net, [P2, P3, P4]) == 1.9
    assert itinerary_score(example_net, []) == 0


@pytest.mark.parametrize("seq", [[7], [-1], [P1, P1]])
def test_bad_sequences_rejected(example_net, example_query, seq):
    with pytest.raises(ValueError):
        itinerary_cost(example_net, example_query, seq)
    with pytest.raises(ValueError):
        itinerary_score(example_net, seq)


def test_feasibility_verdicts(example_net, example_query):
    v1 = check_feasible(example_net, example_query, [P1])
    assert not v1.ok and not v1.time_ok and v1.cost == 11
    v3 = check_feasible(example_net, example_query, [P2, P3, P4])
    assert v3.time_ok and v3.over_caps == ((1, 2, 1),)
    assert check_feasible(example_net, example_query, [P2, P3]).ok


def test_duplicate_visit_is_a_violation(example_net):
    q = Query(S, D, 100, (3, 3))
    verdict = check_feasible(example_net, q, [P2, P2])
    assert verdict.duplicates == (P2,) and not verdict.ok


def test_query_validation():
    with pytest.raises(ValueError):
        Query(S, D, 0, (1,))
    with pytest.raises(ValueError):
        Query(S, D, 10, (-1,))


def test_instance_rejects_bad_references(example_net):
    doc = example_net.to_dict()
    doc["pois"][0]["category"] = 5
    with pytest.raises(SchemaError):
        type(example_net).from_dict(doc)


def _naive_cost(inst, query, seq):
    """Term-by-term sum from the definition, with networkx shortest paths."""
    g = nx.Graph()
    g.add_weighted_edges_from(inst.graph.edges)
    stops = [query.s] + [inst.pois[p].node for p in seq] + [query.d]
    travel = sum(nx.shortest_path_length(g, a, b, weight="weight") for a, b in zip(stops, stops[1:]))
    return travel + sum(inst.pois[p].visit_time for p in seq)


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 10_000), data=st.data())
def test_cost_matches_naive_sum_and_grows(seed, data):
    inst = gen_random(seed, 8, 3)
    nodes = inst.graph.nodes
    q = Query(nodes[0], nodes[-1], 10_000, (8, 8, 8))
    seq = data.draw(st.permutations(range(inst.n)))[: data.draw(st.integers(0, inst.n))]
    cost = itinerary_cost(inst, q, seq)
    assert cost == _naive_cost(inst, q, seq)
    for p in range(inst.n):
        if p not in seq:
            assert itinerary_cost(inst, q, list(seq) + [p]) >= cost


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 10_000), data=st.data())
def test_feasible_caps_hold_for_every_prefix(seed, data):
    inst = gen_random(seed, 8, 3)
    caps = tuple(data.draw(st.integers(0, 3)) for _ in range(3))
    q = Query(inst.graph.nodes[0], inst.graph.nodes[1], 10_000, caps)
    seq = data.draw(st.permutations(range(inst.n)))[: data.draw(st.integers(0, 4))]
    if check_feasible(inst, q, seq).ok:
        for i in range(len(seq) + 1):
            assert not check_feasible(inst, q, seq[:i]).over_caps
