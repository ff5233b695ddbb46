import json

import pytest

from opmpc import SchemaError
from opmpc.instances import (
    GridSpec,
    QuerySpec,
    SpiderSpec,
    dumps_instance,
    gen_grid,
    gen_queries,
    gen_spider,
    load_instance,
    load_query,
    save_instance,
    save_queries,
)


def test_full_size_grid():
    inst = gen_grid(GridSpec(seed=3))
    assert len(inst.graph.nodes) == 10_000
    assert len(inst.graph.edges) == 19_800
    assert inst.n == 3000 and inst.categories == 4
    assert len({p.node for p in inst.pois}) == 3000
    for p in inst.pois:
        assert 180 <= p.visit_time <= 3600 and 1 <= p.score <= 100
        assert 0 <= p.category < 4


def test_tiny_grid():
    inst = gen_grid(GridSpec(side=2, poi_count=1, category_count=1))
    assert (len(inst.graph.nodes), len(inst.graph.edges), inst.n) == (4, 4, 1)


@pytest.mark.parametrize("bad", [dict(side=0), dict(side=3, poi_count=10), dict(category_count=0),
                                 dict(visit_min=10, visit_max=5)])
def test_grid_validation(bad):
    with pytest.raises(ValueError):
        gen_grid(GridSpec(**{"poi_count": 1, **bad}))


def test_full_size_spider():
    inst = gen_spider(SpiderSpec(seed=3))
    g = inst.graph
    assert len(g.nodes) == 10_000 and inst.n == 3000
    assert len(g.edges) == 100 * 100 + 100 * 99
    weights = {(u, v): w for u, v, w in g.edges}
    assert weights[(0, 1)] == 8 and weights[(100, 101)] == 16 and weights[(9900, 9901)] == 800
    assert weights[(0, 100)] == 100


def test_single_triangle_spider():
    inst = gen_spider(SpiderSpec(sides=3, levels=1, poi_count=0))
    assert len(inst.graph.nodes) == 3 and len(inst.graph.edges) == 3


def test_generators_are_deterministic():
    spec = GridSpec(side=20, poi_count=50, seed=11)
    assert dumps_instance(gen_grid(spec)) == dumps_instance(gen_grid(spec))
    assert dumps_instance(gen_grid(spec)) != dumps_instance(gen_grid(GridSpec(side=20, poi_count=50, seed=12)))
    sp = SpiderSpec(sides=10, levels=5, poi_count=20, seed=2)
    assert dumps_instance(gen_spider(sp)) == dumps_instance(gen_spider(sp))


def test_queries():
    inst = gen_grid(GridSpec(side=15, poi_count=60, seed=1))
    spec = QuerySpec(t_max=2400, max_k=(2, 2, 2, 2), seed=4)
    qs = gen_queries(inst, spec)
    assert len(qs) == 25 and qs == gen_queries(inst, spec)
    for q in qs:
        assert inst.graph.index.shortest_from([q.s])[0][inst.graph.index.position[q.d]] < 2400
    with pytest.raises(ValueError):
        gen_queries(inst, QuerySpec(max_k=(1, 1)))


def test_impossible_queries_are_reported():
    inst = gen_grid(GridSpec(side=30, poi_count=1, edge_seconds=100))
    # with t_max=1 only s == d pairs qualify: 1 in 900 draws
    with pytest.raises(RuntimeError):
        gen_queries(inst, QuerySpec(t_max=1, max_k=(1, 1, 1, 1), count=1, seed=2), max_tries=3)


def test_round_trip(tmp_path):
    inst = gen_spider(SpiderSpec(sides=6, levels=3, poi_count=7, seed=5))
    path = tmp_path / "inst.json"
    save_instance(inst, path)
    back = load_instance(path)
    assert back == inst and dumps_instance(back) == dumps_instance(inst)
    qs = gen_queries(inst, QuerySpec(max_k=(1, 1, 1, 1), count=3))
    save_queries(qs, tmp_path / "q.json")
    assert load_query(tmp_path / "q.json") == qs


def test_missing_pois_key(tmp_path):
    doc = json.loads(dumps_instance(gen_grid(GridSpec(side=2, poi_count=1))))
    del doc["pois"]
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    with pytest.raises(SchemaError, match="pois"):
        load_instance(path)


def test_unknown_edge_node(tmp_path):
    doc = json.loads(dumps_instance(gen_grid(GridSpec(side=2, poi_count=1))))
    doc["edges"].append([0, 99, 5])
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    with pytest.raises(SchemaError, match="99"):
        load_instance(path)


def test_malformed_json_names_the_line(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{\n"nodes": [1,\n')
    with pytest.raises(SchemaError, match="line"):
        load_instance(path)
