"""Seeded small-instance corpus shared by the cross-check tests."""

from __future__ import annotations

from functools import lru_cache

from opmpc import Instance, Query
from opmpc.instances import gen_random, stream

CORPUS_SIZE = 200


@lru_cache(maxsize=None)
def case(seed: int) -> tuple[Instance, Query]:
    """Up to 12 POIs, 2-4 categories, caps in 0..3, a budget a few POIs wide."""
    rng = stream(seed, "corpus")
    n = int(rng.integers(4, 13))
    m = int(rng.integers(2, 5))
    inst = gen_random(seed, n, m, extra_nodes=int(rng.integers(1, 5)), integer_scores=bool(seed % 2))
    caps = tuple(int(k) for k in rng.integers(0, 4, size=m))
    nodes = inst.graph.nodes
    s, d = (nodes[int(i)] for i in rng.integers(0, len(nodes), size=2))
    direct = int(inst.graph.index.shortest_from([s])[0, inst.graph.index.position[d]])
    t_max = max(1, direct + int(rng.integers(0, 90)))
    return inst, Query(s, d, t_max, caps)


def corpus(size: int = CORPUS_SIZE):
    return [case(seed) for seed in range(size)]
