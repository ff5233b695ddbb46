"""Minimum-cost ordering of a POI set between the start and destination."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .closure import metric_closure  # noqa: F401  (re-exported)
from .model import Instance, Problem, Query


@dataclass(frozen=True)
class OrderedPath:
    order: tuple[int, ...]
    cost: int


def solve_order(prob: Problem, pois: Iterable[int]) -> OrderedPath:
    """Exact subset DP; among equal-cost orders returns the lexicographically smallest.

    ``tail[R][x]`` is the cheapest way to leave ``x`` (already visited), visit
    every POI in the bitmask ``R`` and reach the destination.  The order is
    rebuilt forwards from the start, always taking the smallest id that still
    achieves the optimum, which yields the lexicographic minimum.
    """
    ids = sorted(set(pois))
    dist, visit = prob.dist, prob.visit
    s, d = prob.s, prob.d
    k = len(ids)
    if k == 0:
        return OrderedPath((), dist[s][d])
    if k == 1:
        p = ids[0]
        return OrderedPath((p,), dist[s][p] + visit[p] + dist[p][d])

    full = (1 << k) - 1
    rows = [dist[p] for p in ids]
    step = [[rows[i][ids[j]] + visit[ids[j]] for j in range(k)] for i in range(k)]
    members = [[j for j in range(k) if r >> j & 1] for r in range(full + 1)]

    inf = float("inf")
    tail = [[inf] * k for _ in range(full + 1)]
    t0 = tail[0]
    for i in range(k):
        t0[i] = rows[i][d]
    for r in range(1, full):
        mem = members[r]
        tr = tail[r]
        for x in range(k):
            if r >> x & 1:
                continue
            sx = step[x]
            best = inf
            for y in mem:
                v = sx[y] + tail[r ^ (1 << y)][y]
                if v < best:
                    best = v
            tr[x] = best

    srow = dist[s]
    order = []
    remaining = full
    cost = None
    prev_step = [srow[p] + visit[p] for p in ids]
    while remaining:
        best, pick = inf, -1
        for y in members[remaining]:
            v = prev_step[y] + tail[remaining ^ (1 << y)][y]
            if v < best:
                best, pick = v, y
        if cost is None:
            cost = best
        order.append(ids[pick])
        remaining ^= 1 << pick
        prev_step = step[pick]
    return OrderedPath(tuple(order), int(cost))


def best_order(instance: Instance, query: Query, poi_set: Iterable[int]) -> OrderedPath:
    prob = instance.bind(query)
    return solve_order(prob, prob.check_ids(set(poi_set)))


class PathCache:
    """Memo of ``solve_order`` keyed by POI set; lives for one search."""

    def __init__(self, prob: Problem):
        self.prob = prob
        self._memo: dict[frozenset, OrderedPath] = {}
        self.hits = 0

    def __call__(self, pois: frozenset) -> OrderedPath:
        hit = self._memo.get(pois)
        if hit is not None:
            self.hits += 1
            return hit
        path = solve_order(self.prob, pois)
        self._memo[pois] = path
        return path

    def __len__(self) -> int:
        return len(self._memo)
