"""Admissible bound on the score still reachable from a partial itinerary.

For each category with room left under its cap, the bound adds the best
scores among POIs that could still be visited.  A POI counts as reachable
when adding it to the current set still fits the time budget.  The default
``"exact"`` rule decides this on the optimal order of the enlarged set, which
keeps the bound admissible and non-increasing along expansions.  The
``"append"`` rule only tries a detour between the last POI and the
destination; it is cheaper but can drop POIs that fit earlier in the route.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Literal

import numpy as np

from .model import Instance, Problem, Query
from .pathing import PathCache, solve_order

ReachRule = Literal["exact", "append"]


@dataclass(frozen=True)
class PotentialBreakdown:
    score: float
    extra: float
    potential: float


class Heuristic:
    """Per-search evaluator; category tables are sorted once."""

    def __init__(self, prob: Problem, paths: PathCache | None = None, reach: ReachRule = "exact"):
        if reach not in ("exact", "append"):
            raise ValueError(f"unknown reachability rule {reach!r}")
        self.prob = prob
        self.paths = paths if paths is not None else PathCache(prob)
        self.reach = reach
        ranked = sorted(range(prob.n), key=lambda p: (-prob.score[p], p))
        self.by_category: list[list[int]] = [[] for _ in prob.caps]
        for p in ranked:
            self.by_category[prob.cat[p]].append(p)
        self.calls = 0

    def picks(self, pois: frozenset, order: tuple[int, ...], cost: int) -> list[int]:
        """POIs whose scores make up the bound."""
        self.calls += 1
        prob = self.prob
        counts = prob.category_counts(pois)
        room = [k - c for k, c in zip(prob.caps, counts)]
        if not any(r > 0 for r in room):
            return []
        test = self._reach_test(pois, order, cost)
        chosen = []
        for j, r in enumerate(room):
            if r <= 0:
                continue
            for p in self.by_category[j]:
                if p in pois or not test(p):
                    continue
                chosen.append(p)
                r -= 1
                if r == 0:
                    break
        return chosen

    def breakdown(self, pois: frozenset, order: tuple[int, ...], cost: int) -> PotentialBreakdown:
        score = self.prob.score
        own = [score[p] for p in sorted(pois)]
        more = [score[p] for p in self.picks(pois, order, cost)]
        # one correctly rounded sum keeps the bound monotone under float rounding
        return PotentialBreakdown(math.fsum(own), math.fsum(more), math.fsum(own + more))

    def _reach_test(self, pois, order, cost):
        prob = self.prob
        dist, visit, t_max, d = prob.dist, prob.visit, prob.t_max, prob.d
        if self.reach == "append":
            last = order[-1] if order else prob.s
            base = cost - dist[last][d]
            row = dist[last]
            return lambda p: base + row[p] + visit[p] + dist[p][d] <= t_max

        lower, upper = self._insertion_bounds(order, cost)
        paths = self.paths

        def test(p: int) -> bool:
            if lower[p] > t_max:
                return False
            if upper[p] <= t_max:
                return True
            return paths(pois | {p}).cost <= t_max

        return test

    def _insertion_bounds(self, order: tuple[int, ...], cost: int):
        """Lower and upper bounds on the optimal cost of ``order`` plus one POI.

        Upper: cheapest insertion into the current order.  Lower: in the
        optimal enlarged route the new POI sits between some ``a`` and ``b``;
        dropping it leaves a route no cheaper than ``cost``, so the cheapest
        detour over all admissible ``(a, b)`` pairs bounds it from below.
        """
        prob = self.prob
        D = prob.dist_np
        n = prob.n
        heads = list(order) + [prob.s]
        tails = list(order) + [prob.d]
        to_poi = D[np.ix_(heads, range(n))]          # (h, n)
        from_poi = D[np.ix_(tails, range(n))]        # (t, n)
        detour = to_poi[:, None, :] + from_poi[None, :, :] - D[np.ix_(heads, tails)][:, :, None]
        k = len(order)
        if k:
            detour[np.arange(k), np.arange(k), :] = np.iinfo(np.int64).max // 4
        lower = cost + prob.visit_np + detour.reshape(-1, n).min(axis=0)
        route = [prob.s] + list(order) + [prob.d]
        a, b = route[:-1], route[1:]
        gaps = D[a][:, :n] + D[b][:, :n] - D[a, b][:, None]
        upper = cost + prob.visit_np + gaps.min(axis=0)
        return lower.tolist(), upper.tolist()


def extra(instance: Instance, query: Query, partial: Iterable[int], reach: ReachRule = "exact") -> float:
    """Bound on additional score for the POI set ``partial`` (ordered optimally)."""
    return potential(instance, query, partial, reach).extra


def potential(instance: Instance, query: Query, partial: Iterable[int],
              reach: ReachRule = "exact") -> PotentialBreakdown:
    prob = instance.bind(query)
    pois = frozenset(prob.check_ids(set(partial)))
    path = solve_order(prob, pois)
    return Heuristic(prob, reach=reach).breakdown(pois, path.order, path.cost)
