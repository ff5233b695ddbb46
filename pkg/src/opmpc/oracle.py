"""Brute-force reference solver for small instances.

Route costs for every POI subset come from a forward subset DP that shares
nothing with the search code; only the winner is re-ordered with
``solve_order`` so its visiting order follows the same tie-break.
"""

from __future__ import annotations

import itertools
from math import comb

import numpy as np

from .model import InfeasibleQueryError, Instance, Itinerary, Problem, Query
from .pathing import OrderedPath, solve_order

DEFAULT_SUBSET_LIMIT = 1 << 15
MAX_POIS = 16


class OracleTooLarge(RuntimeError):
    pass


def subset_costs(prob: Problem, usable: np.ndarray | None = None) -> np.ndarray:
    """Optimal route cost for every bitmask of POIs (``inf`` where above ``t_max``).

    ``usable`` optionally marks masks worth extending; others are skipped.
    """
    n = prob.n
    D = prob.dist_np.astype(np.float64)
    visit = prob.visit_np.astype(np.float64)
    size = 1 << n
    inf = np.inf
    # last[mask, j]: cheapest s -> ... -> j covering mask, visit of j included
    last = np.full((size, max(n, 1)), inf)
    for j in range(n):
        last[1 << j, j] = D[prob.s, j] + visit[j]
    step = D[:n, :n] + visit[None, :]
    t_max = prob.t_max
    for mask in range(1, size):
        row = last[mask]
        if row.min() > t_max:
            continue
        if usable is not None and not usable[mask]:
            continue
        reach = (row[:, None] + step).min(axis=0)
        for j in range(n):
            if mask >> j & 1:
                continue
            nxt = mask | (1 << j)
            if reach[j] < last[nxt, j]:
                last[nxt, j] = reach[j]
    out = np.full(size, inf)
    out[0] = D[prob.s, prob.d]
    if n:
        out[1:] = (last[1:, :n] + D[:n, prob.d][None, :]).min(axis=1)
    out[out > t_max] = inf
    return out


def cap_mask(prob: Problem) -> np.ndarray:
    """Boolean per bitmask: does the subset respect every category cap?"""
    n = prob.n
    masks = np.arange(1 << n, dtype=np.int64)
    ok = np.ones(1 << n, dtype=bool)
    for j, cap in enumerate(prob.caps):
        members = [p for p in range(n) if prob.cat[p] == j]
        count = np.zeros(1 << n, dtype=np.int64)
        for p in members:
            count += (masks >> p) & 1
        ok &= count <= cap
    return ok


def capped_subset_count(prob: Problem) -> int:
    sizes = [sum(1 for p in range(prob.n) if prob.cat[p] == j) for j in range(len(prob.caps))]
    total = 1
    for size, cap in zip(sizes, prob.caps):
        total *= sum(comb(size, i) for i in range(min(size, cap) + 1))
    return total


def feasible_sets(prob: Problem) -> dict[frozenset, int]:
    """Every feasible POI set with its optimal route cost."""
    if prob.n > MAX_POIS:
        raise OracleTooLarge(f"{prob.n} POIs exceeds the oracle's limit of {MAX_POIS}")
    caps_ok = cap_mask(prob)
    costs = subset_costs(prob, caps_ok)
    good = np.flatnonzero(np.isfinite(costs) & caps_ok)
    return {frozenset(p for p in range(prob.n) if m >> p & 1): int(costs[m]) for m in good}


def oracle_solve(instance: Instance, query: Query, limit: int = DEFAULT_SUBSET_LIMIT) -> Itinerary:
    """Maximum-score feasible itinerary by exhaustive enumeration.

    Ties go to the lower cost, then to the lexicographically smaller visiting order.
    """
    prob = instance.bind(query)
    if prob.direct > prob.t_max:
        raise InfeasibleQueryError("start and destination are further apart than t_max")
    count = capped_subset_count(prob)
    if count > limit:
        raise OracleTooLarge(f"{count} cap-respecting subsets exceed the limit of {limit}")
    best = None
    for pois, cost in feasible_sets(prob).items():
        score = prob.set_score(pois)
        if best is not None and (score < best.score or (score == best.score and cost > best.cost)):
            continue
        path = solve_order(prob, pois)
        assert path.cost == cost, f"route DP disagrees on {sorted(pois)}: {path.cost} != {cost}"
        if (best is None or score > best.score or cost < best.cost
                or path.order < best.sequence):
            best = Itinerary(path.order, cost, score)
    return best


def enumerate_orders(prob: Problem, pois) -> OrderedPath:
    """Cheapest order by costing every permutation (lexicographic on ties)."""
    items = sorted(pois)
    if not items:
        return OrderedPath((), prob.direct)
    # permutations of a sorted list come out in lexicographic order, so the
    # first minimum is the tie-break winner
    perms = np.array(list(itertools.permutations(items)), dtype=np.int64)
    D = prob.dist_np
    cost = D[prob.s, perms[:, 0]] + D[perms[:, -1], prob.d] + prob.visit_np[items].sum()
    if len(items) > 1:
        cost += D[perms[:, :-1], perms[:, 1:]].sum(axis=1)
    i = int(np.argmin(cost))
    return OrderedPath(tuple(int(x) for x in perms[i]), int(cost[i]))


def exhaustive_optimum(prob: Problem) -> float:
    """Score of the best feasible set, without building the itinerary."""
    return max((prob.set_score(s) for s in feasible_sets(prob)), default=0.0)


__all__ = ["oracle_solve", "enumerate_orders", "feasible_sets", "subset_costs", "OracleTooLarge",
           "exhaustive_optimum"]
