"""Best-first search over POI sets with greedy completion and anytime stopping.

Partial solutions are POI sets kept in a double-ended priority queue ordered
by potential score.  The search pops the most promising set, extends it by
every POI with a larger id (so each set is generated once), and prunes from
the low end whatever can no longer beat ``cut_factor`` times the best score.

Three knobs trade optimality for speed: the cut factor, a bound on the queue
length and a wall-clock limit.  Whatever is dropped is remembered through its
potential score, which yields the reported quality factor ``alpha``: the
returned score is at least ``alpha`` times the optimum.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, replace
from typing import Iterator

import numpy as np

from .deque import IntervalHeap
from .heuristic import Heuristic, ReachRule
from .model import InfeasibleQueryError, Instance, Itinerary, Problem, Query
from .pathing import PathCache


@dataclass(frozen=True, slots=True)
class PartialSolution:
    pois: frozenset
    order: tuple[int, ...]
    cost: int
    score: float
    extra: float
    potential: float
    seq: int

    @property
    def key(self) -> tuple[float, int, int]:
        return (-self.potential, self.cost, self.seq)


class PriorityDeque:
    """Partial solutions ordered by potential desc, cost asc, insertion asc."""

    def __init__(self):
        self._heap: IntervalHeap[PartialSolution] = IntervalHeap()

    def __len__(self) -> int:
        return len(self._heap)

    def __bool__(self) -> bool:
        return bool(self._heap)

    def __iter__(self) -> Iterator[PartialSolution]:
        return iter(self._heap)

    def push(self, sol: PartialSolution) -> None:
        self._heap.push(sol.key, sol)

    def peek_maximum(self) -> PartialSolution:
        return self._heap.peek_low()

    def pop_maximum(self) -> PartialSolution:
        return self._heap.pop_low()

    def peek_minimum(self) -> PartialSolution:
        return self._heap.peek_high()

    def pop_minimum(self) -> PartialSolution:
        return self._heap.pop_high()


@dataclass(frozen=True)
class SearchConfig:
    """Search knobs.

    greedy_threshold: greedily complete a child when ``cost / t_max`` is at most this.
    cut_factor: prune sets whose potential is below ``cut_factor * best``.
    max_queue_len: bound on the deque length (``None`` = unbounded).
    time_limit: seconds of wall time per run (``None`` = unlimited).
    exhaustive: expand everything, no pruning or greedy seeding (diagnostics).
    debug: assert that no POI set is generated twice.
    """

    greedy_threshold: float = 1.0
    cut_factor: float = 1.2
    max_queue_len: int | None = None
    time_limit: float | None = None
    reach: ReachRule = "exact"
    exhaustive: bool = False
    debug: bool = False

    def __post_init__(self):
        if not 0.0 <= self.greedy_threshold <= 1.0:
            raise ValueError("greedy_threshold must lie in [0, 1]")
        if not self.cut_factor >= 1.0:
            raise ValueError("cut_factor must be at least 1")
        if self.max_queue_len is not None and self.max_queue_len < 1:
            raise ValueError("max_queue_len must be a positive integer")
        if self.time_limit is not None and self.time_limit < 0:
            raise ValueError("time_limit must be non-negative")

    @classmethod
    def exact(cls, **kw) -> "SearchConfig":
        return cls(cut_factor=1.0, **kw)


@dataclass
class SearchStats:
    expanded: int = 0
    pushed: int = 0
    pruned: int = 0
    overflow: int = 0
    greedy_runs: int = 0
    discarded_max_potential: float = 0.0
    wall_time: float = 0.0


@dataclass(frozen=True)
class SearchOutcome:
    best: Itinerary
    alpha: float
    optimal_flag: bool
    stats: SearchStats
    terminated: bool = True


# ---------------------------------------------------------------- greedy


def _greedy_append(prob: Problem, order: tuple[int, ...], cost: int, counts: list[int]) -> tuple[tuple[int, ...], int]:
    """Append max-utility POIs to the end until the budget or the caps stop it."""
    D, visit, score, cat = prob.dist_np, prob.visit_np, prob.score_np, prob.cat_np
    caps = np.asarray(prob.caps, dtype=np.int64)
    n, d = prob.n, prob.d
    if n == 0:
        return order, cost
    counts = np.asarray(counts, dtype=np.int64)
    free = np.ones(n, dtype=bool)
    free[list(order)] = False
    order = list(order)
    last = order[-1] if order else prob.s
    back = D[:n, d]
    while True:
        avail = free & (counts[cat] < caps[cat])
        if not avail.any():
            break
        denom = D[last, :n] + visit + back
        with np.errstate(divide="ignore", invalid="ignore"):
            util = np.where(denom > 0, score / np.where(denom > 0, denom, 1),
                            np.where(score > 0, np.inf, 0.0))
        util = np.where(avail, util, -np.inf)
        top = np.flatnonzero(util == util.max())
        # ties: higher score, then lower id (argmax keeps the first)
        p = int(top[np.argmax(score[top])])
        grown = cost - int(D[last, d]) + int(D[last, p]) + int(visit[p]) + int(back[p])
        if grown > prob.t_max:
            break
        order.append(p)
        cost = grown
        last = p
        free[p] = False
        counts[cat[p]] += 1
    return tuple(order), cost


def extend_greedily(instance: Instance, query: Query, base: PartialSolution | Itinerary) -> Itinerary:
    """Greedy completion of ``base`` by appending POIs to the end of its order."""
    prob = instance.bind(query)
    order = base.order if isinstance(base, PartialSolution) else base.sequence
    cost = prob.sequence_cost(order)
    seq, cost = _greedy_append(prob, tuple(order), cost, prob.category_counts(order))
    return prob.itinerary(seq, cost)


def greedy_baseline(instance: Instance, query: Query) -> Itinerary:
    prob = instance.bind(query)
    _require_feasible(prob)
    seq, cost = _greedy_append(prob, (), prob.direct, [0] * len(prob.caps))
    return prob.itinerary(seq, cost)


def _require_feasible(prob: Problem) -> None:
    if prob.direct > prob.t_max:
        raise InfeasibleQueryError(
            f"travel time from {prob.query.s} to {prob.query.d} is {prob.direct}s, "
            f"above t_max={prob.t_max}s")


# ---------------------------------------------------------------- search


class SearchState:
    """A resumable search; ``run`` continues from wherever it stopped."""

    def __init__(self, instance: Instance, query: Query, config: SearchConfig | None = None):
        self.config = config or SearchConfig()
        self.prob = prob = instance.bind(query)
        _require_feasible(prob)
        self.paths = PathCache(prob)
        self.heuristic = Heuristic(prob, self.paths, self.config.reach)
        self.stats = SearchStats()
        self.deque = PriorityDeque()
        self.terminated = False
        self._seq = 0
        self._seen: set[frozenset] | None = set() if self.config.debug else None

        root = self._make(frozenset(), (), prob.direct)
        self.best = prob.itinerary((), prob.direct)
        if not self.config.exhaustive:
            self._offer_greedy(root)
        self.deque.push(root)

    # -- construction helpers

    def _make(self, pois: frozenset, order: tuple[int, ...], cost: int) -> PartialSolution:
        b = self.heuristic.breakdown(pois, order, cost)
        self._seq += 1
        return PartialSolution(pois, order, cost, b.score, b.extra, b.potential, self._seq)

    def _offer(self, order: tuple[int, ...], cost: int, score: float) -> None:
        if score > self.best.score:
            self.best = Itinerary(tuple(order), cost, score)

    def _offer_greedy(self, sol: PartialSolution) -> None:
        self.stats.greedy_runs += 1
        order, cost = _greedy_append(self.prob, sol.order, sol.cost, self.prob.category_counts(sol.pois))
        if len(order) > len(sol.order):
            self._offer(order, cost, self.prob.set_score(order))

    def _discard(self, sol: PartialSolution) -> None:
        st = self.stats
        if sol.potential > st.discarded_max_potential:
            st.discarded_max_potential = sol.potential

    # -- the loop

    def expand(self, sol: PartialSolution) -> list[PartialSolution]:
        """Feasible children of ``sol`` obtained by adding one POI with a larger id."""
        prob = self.prob
        counts = prob.category_counts(sol.pois)
        start = max(sol.pois) + 1 if sol.pois else 0
        children = []
        for p in range(start, prob.n):
            c = prob.cat[p]
            if counts[c] >= prob.caps[c]:
                continue
            pois = sol.pois | {p}
            path = self.paths(pois)
            if path.cost > prob.t_max:
                continue
            if self._seen is not None:
                assert pois not in self._seen, f"POI set {sorted(pois)} generated twice"
                self._seen.add(pois)
            children.append(self._make(pois, path.order, path.cost))
        return children

    def _push(self, child: PartialSolution) -> None:
        cfg, dq, st = self.config, self.deque, self.stats
        st.pushed += 1
        if cfg.max_queue_len is None or len(dq) < cfg.max_queue_len:
            dq.push(child)
            return
        low = dq.peek_minimum()
        if child.key > low.key:
            victim = child
        else:
            victim = dq.pop_minimum()
            dq.push(child)
        self._discard(victim)
        if victim.potential < cfg.cut_factor * self.best.score:
            st.pruned += 1
        else:
            st.overflow += 1

    def run(self, time_limit: float | None = None) -> SearchOutcome:
        """Continue the search for at most ``time_limit`` seconds (``None``: no limit)."""
        if self.terminated:
            return self.outcome()
        cfg, dq, st, prob = self.config, self.deque, self.stats, self.prob
        cut = cfg.cut_factor
        started = time.perf_counter()
        deadline = None if time_limit is None else started + time_limit
        try:
            while dq:
                top = dq.pop_maximum()
                if not cfg.exhaustive and top.potential <= cut * self.best.score:
                    # every remaining set is bounded by ``top``
                    self._discard(top)
                    st.pruned += len(dq) + 1
                    dq = self.deque = PriorityDeque()
                    break
                if deadline is not None and time.perf_counter() >= deadline:
                    dq.push(top)
                    return self.outcome()
                for child in self.expand(top):
                    self._push(child)
                    self._offer(child.order, child.cost, child.score)
                    if not cfg.exhaustive and child.cost <= cfg.greedy_threshold * prob.t_max:
                        self._offer_greedy(child)
                st.expanded += 1
                if not cfg.exhaustive:
                    while dq and cut * self.best.score > dq.peek_minimum().potential:
                        self._discard(dq.pop_minimum())
                        st.pruned += 1
            self.terminated = True
            return self.outcome()
        finally:
            st.wall_time += time.perf_counter() - started

    def outcome(self) -> SearchOutcome:
        st = self.stats
        bound = st.discarded_max_potential
        if not self.terminated and self.deque:
            bound = max(bound, self.deque.peek_maximum().potential)
        best = self.best.score
        denom = max(best, bound)
        alpha = 1.0 if denom == 0 else min(1.0, best / denom)
        optimal = self.terminated and self.config.cut_factor == 1.0 and st.overflow == 0
        if optimal:
            alpha = 1.0
        reported = replace(st, discarded_max_potential=bound)
        return SearchOutcome(self.best, alpha, optimal, reported, self.terminated)


def solve(instance: Instance, query: Query, config: SearchConfig | None = None) -> SearchOutcome:
    config = config or SearchConfig()
    return SearchState(instance, query, config).run(config.time_limit)


def resume(state: SearchState, time_limit: float | None = None) -> tuple[SearchOutcome, SearchState]:
    """Run ``state`` for another ``time_limit`` seconds; a finished state is returned as is."""
    return state.run(time_limit), state


def worst_case_nodes(instance: Instance, query: Query, max_queue_len: int | None = None) -> int:
    """Upper bound on generated itineraries: prod over i < lambda of min(|R| - i, l_max)."""
    prob = instance.bind(query)
    D = prob.dist
    lam = sum(k for k in prob.caps if k > 0)
    relevant = sum(
        1 for p in range(prob.n)
        if prob.caps[prob.cat[p]] > 0 and D[prob.s][p] + prob.visit[p] + D[p][prob.d] <= prob.t_max
    )
    total = 1
    for i in range(lam):
        f = relevant - i
        if max_queue_len is not None:
            f = min(f, max_queue_len)
        total *= max(f, 0)
    return total
