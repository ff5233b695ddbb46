"""Domain types: travel network, POIs, queries, itineraries.

Times are whole seconds and every feasibility comparison is an exact integer
comparison.  Scores are floats; itinerary scores are summed with ``math.fsum``
over the POIs sorted by id, so the same POI set always has the same score
regardless of visiting order.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .closure import DistanceMatrix, NetworkIndex, metric_closure, rows_to


class SchemaError(ValueError):
    """Malformed instance or query document."""


class InfeasibleQueryError(ValueError):
    """The query admits no feasible itinerary, not even the empty one."""


@dataclass(frozen=True)
class TravelGraph:
    nodes: tuple[int, ...]
    edges: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(int(v) for v in self.nodes))
        object.__setattr__(self, "edges", tuple((int(u), int(v), int(w)) for u, v, w in self.edges))
        known = set(self.nodes)
        if len(known) != len(self.nodes):
            raise SchemaError("duplicate node id in graph")
        seen = set()
        for u, v, w in self.edges:
            if u not in known or v not in known:
                raise SchemaError(f"edge ({u}, {v}) references an unknown node")
            if u == v:
                raise SchemaError(f"self-loop on node {u}")
            if w < 0:
                raise SchemaError(f"edge ({u}, {v}) has negative travel time {w}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise SchemaError(f"duplicate edge between {u} and {v}")
            seen.add(key)

    @cached_property
    def index(self) -> NetworkIndex:
        return NetworkIndex(self.nodes, self.edges)


@dataclass(frozen=True)
class Poi:
    id: int
    node: int
    category: int
    score: float
    visit_time: int

    def __post_init__(self):
        if self.score < 0 or not math.isfinite(self.score):
            raise SchemaError(f"POI {self.id}: score must be a finite non-negative number")
        if self.visit_time < 0:
            raise SchemaError(f"POI {self.id}: visit time must be non-negative")


@dataclass(frozen=True)
class Query:
    s: int
    d: int
    t_max: int
    max_k: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "max_k", tuple(int(k) for k in self.max_k))
        if self.t_max <= 0:
            raise ValueError("t_max must be positive")
        if any(k < 0 for k in self.max_k):
            raise ValueError("category caps must be non-negative")

    @property
    def budget(self) -> int:
        """Largest number of POIs any itinerary obeying the caps can hold."""
        return sum(self.max_k)


@dataclass(frozen=True)
class Instance:
    graph: TravelGraph
    pois: tuple[Poi, ...]
    categories: int

    def __post_init__(self):
        object.__setattr__(self, "pois", tuple(self.pois))
        known = set(self.graph.nodes)
        for i, p in enumerate(self.pois):
            if p.id != i:
                raise SchemaError(f"POI ids must be dense 0..n-1 in order; found {p.id} at position {i}")
            if p.node not in known:
                raise SchemaError(f"POI {p.id} sits on unknown node {p.node}")
            if not 0 <= p.category < self.categories:
                raise SchemaError(f"POI {p.id} has category {p.category} outside 0..{self.categories - 1}")

    @property
    def n(self) -> int:
        return len(self.pois)

    @cached_property
    def distances(self) -> DistanceMatrix:
        """Metric closure over the nodes POIs sit on."""
        return metric_closure(self.graph, (p.node for p in self.pois), self.graph.index)

    @cached_property
    def _problems(self) -> dict:
        return {}

    def bind(self, query: Query) -> "Problem":
        """Dense, query-specific view; cached per query."""
        prob = self._problems.get(query)
        if prob is None:
            prob = Problem(self, query)
            if len(self._problems) > 64:
                self._problems.clear()
            self._problems[query] = prob
        return prob

    def to_dict(self) -> dict:
        return {
            "nodes": list(self.graph.nodes),
            "edges": [list(e) for e in self.graph.edges],
            "categories": self.categories,
            "pois": [
                {"id": p.id, "node": p.node, "category": p.category,
                 "score": p.score, "visit_seconds": p.visit_time}
                for p in self.pois
            ],
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "Instance":
        _exact_keys(doc, {"nodes", "edges", "categories", "pois"}, "instance")
        try:
            edges = []
            for i, e in enumerate(doc["edges"]):
                if len(e) != 3:
                    raise SchemaError(f"edges[{i}]: expected [u, v, seconds], got {e!r}")
                edges.append((_int(e[0], f"edges[{i}][0]"), _int(e[1], f"edges[{i}][1]"),
                              _int(e[2], f"edges[{i}][2]")))
            graph = TravelGraph(tuple(_int(v, "nodes[]") for v in doc["nodes"]), tuple(edges))
            pois = []
            for i, p in enumerate(doc["pois"]):
                where = f"pois[{i}]"
                _exact_keys(p, {"id", "node", "category", "score", "visit_seconds"}, where)
                score = p["score"]
                if isinstance(score, bool) or not isinstance(score, (int, float)):
                    raise SchemaError(f"{where}.score: expected a number, got {score!r}")
                pois.append(Poi(_int(p["id"], f"{where}.id"), _int(p["node"], f"{where}.node"),
                                _int(p["category"], f"{where}.category"), float(score),
                                _int(p["visit_seconds"], f"{where}.visit_seconds")))
            return cls(graph, tuple(pois), _int(doc["categories"], "categories"))
        except TypeError as exc:
            raise SchemaError(str(exc)) from exc


def query_from_dict(doc: dict) -> Query:
    _exact_keys(doc, {"s", "d", "t_max_seconds", "max_k"}, "query")
    return Query(_int(doc["s"], "s"), _int(doc["d"], "d"), _int(doc["t_max_seconds"], "t_max_seconds"),
                 tuple(_int(k, "max_k[]") for k in doc["max_k"]))


def query_to_dict(query: Query) -> dict:
    return {"s": query.s, "d": query.d, "t_max_seconds": query.t_max, "max_k": list(query.max_k)}


def _exact_keys(doc, expected: set, where: str) -> None:
    if not isinstance(doc, dict):
        raise SchemaError(f"{where}: expected an object, got {type(doc).__name__}")
    missing = expected - doc.keys()
    if missing:
        raise SchemaError(f"{where}: missing key(s) {sorted(missing)}")
    unknown = doc.keys() - expected
    if unknown:
        raise SchemaError(f"{where}: unknown key(s) {sorted(unknown)}")


def _int(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaError(f"{where}: expected an integer, got {value!r}")
    return value


class Problem:
    """An instance bound to one query, flattened into index arrays.

    Row/column ``i < n`` of ``dist`` is POI ``i``; ``n`` is the start and
    ``n + 1`` the destination.
    """

    def __init__(self, instance: Instance, query: Query):
        if len(query.max_k) != instance.categories:
            raise ValueError(f"query has {len(query.max_k)} caps but the instance has "
                             f"{instance.categories} categories")
        for v in (query.s, query.d):
            if v not in instance.graph.index.position:
                raise ValueError(f"query endpoint {v} is not a node of the network")
        n = instance.n
        self.instance = instance
        self.query = query
        self.n = n
        self.s = n
        self.d = n + 1
        self.t_max = query.t_max
        self.caps = query.max_k

        poi_nodes = [p.node for p in instance.pois]
        m = np.zeros((n + 2, n + 2), dtype=np.int64)
        if n:
            closure = instance.distances
            pos = closure.index
            sel = [pos[v] for v in poi_nodes]
            m[:n, :n] = closure.matrix[np.ix_(sel, sel)]
        ends = rows_to(instance.graph.index, [query.s, query.d], poi_nodes + [query.s, query.d])
        m[n, :] = ends[0]
        m[n + 1, :] = ends[1]
        m[:, n] = ends[0]
        m[:, n + 1] = ends[1]
        self.dist_np = m
        self.dist: list[list[int]] = m.tolist()
        self.visit_np = np.array([p.visit_time for p in instance.pois], dtype=np.int64)
        self.visit: list[int] = self.visit_np.tolist()
        self.score_np = np.array([p.score for p in instance.pois], dtype=np.float64)
        self.score: list[float] = self.score_np.tolist()
        self.cat_np = np.array([p.category for p in instance.pois], dtype=np.int64)
        self.cat: list[int] = self.cat_np.tolist()

    @property
    def direct(self) -> int:
        """Travel time of the empty itinerary."""
        return self.dist[self.s][self.d]

    def check_ids(self, sequence: Iterable[int]) -> tuple[int, ...]:
        seq = tuple(sequence)
        for p in seq:
            if not isinstance(p, (int, np.integer)) or not 0 <= p < self.n:
                raise ValueError(f"unknown POI id {p!r}")
        if len(set(seq)) != len(seq):
            dup = next(p for p, c in Counter(seq).items() if c > 1)
            raise ValueError(f"POI {dup} appears more than once")
        return tuple(int(p) for p in seq)

    def sequence_cost(self, seq: Sequence[int]) -> int:
        dist, visit = self.dist, self.visit
        cost, prev = 0, self.s
        for p in seq:
            cost += dist[prev][p] + visit[p]
            prev = p
        return cost + dist[prev][self.d]

    def set_score(self, pois: Iterable[int]) -> float:
        return math.fsum(self.score[p] for p in sorted(pois))

    def category_counts(self, pois: Iterable[int]) -> list[int]:
        counts = [0] * len(self.caps)
        for p in pois:
            counts[self.cat[p]] += 1
        return counts

    def within_caps(self, pois: Iterable[int]) -> bool:
        return all(c <= k for c, k in zip(self.category_counts(pois), self.caps))

    def itinerary(self, seq: Sequence[int], cost: int | None = None) -> "Itinerary":
        seq = tuple(seq)
        return Itinerary(seq, self.sequence_cost(seq) if cost is None else cost, self.set_score(seq))


@dataclass(frozen=True)
class Itinerary:
    """Ordered POI visits between the query's start and destination."""

    sequence: tuple[int, ...]
    cost: int
    score: float

    @property
    def pois(self) -> frozenset[int]:
        return frozenset(self.sequence)


@dataclass(frozen=True)
class Feasibility:
    cost: int
    t_max: int
    over_caps: tuple[tuple[int, int, int], ...] = ()  # (category, count, cap)
    duplicates: tuple[int, ...] = field(default=())

    @property
    def time_ok(self) -> bool:
        return self.cost <= self.t_max

    @property
    def ok(self) -> bool:
        return self.time_ok and not self.over_caps and not self.duplicates

    def __bool__(self) -> bool:
        return self.ok

    def describe(self) -> str:
        if self.ok:
            return "ok"
        parts = []
        if not self.time_ok:
            parts.append(f"cost {self.cost} exceeds t_max {self.t_max}")
        for cat, count, cap in self.over_caps:
            parts.append(f"{count} POIs of category {cat} (cap {cap})")
        if self.duplicates:
            parts.append(f"repeated POIs {list(self.duplicates)}")
        return "; ".join(parts)


def itinerary_cost(instance: Instance, query: Query, sequence: Sequence[int]) -> int:
    """Travel plus visiting seconds of ``s -> sequence -> d``."""
    prob = instance.bind(query)
    return prob.sequence_cost(prob.check_ids(sequence))


def itinerary_score(instance: Instance, sequence: Sequence[int]) -> float:
    seq = tuple(sequence)
    if len(set(seq)) != len(seq):
        raise ValueError("POI appears more than once")
    for p in seq:
        if not isinstance(p, (int, np.integer)) or not 0 <= p < instance.n:
            raise ValueError(f"unknown POI id {p!r}")
    return math.fsum(instance.pois[p].score for p in sorted(seq))


def check_feasible(instance: Instance, query: Query, itinerary: Itinerary | Sequence[int]) -> Feasibility:
    """Verdict on the time budget, category caps and repeated visits."""
    prob = instance.bind(query)
    seq = tuple(itinerary.sequence if isinstance(itinerary, Itinerary) else itinerary)
    counts = Counter(seq)
    duplicates = tuple(sorted(p for p, c in counts.items() if c > 1))
    unique = list(dict.fromkeys(seq))
    prob.check_ids(unique)
    cost = prob.sequence_cost(seq)
    per_cat = prob.category_counts(seq)
    over = tuple((j, c, k) for j, (c, k) in enumerate(zip(per_cat, prob.caps)) if c > k)
    return Feasibility(cost, prob.t_max, over, duplicates)
