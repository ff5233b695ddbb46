"""Synthetic networks, query sampling and instance files.

All randomness comes from ``numpy.random.Generator`` objects seeded through
``stream(seed, name)`` so that instance and query sampling draw from
independent, replayable sub-streams of one user seed.
"""

from __future__ import annotations

import json
import zlib
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .closure import rows_to
from .model import Instance, Poi, Query, SchemaError, TravelGraph, query_from_dict, query_to_dict


def stream(seed: int, name: str) -> np.random.Generator:
    """Named sub-stream of a user seed."""
    return np.random.default_rng([int(seed) & 0xFFFFFFFFFFFFFFFF, zlib.crc32(name.encode())])


@dataclass(frozen=True)
class PoiSpec:
    poi_count: int
    category_count: int
    visit_min: int = 180
    visit_max: int = 3600
    score_min: float = 1.0
    score_max: float = 100.0

    def validate(self) -> None:
        if self.poi_count < 0:
            raise ValueError("poi_count must be non-negative")
        if self.category_count < 1:
            raise ValueError("category_count must be at least 1")
        if not 0 <= self.visit_min <= self.visit_max:
            raise ValueError("need 0 <= visit_min <= visit_max")
        if not 0 <= self.score_min <= self.score_max:
            raise ValueError("need 0 <= score_min <= score_max")


@dataclass(frozen=True)
class GridSpec:
    side: int = 100
    edge_seconds: int = 60
    poi_count: int = 3000
    category_count: int = 4
    visit_min: int = 180
    visit_max: int = 3600
    score_min: float = 1.0
    score_max: float = 100.0
    seed: int = 0

    def validate(self) -> None:
        if self.side < 1:
            raise ValueError("side must be at least 1")
        if self.edge_seconds < 0:
            raise ValueError("edge_seconds must be non-negative")
        if self.poi_count > self.side * self.side:
            raise ValueError(f"{self.poi_count} POIs do not fit on {self.side * self.side} nodes")
        _poi_spec(self).validate()


@dataclass(frozen=True)
class SpiderSpec:
    """Concentric regular polygons joined by radial spokes.

    Level ``l`` (1-based, innermost first) has sides of
    ``innermost_side_seconds * l``: side length grows linearly with the
    radius, as it would for similar polygons in the plane.
    """

    sides: int = 100
    levels: int = 100
    radial_seconds: int = 100
    innermost_side_seconds: int = 8
    poi_count: int = 3000
    category_count: int = 4
    visit_min: int = 180
    visit_max: int = 3600
    score_min: float = 1.0
    score_max: float = 100.0
    seed: int = 0

    def validate(self) -> None:
        if self.sides < 3:
            raise ValueError("a polygon needs at least 3 sides")
        if self.levels < 1:
            raise ValueError("levels must be at least 1")
        if self.radial_seconds < 0 or self.innermost_side_seconds < 0:
            raise ValueError("edge lengths must be non-negative")
        if self.poi_count > self.sides * self.levels:
            raise ValueError(f"{self.poi_count} POIs do not fit on {self.sides * self.levels} nodes")
        _poi_spec(self).validate()


@dataclass(frozen=True)
class QuerySpec:
    t_max: int = 7200
    max_k: tuple[int, ...] = (2, 2, 2, 2)
    count: int = 25
    seed: int = 0

    def validate(self) -> None:
        if self.count < 1:
            raise ValueError("count must be at least 1")
        if self.t_max <= 0:
            raise ValueError("t_max must be positive")


def _poi_spec(spec) -> PoiSpec:
    return PoiSpec(spec.poi_count, spec.category_count, spec.visit_min, spec.visit_max,
                   spec.score_min, spec.score_max)


def _scatter_pois(nodes: list[int], spec: PoiSpec, rng: np.random.Generator) -> tuple[Poi, ...]:
    where = rng.choice(len(nodes), size=spec.poi_count, replace=False)
    cats = rng.integers(0, spec.category_count, size=spec.poi_count)
    visits = rng.integers(spec.visit_min, spec.visit_max + 1, size=spec.poi_count)
    scores = rng.uniform(spec.score_min, spec.score_max, size=spec.poi_count)
    return tuple(
        Poi(i, nodes[int(w)], int(c), float(s), int(v))
        for i, (w, c, v, s) in enumerate(zip(where, cats, visits, scores))
    )


def gen_grid(spec: GridSpec) -> Instance:
    spec.validate()
    side = spec.side
    nodes = list(range(side * side))
    edges = []
    for r in range(side):
        for c in range(side):
            v = r * side + c
            if c + 1 < side:
                edges.append((v, v + 1, spec.edge_seconds))
            if r + 1 < side:
                edges.append((v, v + side, spec.edge_seconds))
    pois = _scatter_pois(nodes, _poi_spec(spec), stream(spec.seed, "instance"))
    return Instance(TravelGraph(tuple(nodes), tuple(edges)), pois, spec.category_count)


def gen_spider(spec: SpiderSpec) -> Instance:
    spec.validate()
    k = spec.sides
    nodes = list(range(k * spec.levels))
    edges = []
    for level in range(spec.levels):
        base = level * k
        side = spec.innermost_side_seconds * (level + 1)
        for i in range(k):
            edges.append((base + i, base + (i + 1) % k, side))
        if level + 1 < spec.levels:
            for i in range(k):
                edges.append((base + i, base + k + i, spec.radial_seconds))
    pois = _scatter_pois(nodes, _poi_spec(spec), stream(spec.seed, "instance"))
    return Instance(TravelGraph(tuple(nodes), tuple(edges)), pois, spec.category_count)


def gen_random(seed: int, poi_count: int, category_count: int, extra_nodes: int = 3,
               max_edge: int = 20, max_visit: int = 10, integer_scores: bool = False) -> Instance:
    """Small random connected network, one POI per node plus a few bare nodes.

    Used for oracle cross-checks; not part of the published benchmark.
    """
    rng = stream(seed, "random-instance")
    n_nodes = poi_count + extra_nodes
    nodes = list(range(n_nodes))
    order = rng.permutation(n_nodes)
    edges = {}
    for i in range(1, n_nodes):
        u, v = int(order[i]), int(order[rng.integers(0, i)])
        edges[(min(u, v), max(u, v))] = int(rng.integers(1, max_edge + 1))
    for _ in range(n_nodes):
        u, v = (int(x) for x in rng.choice(n_nodes, size=2, replace=False))
        edges.setdefault((min(u, v), max(u, v)), int(rng.integers(1, max_edge + 1)))
    where = rng.choice(n_nodes, size=poi_count, replace=False)
    if integer_scores:
        scores = rng.integers(1, 6, size=poi_count).astype(float)
    else:
        scores = np.round(rng.uniform(0.0, 10.0, size=poi_count), 3)
    pois = tuple(
        Poi(i, int(where[i]), int(rng.integers(0, category_count)), float(scores[i]),
            int(rng.integers(0, max_visit + 1)))
        for i in range(poi_count)
    )
    graph = TravelGraph(tuple(nodes), tuple((u, v, w) for (u, v), w in sorted(edges.items())))
    return Instance(graph, pois, category_count)


def gen_queries(instance: Instance, spec: QuerySpec, max_tries: int = 10_000) -> list[Query]:
    """Uniform start/destination pairs with travel time strictly below ``t_max``."""
    spec.validate()
    if len(spec.max_k) != instance.categories:
        raise ValueError(f"max_k has {len(spec.max_k)} entries, instance has {instance.categories} categories")
    rng = stream(spec.seed, "queries")
    nodes = instance.graph.nodes
    index = instance.graph.index
    out = []
    for _ in range(spec.count):
        for _ in range(max_tries):
            s, d = (nodes[int(i)] for i in rng.integers(0, len(nodes), size=2))
            if int(rows_to(index, [s], [d])[0, 0]) < spec.t_max:
                out.append(Query(s, d, spec.t_max, tuple(spec.max_k)))
                break
        else:
            raise RuntimeError(f"no start/destination pair within {spec.t_max}s after {max_tries} draws")
    return out


def dumps_instance(instance: Instance) -> str:
    return json.dumps(instance.to_dict(), indent=None, separators=(",", ":"))


def save_instance(instance: Instance, path: str | Path) -> None:
    Path(path).write_text(dumps_instance(instance) + "\n")


def load_instance(path: str | Path) -> Instance:
    text = Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    try:
        return Instance.from_dict(doc)
    except SchemaError as exc:
        raise SchemaError(f"{path}: {exc}") from exc


def save_queries(queries: list[Query], path: str | Path) -> None:
    Path(path).write_text(json.dumps([query_to_dict(q) for q in queries], indent=1) + "\n")


def load_query(path: str | Path) -> Query | list[Query]:
    doc = json.loads(Path(path).read_text())
    if isinstance(doc, list):
        return [query_from_dict(q) for q in doc]
    return query_from_dict(doc)
