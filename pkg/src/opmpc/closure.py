"""Metric closure of a sparse travel network.

Travel times are whole seconds.  Shortest paths are computed with one
Dijkstra run per requested source over a CSR adjacency matrix.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra


class DisconnectedError(ValueError):
    """Raised when two nodes that must be connected are not."""

    def __init__(self, u: int, v: int):
        super().__init__(f"nodes {u} and {v} are not connected in the travel network")
        self.pair = (u, v)


@dataclass(frozen=True)
class DistanceMatrix:
    """Symmetric whole-second shortest-path matrix over a labelled node set."""

    nodes: tuple[int, ...]
    matrix: np.ndarray

    def __post_init__(self):
        n = len(self.nodes)
        if self.matrix.shape != (n, n):
            raise ValueError(f"matrix shape {self.matrix.shape} does not match {n} nodes")
        if len(set(self.nodes)) != n:
            raise ValueError("duplicate node labels in distance matrix")

    @property
    def index(self) -> dict[int, int]:
        return {v: i for i, v in enumerate(self.nodes)}

    def __call__(self, u: int, v: int) -> int:
        idx = self.index
        return int(self.matrix[idx[u], idx[v]])

    def save(self, path: str | Path, digest: str = "") -> None:
        """Dump to ``.npz``; ``digest`` identifies the instance the matrix belongs to."""
        np.savez(Path(path), nodes=np.asarray(self.nodes, dtype=np.int64),
                 matrix=self.matrix, digest=np.asarray(digest))

    @classmethod
    def load(cls, path: str | Path, digest: str | None = None) -> "DistanceMatrix":
        with np.load(Path(path)) as data:
            stored = str(data["digest"])
            if digest is not None and stored != digest:
                raise ValueError(f"distance cache {path} belongs to instance {stored!r}, not {digest!r}")
            return cls(tuple(int(v) for v in data["nodes"]), data["matrix"].astype(np.int64))


class NetworkIndex:
    """Dense re-labelling of a node list plus its CSR adjacency."""

    def __init__(self, nodes: Sequence[int], edges: Iterable[tuple[int, int, int]]):
        self.nodes = tuple(nodes)
        self.position = {v: i for i, v in enumerate(self.nodes)}
        rows, cols, weights = [], [], []
        for u, v, w in edges:
            i, j = self.position[u], self.position[v]
            rows += [i, j]
            cols += [j, i]
            weights += [w, w]
        n = len(self.nodes)
        # explicit zeros are dropped by csgraph, so zero-second edges get a tiny
        # weight; a path has < n hops, so rounding recovers the exact seconds
        data = np.asarray(weights, dtype=np.float64)
        data[data == 0] = _ZERO_EPS
        self.csr = csr_matrix((data, (rows, cols)), shape=(n, n))

    def shortest_from(self, sources: Sequence[int]) -> np.ndarray:
        """Float distances from each source (node ids) to every node, ``inf`` if unreachable."""
        idx = [self.position[s] for s in sources]
        dist = dijkstra(self.csr, directed=False, indices=idx)
        return np.atleast_2d(dist)


# small enough that n * eps < 0.5 for any graph we can hold in memory
_ZERO_EPS = 1e-9


def _to_seconds(dist: np.ndarray, sources: Sequence[int], targets: Sequence[int]) -> np.ndarray:
    bad = np.argwhere(~np.isfinite(dist))
    if len(bad):
        i, j = bad[0]
        raise DisconnectedError(sources[i], targets[j])
    return np.rint(dist).astype(np.int64)


def metric_closure(graph, needed: Iterable[int], index: NetworkIndex | None = None) -> DistanceMatrix:
    """Complete metric graph over ``needed`` nodes of ``graph`` (a ``TravelGraph``).

    Raises ``DisconnectedError`` naming the first unreachable pair.
    """
    nodes = tuple(dict.fromkeys(needed))
    if index is None:
        index = NetworkIndex(graph.nodes, graph.edges)
    missing = [v for v in nodes if v not in index.position]
    if missing:
        raise KeyError(f"node {missing[0]} is not in the travel network")
    if not nodes:
        return DistanceMatrix((), np.zeros((0, 0), dtype=np.int64))
    full = index.shortest_from(nodes)
    cols = [index.position[v] for v in nodes]
    sub = _to_seconds(full[:, cols], nodes, nodes)
    # Dijkstra is exact on integer weights, but force exact symmetry anyway
    sub = np.minimum(sub, sub.T)
    np.fill_diagonal(sub, 0)
    return DistanceMatrix(nodes, sub)


def rows_to(index: NetworkIndex, sources: Sequence[int], targets: Sequence[int]) -> np.ndarray:
    """Integer shortest-path seconds from each source to each target."""
    full = index.shortest_from(sources)
    cols = [index.position[v] for v in targets]
    return _to_seconds(full[:, cols], sources, targets)


def content_digest(payload: dict) -> str:
    """Stable sha256 over a JSON-serialisable instance document."""
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()
