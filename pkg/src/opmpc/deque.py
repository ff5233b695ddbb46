"""Double-ended priority queue backed by an interval heap.

Entries are ``(key, item)`` pairs ordered by ``key`` alone; keys must be
unique and totally ordered.  Node ``i`` owns slots ``2i`` (low end) and
``2i + 1`` (high end); every node's interval contains its children's.
"""

from __future__ import annotations

from typing import Any, Generic, Iterator, TypeVar

T = TypeVar("T")


class IntervalHeap(Generic[T]):
    def __init__(self):
        self._h: list[tuple[Any, T]] = []

    def __len__(self) -> int:
        return len(self._h)

    def __bool__(self) -> bool:
        return bool(self._h)

    def __iter__(self) -> Iterator[T]:
        """Items in arbitrary order."""
        return (item for _, item in self._h)

    def push(self, key, item: T) -> None:
        h = self._h
        h.append((key, item))
        j = len(h) - 1
        if j == 0:
            return
        if j & 1:
            if h[j][0] < h[j - 1][0]:
                h[j], h[j - 1] = h[j - 1], h[j]
                self._up_low(j - 1)
            else:
                self._up_high(j)
            return
        # new single-slot node: it is both low and high end
        parent = (j // 2 - 1) // 2
        if h[j][0] < h[2 * parent][0]:
            self._up_low(j)
        elif h[j][0] > h[2 * parent + 1][0]:
            self._up_high(j)

    def peek_low(self) -> T:
        return self._h[0][1]

    def peek_high(self) -> T:
        h = self._h
        return h[1][1] if len(h) > 1 else h[0][1]

    def low_key(self):
        return self._h[0][0]

    def high_key(self):
        h = self._h
        return h[1][0] if len(h) > 1 else h[0][0]

    def pop_low(self) -> T:
        h = self._h
        if not h:
            raise IndexError("pop from empty deque")
        last = h.pop()
        if not h:
            return last[1]
        top = h[0]
        h[0] = last
        self._down_low(0)
        return top[1]

    def pop_high(self) -> T:
        h = self._h
        if not h:
            raise IndexError("pop from empty deque")
        if len(h) <= 2:
            return h.pop()[1]
        top = h[1]
        h[1] = h.pop()
        self._down_high(0)
        return top[1]

    def _up_low(self, j: int) -> None:
        h = self._h
        node = j // 2
        while node > 0:
            parent = (node - 1) // 2
            p = 2 * parent
            if h[j][0] < h[p][0]:
                h[j], h[p] = h[p], h[j]
                j, node = p, parent
            else:
                break

    def _up_high(self, j: int) -> None:
        h = self._h
        node = j // 2
        while node > 0:
            parent = (node - 1) // 2
            p = 2 * parent + 1
            if h[j][0] > h[p][0]:
                h[j], h[p] = h[p], h[j]
                j, node = p, parent
            else:
                break

    def _down_low(self, node: int) -> None:
        h = self._h
        n = len(h)
        while True:
            lo = 2 * node
            if lo + 1 < n and h[lo][0] > h[lo + 1][0]:
                h[lo], h[lo + 1] = h[lo + 1], h[lo]
            child = 2 * node + 1
            if 2 * child >= n:
                return
            if 2 * (child + 1) < n and h[2 * (child + 1)][0] < h[2 * child][0]:
                child += 1
            c = 2 * child
            if h[c][0] < h[lo][0]:
                h[c], h[lo] = h[lo], h[c]
                node = child
            else:
                return

    def _down_high(self, node: int) -> None:
        h = self._h
        n = len(h)
        while True:
            lo, hi = 2 * node, 2 * node + 1
            if hi >= n:
                return
            if h[lo][0] > h[hi][0]:
                h[lo], h[hi] = h[hi], h[lo]
            child = 2 * node + 1
            if 2 * child >= n:
                return
            best = min(2 * child + 1, n - 1)
            if 2 * (child + 1) < n:
                right = min(2 * (child + 1) + 1, n - 1)
                if h[right][0] > h[best][0]:
                    best = right
            if h[best][0] > h[hi][0]:
                h[best], h[hi] = h[hi], h[best]
                node = best // 2
            else:
                return

    def check(self) -> None:
        """Assert the interval-heap invariant (debug aid)."""
        h = self._h
        n = len(h)
        for node in range((n + 1) // 2):
            lo = h[2 * node][0]
            hi = h[2 * node + 1][0] if 2 * node + 1 < n else lo
            assert lo <= hi, f"node {node}: {lo!r} > {hi!r}"
            if node:
                parent = (node - 1) // 2
                assert h[2 * parent][0] <= lo and hi <= h[2 * parent + 1][0], f"node {node} escapes parent"
