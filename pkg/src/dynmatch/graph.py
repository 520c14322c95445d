"""Adjacency structure for fully-dynamic weighted graphs.

The design target is O(1) expected time per operation: every vertex u keeps
its neighbors in a plain list ``L[u]`` (so a uniformly random neighbor is one
``randrange`` away) together with a dict ``pos[u]`` mapping each neighbor to
its index in ``L[u]`` (so membership tests and deletions need no scanning).
Deletion swaps the removed entry with the last list element before popping,
which keeps the list dense and the dict in sync.
"""

from __future__ import annotations

import random
from typing import Iterator, Sequence

from .errors import AbsentEdgeError

Weight = int | float


def edge_key(u: int, v: int) -> tuple[int, int]:
    """Canonical (min, max) key for an undirected edge."""
    return (u, v) if u < v else (v, u)


class DynamicGraph:
    """Undirected weighted graph on a fixed vertex set {0, ..., n-1}.

    Parallel edges and self-loops are rejected.  Edge weights must be
    positive; changing a weight is expressed as delete + insert, never as an
    in-place update (a duplicate insert is refused and leaves the stored
    weight untouched).
    """

    __slots__ = ("n", "_adj", "_pos", "_weight", "_m", "_max_degree_seen")

    def __init__(self, n: int) -> None:
        if n < 0:
            raise ValueError(f"vertex count must be non-negative, got {n}")
        self.n = n
        self._adj: list[list[int]] = [[] for _ in range(n)]
        self._pos: list[dict[int, int]] = [{} for _ in range(n)]
        self._weight: dict[tuple[int, int], Weight] = {}
        self._m = 0
        self._max_degree_seen = 0

    # -- mutation ---------------------------------------------------------

    def insert_edge(self, u: int, v: int, w: Weight) -> bool:
        """Insert edge (u, v) with weight w.

        Returns False (and changes nothing, including the weight) when the
        edge is already present.  Raises ValueError on self-loops,
        out-of-range endpoints, or non-positive weights.
        """
        self._check_vertex(u)
        self._check_vertex(v)
        if u == v:
            raise ValueError(f"self-loop ({u}, {v}) rejected")
        if not w > 0:
            raise ValueError(f"edge weight must be positive, got {w!r}")
        pos_u = self._pos[u]
        if v in pos_u:
            return False
        adj_u = self._adj[u]
        adj_v = self._adj[v]
        pos_u[v] = len(adj_u)
        adj_u.append(v)
        self._pos[v][u] = len(adj_v)
        adj_v.append(u)
        self._weight[edge_key(u, v)] = w
        self._m += 1
        d = max(len(adj_u), len(adj_v))
        if d > self._max_degree_seen:
            self._max_degree_seen = d
        return True

    def delete_edge(self, u: int, v: int) -> bool:
        """Delete edge (u, v); returns False when it was not present."""
        self._check_vertex(u)
        self._check_vertex(v)
        if v not in self._pos[u]:
            return False
        self._remove_half(u, v)
        self._remove_half(v, u)
        del self._weight[edge_key(u, v)]
        self._m -= 1
        return True

    def _remove_half(self, u: int, v: int) -> None:
        # Swap-remove v from u's list; the moved entry gets v's old slot.
        adj = self._adj[u]
        pos = self._pos[u]
        i = pos.pop(v)
        last = adj.pop()
        if last != v:
            adj[i] = last
            pos[last] = i

    # -- queries ----------------------------------------------------------

    def degree(self, u: int) -> int:
        self._check_vertex(u)
        return len(self._adj[u])

    def has_edge(self, u: int, v: int) -> bool:
        self._check_vertex(u)
        self._check_vertex(v)
        return v in self._pos[u]

    def weight(self, u: int, v: int) -> Weight:
        try:
            return self._weight[edge_key(u, v)]
        except KeyError:
            self._check_vertex(u)
            self._check_vertex(v)
            raise AbsentEdgeError(f"edge ({u}, {v}) not in graph") from None

    def neighbors(self, u: int) -> Sequence[int]:
        """Live view of u's neighbor list; do not mutate."""
        self._check_vertex(u)
        return self._adj[u]

    def random_neighbor(self, u: int, rng: random.Random) -> int | None:
        """Uniformly random neighbor of u, or None for isolated u."""
        adj = self._adj[u]
        if not adj:
            return None
        return adj[rng.randrange(len(adj))]

    def edge_count(self) -> int:
        return self._m

    def max_degree_seen(self) -> int:
        """Largest degree any vertex has ever had (never decreases)."""
        return self._max_degree_seen

    def edges(self) -> Iterator[tuple[int, int, Weight]]:
        """All current edges as (u, v, w) with u < v, unordered."""
        for (u, v), w in self._weight.items():
            yield u, v, w

    def _check_vertex(self, u: int) -> None:
        if not 0 <= u < self.n:
            raise ValueError(f"vertex {u} out of range [0, {self.n})")

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"DynamicGraph(n={self.n}, m={self._m})"
