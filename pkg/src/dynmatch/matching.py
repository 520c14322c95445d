"""Matching bookkeeping shared by every algorithm in the package.

A MatchingState is deliberately dumb: it stores who is matched to whom plus
the weight each matched edge had at match time, and refuses anything that
would break the matching property.  Weights are stored here (not read back
from the graph) because deletion handlers run after the edge has already
left the graph and still need to subtract its weight.
"""

from __future__ import annotations

import math
from typing import Iterable, KeysView

from .errors import MatchingCorruptionError
from .graph import DynamicGraph, Weight, edge_key

FREE = -1


class MatchingState:
    """A matching over vertices {0, ..., n-1} with an incremental weight sum."""

    __slots__ = ("n", "_mate", "_pairs", "total_weight", "version")

    def __init__(self, n: int) -> None:
        self.n = n
        self._mate = [FREE] * n
        self._pairs: dict[tuple[int, int], Weight] = {}
        self.total_weight: Weight = 0
        # Monotone change counter; read-side caches compare it to detect
        # staleness without hashing the matching itself.
        self.version = 0

    def mate_of(self, u: int) -> int:
        """Partner of u, or FREE (-1)."""
        return self._mate[u]

    def is_free(self, u: int) -> bool:
        return self._mate[u] == FREE

    def match_edge(self, u: int, v: int, w: Weight) -> None:
        """Match (u, v) with weight w; both endpoints must be free."""
        if u == v:
            raise ValueError(f"cannot match vertex {u} to itself")
        if self._mate[u] != FREE or self._mate[v] != FREE:
            raise ValueError(
                f"cannot match ({u}, {v}): endpoint already matched "
                f"(mate({u})={self._mate[u]}, mate({v})={self._mate[v]})"
            )
        if not w > 0:
            raise ValueError(f"matched edge weight must be positive, got {w!r}")
        self._mate[u] = v
        self._mate[v] = u
        self._pairs[edge_key(u, v)] = w
        self.total_weight += w
        self.version += 1

    def unmatch(self, u: int) -> None:
        """Remove the matched edge containing u; u must be matched."""
        v = self._mate[u]
        if v == FREE:
            raise ValueError(f"vertex {u} is not matched")
        self._mate[u] = FREE
        self._mate[v] = FREE
        self.total_weight -= self._pairs.pop(edge_key(u, v))
        self.version += 1

    def stored_weight(self, u: int) -> Weight:
        """Weight recorded for u's matched edge at match time."""
        v = self._mate[u]
        if v == FREE:
            raise ValueError(f"vertex {u} is not matched")
        return self._pairs[edge_key(u, v)]

    def matched_pairs(self) -> KeysView[tuple[int, int]]:
        """View of matched edges as canonical (u, v) pairs."""
        return self._pairs.keys()

    def matched_count(self) -> int:
        return len(self._pairs)

    def clear(self) -> None:
        for u, v in list(self._pairs):
            self._mate[u] = FREE
            self._mate[v] = FREE
        self._pairs.clear()
        self.total_weight = 0
        self.version += 1

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return (
            f"MatchingState(n={self.n}, matched={len(self._pairs)}, "
            f"weight={self.total_weight})"
        )


def matching_weight_recompute(state: MatchingState, graph: DynamicGraph) -> Weight:
    """Sum matched-edge weights read back from the graph.

    Independent of the incrementally maintained total; used by audits to
    catch drift.  Raises MatchingCorruptionError when a matched pair is not
    an edge of the graph.
    """
    total: Weight = 0
    gw = graph._weight
    for pair in state._pairs:
        try:
            total += gw[pair]
        except KeyError:
            raise MatchingCorruptionError(
                f"matched pair {pair} is not an edge of the graph"
            ) from None
    return total


def assert_matching_consistent(state: MatchingState, graph: DynamicGraph) -> None:
    """Full invariant audit; raises MatchingCorruptionError on any breach.

    Checks mate symmetry, that every matched pair is a current graph edge
    with the stored weight, and that the maintained weight sum matches a
    recomputation (exactly for int weights, to 1e-9 relative otherwise).
    """
    mate = state._mate
    gw = graph._weight
    total: Weight = 0
    for (u, v), w in state._pairs.items():
        if mate[u] != v or mate[v] != u:
            raise MatchingCorruptionError(
                f"mate array out of sync for pair ({u}, {v}): "
                f"mate[{u}]={mate[u]}, mate[{v}]={mate[v]}"
            )
        stored = gw.get((u, v))
        if stored is None:
            raise MatchingCorruptionError(
                f"matched pair ({u}, {v}) is not an edge of the graph"
            )
        if stored != w:
            raise MatchingCorruptionError(
                f"matched pair ({u}, {v}) stored weight {w!r} "
                f"!= graph weight {stored!r}"
            )
        total += w
    if state.n - mate.count(FREE) != 2 * len(state._pairs):
        raise MatchingCorruptionError(
            "mate array marks a vertex matched that no pair covers"
        )
    if isinstance(total, int) and isinstance(state.total_weight, int):
        if total != state.total_weight:
            raise MatchingCorruptionError(
                f"weight drift: maintained {state.total_weight}, recomputed {total}"
            )
    elif not math.isclose(total, state.total_weight, rel_tol=1e-9, abs_tol=1e-9):
        raise MatchingCorruptionError(
            f"weight drift: maintained {state.total_weight}, recomputed {total}"
        )


def matching_weight_of(pairs: Iterable[tuple[int, int]], graph: DynamicGraph) -> Weight:
    """Weight of an explicit pair list under current graph weights."""
    return sum(graph.weight(u, v) for u, v in pairs)
