"""Random walk paths and the exact path-matching DP.

A walk path is a simple path grown one edge at a time by a randomized
walker.  Two invariants make a finished path safe to rewrite:

* simplicity - no vertex appears twice, enforced by the eligibility array
  (a vertex is marked ineligible the moment the walk departs it);
* closure - every matched edge incident to a path vertex lies on the path,
  enforced by traversing the matched edge immediately whenever the walk
  arrives at a matched vertex.

Closure is what lets ``apply_path_matching`` treat the path as a closed
world: unmatching the path's matched edges and matching any independent
subset of path edges cannot double-match a vertex elsewhere.
"""

from __future__ import annotations

import random
from typing import NamedTuple

from .graph import DynamicGraph, Weight
from .matching import FREE, MatchingState

# Attempts per step when sampling an eligible neighbor.  Sampling is uniform
# over all neighbors with rejection, so each step stays O(1); matched-edge
# traversal never consumes attempts.
SAMPLE_ATTEMPTS = 5


class PathEdge(NamedTuple):
    u: int
    v: int
    weight: Weight
    matched: bool


class EligibilityArray:
    """Per-vertex eligibility flags with O(marked) reset.

    The walker marks vertices ineligible as it departs them; ``reset``
    restores exactly those, so consecutive walks don't pay O(n).
    """

    __slots__ = ("flags", "_marked")

    def __init__(self, n: int) -> None:
        self.flags = bytearray(b"\x01" * n)
        self._marked: list[int] = []

    def eligible(self, u: int) -> bool:
        return bool(self.flags[u])

    def mark_ineligible(self, u: int) -> None:
        if self.flags[u]:
            self.flags[u] = 0
            self._marked.append(u)

    def reset(self) -> None:
        for u in self._marked:
            self.flags[u] = 1
        self._marked.clear()

    def all_eligible(self) -> bool:
        return not self._marked and all(self.flags)


class WalkPath:
    """Edge path under construction; ``nodes[i], nodes[i+1]`` frame ``edges[i]``."""

    __slots__ = ("nodes", "edges")

    def __init__(self) -> None:
        self.nodes: list[int] = []
        self.edges: list[PathEdge] = []

    def start(self, u: int) -> None:
        if self.nodes:
            raise ValueError("path already started")
        self.nodes.append(u)

    def append_step(self, to: int, w: Weight, matched: bool) -> None:
        if not self.nodes:
            raise ValueError("path has no start vertex")
        self.edges.append(PathEdge(self.nodes[-1], to, w, matched))
        self.nodes.append(to)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @property
    def last_vertex(self) -> int:
        return self.nodes[-1]

    def matched_weight(self) -> Weight:
        """Total weight of path edges currently flagged matched."""
        return sum(e.weight for e in self.edges if e.matched)

    def last_edge_is(self, u: int, v: int) -> bool:
        if not self.edges:
            return False
        e = self.edges[-1]
        return (e.u == u and e.v == v) or (e.u == v and e.v == u)

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"WalkPath({self.nodes})"


def validate_walk_path(path: WalkPath, state: MatchingState) -> None:
    """Assert simplicity, chain coherence, and closure; test/audit helper."""
    if len(set(path.nodes)) != len(path.nodes):
        raise AssertionError(f"path repeats a vertex: {path.nodes}")
    for i, e in enumerate(path.edges):
        if (e.u, e.v) != (path.nodes[i], path.nodes[i + 1]):
            raise AssertionError(f"edge {i} does not chain: {e} vs {path.nodes}")
        if e.matched != (state.mate_of(e.u) == e.v):
            raise AssertionError(f"edge {i} matched flag stale: {e}")
    for x in path.nodes:
        m = state.mate_of(x)
        if m != FREE and not _pair_on_path(path, x, m):
            raise AssertionError(
                f"closure violated: matched edge ({x}, {m}) off path {path.nodes}"
            )


def _pair_on_path(path: WalkPath, u: int, v: int) -> bool:
    return any((e.u == u and e.v == v) or (e.u == v and e.v == u) for e in path.edges)


def _sample_eligible(
    graph: DynamicGraph, u: int, elig: EligibilityArray, rng: random.Random
) -> int | None:
    adj = graph.neighbors(u)
    if not adj:
        return None
    flags = elig.flags
    for _ in range(SAMPLE_ATTEMPTS):
        v = adj[rng.randrange(len(adj))]
        if flags[v]:
            return v
    return None


def extend_walk(
    graph: DynamicGraph,
    state: MatchingState,
    path: WalkPath,
    current: int,
    max_len: int,
    elig: EligibilityArray,
    rng: random.Random,
) -> WalkPath:
    """Grow ``path`` from ``current`` until it stalls or reaches ``max_len`` edges.

    The automaton: on arriving at a matched vertex whose matched edge is not
    yet on the path, that edge is traversed next (no sampling, no attempt
    cost); otherwise an eligible neighbor is sampled with at most
    SAMPLE_ATTEMPTS tries and the walk departs through it, marking the
    departed vertex ineligible.  The walk stops when sampling fails, when a
    needed mate is ineligible, or when the length cap is reached.

    A pending matched edge is appended even when the cap has just been hit
    (overshooting by one edge): the closure invariant must hold at stop or a
    later rewrite could double-match the off-path mate.  Callers must pass an
    eligibility array consistent with the path (all path vertices except
    ``current`` marked) and reset it once done with the path.
    """
    if path.nodes and path.last_vertex != current:
        raise ValueError(
            f"current vertex {current} is not the path head {path.last_vertex}"
        )
    if not path.nodes:
        path.start(current)
    mate = state._mate
    while True:
        m = mate[current]
        if m != FREE and not path.last_edge_is(current, m):
            if not elig.eligible(m):
                break
            path.append_step(m, state.stored_weight(current), True)
            elig.mark_ineligible(current)
            current = m
            continue
        if path.edge_count >= max_len:
            break
        nxt = _sample_eligible(graph, current, elig, rng)
        if nxt is None:
            break
        path.append_step(nxt, graph.weight(current, nxt), False)
        elig.mark_ineligible(current)
        current = nxt
    return path


def mwm_on_path(path: WalkPath) -> tuple[list[int], Weight]:
    """Maximum-weight independent edge subset of a path, by DP.

    Returns (sorted edge indices, weight).  W[i] is the best weight using the
    first i edges; edge i enters iff w_i + W[i-2] strictly beats W[i-1], so
    ties keep the earlier-prefix solution.  Selection is recovered by
    backtracking over the take flags.
    """
    edges = path.edges
    k = len(edges)
    if k == 0:
        return [], 0
    best_prev: Weight = 0  # W[i-2] while scanning
    best: Weight = edges[0].weight  # W[i-1]
    take = [False] * (k + 1)
    take[1] = True
    for i in range(2, k + 1):
        cand = edges[i - 1].weight + best_prev
        if cand > best:
            take[i] = True
            best_prev, best = best, cand
        else:
            best_prev = best
    selected: list[int] = []
    i = k
    while i >= 1:
        if take[i]:
            selected.append(i - 1)
            i -= 2
        else:
            i -= 1
    selected.reverse()
    return selected, best


def apply_path_matching(
    state: MatchingState, path: WalkPath, selected: list[int]
) -> None:
    """Replace the path's matched edges with the selected edge subset.

    ``selected`` holds indices into ``path.edges`` and must be independent
    within the path (no two consecutive indices).  Path closure guarantees
    the rewrite cannot collide with matched edges off the path.
    """
    prev = -2
    for i in selected:
        if not 0 <= i < len(path.edges):
            raise ValueError(f"selected index {i} out of range")
        if i <= prev:
            raise ValueError("selected indices must be strictly increasing")
        if i == prev + 1:
            raise ValueError(
                f"selected edges {prev} and {i} share a vertex on the path"
            )
        prev = i
    for e in path.edges:
        if e.matched and state.mate_of(e.u) == e.v:
            state.unmatch(e.u)
    for i in selected:
        e = path.edges[i]
        state.match_edge(e.u, e.v, e.weight)


def improve_along_path(state: MatchingState, path: WalkPath) -> bool:
    """Rewrite the matching along the path when the DP strictly improves it.

    Returns True iff a rewrite happened; ties leave the matching untouched.
    """
    selected, dp_weight = mwm_on_path(path)
    if dp_weight > path.matched_weight():
        apply_path_matching(state, path, selected)
        return True
    return False
