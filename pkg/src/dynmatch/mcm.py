"""Dynamic maximum-cardinality matching subroutines.

These are the per-level workers of the weight-bucketed matcher, but stand on
their own for unweighted graphs.  Two augmentation strategies share the same
update handlers:

* ``walk`` - a random walker that mutates eagerly (match the free neighbor,
  or steal a matched one and continue at its displaced mate) and journals
  every change so a failed attempt can be rolled back;
* ``bfs`` - depth-bounded alternating breadth-first search without blossom
  contraction, which only mutates once a full augmenting path is in hand.

No blossom handling means the BFS can miss augmenting paths through odd
cycles; it is exact on bipartite graphs only, and that is the only place
exactness is claimed (safe_mode with unbounded depth).
"""

from __future__ import annotations

import math
import random
from collections import deque
from dataclasses import dataclass

from .graph import DynamicGraph
from .matching import FREE, MatchingState, assert_matching_consistent

# Journal entries: (vertex, partner, was_unmatch).  Undo replays in reverse.
_Journal = list[tuple[int, int, bool]]


@dataclass(frozen=True)
class McmConfig:
    """Knobs for the cardinality subroutines.

    epsilon sets the search depth ceil(2/epsilon - 1) used by both
    strategies (when depth_bounded); repetitions retries the random walk
    that many times per augmentation attempt.  lazy_threshold suppresses
    deletion-triggered searches from a vertex until that many updates have
    touched it since its last search.  safe_mode handles the insert case
    where both endpoints are matched (otherwise ignored, which can lose
    optimality even on bipartite graphs).
    """

    epsilon: float = 1.0
    repetitions: int = 1
    delta_settling: bool = False
    lazy_threshold: int = 0
    safe_mode: bool = False
    depth_bounded: bool = True
    kind: str = "walk"

    def __post_init__(self) -> None:
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        if self.repetitions < 1:
            raise ValueError(f"repetitions must be >= 1, got {self.repetitions}")
        if self.lazy_threshold < 0:
            raise ValueError(
                f"lazy_threshold must be >= 0, got {self.lazy_threshold}"
            )
        if self.kind not in ("walk", "bfs"):
            raise ValueError(f"kind must be 'walk' or 'bfs', got {self.kind!r}")

    @property
    def search_depth(self) -> int:
        """Edge budget per search; at least 1 so a free edge is always seen."""
        return max(1, math.ceil(2.0 / self.epsilon - 1.0))


class DynamicMcm:
    """Maintains a cardinality matching under edge updates.

    As everywhere in this package, the caller mutates the graph first and
    then invokes the handler.  All matched edges carry weight 1.
    """

    def __init__(self, graph: DynamicGraph, config: McmConfig, seed: int) -> None:
        self.graph = graph
        self.config = config
        self.state = MatchingState(graph.n)
        self.rng = random.Random(seed)
        # Updates touching a vertex since its last search; starts at the
        # threshold so the first search is never suppressed.
        self._touched = [config.lazy_threshold] * graph.n
        self.attempts = 0
        self.successes = 0

    # -- update handlers -----------------------------------------------------

    def handle_insert(self, u: int, v: int) -> None:
        """React to edge (u, v) having been inserted.

        Both endpoints free: match directly.  Exactly one matched: swap the
        new edge in and try to re-augment from the displaced mate, undoing
        everything on failure.  Both matched: nothing, unless safe_mode
        locates a free vertex alternating-reachable from u (through u's
        matched edge) and augments from there with a fresh budget.
        """
        st = self.state
        self._touched[u] += 1
        self._touched[v] += 1
        fu = st.mate_of(u) == FREE
        fv = st.mate_of(v) == FREE
        if fu and fv:
            st.match_edge(u, v, 1)
            return
        if not fu and not fv:
            if self.config.safe_mode:
                free_node = self._alternating_free_node(u)
                if free_node is not None:
                    self.augment_from(free_node)
            return
        a, b = (u, v) if fv else (v, u)  # a matched, b free
        displaced = st.mate_of(a)
        journal: _Journal = []
        self._log_unmatch(a, journal)
        self._log_match(a, b, journal)
        if not self.augment_from(displaced):
            self._undo(journal)

    def handle_delete(self, u: int, v: int) -> None:
        """React to edge (u, v) having been deleted.

        A matched edge is unmatched unconditionally; augmentation then
        restarts from each endpoint that is free and whose lazy counter
        allows a search.
        """
        st = self.state
        if st.mate_of(u) == v:
            st.unmatch(u)
        self._touched[u] += 1
        self._touched[v] += 1
        for x in (u, v):
            if st.mate_of(x) == FREE and self._touched[x] >= self.config.lazy_threshold:
                self._touched[x] = 0
                self.augment_from(x)

    # -- augmentation ----------------------------------------------------------

    def augment_from(self, start: int) -> bool:
        """Try to grow the matching from free vertex ``start``.

        Dispatches on config.kind; failed attempts leave the matching
        exactly as it was (walk failures are rolled back via the journal,
        the BFS mutates only after finding a complete path).
        """
        if self.state.mate_of(start) != FREE:
            raise ValueError(f"augment_from requires a free vertex, got {start}")
        self.attempts += 1
        if self.config.kind == "walk":
            ok = self._walk_augment(start)
        else:
            ok = self._bfs_augment(start)
        if ok:
            self.successes += 1
        return ok

    def _walk_augment(self, start: int) -> bool:
        for _ in range(self.config.repetitions):
            journal: _Journal = []
            if self._walk_once(start, journal):
                return True
            self._undo(journal)
        return False

    def _walk_once(self, start: int, journal: _Journal) -> bool:
        """One eager random walk of at most search_depth steps.

        At the current free vertex: with delta_settling, first scan the
        whole neighborhood for a free partner; otherwise (and failing that)
        pick one uniformly random neighbor - match it if free, else steal it
        from its mate and continue the walk at the displaced vertex.
        """
        g = self.graph
        st = self.state
        rng = self.rng
        cur = start
        for _ in range(self.config.search_depth):
            if self.config.delta_settling:
                partner = None
                for nb in g.neighbors(cur):
                    if st.mate_of(nb) == FREE:
                        partner = nb
                        break
                if partner is not None:
                    self._log_match(cur, partner, journal)
                    return True
            nb = g.random_neighbor(cur, rng)
            if nb is None:
                return False
            if st.mate_of(nb) == FREE:
                self._log_match(cur, nb, journal)
                return True
            displaced = st.mate_of(nb)
            self._log_unmatch(nb, journal)
            self._log_match(cur, nb, journal)
            cur = displaced
        return False

    def _bfs_augment(self, start: int) -> bool:
        """Alternating BFS from a free vertex; flips the first augmenting
        path found within the depth budget.  No blossom contraction: odd
        cycles can hide paths, so this is exact only on bipartite inputs."""
        g = self.graph
        st = self.state
        budget = self.config.search_depth if self.config.depth_bounded else None
        # parent_odd[y] = even vertex that reached y; parent_even[z] = odd y
        # with mate z.  Even vertices extend via unmatched edges only.
        parent_odd: dict[int, int] = {}
        parent_even: dict[int, int] = {start: -1}
        queue: deque[tuple[int, int]] = deque([(start, 0)])
        while queue:
            x, d = queue.popleft()
            if budget is not None and d + 1 > budget:
                continue
            mx = st.mate_of(x)
            for y in g.neighbors(x):
                if y == mx or y in parent_odd or y in parent_even:
                    continue
                if st.mate_of(y) == FREE:
                    self._flip_bfs_path(x, y, parent_odd, parent_even)
                    return True
                parent_odd[y] = x
                z = st.mate_of(y)
                parent_even[z] = y
                queue.append((z, d + 2))
        return False

    def _flip_bfs_path(
        self,
        x: int,
        y: int,
        parent_odd: dict[int, int],
        parent_even: dict[int, int],
    ) -> None:
        st = self.state
        to_unmatch: list[int] = []
        to_match: list[tuple[int, int]] = [(x, y)]
        while parent_even[x] != -1:
            odd = parent_even[x]  # x's mate, entered via unmatched edge
            to_unmatch.append(odd)
            to_match.append((parent_odd[odd], odd))
            x = parent_odd[odd]
        for v in to_unmatch:
            st.unmatch(v)
        for a, b in to_match:
            st.match_edge(a, b, 1)

    def _alternating_free_node(self, u: int) -> int | None:
        """First free vertex reachable from matched u by an alternating path
        that leaves through u's matched edge; traversal only, no mutation."""
        g = self.graph
        st = self.state
        if st.mate_of(u) == FREE:
            return None
        budget = self.config.search_depth if self.config.depth_bounded else None
        first = st.mate_of(u)
        seen = {u, first}
        queue: deque[tuple[int, int]] = deque([(first, 1)])
        while queue:
            x, d = queue.popleft()
            if budget is not None and d + 1 > budget:
                continue
            mx = st.mate_of(x)
            for y in g.neighbors(x):
                if y == mx or y in seen:
                    continue
                if st.mate_of(y) == FREE:
                    return y
                seen.add(y)
                z = st.mate_of(y)
                if z not in seen:
                    seen.add(z)
                    queue.append((z, d + 2))
        return None

    # -- journal ---------------------------------------------------------------

    def _log_match(self, a: int, b: int, journal: _Journal) -> None:
        self.state.match_edge(a, b, 1)
        journal.append((a, b, False))

    def _log_unmatch(self, a: int, journal: _Journal) -> None:
        b = self.state.mate_of(a)
        self.state.unmatch(a)
        journal.append((a, b, True))

    def _undo(self, journal: _Journal) -> None:
        for a, b, was_unmatch in reversed(journal):
            if was_unmatch:
                self.state.match_edge(a, b, 1)
            else:
                self.state.unmatch(a)

    # -- reporting ---------------------------------------------------------------

    def cardinality(self) -> int:
        return self.state.matched_count()

    def audit(self) -> None:
        assert_matching_consistent(self.state, self.graph)
