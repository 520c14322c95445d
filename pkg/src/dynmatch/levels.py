"""Weight-bucketed matching: cardinality subroutines per geometric level.

Level i holds exactly the current edges of weight >= (1+eps)^i, so levels
nest downward and an edge of weight w lives in levels 0..level_index(w).
Each level maintains its own cardinality matching (ignoring weights); the
exposed weighted matching greedily merges the per-level matchings from the
heaviest level down, charging each kept edge its true weight.  With exact
per-level matchings this loses at most a factor 2(1+eps) against the
optimum; approximate subroutines degrade that bound proportionally.

Weights must be >= 1 (so level 0 is the bottom bucket); normalize inputs by
dividing by their minimum weight if necessary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import MatchingCorruptionError
from .graph import DynamicGraph, Weight
from .matching import MatchingState, assert_matching_consistent
from .mcm import DynamicMcm, McmConfig
from .oracle import OracleLimits, exact_mcm_matching

# Below this, level counts explode (levels scale with 1/eps); callers who
# accept the cost say so explicitly.
MIN_SAFE_EPSILON = 0.1


@dataclass(frozen=True)
class LevelConfig:
    """Level granularity plus the per-level subroutine choice.

    mcm_kind selects the per-level worker: 'walk' or 'bfs' (see mcm.py), or
    'exact' for the oracle-backed reference used in verification.  The
    nested McmConfig defaults to the level epsilon when not given.
    """

    epsilon: float = 1.0
    mcm_kind: str = "walk"
    mcm: McmConfig | None = None
    allow_small_epsilon: bool = False
    oracle_limits: OracleLimits = field(default_factory=OracleLimits)

    def __post_init__(self) -> None:
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        if self.epsilon < MIN_SAFE_EPSILON and not self.allow_small_epsilon:
            raise ValueError(
                f"epsilon={self.epsilon:g} creates ~{self.level_count_for(10**9)} "
                "levels per billion weight units; pass allow_small_epsilon=True "
                "to accept the cost"
            )
        if self.mcm_kind not in ("walk", "bfs", "exact"):
            raise ValueError(
                f"mcm_kind must be 'walk', 'bfs', or 'exact', got {self.mcm_kind!r}"
            )
        if self.mcm is None:
            kind = self.mcm_kind if self.mcm_kind != "exact" else "walk"
            object.__setattr__(
                self, "mcm", McmConfig(epsilon=self.epsilon, kind=kind)
            )

    def level_count_for(self, max_weight: float) -> int:
        return int(math.log(max(max_weight, 1.0)) / math.log1p(self.epsilon)) + 1

    def label(self) -> str:
        return f"eps={self.epsilon:g},mcm={self.mcm_kind}"


def level_index(w: Weight, epsilon: float) -> int:
    """Largest i with (1+epsilon)^i <= w; w must be >= 1.

    The float estimate is corrected against the same power expression the
    membership test uses, so index and membership can never disagree.
    """
    if w < 1:
        raise ValueError(f"weights must be >= 1 for level bucketing, got {w!r}")
    base = 1.0 + epsilon
    i = int(math.log(w) / math.log(base))
    while base ** (i + 1) <= w:
        i += 1
    while i > 0 and base**i > w:
        i -= 1
    return i


class _ExactMcmBackend:
    """Reference per-level worker: recomputes an exact maximum-cardinality
    matching after every level update.  Desk scale only."""

    def __init__(
        self, graph: DynamicGraph, limits: OracleLimits
    ) -> None:
        self.graph = graph
        self.state = MatchingState(graph.n)
        self.limits = limits
        self.attempts = 0
        self.successes = 0

    def _recompute(self) -> None:
        self.attempts += 1
        before = self.state.matched_count()
        self.state.clear()
        for u, v in exact_mcm_matching(self.graph, self.limits):
            self.state.match_edge(u, v, 1)
        if self.state.matched_count() > before:
            self.successes += 1

    def handle_insert(self, u: int, v: int) -> None:
        self._recompute()

    def handle_delete(self, u: int, v: int) -> None:
        self._recompute()

    def audit(self) -> None:
        assert_matching_consistent(self.state, self.graph)


class _Level:
    __slots__ = ("index", "graph", "worker", "_cache_version", "_cache_pairs")

    def __init__(self, index: int, graph: DynamicGraph, worker) -> None:
        self.index = index
        self.graph = graph
        self.worker = worker
        self._cache_version = -1
        self._cache_pairs: list[tuple[int, int]] = []

    @property
    def state(self) -> MatchingState:
        return self.worker.state

    def sorted_pairs(self) -> list[tuple[int, int]]:
        """This level's matched pairs in ascending (min, max) order.

        Cached against the matching's change counter: merges run far more
        often than any single level's matching changes.
        """
        state = self.worker.state
        if state.version != self._cache_version:
            self._cache_pairs = sorted(state.matched_pairs())
            self._cache_version = state.version
        return self._cache_pairs


class LevelMwm:
    """Fully-dynamic approximate MWM via per-level cardinality matchings.

    Levels are created lazily: observing a new maximum weight N extends the
    ladder to floor(log_{1+eps} N), populating each new level from the
    current graph in canonical edge order.  Updates touch every level the
    edge belongs to, heaviest first.  The merged matching is cached and
    recomputed on demand (merging is a pure function of the per-level
    matchings, so laziness is observationally equivalent to merging after
    every update).
    """

    name = "level"

    def __init__(self, graph: DynamicGraph, config: LevelConfig, seed: int) -> None:
        self.graph = graph
        self.config = config
        self.seed = seed
        self.levels: list[_Level] = []
        self._merged: MatchingState | None = None

    # -- level plumbing -----------------------------------------------------

    def _threshold(self, i: int) -> float:
        return (1.0 + self.config.epsilon) ** i

    def _make_level(self, i: int) -> _Level:
        lvl_graph = DynamicGraph(self.graph.n)
        if self.config.mcm_kind == "exact":
            worker = _ExactMcmBackend(lvl_graph, self.config.oracle_limits)
        else:
            # Independent stream per level, derived from (seed, index) so
            # creation order cannot matter.
            worker = DynamicMcm(
                lvl_graph, self.config.mcm, self.seed * 1_000_003 + i
            )
        return _Level(i, lvl_graph, worker)

    def _ensure_levels(self, top: int) -> int:
        """Create levels len(levels)..top, populating from the current
        graph; returns the previous top index."""
        prev_top = len(self.levels) - 1
        while len(self.levels) <= top:
            i = len(self.levels)
            level = self._make_level(i)
            thr = self._threshold(i)
            # Level graphs are unweighted carriers (weight 1 throughout);
            # true weights stay in the master graph and are charged at merge.
            for u, v, w in sorted(self.graph.edges()):
                if w >= thr:
                    level.graph.insert_edge(u, v, 1)
                    level.worker.handle_insert(u, v)
            self.levels.append(level)
        return prev_top

    # -- update handlers ------------------------------------------------------

    def handle_insert(self, u: int, v: int, w: Weight) -> None:
        """React to edge (u, v, w) having been inserted into the master graph."""
        li = level_index(w, self.config.epsilon)
        prev_top = self._ensure_levels(li)
        for i in range(min(li, prev_top), -1, -1):
            level = self.levels[i]
            level.graph.insert_edge(u, v, 1)
            level.worker.handle_insert(u, v)
        self._merged = None

    def handle_delete(self, u: int, v: int) -> None:
        """React to edge (u, v) having been deleted from the master graph."""
        for level in reversed(self.levels):
            if level.graph.delete_edge(u, v):
                level.worker.handle_delete(u, v)
        self._merged = None

    # -- merged view -------------------------------------------------------------

    @property
    def merged(self) -> MatchingState:
        if self._merged is None:
            self._merged = merge_levels(self)
        return self._merged

    @property
    def weight(self) -> Weight:
        return self.merged.total_weight

    def matched_pairs(self) -> list[tuple[int, int]]:
        return sorted(self.merged.matched_pairs())

    def stats(self) -> dict[str, int]:
        return {
            "successes": sum(l.worker.successes for l in self.levels),
            "failures": sum(
                l.worker.attempts - l.worker.successes for l in self.levels
            ),
        }

    def audit(self, deep: bool = False) -> None:
        """Verify the exposed matching; with deep, also every level's
        matching and the level membership invariant."""
        assert_matching_consistent(self.merged, self.graph)
        if not deep:
            return
        for level in self.levels:
            assert_matching_consistent(level.state, level.graph)
            thr = self._threshold(level.index)
            expect = sorted(
                (u, v) for (u, v, w) in self.graph.edges() if w >= thr
            )
            got = sorted((u, v) for (u, v, _w) in level.graph.edges())
            if expect != got:
                raise AssertionError(
                    f"level {level.index} membership drift: "
                    f"{len(got)} edges vs {len(expect)} expected"
                )


def merge_levels(structure: LevelMwm) -> MatchingState:
    """Greedy merge of the per-level matchings, heaviest level first.

    Within a level, candidate edges are taken in ascending (min, max) order;
    an edge is kept iff neither endpoint is already covered.  Kept edges are
    charged their true (master graph) weight.
    """
    graph = structure.graph
    out = MatchingState(graph.n)
    used = bytearray(graph.n)
    # Hot path (runs per merged-view refresh): write the output state's
    # internals directly -- the `used` array already guarantees the pairs
    # are vertex-disjoint, and candidate pairs are canonical (min, max).
    master_w = graph._weight
    mate = out._mate
    out_pairs = out._pairs
    total: Weight = 0
    try:
        for level in reversed(structure.levels):
            for pair in level.sorted_pairs():
                u, v = pair
                if used[u] or used[v]:
                    continue
                used[u] = 1
                used[v] = 1
                w = master_w[pair]
                mate[u] = v
                mate[v] = u
                out_pairs[pair] = w
                total += w
    except KeyError as exc:
        raise MatchingCorruptionError(
            f"level matching pair {exc.args[0]} is not a master-graph edge"
        ) from None
    out.total_weight = total
    out.version = 1
    return out
