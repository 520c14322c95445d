"""Approximate maximum-weight matching maintained by random augmenting walks.

Each update launches short random walks anchored at the touched vertices.
A walk grows a simple path (see paths.py), the exact DP picks the best
independent edge subset of that path, and the matching is rewritten only on
strict improvement.  With walk length ceil(2/eps + 3) a single successful
walk can realize any weight-augmenting path of up to 1/eps + 1 unmatched
edges, which is what drives the (1 + eps) quality target; the number of
walks per update trades time for how reliably such paths are found.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .graph import DynamicGraph, Weight
from .matching import FREE, MatchingState, assert_matching_consistent
from .paths import EligibilityArray, WalkPath, extend_walk, improve_along_path


@dataclass(frozen=True)
class RandomConfig:
    """Tuning knobs for the walk-based matcher.

    epsilon drives the walk length ceil(2/epsilon + 3); num_walks is the
    per-campaign walk count unless theorem_mode replaces it with
    ceil(Delta^(2/epsilon+3) * ln n), the count under which the quality
    guarantee holds with high probability.  stop_early aborts a campaign
    after beta consecutive unsuccessful walks.
    """

    epsilon: float = 1.0
    num_walks: int = 1
    stop_early: bool = True
    beta: int = 5
    theorem_mode: bool = False

    def __post_init__(self) -> None:
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        if self.num_walks < 1:
            raise ValueError(f"num_walks must be >= 1, got {self.num_walks}")
        if self.beta < 1:
            raise ValueError(f"beta must be >= 1, got {self.beta}")

    @property
    def walk_length(self) -> int:
        """Edge budget per walk, seed edges included."""
        return math.ceil(2.0 / self.epsilon + 3.0)

    def label(self) -> str:
        parts = [f"eps={self.epsilon:g}", f"walks={self.num_walks}"]
        if self.theorem_mode:
            parts.append("theorem")
        if not self.stop_early:
            parts.append("no-stop-early")
        return ",".join(parts)


class RandomWalkMwm:
    """Fully-dynamic approximate MWM via anchored random walks.

    The caller owns graph mutation: handlers are invoked after the edge has
    been inserted into / deleted from the graph.
    """

    name = "random"

    def __init__(self, graph: DynamicGraph, config: RandomConfig, seed: int) -> None:
        self.graph = graph
        self.config = config
        self.state = MatchingState(graph.n)
        self.rng = random.Random(seed)
        self._elig = EligibilityArray(graph.n)
        self.walks_run = 0
        self.walks_improved = 0

    # -- update handlers ---------------------------------------------------

    def handle_insert(self, u: int, v: int, w: Weight) -> None:
        """React to edge (u, v, w) having been inserted.

        Every walk of the campaign re-seeds a path that forces the new edge
        in, built from the endpoints' current mates, and continues walking
        from the seed's open end.
        """
        self.run_walk_campaign(lambda: self._seed_insert(u, v, w))

    def handle_delete(self, u: int, v: int) -> None:
        """React to edge (u, v) having been deleted.

        A matched edge is unmatched first (its weight was stored at match
        time, so the graph is not consulted).  Two independent campaigns then
        try to repair around each endpoint; a matched anchor's walk starts by
        traversing its matched edge.
        """
        if self.state.mate_of(u) == v:
            self.state.unmatch(u)
        self.run_walk_campaign(lambda: self._seed_anchor(u))
        self.run_walk_campaign(lambda: self._seed_anchor(v))

    # -- campaign machinery -------------------------------------------------

    def run_walk_campaign(self, seed_builder) -> int:
        """Run up to the configured number of walks; returns success count.

        With stop_early, beta consecutive failures abort the campaign; the
        failure counter resets on every success and is local to this
        campaign.
        """
        budget = self._walk_budget()
        successes = 0
        consecutive_failures = 0
        for _ in range(budget):
            if self._single_walk(seed_builder):
                successes += 1
                consecutive_failures = 0
            else:
                consecutive_failures += 1
                if self.config.stop_early and consecutive_failures >= self.config.beta:
                    break
        return successes

    def _walk_budget(self) -> int:
        cfg = self.config
        if not cfg.theorem_mode:
            return cfg.num_walks
        delta = self.graph.max_degree_seen()
        n = max(self.graph.n, 2)
        return max(1, math.ceil(delta ** (2.0 / cfg.epsilon + 3.0) * math.log(n)))

    def _single_walk(self, seed_builder) -> bool:
        path, start = seed_builder()
        extend_walk(
            self.graph,
            self.state,
            path,
            start,
            self.config.walk_length,
            self._elig,
            self.rng,
        )
        improved = improve_along_path(self.state, path)
        self._elig.reset()
        self.walks_run += 1
        if improved:
            self.walks_improved += 1
        return improved

    # -- seed paths ----------------------------------------------------------

    def _seed_insert(self, u: int, v: int, w: Weight) -> tuple[WalkPath, int]:
        """Seed path forcing the inserted edge, per the endpoints' mates.

        Both free: start at a random endpoint.  One matched: its matched
        edge leads in and the walk continues at the free endpoint.  Both
        matched: both matched edges flank the new edge and the walk
        continues at v's mate.  Earlier walks of the same campaign may have
        matched the new edge itself; it then seeds as a single matched edge.
        """
        state = self.state
        elig = self._elig
        path = WalkPath()
        mu = state.mate_of(u)
        mv = state.mate_of(v)
        if mu == v:
            a, b = (u, v) if self.rng.random() < 0.5 else (v, u)
            path.start(a)
            path.append_step(b, state.stored_weight(a), True)
            elig.mark_ineligible(a)
            return path, b
        if mu == FREE and mv == FREE:
            a, b = (u, v) if self.rng.random() < 0.5 else (v, u)
            path.start(a)
            path.append_step(b, w, False)
            elig.mark_ineligible(a)
            return path, b
        if mu != FREE and mv != FREE:
            path.start(mu)
            path.append_step(u, state.stored_weight(u), True)
            path.append_step(v, w, False)
            path.append_step(mv, state.stored_weight(v), True)
            elig.mark_ineligible(mu)
            elig.mark_ineligible(u)
            elig.mark_ineligible(v)
            return path, mv
        # Exactly one endpoint matched; orient so a is the matched one.
        a, b = (u, v) if mu != FREE else (v, u)
        ma = state.mate_of(a)
        path.start(ma)
        path.append_step(a, state.stored_weight(a), True)
        path.append_step(b, w, False)
        elig.mark_ineligible(ma)
        elig.mark_ineligible(a)
        return path, b

    def _seed_anchor(self, anchor: int) -> tuple[WalkPath, int]:
        """Empty path starting at a deletion endpoint; extend_walk traverses
        the anchor's matched edge first when there is one."""
        path = WalkPath()
        path.start(anchor)
        return path, anchor

    # -- reporting -----------------------------------------------------------

    @property
    def weight(self) -> Weight:
        return self.state.total_weight

    def matched_pairs(self) -> list[tuple[int, int]]:
        return sorted(self.state.matched_pairs())

    def stats(self) -> dict[str, int]:
        return {
            "successes": self.walks_improved,
            "failures": self.walks_run - self.walks_improved,
        }

    def audit(self, deep: bool = False) -> None:
        assert_matching_consistent(self.state, self.graph)
        if deep and not self._elig.all_eligible():
            raise AssertionError("eligibility array not reset between walks")
