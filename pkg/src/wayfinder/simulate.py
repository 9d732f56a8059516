"""Agent-based evaluation of sign placements.

Agents walk node to node on the (subdivided) layout graph.  On every node
arrival an agent perceives sign entries for its destination within
straight-line visibility range, commits to the nearest perceived sign (walks
the shortest path to its node), follows that sign's arrow, and otherwise
takes a uniform random turn that avoids the edge it just came from.  A walk
succeeds when the destination is reached within ``stretch_factor`` times the
baseline distance and fails the moment the budget is exceeded.

Behavioral details pinned here:

* A perceived relevant sign is missed independently with ``miss_prob`` per
  node arrival; revisiting a node re-rolls.  With ``miss_prob == 0`` no
  perception randomness is consumed at all.
* While committed to reaching a sign's node, the agent does not re-perceive
  at intermediate nodes.
* An agent never re-acts on a sign entry it has already followed; a passed
  sign carries no new information, and this rules out perception loops.
* Each agent draws from its own movement and perception RNG streams, both
  derived from the evaluation seed, so adding perception rolls never
  perturbs movement draws (and vice versa).
"""
from __future__ import annotations

import heapq
import math
import random
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence
from weakref import WeakKeyDictionary

from wayfinder.graph import LayoutGraph, NavScenario
from wayfinder.scheme import WayfindingScheme

__all__ = [
    "AgentParams",
    "Outcome",
    "Trajectory",
    "ScenarioStats",
    "SimOutcome",
    "baseline_distance",
    "simulate_agent",
    "evaluate_placement",
    "run_walk",
]


@dataclass(frozen=True)
class AgentParams:
    """Perception and termination parameters for simulated pedestrians."""

    visibility: float = 125.0
    miss_prob: float = 0.0
    stretch_factor: float = 1.5
    agents_per_scenario: int = 100

    def __post_init__(self) -> None:
        if self.visibility < 0:
            raise ValueError("visibility must be >= 0")
        if not (0.0 <= self.miss_prob <= 1.0):
            raise ValueError("miss_prob must lie in [0, 1]")
        if self.stretch_factor < 1.0:
            raise ValueError("stretch_factor must be >= 1")
        if self.agents_per_scenario < 1:
            raise ValueError("agents_per_scenario must be >= 1")


class Outcome(Enum):
    SUCCESS = "success"
    FAILURE = "failure"


@dataclass(frozen=True)
class Trajectory:
    """One agent's walk: visited nodes, total distance, terminal outcome."""

    nodes: tuple[str, ...]
    distance: float
    outcome: Outcome


@dataclass(frozen=True)
class ScenarioStats:
    scenario: NavScenario
    successes: int
    agents: int
    distances: tuple[float, ...]

    @property
    def success_rate(self) -> float:
        return self.successes / self.agents


@dataclass(frozen=True)
class SimOutcome:
    """Aggregated evaluation of a placement: F(S) = failures / total."""

    failure_rate: float
    stats: tuple[ScenarioStats, ...]
    trajectories: tuple[Trajectory, ...] | None = None


# ---- precomputed per-graph routing tables ----

class _Context:
    """Index maps, pairwise distances, and deterministic next-hop tables."""

    def __init__(self, graph: LayoutGraph) -> None:
        self.graph = graph
        self.ids: tuple[str, ...] = tuple(graph.nodes)  # sorted by id
        self.index: dict[str, int] = {nid: i for i, nid in enumerate(self.ids)}
        self.pos: list[tuple[float, float]] = [graph.position(nid) for nid in self.ids]
        n = len(self.ids)
        self.nbrs: list[list[int]] = [
            [self.index[v] for v in graph.neighbors(nid)] for nid in self.ids
        ]
        self.weight: list[dict[int, float]] = [
            {self.index[v]: w for v, w in graph.adjacency[nid].items()} for nid in self.ids
        ]
        self.dist: list[list[float]] = [[math.inf] * n for _ in range(n)]
        # next_step[u][t]: neighbor of u that starts a shortest u -> t walk;
        # ties resolve to the smallest node id. -1 when unreachable.
        self.next_step: list[list[int]] = [[-1] * n for _ in range(n)]
        for t in range(n):
            dist_t = self._dijkstra_from(t)
            for u in range(n):
                self.dist[u][t] = dist_t[u]
            for u in range(n):
                if u == t or not math.isfinite(dist_t[u]):
                    continue
                best, best_cost = -1, math.inf
                for v in self.nbrs[u]:
                    cost = self.weight[u][v] + dist_t[v]
                    if cost < best_cost:
                        best, best_cost = v, cost
                self.next_step[u][t] = best

    def _dijkstra_from(self, start: int) -> list[float]:
        n = len(self.ids)
        dist = [math.inf] * n
        dist[start] = 0.0
        heap = [(0.0, start)]
        while heap:
            d, u = heapq.heappop(heap)
            if d > dist[u]:
                continue
            for v in self.nbrs[u]:
                nd = d + self.weight[u][v]
                if nd < dist[v]:
                    dist[v] = nd
                    heapq.heappush(heap, (nd, v))
        return dist

    def euclid(self, u: int, v: int) -> float:
        (ux, uy), (vx, vy) = self.pos[u], self.pos[v]
        return math.hypot(ux - vx, uy - vy)


_context_cache: "WeakKeyDictionary[LayoutGraph, _Context]" = WeakKeyDictionary()


def _context(graph: LayoutGraph) -> _Context:
    ctx = _context_cache.get(graph)
    if ctx is None:
        ctx = _Context(graph)
        _context_cache[graph] = ctx
    return ctx


# ---- occlusion ----

def _segments_cross(p1, p2, q1, q2) -> bool:
    def orient(a, b, c):
        v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
        return (v > 1e-12) - (v < -1e-12)

    o1, o2 = orient(p1, p2, q1), orient(p1, p2, q2)
    o3, o4 = orient(q1, q2, p1), orient(q1, q2, p2)
    return o1 != o2 and o3 != o4 and 0 not in (o1, o2, o3, o4)


def _point_in_polygon(pt, polygon) -> bool:
    x, y = pt
    inside = False
    for (x1, y1), (x2, y2) in zip(polygon, polygon[1:] + polygon[:1]):
        if (y1 > y) != (y2 > y):
            t = (y - y1) / (y2 - y1)
            if x < x1 + t * (x2 - x1):
                inside = not inside
    return inside


def _sight_blocked(a, b, obstacles) -> bool:
    for poly in obstacles:
        pts = [tuple(p) for p in poly]
        if _point_in_polygon(a, pts) or _point_in_polygon(b, pts):
            return True
        for e1, e2 in zip(pts, pts[1:] + pts[:1]):
            if _segments_cross(a, b, e1, e2):
                return True
    return False


# ---- walking ----

def _entries_by_destination(ctx: _Context, placement) -> dict[str, list[tuple[int, int]]]:
    """Placement entries grouped per destination as (node index, arrow
    index) pairs sorted by node id."""
    grouped: dict[str, list[tuple[int, int]]] = {}
    for sign in placement.entries:
        grouped.setdefault(sign.destination, []).append(
            (ctx.index[sign.node], ctx.index[sign.next_node])
        )
    for dest in grouped:
        grouped[dest].sort()
    return grouped


def _walk(
    ctx: _Context,
    entries: Sequence[tuple[int, int]],
    start: int,
    dest: int,
    budget: float,
    params: AgentParams,
    rng_move: random.Random,
    rng_perc: random.Random,
    obstacles: Sequence | None = None,
) -> tuple[Trajectory, bool]:
    """Run one agent; returns its trajectory and whether any RNG draw was
    consumed (False means the walk is fully deterministic)."""
    consumed = False
    nodes = [start]
    walked = 0.0
    if start == dest:
        return Trajectory((ctx.ids[start],), 0.0, Outcome.SUCCESS), consumed

    cur = start
    prev = -1
    followed: set[int] = set()
    dist = ctx.dist
    weight = ctx.weight
    next_step = ctx.next_step
    visibility = params.visibility
    miss = params.miss_prob
    outcome: Outcome | None = None

    def arrive(nxt: int) -> Outcome | None:
        nonlocal cur, prev, walked
        walked += weight[cur][nxt]
        prev, cur = cur, nxt
        nodes.append(cur)
        if cur == dest:
            return Outcome.SUCCESS if walked <= budget else Outcome.FAILURE
        if walked > budget:
            return Outcome.FAILURE
        return None

    while outcome is None:
        # Perception: nearest not-yet-followed relevant sign in sight.
        target = -1
        target_dist = math.inf
        for i, (node_i, next_i) in enumerate(entries):
            if i in followed:
                continue
            if ctx.euclid(cur, node_i) > visibility:
                continue
            if obstacles and _sight_blocked(ctx.pos[cur], ctx.pos[node_i], obstacles):
                continue
            if miss > 0.0:
                consumed = True
                if rng_perc.random() < miss:
                    continue
            sd = dist[cur][node_i]
            if sd < target_dist:
                target, target_dist = i, sd

        if target >= 0:
            followed.add(target)
            sign_node, arrow = entries[target]
            # Walk to the sign, then to wherever its arrow points.  On a
            # finer graph than the one the signs were placed on, the arrow
            # target may be several hops away.
            for goal in (sign_node, arrow):
                while cur != goal and outcome is None:
                    step = next_step[cur][goal]
                    if step < 0:  # arrow target unreachable from here
                        outcome = Outcome.FAILURE
                        break
                    outcome = arrive(step)
                if outcome is not None:
                    break
            continue

        nbrs = ctx.nbrs[cur]
        if not nbrs:
            outcome = Outcome.FAILURE
            break
        if len(nbrs) == 1:
            step = nbrs[0]
        else:
            allowed = [v for v in nbrs if v != prev]
            if len(allowed) == 1:
                step = allowed[0]
            else:
                step = rng_move.choice(allowed)
                consumed = True
        outcome = arrive(step)

    traj = Trajectory(tuple(ctx.ids[i] for i in nodes), walked, outcome)
    return traj, consumed


# ---- public surface ----

def baseline_distance(scheme: WayfindingScheme, scenario: NavScenario) -> float:
    """Length of the scheme's chosen path for the scenario (meters)."""
    return scheme.path_for(scenario).length


def run_walk(
    graph: LayoutGraph,
    placement,
    destination: str,
    start: str,
    budget: float,
    params: AgentParams,
    rng_move: random.Random,
    rng_perc: random.Random | None = None,
    obstacles: Sequence | None = None,
) -> tuple[Trajectory, bool]:
    """One agent walk toward ``destination`` with an explicit budget.

    Returns the trajectory plus a flag telling whether any randomness was
    consumed (``False`` marks a fully deterministic walk).
    """
    ctx = _context(graph)
    entries = _entries_by_destination(ctx, placement).get(destination, [])
    return _walk(
        ctx,
        entries,
        ctx.index[start],
        ctx.index[destination],
        budget,
        params,
        rng_move,
        rng_perc if rng_perc is not None else rng_move,
        obstacles,
    )


def simulate_agent(
    graph: LayoutGraph,
    placement,
    scenario: NavScenario,
    params: AgentParams,
    baseline: float,
    rng: random.Random,
    perception_rng: random.Random | None = None,
    obstacles: Sequence | None = None,
) -> Trajectory:
    """Walk a single agent for a scenario with budget
    ``stretch_factor * baseline``."""
    traj, _ = run_walk(
        graph,
        placement,
        scenario.destination,
        scenario.source,
        params.stretch_factor * baseline,
        params,
        rng,
        perception_rng,
        obstacles,
    )
    return traj


def evaluate_placement(
    graph: LayoutGraph,
    placement,
    scheme: WayfindingScheme,
    scenarios: Sequence[NavScenario] | None = None,
    params: AgentParams | None = None,
    seed: int | str = 0,
    retain_trajectories: bool = False,
    obstacles: Sequence | None = None,
) -> SimOutcome:
    """Simulate ``agents_per_scenario`` agents per scenario and aggregate.

    Every agent owns two RNG streams derived from ``seed``, the scenario
    index, and the agent index, so results are bit-for-bit reproducible and
    independent of evaluation order.  When the first agent of a scenario
    consumes no randomness, the walk is deterministic and its outcome is
    replicated across the remaining agents without re-running them.
    """
    params = params or AgentParams()
    zs = tuple(scenarios) if scenarios is not None else scheme.scenarios
    ctx = _context(graph)
    by_dest = _entries_by_destination(ctx, placement)

    stats: list[ScenarioStats] = []
    trajectories: list[Trajectory] = []
    failures = 0
    total = 0
    count = params.agents_per_scenario
    for si, z in enumerate(zs):
        budget = params.stretch_factor * baseline_distance(scheme, z)
        entries = by_dest.get(z.destination, [])
        start, dest = ctx.index[z.source], ctx.index[z.destination]
        successes = 0
        distances: list[float] = []
        ai = 0
        while ai < count:
            rng_move = random.Random(f"{seed}:{si}:{ai}:move")
            rng_perc = random.Random(f"{seed}:{si}:{ai}:see")
            traj, consumed = _walk(
                ctx, entries, start, dest, budget, params, rng_move, rng_perc, obstacles
            )
            copies = 1 if (consumed or ai > 0) else count
            if traj.outcome is Outcome.SUCCESS:
                successes += copies
            distances.extend([traj.distance] * copies)
            if retain_trajectories:
                trajectories.extend([traj] * copies)
            ai += copies
        stats.append(ScenarioStats(z, successes, count, tuple(distances)))
        failures += count - successes
        total += count
    rate = failures / total if total else 0.0
    return SimOutcome(rate, tuple(stats), tuple(trajectories) if retain_trajectories else None)
