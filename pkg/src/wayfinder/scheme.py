"""Wayfinding scheme optimization.

A scheme assigns one candidate path to every navigation scenario.  Cost
blends per-scenario terms (length, node count, turning effort) with global
terms over the union of chosen paths (covered length, covered nodes), and is
minimized by simulated annealing over reassignment moves.

All cost terms are evaluated on the original layout graph, never on a
subdivided copy.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Callable, Sequence

from wayfinder.graph import LayoutGraph, NavScenario, total_edge_length
from wayfinder.pathing import Path, adaptive_candidates

__all__ = [
    "SchemeWeights",
    "AnnealSchedule",
    "WayfindingScheme",
    "TracePoint",
    "path_turning_angle",
    "cost_local_length",
    "cost_local_node",
    "cost_local_angle",
    "cost_global_length",
    "cost_global_node",
    "total_scheme_cost",
    "draw_batch_size",
    "propose_move",
    "metropolis_accept",
    "optimize_scheme",
]


@dataclass(frozen=True)
class SchemeWeights:
    """Non-negative blend weights for the five scheme cost terms."""

    local_length: float = 1.0
    local_node: float = 1.0
    local_angle: float = 10.0
    global_length: float = 5.0
    global_node: float = 5.0

    def __post_init__(self) -> None:
        for name in ("local_length", "local_node", "local_angle", "global_length", "global_node"):
            if getattr(self, name) < 0:
                raise ValueError(f"weight {name} must be >= 0")


@dataclass(frozen=True)
class AnnealSchedule:
    """Geometric cooling schedule with a windowed relative-improvement stop.

    The run halts once the best cost improved by less than
    ``stop_rel_change`` (relative) over the last ``stop_window`` iterations,
    or after ``max_iters``.  Defaults fit the scheme stage; the sign
    refinement stage uses :meth:`for_signs`.
    """

    t_initial: float = 1.0
    cooling: float = 0.999
    t_min: float = 1e-4
    stop_window: int = 1000
    stop_rel_change: float = 0.01
    max_iters: int = 100_000
    seed: int = 0

    def __post_init__(self) -> None:
        if self.t_initial <= 0 or self.t_min <= 0:
            raise ValueError("temperatures must be positive")
        if not (0.0 < self.cooling < 1.0):
            raise ValueError("cooling must lie in (0, 1)")
        if self.stop_window < 1 or self.max_iters < 1:
            raise ValueError("stop_window and max_iters must be >= 1")

    @classmethod
    def for_signs(cls, seed: int = 0) -> "AnnealSchedule":
        return cls(
            t_initial=0.1,
            cooling=0.99,
            t_min=1e-5,
            stop_window=50,
            stop_rel_change=0.01,
            max_iters=5000,
            seed=seed,
        )


@dataclass(frozen=True)
class WayfindingScheme:
    """An assignment of one candidate path per scenario.

    ``choices[i]`` indexes into ``candidates[i]``; scenario order is fixed at
    construction and shared by all derived schemes.
    """

    scenarios: tuple[NavScenario, ...]
    candidates: tuple[tuple[Path, ...], ...]
    choices: tuple[int, ...]

    def __post_init__(self) -> None:
        if not (len(self.scenarios) == len(self.candidates) == len(self.choices)):
            raise ValueError("scenarios, candidates, and choices must align")
        for i, c in enumerate(self.choices):
            if not (0 <= c < len(self.candidates[i])):
                raise ValueError(f"choice {c} out of range for scenario #{i}")

    @property
    def paths(self) -> tuple[Path, ...]:
        return tuple(cands[c] for cands, c in zip(self.candidates, self.choices))

    def path_for(self, scenario: NavScenario) -> Path:
        i = self.scenarios.index(scenario)
        return self.candidates[i][self.choices[i]]

    def with_choices(self, choices: Sequence[int]) -> "WayfindingScheme":
        return WayfindingScheme(self.scenarios, self.candidates, tuple(choices))


@dataclass(frozen=True)
class TracePoint:
    iteration: int
    temperature: float
    cost: float
    best: float


# ---- cost terms ----

def path_turning_angle(graph: LayoutGraph, path: Path) -> float:
    """Sum of absolute turning angles at the path's interior nodes, radians.

    Each turn lies in [0, pi]; straight-through contributes 0.  Paths with
    fewer than three nodes turn nowhere.
    """
    total = 0.0
    nodes = path.nodes
    for prev, here, nxt in zip(nodes, nodes[1:], nodes[2:]):
        px, py = graph.position(prev)
        hx, hy = graph.position(here)
        nx, ny = graph.position(nxt)
        ax, ay = hx - px, hy - py
        bx, by = nx - hx, ny - hy
        cross = ax * by - ay * bx
        dot = ax * bx + ay * by
        total += math.atan2(abs(cross), dot)
    return total


def cost_local_length(graph: LayoutGraph, scheme: WayfindingScheme) -> float:
    """Importance-weighted mean path length, normalized by total edge length."""
    n = len(scheme.scenarios)
    if n == 0:
        return 0.0
    edge_total = total_edge_length(graph)
    acc = sum(z.importance * p.length for z, p in zip(scheme.scenarios, scheme.paths))
    return acc / (n * edge_total)


def cost_local_node(graph: LayoutGraph, scheme: WayfindingScheme) -> float:
    """Importance-weighted mean node count (endpoints included), normalized
    by the graph's node count."""
    n = len(scheme.scenarios)
    if n == 0:
        return 0.0
    acc = sum(z.importance * len(p.nodes) for z, p in zip(scheme.scenarios, scheme.paths))
    return acc / (n * len(graph.nodes))


def cost_local_angle(graph: LayoutGraph, scheme: WayfindingScheme) -> float:
    """Importance-weighted mean turning effort, normalized by node count
    times pi (the largest possible single turn)."""
    n = len(scheme.scenarios)
    if n == 0:
        return 0.0
    acc = sum(
        z.importance * path_turning_angle(graph, p)
        for z, p in zip(scheme.scenarios, scheme.paths)
    )
    return acc / (n * len(graph.nodes) * math.pi)


def cost_global_length(graph: LayoutGraph, scheme: WayfindingScheme) -> float:
    """Length of the union of edges used by any chosen path, normalized by
    total edge length.  Shared edges count once."""
    used: set[tuple[str, str]] = set()
    for p in scheme.paths:
        used.update(p.edges())
    # Sum in sorted order: set iteration order varies across processes and
    # would perturb the low float bits.
    covered = sum(graph.edge_length(a, b) for a, b in sorted(used))
    return covered / total_edge_length(graph)


def cost_global_node(graph: LayoutGraph, scheme: WayfindingScheme) -> float:
    """Size of the union of nodes on any chosen path over the graph's node
    count."""
    used: set[str] = set()
    for p in scheme.paths:
        used.update(p.nodes)
    return len(used) / len(graph.nodes)


def total_scheme_cost(
    graph: LayoutGraph, scheme: WayfindingScheme, weights: SchemeWeights | None = None
) -> float:
    w = weights or SchemeWeights()
    return (
        w.local_length * cost_local_length(graph, scheme)
        + w.local_node * cost_local_node(graph, scheme)
        + w.local_angle * cost_local_angle(graph, scheme)
        + w.global_length * cost_global_length(graph, scheme)
        + w.global_node * cost_global_node(graph, scheme)
    )


# ---- annealing ----

def draw_batch_size(n: int, rng: random.Random) -> int:
    """Draw the reassignment batch size x in 1..n with probability
    (n - x + 1) / (1 + 2 + ... + n); smaller batches are more likely."""
    if n < 1:
        raise ValueError("n must be >= 1")
    weights = [n - x + 1 for x in range(1, n + 1)]
    return rng.choices(range(1, n + 1), weights=weights)[0]


def propose_move(scheme: WayfindingScheme, rng: random.Random) -> WayfindingScheme:
    """Reassign x scenarios (x from :func:`draw_batch_size`) to uniformly
    drawn candidates.

    The redraw may pick the currently assigned path, so the move can be a
    no-op; the result differs from the input in at most x assignments.
    """
    n = len(scheme.scenarios)
    if n == 0:
        return scheme
    x = draw_batch_size(n, rng)
    picked = rng.sample(range(n), x)
    choices = list(scheme.choices)
    for i in picked:
        choices[i] = rng.randrange(len(scheme.candidates[i]))
    return scheme.with_choices(choices)


def metropolis_accept(cost_old: float, cost_new: float, temperature: float, rng: random.Random) -> bool:
    """Accept with probability min(1, exp((cost_old - cost_new) / T)).

    Non-worse moves always pass.  One uniform draw is consumed per call
    regardless of the outcome, which keeps RNG streams aligned across runs.
    """
    if temperature <= 0:
        raise ValueError("temperature must be positive")
    if cost_new <= cost_old:
        prob = 1.0
    else:
        delta = cost_new - cost_old
        prob = math.exp(-delta / temperature) if math.isfinite(delta) else 0.0
    return rng.random() < prob


def _stop_on_stale_best(best_history: list[float], window: int, rel_change: float) -> bool:
    if len(best_history) <= window:
        return False
    anchor = best_history[-window - 1]
    if anchor <= 0.0:
        return True
    return (anchor - best_history[-1]) < rel_change * anchor


def optimize_scheme(
    graph: LayoutGraph,
    scenarios: Sequence[NavScenario],
    weights: SchemeWeights | None = None,
    schedule: AnnealSchedule | None = None,
    stretch: float = 0.16,
    k_cap: int = 50,
    progress: Callable[[int, float], None] | None = None,
) -> tuple[WayfindingScheme, list[TracePoint]]:
    """Anneal a wayfinding scheme over adaptive candidate sets.

    Candidate sets come from :func:`adaptive_candidates` per scenario (the
    scenario order given is kept).  The state is initialized by drawing one
    random candidate per scenario; the all-shortest-paths assignment is also
    evaluated up front so the reported best can never lose to it.  Returns
    the best-so-far scheme (not the final state) plus the per-iteration
    trace.  A single RNG stream drives initialization, proposals, and
    acceptance, so results are reproducible from the schedule seed.
    """
    if not scenarios:
        raise ValueError("no scenarios to optimize")
    weights = weights or SchemeWeights()
    schedule = schedule or AnnealSchedule()
    scen = tuple(scenarios)
    candidates = tuple(tuple(adaptive_candidates(graph, z, stretch, k_cap)) for z in scen)

    prep = _CostEvaluator(graph, scen, candidates, weights)
    rng = random.Random(schedule.seed)

    baseline = WayfindingScheme(scen, candidates, tuple(0 for _ in scen))
    best = baseline
    best_cost = prep.cost(baseline.choices)

    current = baseline.with_choices(tuple(rng.randrange(len(c)) for c in candidates))
    cost = prep.cost(current.choices)
    if cost < best_cost:
        best, best_cost = current, cost

    temperature = schedule.t_initial
    trace: list[TracePoint] = [TracePoint(0, temperature, cost, best_cost)]
    best_history = [best_cost]

    for iteration in range(1, schedule.max_iters + 1):
        proposal = propose_move(current, rng)
        proposal_cost = prep.cost(proposal.choices)
        if metropolis_accept(cost, proposal_cost, temperature, rng):
            current, cost = proposal, proposal_cost
            if cost < best_cost:
                best, best_cost = current, cost
        temperature = max(temperature * schedule.cooling, schedule.t_min)
        trace.append(TracePoint(iteration, temperature, cost, best_cost))
        best_history.append(best_cost)
        if progress is not None and iteration % 500 == 0:
            progress(iteration, best_cost)
        if _stop_on_stale_best(best_history, schedule.stop_window, schedule.stop_rel_change):
            break
    return best, trace


class _CostEvaluator:
    """Precomputed per-candidate contributions for fast repeated evaluation.

    Reproduces :func:`total_scheme_cost` bit-for-bit: each term is summed in
    scenario order with the same float association as the public functions,
    and union sums run in sorted order.
    """

    def __init__(
        self,
        graph: LayoutGraph,
        scenarios: tuple[NavScenario, ...],
        candidates: tuple[tuple[Path, ...], ...],
        weights: SchemeWeights,
    ) -> None:
        self.weights = weights
        self.n = len(scenarios)
        self.node_count = len(graph.nodes)
        self.edge_total = total_edge_length(graph)
        self.lengths: list[list[float]] = []
        self.node_counts: list[list[float]] = []
        self.angles: list[list[float]] = []
        self.node_sets: list[list[frozenset[str]]] = []
        self.edge_sets: list[list[frozenset[tuple[str, str]]]] = []
        for z, cands in zip(scenarios, candidates):
            self.lengths.append([z.importance * p.length for p in cands])
            self.node_counts.append([z.importance * len(p.nodes) for p in cands])
            self.angles.append([z.importance * path_turning_angle(graph, p) for p in cands])
            self.node_sets.append([frozenset(p.nodes) for p in cands])
            self.edge_sets.append([frozenset(p.edges()) for p in cands])
        self.edge_lengths = {e.pair(): e.length for e in graph.edges}

    def cost(self, choices: Sequence[int]) -> float:
        w = self.weights
        nodes: set[str] = set()
        edges: set[tuple[str, str]] = set()
        for i, c in enumerate(choices):
            nodes |= self.node_sets[i][c]
            edges |= self.edge_sets[i][c]
        c_length = sum(self.lengths[i][c] for i, c in enumerate(choices)) / (self.n * self.edge_total)
        c_node = sum(self.node_counts[i][c] for i, c in enumerate(choices)) / (self.n * self.node_count)
        c_angle = sum(self.angles[i][c] for i, c in enumerate(choices)) / (
            self.n * self.node_count * math.pi
        )
        covered = sum(self.edge_lengths[pair] for pair in sorted(edges))
        c_glen = covered / self.edge_total
        c_gnode = len(nodes) / self.node_count
        return (
            w.local_length * c_length
            + w.local_node * c_node
            + w.local_angle * c_angle
            + w.global_length * c_glen
            + w.global_node * c_gnode
        )
