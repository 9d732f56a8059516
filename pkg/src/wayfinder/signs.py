"""Sign placement: construction, cost terms, and annealed refinement.

A placement is a set of sign entries (node, destination, arrow to an
adjacent node); entries at the same node form one physical board.  Signs
live on the subdivided graph so that boards can sit mid-block, not just at
intersections.  Refinement starts from the full placement (a sign at every
path node) and anneals toward fewer, well-spread signs while the simulated
failure rate stays within tolerance; placements beyond tolerance carry
infinite cost and are never accepted.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

from wayfinder.graph import LayoutGraph, LayoutError, NavScenario
from wayfinder.scheme import (
    AnnealSchedule,
    TracePoint,
    WayfindingScheme,
    _stop_on_stale_best,
    metropolis_accept,
)
from wayfinder.simulate import AgentParams, evaluate_placement

__all__ = [
    "Sign",
    "SignPlacement",
    "SignWeights",
    "validate_placement",
    "full_placement",
    "cost_sign_count",
    "cost_sign_distribution",
    "cost_sign_failure",
    "total_sign_cost",
    "propose_sign_move",
    "refine_signs",
    "placement_to_doc",
    "parse_placement",
]


@dataclass(frozen=True)
class Sign:
    """One directed entry: at ``node``, for ``destination``, pointing along
    the edge toward ``next_node``."""

    node: str
    destination: str
    next_node: str


@dataclass(frozen=True)
class SignWeights:
    """Blend weights for the three sign cost terms plus the failure-rate
    tolerance that turns the failure term into a hard cap."""

    count: float = 1.0
    distribution: float = 1.0
    failure: float = 10.0
    tolerance: float = 0.2

    def __post_init__(self) -> None:
        for name in ("count", "distribution", "failure"):
            if getattr(self, name) < 0:
                raise ValueError(f"weight {name} must be >= 0")
        if not (0.0 <= self.tolerance <= 1.0):
            raise ValueError("tolerance must lie in [0, 1]")


@dataclass(frozen=True)
class SignPlacement:
    """Immutable set of sign entries, unique per (node, destination)."""

    entries: tuple[Sign, ...]
    _arrow: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self) -> None:
        ordered = tuple(sorted(self.entries, key=lambda s: (s.node, s.destination)))
        object.__setattr__(self, "entries", ordered)
        arrows: dict[tuple[str, str], str] = {}
        for s in ordered:
            key = (s.node, s.destination)
            if key in arrows:
                raise LayoutError(f"duplicate sign for destination '{s.destination}' at '{s.node}'")
            arrows[key] = s.next_node
        object.__setattr__(self, "_arrow", arrows)

    def __len__(self) -> int:
        return len(self.entries)

    def has(self, node: str, destination: str) -> bool:
        return (node, destination) in self._arrow

    def arrow(self, node: str, destination: str) -> str:
        return self._arrow[(node, destination)]

    def boards(self) -> dict[str, tuple[Sign, ...]]:
        """Entries grouped by node: one physical board per node."""
        grouped: dict[str, list[Sign]] = {}
        for s in self.entries:
            grouped.setdefault(s.node, []).append(s)
        return {node: tuple(signs) for node, signs in grouped.items()}

    def with_added(self, signs: Iterable[Sign]) -> "SignPlacement":
        """New placement with ``signs`` merged in; existing (node,
        destination) entries win over incoming duplicates."""
        merged = list(self.entries)
        present = set(self._arrow)
        for s in signs:
            if (s.node, s.destination) not in present:
                merged.append(s)
                present.add((s.node, s.destination))
        return SignPlacement(tuple(merged))

    def without(self, keys: Iterable[tuple[str, str]]) -> "SignPlacement":
        drop = set(keys)
        return SignPlacement(
            tuple(s for s in self.entries if (s.node, s.destination) not in drop)
        )


def validate_placement(graph: LayoutGraph, placement: SignPlacement) -> None:
    """Every entry must sit on an existing node and point along an edge."""
    for s in placement.entries:
        if s.node not in graph.nodes:
            raise LayoutError(f"sign at unknown node '{s.node}'")
        if s.destination not in graph.nodes:
            raise LayoutError(f"sign for unknown destination '{s.destination}'")
        if not graph.has_edge(s.node, s.next_node):
            raise LayoutError(
                f"sign at '{s.node}': arrow target '{s.next_node}' is not adjacent"
            )


def _lifted_paths(graph: LayoutGraph, scheme: WayfindingScheme) -> list[tuple[str, ...]]:
    return [graph.lift_path(p.nodes) for p in scheme.paths]


def full_placement(graph: LayoutGraph, scheme: WayfindingScheme) -> SignPlacement:
    """A sign at every path node except the destination, each pointing to
    its successor on the (subdivided) path.

    Scenarios sharing a node toward the same destination keep the entry of
    the earliest scenario; entries are unique per (node, destination).
    """
    signs: list[Sign] = []
    seen: set[tuple[str, str]] = set()
    for z, lifted in zip(scheme.scenarios, _lifted_paths(graph, scheme)):
        for u, v in zip(lifted, lifted[1:]):
            key = (u, z.destination)
            if key not in seen:
                seen.add(key)
                signs.append(Sign(u, z.destination, v))
    return SignPlacement(tuple(signs))


# ---- cost terms ----

def cost_sign_count(placement: SignPlacement, graph: LayoutGraph) -> float:
    """Entry count over the (subdivided) graph's node count."""
    return len(placement.entries) / len(graph.nodes)


def _pstdev(values: Sequence[float]) -> float:
    mean = sum(values) / len(values)
    return math.sqrt(sum((v - mean) ** 2 for v in values) / len(values))


def cost_sign_distribution(
    placement: SignPlacement, graph: LayoutGraph, scheme: WayfindingScheme
) -> float:
    """Mean over scenarios of sigma(p) / L(p), where sigma(p) is the
    population standard deviation of the along-path spacing between
    consecutive signs serving the scenario's destination.

    The leading (source to first sign) and trailing (last sign to
    destination) gaps count; a path without signs has a single gap and
    contributes zero.
    """
    n = len(scheme.scenarios)
    if n == 0:
        return 0.0
    acc = 0.0
    for z, lifted in zip(scheme.scenarios, _lifted_paths(graph, scheme)):
        positions = [0.0]
        for u, v in zip(lifted, lifted[1:]):
            positions.append(positions[-1] + graph.edge_length(u, v))
        length = positions[-1]
        marks = [
            pos for node, pos in zip(lifted, positions) if placement.has(node, z.destination)
        ]
        gaps = []
        last = 0.0
        for pos in marks:
            gaps.append(pos - last)
            last = pos
        gaps.append(length - last)
        if len(gaps) >= 2 and length > 0:
            acc += _pstdev(gaps) / length
    return acc / n


def cost_sign_failure(failure_rate: float, tolerance: float = 0.2) -> float:
    """The failure rate itself while within tolerance, +inf beyond it."""
    if not (0.0 <= failure_rate <= 1.0):
        raise ValueError("failure rate must lie in [0, 1]")
    return failure_rate if failure_rate <= tolerance else math.inf


def total_sign_cost(
    placement: SignPlacement,
    graph: LayoutGraph,
    scheme: WayfindingScheme,
    failure_rate: float,
    weights: SignWeights | None = None,
) -> float:
    """Weighted sum of the three terms; infinite exactly when the failure
    term is (even under a zero failure weight: the tolerance is a hard cap)."""
    w = weights or SignWeights()
    c_fail = cost_sign_failure(failure_rate, w.tolerance)
    if math.isinf(c_fail):
        return math.inf
    return (
        w.count * cost_sign_count(placement, graph)
        + w.distribution * cost_sign_distribution(placement, graph, scheme)
        + w.failure * c_fail
    )


# ---- annealing moves ----

_MOVE_KINDS = ("add", "remove", "relocate")


def propose_sign_move(
    placement: SignPlacement,
    scheme: WayfindingScheme,
    graph: LayoutGraph,
    rng: random.Random,
) -> SignPlacement:
    """One neighborhood move: add 1-2 signs at unsigned path nodes, remove
    1-2 existing entries, or relocate one entry along its scenario's path.

    The kind is drawn uniformly; infeasible kinds (nothing to add, remove,
    or relocate) are redrawn.  Added and relocated signs always point to the
    path successor.
    """
    paths = _lifted_paths(graph, scheme)
    dests = [z.destination for z in scheme.scenarios]

    def unsigned(si: int) -> list[int]:
        path, dest = paths[si], dests[si]
        return [i for i in range(len(path) - 1) if not placement.has(path[i], dest)]

    def signed(si: int) -> list[int]:
        path, dest = paths[si], dests[si]
        return [i for i in range(len(path) - 1) if placement.has(path[i], dest)]

    for _ in range(100):
        kind = rng.choice(_MOVE_KINDS)
        if kind == "add":
            count = rng.choice((1, 2))
            result = placement
            added = 0
            for _ in range(count):
                slots_by_scen = {
                    si: [
                        i
                        for i in range(len(paths[si]) - 1)
                        if not result.has(paths[si][i], dests[si])
                    ]
                    for si in range(len(paths))
                }
                open_scen = [si for si, slots in slots_by_scen.items() if slots]
                if not open_scen:
                    break
                si = rng.choice(open_scen)
                path, dest = paths[si], dests[si]
                i = rng.choice(slots_by_scen[si])
                result = result.with_added([Sign(path[i], dest, path[i + 1])])
                added += 1
            if added:
                return result
        elif kind == "remove":
            if placement.entries:
                count = min(rng.choice((1, 2)), len(placement.entries))
                victims = rng.sample(placement.entries, count)
                return placement.without((s.node, s.destination) for s in victims)
        else:
            movable = [si for si in range(len(paths)) if signed(si) and unsigned(si)]
            if movable:
                si = rng.choice(movable)
                path, dest = paths[si], dests[si]
                src = rng.choice(signed(si))
                dst = rng.choice(unsigned(si))
                return placement.without([(path[src], dest)]).with_added(
                    [Sign(path[dst], dest, path[dst + 1])]
                )
    return placement


def refine_signs(
    graph: LayoutGraph,
    scheme: WayfindingScheme,
    scenarios: Sequence[NavScenario] | None = None,
    weights: SignWeights | None = None,
    params: AgentParams | None = None,
    schedule: AnnealSchedule | None = None,
    progress: Callable[[int, float], None] | None = None,
) -> tuple[SignPlacement, list[TracePoint]]:
    """Anneal the sign placement down from the full placement.

    The failure rate is re-simulated only when the proposal actually changes
    the placement, with a fresh simulation seed drawn from the master stream
    per evaluation.  Returns the best finite-cost placement seen and the
    iteration trace.  Raises :class:`LayoutError` if the full placement
    already exceeds the failure tolerance (no feasible starting point).
    """
    weights = weights or SignWeights()
    params = params or AgentParams()
    schedule = schedule or AnnealSchedule.for_signs()
    zs = tuple(scenarios) if scenarios is not None else scheme.scenarios

    master = random.Random(schedule.seed)

    def failure_of(placement: SignPlacement) -> float:
        sim_seed = master.getrandbits(63)
        return evaluate_placement(graph, placement, scheme, zs, params, sim_seed).failure_rate

    current = full_placement(graph, scheme)
    current_fail = failure_of(current)
    if current_fail > weights.tolerance:
        raise LayoutError(
            f"full placement already fails {current_fail:.0%} of agents, above the "
            f"{weights.tolerance:.0%} tolerance; no feasible refinement exists"
        )
    cost = total_sign_cost(current, graph, scheme, current_fail, weights)
    best, best_cost = current, cost

    temperature = schedule.t_initial
    trace = [TracePoint(0, temperature, cost, best_cost)]
    best_history = [best_cost]
    for iteration in range(1, schedule.max_iters + 1):
        proposal = propose_sign_move(current, scheme, graph, master)
        if proposal == current:
            proposal_fail = current_fail
        else:
            proposal_fail = failure_of(proposal)
        proposal_cost = total_sign_cost(proposal, graph, scheme, proposal_fail, weights)
        if metropolis_accept(cost, proposal_cost, temperature, master):
            current, current_fail, cost = proposal, proposal_fail, proposal_cost
            if cost < best_cost:
                best, best_cost = current, cost
        temperature = max(temperature * schedule.cooling, schedule.t_min)
        trace.append(TracePoint(iteration, temperature, cost, best_cost))
        best_history.append(best_cost)
        if progress is not None and iteration % 50 == 0:
            progress(iteration, best_cost)
        if _stop_on_stale_best(best_history, schedule.stop_window, schedule.stop_rel_change):
            break
    return best, trace


# ---- placement file format ----

_ENTRY_KEYS = {"node", "destination", "next_node"}


def _bearing_deg(graph: LayoutGraph, s: Sign) -> float:
    (x1, y1), (x2, y2) = graph.position(s.node), graph.position(s.next_node)
    return math.degrees(math.atan2(y2 - y1, x2 - x1)) % 360.0


def placement_to_doc(placement: SignPlacement, graph: LayoutGraph) -> dict:
    """JSON document: flat entry list plus a board-grouped rendering view
    with arrow bearings in degrees counterclockwise from +x."""
    return {
        "entries": [
            {"node": s.node, "destination": s.destination, "next_node": s.next_node}
            for s in placement.entries
        ],
        "boards": [
            {
                "node": node,
                "signs": [
                    {"destination": s.destination, "bearing_deg": _bearing_deg(graph, s)}
                    for s in signs
                ],
            }
            for node, signs in sorted(placement.boards().items())
        ],
    }


def parse_placement(doc: Mapping, graph: LayoutGraph) -> SignPlacement:
    if not isinstance(doc, Mapping):
        raise LayoutError("placement root must be an object")
    for key in doc:
        if key not in {"entries", "boards"}:
            raise LayoutError(f"unknown key '{key}' in placement")
    signs = []
    for i, raw in enumerate(doc.get("entries", [])):
        for key in raw:
            if key not in _ENTRY_KEYS:
                raise LayoutError(f"unknown key '{key}' in placement entry #{i}")
        for required in _ENTRY_KEYS:
            if required not in raw:
                raise LayoutError(f"placement entry #{i} is missing '{required}'")
        signs.append(Sign(str(raw["node"]), str(raw["destination"]), str(raw["next_node"])))
    placement = SignPlacement(tuple(signs))
    validate_placement(graph, placement)
    return placement
