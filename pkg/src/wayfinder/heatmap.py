"""Accessibility fields: how reliably a destination is reached from anywhere.

The layout is resampled at a fine interval and agents are launched from every
sample node toward the destination, each with a budget proportional to its
own shortest distance.  The success rate per sample forms a scalar field over
the network that renders as a heatmap; low-rate pockets are blind zones.

Blind zones are repaired by snapping the reported point to the network and
signing the shortest connector from there to the destination's existing
signed route: a sign at the snap point, at every branching node along the
connector, and at the junction where it meets the route.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field as dc_field
from typing import Mapping, Sequence
from weakref import WeakKeyDictionary

from wayfinder.graph import LayoutError, LayoutGraph, subdivide_edges
from wayfinder.pathing import shortest_path_to_set
from wayfinder.scheme import WayfindingScheme
from wayfinder.signs import Sign, SignPlacement
from wayfinder.simulate import AgentParams, Outcome, _context, _entries_by_destination, _walk

__all__ = [
    "FieldSample",
    "AccessibilityField",
    "compute_field",
    "interpolate",
    "blind_samples",
    "fix_blind_zone",
    "field_to_doc",
    "parse_field",
]


@dataclass(frozen=True)
class FieldSample:
    """Success rate of walks launched from one sample node."""

    node: str
    x: float
    y: float
    rate: float


@dataclass(frozen=True)
class AccessibilityField:
    destination: str
    interval: float
    samples: tuple[FieldSample, ...]
    # Sampling graph kept for interpolation; not part of equality or export.
    graph: LayoutGraph | None = dc_field(default=None, compare=False, repr=False)

    def rate_of(self, node: str) -> float:
        return self._by_node[node].rate

    @property
    def _by_node(self) -> dict[str, FieldSample]:
        cached = getattr(self, "_node_map", None)
        if cached is None:
            cached = {s.node: s for s in self.samples}
            object.__setattr__(self, "_node_map", cached)
        return cached


_sample_graph_cache: "WeakKeyDictionary[LayoutGraph, dict[float, LayoutGraph]]" = (
    WeakKeyDictionary()
)


def _sample_graph(graph: LayoutGraph, interval: float) -> LayoutGraph:
    per_graph = _sample_graph_cache.setdefault(graph, {})
    got = per_graph.get(interval)
    if got is None:
        got = subdivide_edges(graph, interval)
        per_graph[interval] = got
    return got


def compute_field(
    graph: LayoutGraph,
    placement: SignPlacement,
    destination: str,
    interval: float = 25.0,
    params: AgentParams | None = None,
    seed: int | str = 0,
    obstacles: Sequence | None = None,
) -> AccessibilityField:
    """Success-rate field toward ``destination`` over ``graph`` resampled at
    ``interval``.

    Each sample node launches ``agents_per_scenario`` walks with budget
    ``stretch_factor`` times its own shortest distance to the destination.
    RNG streams are derived from the seed and the sample's node id (not its
    position in the sweep), so rates only change where walks actually change.
    Unreachable samples score 0; the destination itself scores 1.
    """
    if destination not in graph.nodes:
        raise LayoutError(f"unknown destination '{destination}'")
    if interval <= 0:
        raise ValueError("interval must be positive")
    params = params or AgentParams()
    sampled = _sample_graph(graph, interval)
    ctx = _context(sampled)
    entries = _entries_by_destination(ctx, placement).get(destination, [])
    dest = ctx.index[destination]
    count = params.agents_per_scenario

    samples: list[FieldSample] = []
    for node in sampled.nodes:
        start = ctx.index[node]
        x, y = ctx.pos[start]
        base = ctx.dist[start][dest]
        if not math.isfinite(base):
            samples.append(FieldSample(node, x, y, 0.0))
            continue
        budget = params.stretch_factor * base
        successes = 0
        ai = 0
        while ai < count:
            rng_move = random.Random(f"{seed}:{node}:{ai}:move")
            rng_perc = random.Random(f"{seed}:{node}:{ai}:see")
            traj, consumed = _walk(
                ctx, entries, start, dest, budget, params, rng_move, rng_perc, obstacles
            )
            copies = 1 if (consumed or ai > 0) else count
            if traj.outcome is Outcome.SUCCESS:
                successes += copies
            ai += copies
        samples.append(FieldSample(node, x, y, successes / count))
    return AccessibilityField(destination, interval, tuple(samples), sampled)


def blind_samples(field: AccessibilityField, threshold: float = 0.5) -> tuple[FieldSample, ...]:
    """Samples whose success rate falls below ``threshold``."""
    return tuple(s for s in field.samples if s.rate < threshold)


def interpolate(field: AccessibilityField, x: float, y: float) -> float:
    """Success rate at an arbitrary point inside the layout's bounding box.

    Points on (or near) a network edge interpolate linearly between its
    endpoint samples; anywhere else the nearest sample wins.  Raises
    :class:`LayoutError` outside the bounding box.
    """
    graph = field.graph
    if graph is None:
        raise LayoutError("field carries no sampling graph; recompute it")
    min_x, min_y, max_x, max_y = graph.bounding_box()
    diag = math.hypot(max_x - min_x, max_y - min_y)
    tol = 1e-6 * (diag if diag > 0 else 1.0)
    if not (min_x - tol <= x <= max_x + tol and min_y - tol <= y <= max_y + tol):
        raise LayoutError(f"point ({x}, {y}) lies outside the layout bounds")

    rate = {s.node: s.rate for s in field.samples}
    best_gap = math.inf
    best_rate = 0.0
    for edge in graph.edges:
        (ax, ay), (bx, by) = graph.position(edge.a), graph.position(edge.b)
        dx, dy = bx - ax, by - ay
        seg2 = dx * dx + dy * dy
        t = 0.0 if seg2 == 0 else max(0.0, min(1.0, ((x - ax) * dx + (y - ay) * dy) / seg2))
        gap = math.hypot(x - (ax + t * dx), y - (ay + t * dy))
        if gap < best_gap:
            best_gap = gap
            best_rate = rate[edge.a] + t * (rate[edge.b] - rate[edge.a])
    if best_gap <= tol:
        return best_rate
    nearest = min(
        field.samples, key=lambda s: (math.hypot(x - s.x, y - s.y), s.node)
    )
    return nearest.rate


def _route_nodes(graph: LayoutGraph, scheme: WayfindingScheme, destination: str) -> list[tuple[str, ...]]:
    routes = [
        graph.lift_path(p.nodes)
        for z, p in zip(scheme.scenarios, scheme.paths)
        if z.destination == destination
    ]
    if not routes:
        raise LayoutError(f"no route serves destination '{destination}'")
    return routes


def fix_blind_zone(
    graph: LayoutGraph,
    scheme: WayfindingScheme,
    placement: SignPlacement,
    x: float,
    y: float,
    destination: str,
) -> SignPlacement:
    """Sign the shortest connector from the point nearest (x, y) to the
    destination's signed route.

    Signs go at the snap node, at every branching (degree >= 3) node along
    the connector, and at the junction if onward guidance there is
    ambiguous; each points to its successor toward the destination.
    Existing entries are kept as-is, and a snap node that already carries a
    sign for the destination returns the placement unchanged.
    """
    if destination not in graph.nodes:
        raise LayoutError(f"unknown destination '{destination}'")

    def snap_key(node: str) -> tuple[float, str]:
        nx, ny = graph.position(node)
        return (math.hypot(x - nx, y - ny), node)

    snap = min(graph.nodes, key=snap_key)
    if placement.has(snap, destination):
        return placement

    routes = _route_nodes(graph, scheme, destination)
    on_route = set().union(*(set(r) for r in routes))
    connector = shortest_path_to_set(graph, snap, on_route).nodes

    added: list[Sign] = []
    for i, node in enumerate(connector[:-1]):
        if i == 0 or graph.degree(node) >= 3:
            added.append(Sign(node, destination, connector[i + 1]))
    junction = connector[-1]
    if junction != destination and graph.degree(junction) >= 3:
        for route in routes:
            if junction in route:
                succ = route[route.index(junction) + 1]
                added.append(Sign(junction, destination, succ))
                break
    return placement.with_added(added)


# ---- field file format ----

_SAMPLE_KEYS = {"node", "x", "y", "rate"}


def field_to_doc(field: AccessibilityField) -> dict:
    return {
        "destination": field.destination,
        "interval": field.interval,
        "samples": [
            {"node": s.node, "x": s.x, "y": s.y, "rate": s.rate} for s in field.samples
        ],
    }


def parse_field(doc: Mapping, graph: LayoutGraph | None = None) -> AccessibilityField:
    if not isinstance(doc, Mapping):
        raise LayoutError("field root must be an object")
    for key in doc:
        if key not in {"destination", "interval", "samples"}:
            raise LayoutError(f"unknown key '{key}' in field")
    for required in ("destination", "interval", "samples"):
        if required not in doc:
            raise LayoutError(f"field is missing '{required}'")
    samples = []
    for i, raw in enumerate(doc["samples"]):
        for key in raw:
            if key not in _SAMPLE_KEYS:
                raise LayoutError(f"unknown key '{key}' in field sample #{i}")
        for required in _SAMPLE_KEYS:
            if required not in raw:
                raise LayoutError(f"field sample #{i} is missing '{required}'")
        rate = float(raw["rate"])
        if not (0.0 <= rate <= 1.0):
            raise LayoutError(f"field sample #{i} rate {rate} outside [0, 1]")
        samples.append(FieldSample(str(raw["node"]), float(raw["x"]), float(raw["y"]), rate))
    return AccessibilityField(
        str(doc["destination"]), float(doc["interval"]), tuple(samples), graph
    )
