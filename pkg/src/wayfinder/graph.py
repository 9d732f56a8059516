"""Layout graphs: nodes, edges, navigation scenarios, and the layout file format.

A layout graph is an undirected, connected-enough street/corridor network.
Distances live on edges (meters); an edge length may exceed the straight-line
distance between its endpoints (curved road) but never undercut it.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping, Sequence

__all__ = [
    "NodeKind",
    "Node",
    "Edge",
    "NavScenario",
    "LayoutGraph",
    "LayoutError",
    "UnreachableError",
    "build_graph",
    "default_scenarios",
    "subdivide_edges",
    "total_edge_length",
    "parse_layout",
    "serialize_layout",
    "load_layout",
    "dump_layout",
]

# Relative slack used when comparing edge lengths against straight-line
# distances, and generally when "equal" floats meet validation.
_REL_TOL = 1e-9


class LayoutError(ValueError):
    """A layout file or graph failed validation."""


class UnreachableError(LayoutError):
    """No path exists between two nodes that must be connected."""


class NodeKind(str, Enum):
    INTERSECTION = "intersection"
    ENTRANCE = "entrance"
    POI = "poi"
    AUXILIARY = "auxiliary"


@dataclass(frozen=True)
class Node:
    """A point of the layout. Coordinates are planar meters."""

    id: str
    x: float
    y: float
    kind: NodeKind = NodeKind.INTERSECTION
    label: str = ""


@dataclass(frozen=True)
class Edge:
    """Undirected connection between two nodes; length in meters, > 0."""

    a: str
    b: str
    length: float

    def pair(self) -> tuple[str, str]:
        return (self.a, self.b) if self.a <= self.b else (self.b, self.a)


@dataclass(frozen=True)
class NavScenario:
    """A source -> destination demand pair with importance weight in [0, 1]."""

    source: str
    destination: str
    importance: float = 1.0


class LayoutGraph:
    """Immutable undirected graph of a facility layout.

    Build instances through :func:`build_graph` or :func:`parse_layout`;
    the constructor assumes already-validated parts.
    """

    def __init__(
        self,
        nodes: Sequence[Node],
        edges: Sequence[Edge],
        chains: Mapping[tuple[str, str], tuple[str, ...]] | None = None,
    ) -> None:
        self.nodes: dict[str, Node] = {n.id: n for n in sorted(nodes, key=lambda n: n.id)}
        self.edges: tuple[Edge, ...] = tuple(sorted(edges, key=lambda e: e.pair()))
        adj: dict[str, dict[str, float]] = {n.id: {} for n in nodes}
        for e in self.edges:
            adj[e.a][e.b] = e.length
            adj[e.b][e.a] = e.length
        # Neighbor iteration order is sorted for deterministic traversals.
        self.adjacency: dict[str, dict[str, float]] = {
            nid: dict(sorted(adj[nid].items())) for nid in self.nodes
        }
        # For graphs produced by subdivide_edges: original unordered edge pair
        # -> full node chain (a, aux..., b) oriented from the pair's smaller id.
        self.chains: dict[tuple[str, str], tuple[str, ...]] = dict(chains or {})

    def __repr__(self) -> str:  # pragma: no cover
        return f"LayoutGraph({len(self.nodes)} nodes, {len(self.edges)} edges)"

    def node(self, node_id: str) -> Node:
        return self.nodes[node_id]

    def position(self, node_id: str) -> tuple[float, float]:
        n = self.nodes[node_id]
        return (n.x, n.y)

    def degree(self, node_id: str) -> int:
        return len(self.adjacency[node_id])

    def neighbors(self, node_id: str) -> tuple[str, ...]:
        return tuple(self.adjacency[node_id])

    def edge_length(self, a: str, b: str) -> float:
        try:
            return self.adjacency[a][b]
        except KeyError:
            raise LayoutError(f"no edge between '{a}' and '{b}'") from None

    def has_edge(self, a: str, b: str) -> bool:
        return b in self.adjacency.get(a, ())

    def euclid(self, a: str, b: str) -> float:
        na, nb = self.nodes[a], self.nodes[b]
        return math.hypot(na.x - nb.x, na.y - nb.y)

    def path_length(self, nodes: Sequence[str]) -> float:
        """Sum of edge lengths along ``nodes``, in path order."""
        total = 0.0
        for u, v in zip(nodes, nodes[1:]):
            total += self.edge_length(u, v)
        return total

    def lift_path(self, nodes: Sequence[str]) -> tuple[str, ...]:
        """Map a path of a parent graph onto this graph.

        For graphs created by :func:`subdivide_edges`, each parent edge is
        replaced by its auxiliary chain.  For directly built graphs this is
        the identity.
        """
        if not self.chains:
            return tuple(nodes)
        out: list[str] = [nodes[0]] if nodes else []
        for u, v in zip(nodes, nodes[1:]):
            key = (u, v) if u <= v else (v, u)
            chain = self.chains.get(key)
            if chain is None:
                out.append(v)
                continue
            seq = chain if chain[0] == u else tuple(reversed(chain))
            out.extend(seq[1:])
        return tuple(out)

    def bounding_box(self) -> tuple[float, float, float, float]:
        """(min_x, min_y, max_x, max_y) over all nodes."""
        xs = [n.x for n in self.nodes.values()]
        ys = [n.y for n in self.nodes.values()]
        return (min(xs), min(ys), max(xs), max(ys))

    def reachable_from(self, start: str) -> set[str]:
        seen = {start}
        stack = [start]
        while stack:
            u = stack.pop()
            for v in self.adjacency[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        return seen


def build_graph(nodes: Iterable[Node], edges: Iterable[Edge | tuple]) -> LayoutGraph:
    """Validate parts and assemble a :class:`LayoutGraph`.

    Edges may be given as :class:`Edge` or ``(a, b)`` / ``(a, b, length)``
    tuples; a missing or ``None`` length is filled with the straight-line
    distance between the endpoints.

    Raises :class:`LayoutError` on duplicate node ids, dangling edge
    endpoints, self-loops, duplicate edges, non-positive lengths, or lengths
    shorter than the straight-line distance.
    """
    node_list = list(nodes)
    if not node_list:
        raise LayoutError("layout has no nodes")
    by_id: dict[str, Node] = {}
    for n in node_list:
        if n.id in by_id:
            raise LayoutError(f"duplicate node id '{n.id}'")
        if not n.id:
            raise LayoutError("empty node id")
        if not (math.isfinite(n.x) and math.isfinite(n.y)):
            raise LayoutError(f"node '{n.id}' has a non-finite position")
        by_id[n.id] = n

    built: list[Edge] = []
    seen_pairs: set[tuple[str, str]] = set()
    for item in edges:
        if isinstance(item, Edge):
            a, b, length = item.a, item.b, item.length
        else:
            a, b = item[0], item[1]
            length = item[2] if len(item) > 2 else None
        for end in (a, b):
            if end not in by_id:
                raise LayoutError(f"edge ('{a}', '{b}'): dangling endpoint '{end}'")
        if a == b:
            raise LayoutError(f"self-loop at '{a}'")
        na, nb = by_id[a], by_id[b]
        straight = math.hypot(na.x - nb.x, na.y - nb.y)
        if length is None:
            length = straight
        length = float(length)
        if not math.isfinite(length) or length <= 0.0:
            raise LayoutError(f"edge ('{a}', '{b}'): non-positive length {length!r}")
        if length < straight * (1.0 - _REL_TOL) - _REL_TOL:
            raise LayoutError(
                f"edge ('{a}', '{b}'): length {length:g} is shorter than the "
                f"straight-line distance {straight:g}"
            )
        pair = (a, b) if a <= b else (b, a)
        if pair in seen_pairs:
            raise LayoutError(f"duplicate edge between '{pair[0]}' and '{pair[1]}'")
        seen_pairs.add(pair)
        built.append(Edge(a, b, length))
    return LayoutGraph(node_list, built)


def total_edge_length(graph: LayoutGraph) -> float:
    """Total length of all edges (each undirected edge counted once)."""
    return sum(e.length for e in graph.edges)


def default_scenarios(graph: LayoutGraph) -> list[NavScenario]:
    """One scenario per (entrance, POI) ordered pair, equal importance.

    Every scenario gets importance ``1 / count``.  Pairs are emitted in
    lexicographic (source, destination) order.  No entrances or no POIs
    yields an empty list.
    """
    entrances = sorted(n.id for n in graph.nodes.values() if n.kind is NodeKind.ENTRANCE)
    pois = sorted(n.id for n in graph.nodes.values() if n.kind is NodeKind.POI)
    pairs = [(e, p) for e in entrances for p in pois]
    if not pairs:
        return []
    weight = 1.0 / len(pairs)
    return [NavScenario(src, dst, weight) for src, dst in sorted(pairs)]


def validate_scenarios(graph: LayoutGraph, scenarios: Sequence[NavScenario]) -> None:
    """Check scenario endpoints exist, differ, are mutually reachable, and
    carry importance within [0, 1]."""
    for z in scenarios:
        for end in (z.source, z.destination):
            if end not in graph.nodes:
                raise LayoutError(f"scenario ({z.source!r}, {z.destination!r}): unknown node '{end}'")
        if z.source == z.destination:
            raise LayoutError(f"scenario ({z.source!r}, {z.destination!r}): source equals destination")
        if not (0.0 <= z.importance <= 1.0):
            raise LayoutError(
                f"scenario ({z.source!r}, {z.destination!r}): importance "
                f"{z.importance!r} outside [0, 1]"
            )
    # One reachability sweep per distinct source.
    for src in sorted({z.source for z in scenarios}):
        reach = graph.reachable_from(src)
        for z in scenarios:
            if z.source == src and z.destination not in reach:
                raise UnreachableError(
                    f"scenario ({z.source!r}, {z.destination!r}): destination unreachable"
                )


def _segment_count(length: float, spacing: float) -> int:
    """Smallest piece count whose segments are strictly shorter than spacing."""
    n = max(1, math.ceil(length / spacing))
    if length / n >= spacing:
        n += 1
    return n


def subdivide_edges(graph: LayoutGraph, spacing: float) -> LayoutGraph:
    """Split every edge strictly longer than ``spacing`` with equally spaced
    auxiliary nodes so that each resulting segment is shorter than ``spacing``.

    Edge length is divided evenly over the segments (total path length is
    preserved exactly up to float rounding); auxiliary node positions are
    interpolated along the straight line between the endpoints.  Applying the
    same spacing twice is a no-op.  The result records, per original edge,
    the node chain that replaced it (see :meth:`LayoutGraph.lift_path`).
    """
    if spacing <= 0.0:
        raise LayoutError(f"subdivision spacing must be positive, got {spacing!r}")
    nodes: list[Node] = list(graph.nodes.values())
    edges: list[Edge] = []
    chains: dict[tuple[str, str], tuple[str, ...]] = {}
    for e in graph.edges:
        if e.length <= spacing:
            edges.append(e)
            continue
        lo, hi = e.pair()
        pieces = _segment_count(e.length, spacing)
        na, nb = graph.nodes[lo], graph.nodes[hi]
        chain = [lo]
        for i in range(1, pieces):
            t = i / pieces
            aux_id = f"{lo}+{hi}.{i}"
            if aux_id in graph.nodes:
                raise LayoutError(f"auxiliary id '{aux_id}' collides with an existing node")
            nodes.append(
                Node(
                    aux_id,
                    na.x + (nb.x - na.x) * t,
                    na.y + (nb.y - na.y) * t,
                    NodeKind.AUXILIARY,
                )
            )
            chain.append(aux_id)
        chain.append(hi)
        seg = e.length / pieces
        for u, v in zip(chain, chain[1:]):
            edges.append(Edge(u, v, seg))
        chains[(lo, hi)] = tuple(chain)
    return LayoutGraph(nodes, edges, chains)


# ---- layout file format ----

_NODE_KEYS = {"id", "x", "y", "kind", "label"}
_EDGE_KEYS = {"a", "b", "length"}
_SCENARIO_KEYS = {"source", "destination", "importance"}
_TOP_KEYS = {"nodes", "edges", "scenarios"}


def _reject_unknown(obj: Mapping, allowed: set[str], where: str) -> None:
    for key in obj:
        if key not in allowed:
            raise LayoutError(f"unknown key '{key}' in {where}")


def parse_layout(data: Mapping) -> tuple[LayoutGraph, list[NavScenario]]:
    """Parse a layout mapping (already JSON-decoded) into a graph and
    its explicit scenarios.

    Top-level keys: ``nodes``, ``edges``, and optional ``scenarios``.  Any
    unknown key, at any level, is rejected with a diagnostic naming it.
    Scenario entries without an ``importance`` get ``1 / len(scenarios)``.
    """
    if not isinstance(data, Mapping):
        raise LayoutError("layout root must be an object")
    _reject_unknown(data, _TOP_KEYS, "layout")
    for required in ("nodes", "edges"):
        if required not in data:
            raise LayoutError(f"layout is missing the '{required}' key")

    nodes: list[Node] = []
    for i, raw in enumerate(data["nodes"]):
        _reject_unknown(raw, _NODE_KEYS, f"node #{i}")
        for required in ("id", "x", "y"):
            if required not in raw:
                raise LayoutError(f"node #{i} is missing '{required}'")
        kind_raw = raw.get("kind", "intersection")
        try:
            kind = NodeKind(kind_raw)
        except ValueError:
            raise LayoutError(f"node '{raw['id']}': unknown kind '{kind_raw}'") from None
        nodes.append(
            Node(str(raw["id"]), float(raw["x"]), float(raw["y"]), kind, str(raw.get("label", "")))
        )

    edges: list[tuple] = []
    for i, raw in enumerate(data["edges"]):
        _reject_unknown(raw, _EDGE_KEYS, f"edge #{i}")
        for required in ("a", "b"):
            if required not in raw:
                raise LayoutError(f"edge #{i} is missing '{required}'")
        edges.append((str(raw["a"]), str(raw["b"]), raw.get("length")))

    graph = build_graph(nodes, edges)

    raw_scenarios = data.get("scenarios", [])
    default_weight = 1.0 / len(raw_scenarios) if raw_scenarios else 1.0
    scenarios: list[NavScenario] = []
    for i, raw in enumerate(raw_scenarios):
        _reject_unknown(raw, _SCENARIO_KEYS, f"scenario #{i}")
        for required in ("source", "destination"):
            if required not in raw:
                raise LayoutError(f"scenario #{i} is missing '{required}'")
        weight = raw.get("importance", default_weight)
        scenarios.append(NavScenario(str(raw["source"]), str(raw["destination"]), float(weight)))
    validate_scenarios(graph, scenarios)
    return graph, scenarios


def serialize_layout(graph: LayoutGraph, scenarios: Sequence[NavScenario] = ()) -> dict:
    """Inverse of :func:`parse_layout` (up to key ordering)."""
    return {
        "nodes": [
            {"id": n.id, "x": n.x, "y": n.y, "kind": n.kind.value, "label": n.label}
            for n in graph.nodes.values()
        ],
        "edges": [{"a": e.a, "b": e.b, "length": e.length} for e in graph.edges],
        "scenarios": [
            {"source": z.source, "destination": z.destination, "importance": z.importance}
            for z in scenarios
        ],
    }


def load_layout(path) -> tuple[LayoutGraph, list[NavScenario]]:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise LayoutError(f"{path}: invalid JSON: {exc}") from None
    return parse_layout(data)


def dump_layout(graph: LayoutGraph, scenarios: Sequence[NavScenario], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(serialize_layout(graph, scenarios), fh, indent=2, sort_keys=True)
        fh.write("\n")
