"""Loopless shortest paths and ranked path enumeration.

All tie-breaking is deterministic: among equal-length paths the one with the
lexicographically smallest node-id sequence wins.  Path lengths are always
recomputed by summing edge lengths in path order, so equal node sequences
produce bit-identical lengths no matter how they were discovered.
"""
from __future__ import annotations

import heapq
import logging
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from wayfinder.graph import LayoutGraph, NavScenario, UnreachableError

__all__ = [
    "Path",
    "shortest_path",
    "shortest_path_to_set",
    "iter_shortest_paths",
    "yen_k_shortest",
    "adaptive_candidates",
]

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Path:
    """A loopless node sequence with its total length in meters."""

    nodes: tuple[str, ...]
    length: float

    def __len__(self) -> int:
        return len(self.nodes)

    @property
    def source(self) -> str:
        return self.nodes[0]

    @property
    def destination(self) -> str:
        return self.nodes[-1]

    def edges(self) -> Iterator[tuple[str, str]]:
        """Unordered edge pairs along the path (smaller id first)."""
        for u, v in zip(self.nodes, self.nodes[1:]):
            yield (u, v) if u <= v else (v, u)


def _make_path(graph: LayoutGraph, nodes: Sequence[str]) -> Path:
    return Path(tuple(nodes), graph.path_length(nodes))


def _dijkstra(
    graph: LayoutGraph,
    source: str,
    targets: frozenset[str],
    banned_nodes: frozenset[str] = frozenset(),
    banned_edges: frozenset[tuple[str, str]] = frozenset(),
) -> Path | None:
    """Shortest path from ``source`` to any node in ``targets``.

    Heap entries carry the full node sequence so that equal-length paths pop
    in lexicographic order; with strictly positive edge lengths the first
    settle of a node is therefore its (length, sequence)-minimal path.
    """
    if source in targets:
        return Path((source,), 0.0)
    heap: list[tuple[float, tuple[str, ...]]] = [(0.0, (source,))]
    settled: set[str] = set()
    while heap:
        dist, nodes = heapq.heappop(heap)
        tail = nodes[-1]
        if tail in settled:
            continue
        settled.add(tail)
        if tail in targets:
            return Path(nodes, dist)
        for nxt, weight in graph.adjacency[tail].items():
            if nxt in settled or nxt in banned_nodes:
                continue
            pair = (tail, nxt) if tail <= nxt else (nxt, tail)
            if pair in banned_edges:
                continue
            heapq.heappush(heap, (dist + weight, nodes + (nxt,)))
    return None


def shortest_path(graph: LayoutGraph, source: str, destination: str) -> Path:
    """Minimum-length path; ties resolved by smallest node-id sequence.

    ``source == destination`` yields a single-node path of length zero.
    Raises :class:`UnreachableError` when no path exists.
    """
    for end in (source, destination):
        if end not in graph.nodes:
            raise KeyError(f"unknown node '{end}'")
    found = _dijkstra(graph, source, frozenset((destination,)))
    if found is None:
        raise UnreachableError(f"no path from '{source}' to '{destination}'")
    return found


def shortest_path_to_set(graph: LayoutGraph, source: str, targets: Iterable[str]) -> Path:
    """Shortest path from ``source`` to the nearest of ``targets``."""
    target_set = frozenset(targets)
    if not target_set:
        raise ValueError("empty target set")
    found = _dijkstra(graph, source, target_set)
    if found is None:
        raise UnreachableError(f"no path from '{source}' to any of {sorted(target_set)}")
    return found


def iter_shortest_paths(graph: LayoutGraph, source: str, destination: str) -> Iterator[Path]:
    """Yield loopless paths in (length, node sequence) order, shortest first.

    Classical deviation-based ranking: each yielded path spawns candidate
    deviations at every prefix, computed with the deviation edges of already
    selected paths removed.  Exhausts after the last loopless path.
    """
    first = shortest_path(graph, source, destination)
    if source == destination:
        yield first
        return
    yield first
    selected: list[Path] = [first]
    candidates: list[tuple[float, tuple[str, ...]]] = []
    seen: set[tuple[str, ...]] = {first.nodes}
    while True:
        prev = selected[-1].nodes
        for i in range(len(prev) - 1):
            spur = prev[i]
            root = prev[: i + 1]
            root_nodes = frozenset(root[:-1])
            banned: set[tuple[str, str]] = set()
            for p in selected:
                if p.nodes[: i + 1] == root and len(p.nodes) > i + 1:
                    u, v = p.nodes[i], p.nodes[i + 1]
                    banned.add((u, v) if u <= v else (v, u))
            spur_path = _dijkstra(
                graph,
                spur,
                frozenset((destination,)),
                banned_nodes=root_nodes,
                banned_edges=frozenset(banned),
            )
            if spur_path is None:
                continue
            total = root[:-1] + spur_path.nodes
            if total not in seen:
                seen.add(total)
                # Re-sum from scratch: keeps lengths identical to any other
                # discovery route of the same sequence.
                heapq.heappush(candidates, (graph.path_length(total), total))
        if not candidates:
            return
        length, nodes = heapq.heappop(candidates)
        nxt = Path(nodes, length)
        selected.append(nxt)
        yield nxt


def yen_k_shortest(graph: LayoutGraph, source: str, destination: str, k: int) -> list[Path]:
    """Up to ``k`` loopless shortest paths, ranked by (length, sequence).

    Prefix-monotone: the first ``j`` results are identical for any two calls
    with ``k >= j``.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    out: list[Path] = []
    for path in iter_shortest_paths(graph, source, destination):
        out.append(path)
        if len(out) >= k:
            break
    return out


# Multiplicative slack applied to the stretch cutoff so that alternatives
# sitting exactly on the boundary are kept despite float rounding.
_CUTOFF_SLACK = 1e-9


def adaptive_candidates(
    graph: LayoutGraph,
    scenario: NavScenario,
    stretch: float = 0.16,
    k_cap: int = 50,
) -> list[Path]:
    """All loopless paths within ``(1 + stretch)`` of the scenario's shortest
    path length, inclusive at the boundary, capped at ``k_cap`` entries.

    The shortest path is always included.  Hitting the cap is reported via a
    warning log record.
    """
    if stretch < 0:
        raise ValueError(f"stretch must be >= 0, got {stretch}")
    if k_cap < 1:
        raise ValueError(f"k_cap must be >= 1, got {k_cap}")
    out: list[Path] = []
    cutoff: float | None = None
    for path in iter_shortest_paths(graph, scenario.source, scenario.destination):
        if cutoff is None:
            cutoff = path.length * (1.0 + stretch) * (1.0 + _CUTOFF_SLACK)
        if path.length > cutoff:
            break
        out.append(path)
        if len(out) >= k_cap:
            log.warning(
                "candidate cap %d hit for scenario (%s, %s)",
                k_cap,
                scenario.source,
                scenario.destination,
            )
            break
    return out
