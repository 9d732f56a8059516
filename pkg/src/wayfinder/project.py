"""Project directory store and pipeline orchestration.

A project is a directory of canonical JSON documents:

    layout.json          nodes, edges, scenarios (input)
    config.json          every knob for every stage (optional; defaults)
    scheme.json          the optimized path per scenario + cost breakdown
    signs.json           sign entries, boards, failure rate + cost breakdown
    fields/<dest>.json   accessibility field per destination
    traces/scheme.csv    annealing trace of the scheme stage
    traces/signs.csv     annealing trace of the sign stage

All writers emit sorted-key, two-space-indented JSON with a trailing
newline, so identical inputs and seed reproduce the files byte for byte.
"""
from __future__ import annotations

import json
import math
import os
from pathlib import Path
from typing import Callable, Mapping, Sequence

from wayfinder.config import ProjectConfig, config_to_doc, parse_config
from wayfinder.graph import (
    LayoutError,
    LayoutGraph,
    NavScenario,
    default_scenarios,
    load_layout,
    subdivide_edges,
)
from wayfinder.heatmap import (
    AccessibilityField,
    blind_samples,
    compute_field,
    field_to_doc,
    fix_blind_zone,
    parse_field,
)
from wayfinder.pathing import Path as RoutePath
from wayfinder.scheme import (
    TracePoint,
    WayfindingScheme,
    cost_global_length,
    cost_global_node,
    cost_local_angle,
    cost_local_length,
    cost_local_node,
    optimize_scheme,
    total_scheme_cost,
)
from wayfinder.signs import (
    SignPlacement,
    cost_sign_count,
    cost_sign_distribution,
    cost_sign_failure,
    full_placement,
    parse_placement,
    placement_to_doc,
    refine_signs,
    total_sign_cost,
)
from wayfinder.simulate import SimOutcome, evaluate_placement

__all__ = [
    "ProjectStore",
    "write_json",
    "scheme_to_doc",
    "parse_scheme",
    "signs_to_doc",
    "parse_signs",
    "write_trace",
    "report_seed",
]

_REL_TOL = 1e-9


def write_json(path: Path, doc) -> None:
    """Canonical JSON: sorted keys, 2-space indent, trailing newline.

    Written via a temp file and atomic rename so concurrent readers never
    observe a half-written document.
    """
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    text = json.dumps(doc, sort_keys=True, indent=2, allow_nan=False) + "\n"
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


def write_trace(path: Path, trace: Sequence[TracePoint]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = ["iteration,temperature,current_cost,best_cost"]
    for point in trace:
        lines.append(f"{point.iteration},{point.temperature!r},{point.cost!r},{point.best!r}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def report_seed(config: ProjectConfig) -> str:
    """Seed for user-facing failure-rate reports, distinct from the
    optimization streams so reported rates never overfit the anneal."""
    return f"report:{config.seed + 1}"


# ---- scheme document ----

def _cost_breakdown(graph: LayoutGraph, scheme: WayfindingScheme, weights) -> dict:
    return {
        "local_length": cost_local_length(graph, scheme),
        "local_node": cost_local_node(graph, scheme),
        "local_angle": cost_local_angle(graph, scheme),
        "global_length": cost_global_length(graph, scheme),
        "global_node": cost_global_node(graph, scheme),
        "total": total_scheme_cost(graph, scheme, weights),
    }


def scheme_to_doc(graph: LayoutGraph, scheme: WayfindingScheme, weights=None) -> dict:
    return {
        "scenarios": [
            {
                "source": z.source,
                "destination": z.destination,
                "importance": z.importance,
                "path": list(p.nodes),
                "length": p.length,
            }
            for z, p in zip(scheme.scenarios, scheme.paths)
        ],
        "cost": _cost_breakdown(graph, scheme, weights),
    }


_SCHEME_ENTRY_KEYS = {"source", "destination", "importance", "path", "length"}


def parse_scheme(doc: Mapping, graph: LayoutGraph) -> WayfindingScheme:
    """Rebuild a scheme (one fixed path per scenario) from its document,
    re-deriving every path length from the graph."""
    if not isinstance(doc, Mapping):
        raise LayoutError("scheme root must be an object")
    for key in doc:
        if key not in {"scenarios", "cost"}:
            raise LayoutError(f"unknown key '{key}' in scheme")
    if "scenarios" not in doc:
        raise LayoutError("scheme is missing 'scenarios'")
    scenarios: list[NavScenario] = []
    candidates: list[tuple[RoutePath, ...]] = []
    for i, raw in enumerate(doc["scenarios"]):
        for key in raw:
            if key not in _SCHEME_ENTRY_KEYS:
                raise LayoutError(f"unknown key '{key}' in scheme scenario #{i}")
        for required in ("source", "destination", "path"):
            if required not in raw:
                raise LayoutError(f"scheme scenario #{i} is missing '{required}'")
        nodes = tuple(str(n) for n in raw["path"])
        if len(nodes) < 2:
            raise LayoutError(f"scheme scenario #{i}: path needs at least two nodes")
        if nodes[0] != raw["source"] or nodes[-1] != raw["destination"]:
            raise LayoutError(
                f"scheme scenario #{i}: path endpoints do not match the scenario"
            )
        try:
            length = graph.path_length(nodes)
        except (KeyError, LayoutError) as exc:
            raise LayoutError(f"scheme scenario #{i}: {exc}") from exc
        stored = raw.get("length")
        if stored is not None and not math.isclose(stored, length, rel_tol=_REL_TOL):
            raise LayoutError(
                f"scheme scenario #{i}: stored length {stored} disagrees with the "
                f"layout ({length}); re-run the optimizer"
            )
        scenarios.append(
            NavScenario(str(raw["source"]), str(raw["destination"]), float(raw.get("importance", 1.0)))
        )
        candidates.append((RoutePath(nodes, length),))
    return WayfindingScheme(tuple(scenarios), tuple(candidates), tuple(0 for _ in scenarios))


# ---- signs document ----

def _finite_or_none(value: float) -> float | None:
    return value if math.isfinite(value) else None

def signs_to_doc(
    graph_sub: LayoutGraph,
    scheme: WayfindingScheme,
    placement: SignPlacement,
    failure_rate: float,
    weights,
) -> dict:
    """Cost terms that blow past the failure-rate cap are infinite; they
    serialize as null so the document stays strict JSON."""
    doc = placement_to_doc(placement, graph_sub)
    doc["failure_rate"] = failure_rate
    doc["cost"] = {
        "count": cost_sign_count(placement, graph_sub),
        "distribution": cost_sign_distribution(placement, graph_sub, scheme),
        "failure": _finite_or_none(cost_sign_failure(failure_rate, weights.tolerance)),
        "total": _finite_or_none(
            total_sign_cost(placement, graph_sub, scheme, failure_rate, weights)
        ),
    }
    return doc


def parse_signs(doc: Mapping, graph_sub: LayoutGraph) -> tuple[SignPlacement, float | None]:
    if not isinstance(doc, Mapping):
        raise LayoutError("signs root must be an object")
    for key in doc:
        if key not in {"entries", "boards", "failure_rate", "cost"}:
            raise LayoutError(f"unknown key '{key}' in signs")
    placement = parse_placement({"entries": doc.get("entries", [])}, graph_sub)
    rate = doc.get("failure_rate")
    return placement, (float(rate) if rate is not None else None)


# ---- the store ----

class ProjectStore:
    """Reads and writes one project directory; every run method loads what
    it needs from disk, computes, persists, and returns a summary dict."""

    def __init__(self, root: str | Path) -> None:
        self.root = Path(root)
        self.layout_path = self.root / "layout.json"
        self.config_path = self.root / "config.json"
        self.scheme_path = self.root / "scheme.json"
        self.signs_path = self.root / "signs.json"
        self.fields_dir = self.root / "fields"
        self.traces_dir = self.root / "traces"

    # -- reads --

    def load_layout_doc(self) -> dict:
        if not self.layout_path.exists():
            raise LayoutError(f"project has no layout file at {self.layout_path}")
        return json.loads(self.layout_path.read_text(encoding="utf-8"))

    def load_layout(self) -> tuple[LayoutGraph, list[NavScenario]]:
        if not self.layout_path.exists():
            raise LayoutError(f"project has no layout file at {self.layout_path}")
        graph, scenarios = load_layout(self.layout_path)
        if not scenarios:
            scenarios = default_scenarios(graph)
        return graph, scenarios

    def load_config(self) -> ProjectConfig:
        if not self.config_path.exists():
            return ProjectConfig()
        return parse_config(json.loads(self.config_path.read_text(encoding="utf-8")))

    def save_config(self, config: ProjectConfig) -> None:
        write_json(self.config_path, config_to_doc(config))

    def load_scheme_doc(self) -> dict:
        if not self.scheme_path.exists():
            raise LayoutError("project has no scheme yet; run the scheme optimizer first")
        return json.loads(self.scheme_path.read_text(encoding="utf-8"))

    def load_scheme(self, graph: LayoutGraph) -> WayfindingScheme:
        return parse_scheme(self.load_scheme_doc(), graph)

    def load_signs_doc(self) -> dict:
        if not self.signs_path.exists():
            raise LayoutError("project has no sign placement yet; run the sign refiner first")
        return json.loads(self.signs_path.read_text(encoding="utf-8"))

    def load_placement(self, graph_sub: LayoutGraph) -> tuple[SignPlacement, float | None]:
        return parse_signs(self.load_signs_doc(), graph_sub)

    def field_path(self, destination: str) -> Path:
        return self.fields_dir / f"{destination}.json"

    def load_field_doc(self, destination: str) -> dict:
        path = self.field_path(destination)
        if not path.exists():
            raise LayoutError(f"no field computed for destination '{destination}'")
        return json.loads(path.read_text(encoding="utf-8"))

    def load_field(self, destination: str, graph=None) -> AccessibilityField:
        return parse_field(self.load_field_doc(destination), graph)

    # -- pipeline stages --

    def run_optimize(self, progress: Callable[[int, float], None] | None = None) -> dict:
        graph, scenarios = self.load_layout()
        config = self.load_config()
        scheme, trace = optimize_scheme(
            graph,
            scenarios,
            config.scheme_weights,
            config.scheme_schedule(),
            config.stretch,
            config.k_cap,
            progress,
        )
        doc = scheme_to_doc(graph, scheme, config.scheme_weights)
        write_json(self.scheme_path, doc)
        write_trace(self.traces_dir / "scheme.csv", trace)
        return {"cost": doc["cost"], "iterations": trace[-1].iteration}

    def run_refine(self, progress: Callable[[int, float], None] | None = None) -> dict:
        graph, scenarios = self.load_layout()
        config = self.load_config()
        scheme = self.load_scheme(graph)
        graph_sub = subdivide_edges(graph, config.sign_spacing)
        placement, trace = refine_signs(
            graph_sub,
            scheme,
            None,
            config.sign_weights,
            config.agent,
            config.sign_schedule(),
            progress,
        )
        rate = evaluate_placement(
            graph_sub, placement, scheme, None, config.agent, seed=report_seed(config)
        ).failure_rate
        doc = signs_to_doc(graph_sub, scheme, placement, rate, config.sign_weights)
        write_json(self.signs_path, doc)
        write_trace(self.traces_dir / "signs.csv", trace)
        return {
            "entries": len(placement),
            "full_entries": len(full_placement(graph_sub, scheme)),
            "failure_rate": rate,
            "cost": doc["cost"],
            "iterations": trace[-1].iteration,
        }

    def run_heatmap(
        self,
        destination: str | None = None,
        progress: Callable[[int, float], None] | None = None,
    ) -> dict:
        graph, scenarios = self.load_layout()
        config = self.load_config()
        graph_sub = subdivide_edges(graph, config.sign_spacing)
        placement, _ = self.load_placement(graph_sub)
        if destination is None:
            targets = sorted({z.destination for z in scenarios})
        else:
            targets = [destination]
        done = {}
        for i, dest in enumerate(targets):
            field = compute_field(
                graph_sub,
                placement,
                dest,
                config.heatmap_interval,
                config.agent,
                seed=f"{config.heatmap_seed}:{dest}",
            )
            write_json(self.field_path(dest), field_to_doc(field))
            rates = [s.rate for s in field.samples]
            done[dest] = {
                "samples": len(rates),
                "min": min(rates),
                "mean": sum(rates) / len(rates),
                "max": max(rates),
                "blind": len(blind_samples(field)),
            }
            if progress is not None:
                progress(i + 1, len(targets))
        return {"destinations": done}

    def run_fix(self, x: float, y: float, destination: str) -> dict:
        graph, scenarios = self.load_layout()
        config = self.load_config()
        scheme = self.load_scheme(graph)
        graph_sub = subdivide_edges(graph, config.sign_spacing)
        placement, _ = self.load_placement(graph_sub)
        fixed = fix_blind_zone(graph_sub, scheme, placement, x, y, destination)
        added = sorted(set(fixed.entries) - set(placement.entries), key=lambda s: (s.node, s.destination))
        rate = evaluate_placement(
            graph_sub, fixed, scheme, None, config.agent, seed=report_seed(config)
        ).failure_rate
        signs_doc = signs_to_doc(graph_sub, scheme, fixed, rate, config.sign_weights)
        write_json(self.signs_path, signs_doc)
        field = compute_field(
            graph_sub,
            fixed,
            destination,
            config.heatmap_interval,
            config.agent,
            seed=f"{config.heatmap_seed}:{destination}",
        )
        field_doc = field_to_doc(field)
        write_json(self.field_path(destination), field_doc)
        return {
            "added": [
                {"node": s.node, "destination": s.destination, "next_node": s.next_node}
                for s in added
            ],
            "placement": signs_doc,
            "field": field_doc,
        }

    def simulate(self, retain_trajectories: bool = False) -> SimOutcome:
        graph, scenarios = self.load_layout()
        config = self.load_config()
        scheme = self.load_scheme(graph)
        graph_sub = subdivide_edges(graph, config.sign_spacing)
        placement, _ = self.load_placement(graph_sub)
        return evaluate_placement(
            graph_sub,
            placement,
            scheme,
            None,
            config.agent,
            seed=report_seed(config),
            retain_trajectories=retain_trajectories,
        )
