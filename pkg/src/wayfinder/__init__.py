"""Wayfinding design toolkit: route scheme optimization, sign placement,
agent-based evaluation, and accessibility heatmaps for facility layouts."""

from wayfinder.config import ProjectConfig, config_to_doc, parse_config
from wayfinder.graph import (
    Edge,
    LayoutError,
    LayoutGraph,
    NavScenario,
    Node,
    NodeKind,
    UnreachableError,
    build_graph,
    default_scenarios,
    dump_layout,
    load_layout,
    parse_layout,
    serialize_layout,
    subdivide_edges,
    total_edge_length,
)
from wayfinder.heatmap import (
    AccessibilityField,
    FieldSample,
    blind_samples,
    compute_field,
    fix_blind_zone,
    interpolate,
)
from wayfinder.pathing import (
    Path,
    adaptive_candidates,
    iter_shortest_paths,
    shortest_path,
    shortest_path_to_set,
    yen_k_shortest,
)
from wayfinder.project import ProjectStore
from wayfinder.scheme import (
    AnnealSchedule,
    SchemeWeights,
    TracePoint,
    WayfindingScheme,
    optimize_scheme,
    total_scheme_cost,
)
from wayfinder.signs import (
    Sign,
    SignPlacement,
    SignWeights,
    full_placement,
    refine_signs,
    total_sign_cost,
)
from wayfinder.simulate import (
    AgentParams,
    Outcome,
    SimOutcome,
    Trajectory,
    evaluate_placement,
    run_walk,
    simulate_agent,
)

__version__ = "0.1.0"
