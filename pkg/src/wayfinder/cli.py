"""Command-line surface: validate, optimize, place-signs, simulate,
heatmap, and serve.

Every command exits 0 on success and 1 on any validation or input error,
printing the diagnostic to stderr.  ``--seed`` overrides the config seed so
runs are reproducible from the shell.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import replace
from pathlib import Path

from wayfinder.config import ProjectConfig, parse_config
from wayfinder.graph import (
    LayoutError,
    default_scenarios,
    load_layout,
    subdivide_edges,
)
from wayfinder.heatmap import blind_samples, compute_field, field_to_doc
from wayfinder.pathing import shortest_path
from wayfinder.project import (
    ProjectStore,
    parse_scheme,
    parse_signs,
    report_seed,
    scheme_to_doc,
    signs_to_doc,
    write_json,
    write_trace,
)
from wayfinder.scheme import optimize_scheme
from wayfinder.signs import full_placement, refine_signs
from wayfinder.simulate import evaluate_placement

_SCHEME_TERMS = ("local_length", "local_node", "local_angle", "global_length", "global_node")
_SIGN_TERMS = ("count", "distribution", "failure")


def _read_json(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _load_config(args) -> ProjectConfig:
    config = parse_config(_read_json(args.config)) if args.config else ProjectConfig()
    if getattr(args, "seed", None) is not None:
        config = replace(config, seed=args.seed)
    return config


def _load_scenarios(layout_path: str):
    graph, scenarios = load_layout(layout_path)
    if not scenarios:
        scenarios = default_scenarios(graph)
    return graph, scenarios


def cmd_validate(args) -> int:
    graph, explicit = load_layout(args.layout)
    scenarios = explicit or default_scenarios(graph)
    print(f"OK, {len(graph.nodes)} nodes, {len(graph.edges)} edges, {len(scenarios)} scenarios")
    if not explicit and scenarios:
        print("  (no explicit scenarios; defaulted to entrance -> poi pairs)")
    for z in scenarios:
        length = shortest_path(graph, z.source, z.destination).length
        print(
            f"  {z.source} -> {z.destination}: reachable, "
            f"shortest {length:g} m, importance {z.importance:g}"
        )
    return 0


def cmd_optimize(args) -> int:
    graph, scenarios = _load_scenarios(args.layout)
    config = _load_config(args)
    scheme, trace = optimize_scheme(
        graph,
        scenarios,
        config.scheme_weights,
        config.scheme_schedule(),
        config.stretch,
        config.k_cap,
    )
    doc = scheme_to_doc(graph, scheme, config.scheme_weights)
    out = Path(args.out)
    trace_path = Path(args.trace) if args.trace else out.with_name(out.stem + "_trace.csv")
    write_json(out, doc)
    write_trace(trace_path, trace)
    cost = doc["cost"]
    print(f"scheme cost {cost['total']:.6f} after {trace[-1].iteration} iterations")
    for term in _SCHEME_TERMS:
        print(f"  {term:<13} {cost[term]:.6f}")
    print(f"wrote {out} and {trace_path}")
    return 0


def cmd_place_signs(args) -> int:
    graph, scenarios = _load_scenarios(args.layout)
    config = _load_config(args)
    scheme = parse_scheme(_read_json(args.scheme), graph)
    graph_sub = subdivide_edges(graph, config.sign_spacing)
    placement, trace = refine_signs(
        graph_sub,
        scheme,
        None,
        config.sign_weights,
        config.agent,
        config.sign_schedule(),
    )
    rate = evaluate_placement(
        graph_sub, placement, scheme, None, config.agent, seed=report_seed(config)
    ).failure_rate
    doc = signs_to_doc(graph_sub, scheme, placement, rate, config.sign_weights)
    out = Path(args.out)
    trace_path = Path(args.trace) if args.trace else out.with_name(out.stem + "_trace.csv")
    write_json(out, doc)
    write_trace(trace_path, trace)
    full = len(full_placement(graph_sub, scheme))
    tolerance = config.sign_weights.tolerance
    print(f"signs: {len(placement)} entries (full placement {full})")
    verdict = "within" if rate <= tolerance else "OVER"
    print(f"failure rate {rate:.1%} {verdict} tolerance {tolerance:.0%}")
    for term in _SIGN_TERMS + ("total",):
        value = doc["cost"][term]
        shown = f"{value:.6f}" if value is not None else "over tolerance"
        print(f"  {term:<13} {shown}")
    print(f"wrote {out} and {trace_path}")
    return 0


def _mean_sd(values) -> tuple[float, float]:
    mean = sum(values) / len(values)
    return mean, math.sqrt(sum((v - mean) ** 2 for v in values) / len(values))


def cmd_simulate(args) -> int:
    graph, scenarios = _load_scenarios(args.layout)
    config = _load_config(args)
    scheme = parse_scheme(_read_json(args.scheme), graph)
    graph_sub = subdivide_edges(graph, config.sign_spacing)
    placement, _ = parse_signs(_read_json(args.signs), graph_sub)
    outcome = evaluate_placement(
        graph_sub,
        placement,
        scheme,
        None,
        config.agent,
        seed=report_seed(config),
        retain_trajectories=bool(args.trajectories),
    )
    for stats in outcome.stats:
        mean, sd = _mean_sd(stats.distances)
        z = stats.scenario
        print(
            f"{z.source} -> {z.destination}: mean {mean:.1f} m, "
            f"sd {sd:.1f} m, success {stats.success_rate:.1%}"
        )
    print(f"overall failure rate {outcome.failure_rate:.1%}")
    if args.trajectories:
        path = Path(args.trajectories)
        path.parent.mkdir(parents=True, exist_ok=True)
        lines = ["source,destination,agent,outcome,distance,nodes"]
        cursor = 0
        for stats in outcome.stats:
            z = stats.scenario
            for agent in range(stats.agents):
                traj = outcome.trajectories[cursor]
                cursor += 1
                lines.append(
                    f"{z.source},{z.destination},{agent},{traj.outcome.value},"
                    f"{traj.distance!r},{'|'.join(traj.nodes)}"
                )
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        print(f"wrote {path}")
    return 0


def cmd_heatmap(args) -> int:
    graph, _ = _load_scenarios(args.layout)
    config = _load_config(args)
    graph_sub = subdivide_edges(graph, config.sign_spacing)
    placement, _ = parse_signs(_read_json(args.signs), graph_sub)
    field = compute_field(
        graph_sub,
        placement,
        args.destination,
        config.heatmap_interval,
        config.agent,
        seed=f"{config.heatmap_seed}:{args.destination}",
    )
    out = Path(args.out) if args.out else Path(f"field_{args.destination}.json")
    write_json(out, field_to_doc(field))
    rates = [s.rate for s in field.samples]
    blind = len(blind_samples(field))
    print(
        f"destination {args.destination}: {len(rates)} samples, "
        f"min {min(rates):.2f}, mean {sum(rates) / len(rates):.2f}, "
        f"max {max(rates):.2f}, blind (<0.5): {blind}"
    )
    print(f"wrote {out}")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from wayfinder.service import create_app

    store = ProjectStore(args.project)
    if not store.layout_path.exists():
        raise LayoutError(f"project has no layout file at {store.layout_path}")
    uvicorn.run(create_app(args.project, args.static), host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wayfinder",
        description="Optimize wayfinding schemes and sign placements for a layout graph.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, seed=True):
        p.add_argument("--config", help="config JSON path (defaults applied when omitted)")
        if seed:
            p.add_argument("--seed", type=int, help="override the config seed")

    p = sub.add_parser("validate", help="check a layout file and report its scenarios")
    p.add_argument("layout")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("optimize", help="anneal one path per scenario")
    p.add_argument("layout")
    add_common(p)
    p.add_argument("--out", default="scheme.json", help="scheme output path")
    p.add_argument("--trace", help="annealing trace CSV path")
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("place-signs", help="refine a sign placement for a scheme")
    p.add_argument("layout")
    p.add_argument("scheme")
    add_common(p)
    p.add_argument("--out", default="signs.json", help="placement output path")
    p.add_argument("--trace", help="annealing trace CSV path")
    p.set_defaults(func=cmd_place_signs)

    p = sub.add_parser("simulate", help="walk simulated agents over a placement")
    p.add_argument("layout")
    p.add_argument("scheme")
    p.add_argument("signs")
    add_common(p)
    p.add_argument("--trajectories", help="write every agent walk to this CSV")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("heatmap", help="compute an accessibility field for a destination")
    p.add_argument("layout")
    p.add_argument("signs")
    p.add_argument("destination")
    add_common(p)
    p.add_argument("--out", help="field output path (default field_<destination>.json)")
    p.set_defaults(func=cmd_heatmap)

    p = sub.add_parser("serve", help="serve the HTTP API for a project directory")
    p.add_argument("project")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--static", help="directory with a built UI to serve at /")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
