import json
import shutil

import pytest

from conftest import fast_config_doc, small_layout_doc, write_project
from wayfinder import (
    LayoutError,
    ProjectConfig,
    ProjectStore,
    SignPlacement,
    full_placement,
    subdivide_edges,
    total_scheme_cost,
)
from wayfinder.project import (
    parse_scheme,
    parse_signs,
    report_seed,
    scheme_to_doc,
    signs_to_doc,
    write_json,
    write_trace,
)
from wayfinder.scheme import TracePoint


@pytest.fixture(scope="module")
def pipeline_dir(tmp_path_factory):
    """One project with optimize + refine + heatmap already run."""
    root = write_project(tmp_path_factory.mktemp("pipe") / "proj", config=fast_config_doc())
    store = ProjectStore(root)
    store.run_optimize()
    store.run_refine()
    store.run_heatmap()
    return root


def test_write_json_is_canonical_and_atomic(tmp_path):
    target = tmp_path / "doc.json"
    write_json(target, {"b": 1, "a": [2, 3]})
    first = target.read_bytes()
    write_json(target, {"a": [2, 3], "b": 1})
    assert target.read_bytes() == first
    assert first.endswith(b"\n")
    assert first.index(b'"a"') < first.index(b'"b"')
    assert not list(tmp_path.glob("*.tmp"))


def test_write_trace_round_trips_floats(tmp_path):
    target = tmp_path / "trace.csv"
    points = [TracePoint(0, 1.0, 0.123456789012345, 0.1), TracePoint(1, 0.999, 0.1, 0.1)]
    write_trace(target, points)
    lines = target.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "iteration,temperature,current_cost,best_cost"
    _, temp, cost, best = lines[1].split(",")
    assert float(temp) == 1.0
    assert float(cost) == 0.123456789012345
    assert float(best) == 0.1
    assert len(lines) == 3


def test_report_seed_distinct_from_stage_seeds():
    cfg = ProjectConfig(seed=3)
    assert report_seed(cfg) == "report:4"
    assert report_seed(ProjectConfig(seed=0)) != report_seed(ProjectConfig(seed=1))


def test_missing_layout_raises(tmp_path):
    store = ProjectStore(tmp_path)
    with pytest.raises(LayoutError, match="layout"):
        store.load_layout()


def test_config_defaults_when_file_missing(tmp_path):
    store = ProjectStore(write_project(tmp_path / "p"))
    assert store.load_config() == ProjectConfig()


def test_layout_without_scenarios_gets_defaults(tmp_path):
    doc = small_layout_doc()
    del doc["scenarios"]
    store = ProjectStore(write_project(tmp_path / "p", layout=doc))
    _, scenarios = store.load_layout()
    pairs = {(z.source, z.destination) for z in scenarios}
    assert pairs == {("e", "p"), ("e", "d")}
    assert all(z.importance == pytest.approx(0.5) for z in scenarios)


def test_optimize_persists_scheme_and_trace(pipeline_dir):
    store = ProjectStore(pipeline_dir)
    doc = store.load_scheme_doc()
    graph, scenarios = store.load_layout()
    assert {z["source"] for z in doc["scenarios"]} == {"e"}
    assert len(doc["scenarios"]) == len(scenarios)
    scheme = parse_scheme(doc, graph)
    weights = store.load_config().scheme_weights
    assert doc["cost"]["total"] == pytest.approx(
        total_scheme_cost(graph, scheme, weights), rel=1e-12
    )
    trace = (pipeline_dir / "traces" / "scheme.csv").read_text(encoding="utf-8")
    assert trace.startswith("iteration,temperature,current_cost,best_cost\n")
    assert len(trace.splitlines()) > 2


def test_optimize_summary_shape(tmp_path):
    store = ProjectStore(write_project(tmp_path / "p", config=fast_config_doc()))
    out = store.run_optimize()
    assert set(out) == {"cost", "iterations"}
    assert out["iterations"] >= 1
    assert set(out["cost"]) == {
        "local_length",
        "local_node",
        "local_angle",
        "global_length",
        "global_node",
        "total",
    }


def test_scheme_doc_round_trip(pipeline_dir):
    store = ProjectStore(pipeline_dir)
    graph, _ = store.load_layout()
    scheme = store.load_scheme(graph)
    again = parse_scheme(scheme_to_doc(graph, scheme), graph)
    assert [p.nodes for p in again.paths] == [p.nodes for p in scheme.paths]
    for z, p in zip(again.scenarios, again.paths):
        assert p.nodes[0] == z.source
        assert p.nodes[-1] == z.destination


def test_parse_scheme_rejections(pipeline_dir):
    store = ProjectStore(pipeline_dir)
    graph, _ = store.load_layout()
    good = store.load_scheme_doc()

    bad = dict(good, extra=1)
    with pytest.raises(LayoutError, match="extra"):
        parse_scheme(bad, graph)

    bad = json.loads(json.dumps(good))
    bad["scenarios"][0]["note"] = "hi"
    with pytest.raises(LayoutError, match="note"):
        parse_scheme(bad, graph)

    bad = json.loads(json.dumps(good))
    bad["scenarios"][0]["path"] = [bad["scenarios"][0]["source"]]
    with pytest.raises(LayoutError, match="two nodes"):
        parse_scheme(bad, graph)

    bad = json.loads(json.dumps(good))
    bad["scenarios"][0]["path"] = ["a", "b", "p"]
    with pytest.raises(LayoutError, match="endpoints"):
        parse_scheme(bad, graph)

    bad = json.loads(json.dumps(good))
    bad["scenarios"][0]["path"] = ["e", "b", "p"]  # e-b is not an edge
    with pytest.raises(LayoutError):
        parse_scheme(bad, graph)

    bad = json.loads(json.dumps(good))
    bad["scenarios"][0]["length"] = bad["scenarios"][0]["length"] + 1.0
    with pytest.raises(LayoutError, match="re-run the optimizer"):
        parse_scheme(bad, graph)


def test_refine_requires_scheme(tmp_path):
    store = ProjectStore(write_project(tmp_path / "p"))
    with pytest.raises(LayoutError, match="scheme"):
        store.run_refine()


def test_refine_persists_signs(pipeline_dir):
    store = ProjectStore(pipeline_dir)
    doc = store.load_signs_doc()
    assert set(doc) == {"entries", "boards", "failure_rate", "cost"}
    cfg = store.load_config()
    assert 0.0 <= doc["failure_rate"] <= cfg.sign_weights.tolerance
    assert set(doc["cost"]) == {"count", "distribution", "failure", "total"}
    graph, _ = store.load_layout()
    g_sub = subdivide_edges(graph, cfg.sign_spacing)
    placement, rate = store.load_placement(g_sub)
    assert len(placement) == len(doc["entries"])
    assert rate == doc["failure_rate"]
    assert len(placement) <= len(full_placement(g_sub, store.load_scheme(graph)))
    trace = (pipeline_dir / "traces" / "signs.csv").read_text(encoding="utf-8")
    assert trace.startswith("iteration,temperature,current_cost,best_cost\n")


def test_parse_signs_rejects_unknown_key(pipeline_dir):
    store = ProjectStore(pipeline_dir)
    graph, _ = store.load_layout()
    g_sub = subdivide_edges(graph, store.load_config().sign_spacing)
    doc = dict(store.load_signs_doc(), comment="x")
    with pytest.raises(LayoutError, match="comment"):
        parse_signs(doc, g_sub)


def test_heatmap_requires_signs(tmp_path):
    store = ProjectStore(write_project(tmp_path / "p", config=fast_config_doc()))
    store.run_optimize()
    with pytest.raises(LayoutError, match="sign"):
        store.run_heatmap()


def test_heatmap_covers_every_destination(pipeline_dir):
    store = ProjectStore(pipeline_dir)
    for dest in ("p", "d"):
        doc = store.load_field_doc(dest)
        assert doc["destination"] == dest
        assert all(0.0 <= s["rate"] <= 1.0 for s in doc["samples"])
    with pytest.raises(LayoutError, match="nope"):
        store.load_field_doc("nope")


def test_heatmap_summary_and_single_destination(pipeline_dir, tmp_path):
    root = tmp_path / "copy"
    shutil.copytree(pipeline_dir, root)
    store = ProjectStore(root)
    out = store.run_heatmap(destination="p")
    assert set(out["destinations"]) == {"p"}
    info = out["destinations"]["p"]
    assert info["samples"] > 0
    assert 0.0 <= info["min"] <= info["mean"] <= info["max"] <= 1.0
    assert info["blind"] >= 0


def test_run_fix_persists_new_signs_and_field(pipeline_dir, tmp_path):
    root = tmp_path / "copy"
    shutil.copytree(pipeline_dir, root)
    store = ProjectStore(root)
    cfg = store.load_config()
    graph, _ = store.load_layout()
    g_sub = subdivide_edges(graph, cfg.sign_spacing)
    scheme = store.load_scheme(graph)
    # Strip every sign that serves "p" so a click near c must add some back.
    keep = tuple(s for s in full_placement(g_sub, scheme).entries if s.destination == "d")
    write_json(store.signs_path, signs_to_doc(g_sub, scheme, SignPlacement(keep), 0.9, cfg.sign_weights))

    out = store.run_fix(100.0, 80.0, "p")
    assert out["added"]
    assert all(set(e) == {"node", "destination", "next_node"} for e in out["added"])
    assert all(e["destination"] == "p" for e in out["added"])
    placement, rate = store.load_placement(g_sub)
    assert len(placement) == len(keep) + len(out["added"])
    assert rate is not None and rate < 0.9
    assert out["placement"]["entries"] == store.load_signs_doc()["entries"]
    assert store.load_field_doc("p") == out["field"]


def test_over_tolerance_costs_serialize_as_null(pipeline_dir, tmp_path):
    store = ProjectStore(pipeline_dir)
    cfg = store.load_config()
    graph, _ = store.load_layout()
    g_sub = subdivide_edges(graph, cfg.sign_spacing)
    scheme = store.load_scheme(graph)
    doc = signs_to_doc(g_sub, scheme, SignPlacement(()), 0.9, cfg.sign_weights)
    assert doc["cost"]["failure"] is None
    assert doc["cost"]["total"] is None
    target = tmp_path / "signs.json"
    write_json(target, doc)  # strict JSON: no Infinity allowed on disk
    assert "Infinity" not in target.read_text(encoding="utf-8")


def test_simulate_is_deterministic_and_optionally_traced(pipeline_dir):
    store = ProjectStore(pipeline_dir)
    first = store.simulate()
    second = store.simulate()
    assert first.failure_rate == second.failure_rate
    assert first.stats == second.stats
    assert first.trajectories is None
    traced = store.simulate(retain_trajectories=True)
    agents = store.load_config().agent.agents_per_scenario
    assert traced.trajectories is not None
    assert len(traced.trajectories) == agents * len(first.stats)


def test_pipeline_reruns_are_byte_identical(tmp_path):
    outputs = []
    for name in ("one", "two"):
        root = write_project(tmp_path / name, config=fast_config_doc())
        store = ProjectStore(root)
        store.run_optimize()
        store.run_refine()
        store.run_heatmap()
        blobs = {}
        for rel in ("scheme.json", "signs.json", "traces/scheme.csv", "traces/signs.csv",
                    "fields/p.json", "fields/d.json"):
            blobs[rel] = (root / rel).read_bytes()
        outputs.append(blobs)
    assert outputs[0] == outputs[1]


def test_different_seed_changes_trace(tmp_path):
    roots = []
    for name, seed in (("one", 3), ("two", 4)):
        root = write_project(tmp_path / name, config=fast_config_doc(seed=seed))
        ProjectStore(root).run_optimize()
        roots.append(root)
    a = (roots[0] / "traces" / "scheme.csv").read_bytes()
    b = (roots[1] / "traces" / "scheme.csv").read_bytes()
    assert a != b
