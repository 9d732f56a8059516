"""Shared fixtures for the integration-layer tests.

The small project layout is a 300 m corridor with a parallel upper
walkway, giving one forced scenario (entrance to the far poi) and one
two-way tie (entrance to the upper poi) so the optimizer has a real,
but tiny, decision to make.
"""

import json
from pathlib import Path

import pytest

LAYOUTS = Path(__file__).resolve().parent.parent / "layouts"


def small_layout_doc():
    return {
        "nodes": [
            {"id": "e", "x": 0, "y": 0, "kind": "entrance"},
            {"id": "a", "x": 100, "y": 0, "kind": "intersection"},
            {"id": "b", "x": 200, "y": 0, "kind": "intersection"},
            {"id": "p", "x": 300, "y": 0, "kind": "poi", "label": "Cafe"},
            {"id": "c", "x": 100, "y": 80, "kind": "intersection"},
            {"id": "d", "x": 200, "y": 80, "kind": "poi", "label": "Gallery"},
        ],
        "edges": [
            {"a": "e", "b": "a"},
            {"a": "a", "b": "b"},
            {"a": "b", "b": "p"},
            {"a": "a", "b": "c"},
            {"a": "c", "b": "d"},
            {"a": "d", "b": "b"},
        ],
        "scenarios": [
            {"source": "e", "destination": "p", "importance": 0.5},
            {"source": "e", "destination": "d", "importance": 0.5},
        ],
    }


def fast_config_doc(seed=3):
    # Trimmed budgets keep full pipeline runs around a second.
    return {
        "seed": seed,
        "agent": {"agents_per_scenario": 25},
        "scheme_anneal": {"max_iters": 4000},
        "sign_anneal": {"max_iters": 400},
    }


def write_project(root, layout=None, config=None):
    root = Path(root)
    root.mkdir(parents=True, exist_ok=True)
    with open(root / "layout.json", "w", encoding="utf-8") as fh:
        json.dump(layout if layout is not None else small_layout_doc(), fh)
    if config is not None:
        with open(root / "config.json", "w", encoding="utf-8") as fh:
            json.dump(config, fh)
    return root


@pytest.fixture
def project_dir(tmp_path):
    return write_project(tmp_path / "proj", config=fast_config_doc())
