import dataclasses

import pytest

from wayfinder import (
    AgentParams,
    AnnealSchedule,
    LayoutError,
    ProjectConfig,
    SchemeWeights,
    SignWeights,
    config_to_doc,
    parse_config,
)


def test_defaults_match_dataclass_defaults():
    cfg = parse_config({})
    assert cfg == ProjectConfig()
    assert cfg.seed == 0
    assert cfg.sign_spacing == 50.0
    assert cfg.stretch == pytest.approx(0.16)
    assert cfg.k_cap == 50
    assert cfg.heatmap_interval == 25.0
    assert cfg.agent == AgentParams()
    assert cfg.scheme_weights == SchemeWeights()
    assert cfg.sign_weights == SignWeights()


def test_partial_override_keeps_other_defaults():
    cfg = parse_config({"seed": 7, "agent": {"miss_prob": 0.1}})
    assert cfg.seed == 7
    assert cfg.agent.miss_prob == pytest.approx(0.1)
    assert cfg.agent.agents_per_scenario == 100
    assert cfg.scheme_weights == SchemeWeights()


def test_scalar_and_section_overrides():
    doc = {
        "sign_spacing": 25.0,
        "stretch": 0.3,
        "k_cap": 10,
        "heatmap_interval": 10.0,
        "scheme_weights": {"local_length": 2.0},
        "sign_weights": {"tolerance": 0.5},
        "scheme_anneal": {"max_iters": 123},
        "sign_anneal": {"t_initial": 0.5},
    }
    cfg = parse_config(doc)
    assert cfg.sign_spacing == 25.0
    assert cfg.stretch == pytest.approx(0.3)
    assert cfg.k_cap == 10
    assert cfg.heatmap_interval == 10.0
    assert cfg.scheme_weights.local_length == 2.0
    assert cfg.scheme_weights.local_angle == SchemeWeights().local_angle
    assert cfg.sign_weights.tolerance == 0.5
    assert cfg.scheme_anneal.max_iters == 123
    assert cfg.sign_anneal.t_initial == 0.5


def test_unknown_top_level_key_rejected():
    with pytest.raises(LayoutError, match="budget"):
        parse_config({"budget": 10})


def test_unknown_section_key_names_section():
    with pytest.raises(LayoutError, match="agent"):
        parse_config({"agent": {"speeed": 1.0}})


def test_schedule_seed_not_configurable_from_file():
    # Stage seeds always derive from the project seed.
    with pytest.raises(LayoutError, match="seed"):
        parse_config({"scheme_anneal": {"seed": 5}})
    with pytest.raises(LayoutError, match="seed"):
        parse_config({"sign_anneal": {"seed": 5}})


def test_invalid_section_value_mentions_section():
    with pytest.raises(LayoutError, match="agent"):
        parse_config({"agent": {"miss_prob": 1.5}})


@pytest.mark.parametrize(
    "doc",
    [
        {"sign_spacing": 0.0},
        {"sign_spacing": -1.0},
        {"stretch": -0.1},
        {"k_cap": 0},
        {"heatmap_interval": 0.0},
    ],
)
def test_invalid_scalars_rejected(doc):
    with pytest.raises(LayoutError):
        parse_config(doc)


def test_stage_seeds_derive_from_project_seed():
    cfg = parse_config({"seed": 41})
    assert cfg.scheme_schedule().seed == 41
    assert cfg.sign_schedule().seed == 42
    assert cfg.heatmap_seed == 43
    # Everything except the seed comes straight from the stage schedule.
    assert dataclasses.replace(cfg.scheme_schedule(), seed=0) == dataclasses.replace(
        cfg.scheme_anneal, seed=0
    )
    assert dataclasses.replace(cfg.sign_schedule(), seed=0) == dataclasses.replace(
        cfg.sign_anneal, seed=0
    )


def test_stage_schedules_differ_by_default():
    cfg = ProjectConfig()
    assert cfg.scheme_anneal.t_initial == 1.0
    assert cfg.sign_anneal.t_initial == pytest.approx(0.1)
    assert cfg.scheme_anneal.stop_window == 1000
    assert cfg.sign_anneal.stop_window == 50


def test_doc_round_trip():
    cfg = parse_config(
        {
            "seed": 9,
            "stretch": 0.2,
            "agent": {"visibility": 200.0, "miss_prob": 0.1},
            "sign_weights": {"failure": 0.01},
            "sign_anneal": {"max_iters": 777},
        }
    )
    doc = config_to_doc(cfg)
    assert parse_config(doc) == cfg


def test_doc_echoes_full_configuration():
    doc = config_to_doc(ProjectConfig())
    assert doc["seed"] == 0
    assert doc["agent"]["agents_per_scenario"] == 100
    assert doc["scheme_weights"]["local_angle"] == 10.0
    assert doc["sign_weights"]["failure"] == 10.0
    assert "seed" not in doc["scheme_anneal"]
    assert "seed" not in doc["sign_anneal"]
    rebuilt = AnnealSchedule(**dict(doc["scheme_anneal"], seed=0))
    assert rebuilt == dataclasses.replace(ProjectConfig().scheme_anneal, seed=0)


def test_non_object_sections_rejected():
    with pytest.raises(LayoutError):
        parse_config({"agent": 5})
    with pytest.raises(LayoutError):
        parse_config([1, 2])
