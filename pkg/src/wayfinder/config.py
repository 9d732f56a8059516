"""Project-wide configuration: one document covering every pipeline stage.

A config bundles the scheme weights, sign weights, agent parameters, both
annealing schedules, and the structural knobs (sign spacing, candidate
stretch, sampling interval) under a single seed.  Stage seeds derive from
that one seed so a project file pins the whole pipeline.
"""
from __future__ import annotations

from dataclasses import dataclass, field, fields, replace
from typing import Mapping

from wayfinder.graph import LayoutError
from wayfinder.scheme import AnnealSchedule, SchemeWeights
from wayfinder.signs import SignWeights
from wayfinder.simulate import AgentParams

__all__ = ["ProjectConfig", "parse_config", "config_to_doc"]


def _default_sign_anneal() -> AnnealSchedule:
    return AnnealSchedule.for_signs()


@dataclass(frozen=True)
class ProjectConfig:
    """Everything the pipeline needs beyond the layout itself."""

    seed: int = 0
    sign_spacing: float = 50.0
    stretch: float = 0.16
    k_cap: int = 50
    heatmap_interval: float = 25.0
    scheme_weights: SchemeWeights = field(default_factory=SchemeWeights)
    sign_weights: SignWeights = field(default_factory=SignWeights)
    agent: AgentParams = field(default_factory=AgentParams)
    scheme_anneal: AnnealSchedule = field(default_factory=AnnealSchedule)
    sign_anneal: AnnealSchedule = field(default_factory=_default_sign_anneal)

    def __post_init__(self) -> None:
        if self.sign_spacing <= 0:
            raise ValueError("sign_spacing must be positive")
        if self.stretch < 0:
            raise ValueError("stretch must be >= 0")
        if self.k_cap < 1:
            raise ValueError("k_cap must be >= 1")
        if self.heatmap_interval <= 0:
            raise ValueError("heatmap_interval must be positive")

    # Stage seeds: one knob, three decoupled streams.
    def scheme_schedule(self) -> AnnealSchedule:
        return replace(self.scheme_anneal, seed=self.seed)

    def sign_schedule(self) -> AnnealSchedule:
        return replace(self.sign_anneal, seed=self.seed + 1)

    @property
    def heatmap_seed(self) -> int:
        return self.seed + 2


_SECTIONS = {
    "scheme_weights": SchemeWeights,
    "sign_weights": SignWeights,
    "agent": AgentParams,
    "scheme_anneal": AnnealSchedule,
    "sign_anneal": AnnealSchedule,
}
# Schedule seeds derive from the top-level seed, never from the file.
_EXCLUDED = {"scheme_anneal": {"seed"}, "sign_anneal": {"seed"}}


def _parse_section(name: str, raw, cls, excluded: set[str]):
    if not isinstance(raw, Mapping):
        raise LayoutError(f"config section '{name}' must be an object")
    allowed = {f.name for f in fields(cls)} - excluded
    for key in raw:
        if key not in allowed:
            raise LayoutError(f"unknown key '{key}' in config section '{name}'")
    try:
        return replace(cls(), **dict(raw))
    except ValueError as exc:
        raise LayoutError(f"config section '{name}': {exc}") from exc


def parse_config(doc: Mapping) -> ProjectConfig:
    """Build a config from a (possibly partial) document; omitted keys keep
    their defaults, unknown keys are rejected by name."""
    if not isinstance(doc, Mapping):
        raise LayoutError("config root must be an object")
    scalars = {"seed", "sign_spacing", "stretch", "k_cap", "heatmap_interval"}
    kwargs = {}
    for key, value in doc.items():
        if key in scalars:
            kwargs[key] = value
        elif key in _SECTIONS:
            kwargs[key] = _parse_section(
                key, value, _SECTIONS[key], _EXCLUDED.get(key, set())
            )
        else:
            raise LayoutError(f"unknown key '{key}' in config")
    try:
        return ProjectConfig(**kwargs)
    except ValueError as exc:
        raise LayoutError(f"config: {exc}") from exc


def config_to_doc(config: ProjectConfig) -> dict:
    """Full echo of every setting, defaults included."""

    def section(obj, excluded: set[str] = frozenset()) -> dict:
        return {
            f.name: getattr(obj, f.name) for f in fields(obj) if f.name not in excluded
        }

    return {
        "seed": config.seed,
        "sign_spacing": config.sign_spacing,
        "stretch": config.stretch,
        "k_cap": config.k_cap,
        "heatmap_interval": config.heatmap_interval,
        "scheme_weights": section(config.scheme_weights),
        "sign_weights": section(config.sign_weights),
        "agent": section(config.agent),
        "scheme_anneal": section(config.scheme_anneal, {"seed"}),
        "sign_anneal": section(config.sign_anneal, {"seed"}),
    }
