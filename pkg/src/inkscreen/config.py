"""Pipeline configuration: JSON file with grid, smoothing, and fold overrides."""

from __future__ import annotations

import json
from dataclasses import dataclass, field, fields
from pathlib import Path

from .errors import MalformedInput
from .evaluation.engine import HyperGrid, default_grid, reduced_grid


@dataclass
class PipelineConfig:
    smoothing_window: int = 5
    selection_c: float = 0.1
    repeats: int = 10
    outer_k: int = 5
    inner_k: int = 5
    n_trees: int = 100
    families: tuple[str, ...] | None = None
    grid_preset: str = "full"  # "full" | "reduced"
    grid_overrides: dict = field(default_factory=dict)

    def grid(self) -> HyperGrid:
        base = reduced_grid() if self.grid_preset == "reduced" else default_grid()
        if not self.grid_overrides:
            return base
        state = base.to_dict()
        for key, value in self.grid_overrides.items():
            if key not in state:
                raise MalformedInput(f"unknown grid field {key!r}")
            state[key] = value
        return HyperGrid(**{k: tuple(v) for k, v in state.items()})


def load_config(path: str | Path | None) -> PipelineConfig:
    if path is None:
        return PipelineConfig()
    with open(path, encoding="utf-8") as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise MalformedInput(f"{path}: not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise MalformedInput(f"{path}: config must be a JSON object")
    known = {f.name for f in fields(PipelineConfig)}
    cfg = PipelineConfig()
    for key, value in raw.items():
        if key == "grid":
            cfg.grid_overrides = value
        elif key in known:
            if key == "families" and value is not None:
                value = tuple(value)
            setattr(cfg, key, value)
        else:
            raise MalformedInput(f"{path}: unknown config field {key!r}")
    return cfg
