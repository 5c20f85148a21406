"""Task definitions: instructions, canvas geometry, and TMT target layouts.

Default layouts ship as package data (data/tmt_layouts.json) and can be
overridden with a file of the same structure. Consumed by the synthetic
generator, the screening service's /tasks endpoint, and the capture webapp.
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

from .strokes import TASKS

INSTRUCTIONS = {
    "SENTENCE": "Write a complete sentence of your choosing.",
    "PENTAGON": "Copy the figure of two intersecting pentagons.",
    "TMT_A": "Draw lines connecting the numbered circles in ascending order.",
    "TMT_B": "Draw lines connecting the circles, alternating numbers and letters (1, A, 2, B, ...).",
    "CDT": "Draw an analog clock face showing 10 o'clock.",
}


def load_layouts(path: str | Path | None = None) -> dict:
    if path is not None:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    payload = resources.files("inkscreen").joinpath("data/tmt_layouts.json").read_text("utf-8")
    return json.loads(payload)


def task_definitions(layout_path: str | Path | None = None) -> dict:
    """The /api/v1/tasks payload: names, instructions, layouts, canvas size."""
    layouts = load_layouts(layout_path)
    tasks = []
    for task in TASKS:
        entry = {"name": task, "instruction": INSTRUCTIONS[task]}
        if task in ("TMT_A", "TMT_B"):
            entry["targets"] = layouts[task]
            entry["target_radius_mm"] = layouts["target_radius_mm"]
        tasks.append(entry)
    return {
        "schema_version": 1,
        "canvas_mm": layouts["canvas_mm"],
        "tasks": tasks,
    }
