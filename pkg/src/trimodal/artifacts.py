"""Artifact builders shared by the CLI and the HTTP service.

Both surfaces call these functions and serialize with `dump_json`, which
guarantees byte-identical artifacts for identical inputs.
"""

from __future__ import annotations

import json
from typing import Optional

from . import audio as audio_mod
from . import textual, visual
from .ingest import Dataset
from .model import MultimodalSpec
from .predicate import TRUE, Predicate


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def visual_artifact(spec: MultimodalSpec, dataset: Dataset,
                    selection: Predicate = TRUE) -> Optional[dict]:
    if not spec.visual_units:
        return None
    doc = visual.compile_visual(spec, dataset)
    return visual.apply_highlight(doc, selection, dataset)


def text_artifact(spec: MultimodalSpec, dataset: Dataset,
                  selection: Predicate = TRUE) -> dict:
    tree = textual.build_tree(spec, dataset)
    tree = textual.rescope_tree(tree, selection, dataset)
    return textual.tree_to_json(tree)


def text_rendering(spec: MultimodalSpec, dataset: Dataset,
                   selection: Predicate = TRUE) -> str:
    tree = textual.build_tree(spec, dataset)
    tree = textual.rescope_tree(tree, selection, dataset)
    return textual.tree_to_text(tree) + "\n"


def audio_artifact(spec: MultimodalSpec, dataset: Dataset,
                   selection: Predicate = TRUE, rate: float = 1.0,
                   ticks: bool = True,
                   order: Optional[tuple[str, ...]] = None) -> list[dict]:
    opts = audio_mod.ScheduleOptions(rate=rate, ticks=ticks, filter=selection, order=order)
    out = []
    for unit in spec.audio_units:
        out.append(audio_mod.schedule_to_json(audio_mod.schedule(unit, spec, dataset, opts)))
    return out


def audio_schedules(spec: MultimodalSpec, dataset: Dataset,
                    selection: Predicate = TRUE, rate: float = 1.0,
                    ticks: bool = True,
                    order: Optional[tuple[str, ...]] = None) -> list:
    opts = audio_mod.ScheduleOptions(rate=rate, ticks=ticks, filter=selection, order=order)
    return [audio_mod.schedule(u, spec, dataset, opts) for u in spec.audio_units]
