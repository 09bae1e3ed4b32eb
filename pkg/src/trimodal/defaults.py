"""Default specification heuristics.

Six rules map a dataset's (key types, value types) signature to a full
multimodal spec: a visual unit, one or two audio units with traversals, and
a textual grouping outline. T/N/Q below abbreviate temporal, nominal, and
quantitative; ordinal fields are treated as nominal. Matching is exact on
the type multisets, first rule wins, and the only cardinality guard is the
">5 categories" split between the multi-series line (rule 1) and the sized
point (rule 2). When no rule matches, the spec has no units and the textual
fallback groups by each field.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .ingest import Dataset, distinct_count
from .model import (
    AudioUnit, Composition, EncodingRef, FieldDef, Measure, MultimodalSpec,
    Transform, TraversalStep, VisualUnit,
)

CATEGORY_GUARD = 5
TRAVERSAL_BIN_COUNT = 10  # bins for a `bin: true` traversal step with no count


@dataclass(frozen=True)
class RoleAssignment:
    """Concrete fields filling a rule's named slots."""
    rule: int
    t_key: Optional[str] = None
    n_keys: tuple[str, ...] = ()
    values: tuple[str, ...] = ()
    n_value: Optional[str] = None


def _norm(measure: Measure) -> Measure:
    return Measure.NOMINAL if measure == Measure.ORDINAL else measure


def match_rule(key_types: list[tuple[Measure, int]], value_types: list[Measure]) -> Optional[int]:
    """Rule id (1-6) for a (key, value) type signature, or None.

    `key_types` pairs each key field's measure with its category count (used
    only by the nominal-cardinality guard); `value_types` lists the non-key
    selected fields' measures.
    """
    keys = sorted(_norm(m).value for m, _ in key_types)
    values = sorted(_norm(m).value for m in value_types)
    n_cards = [card for m, card in key_types if _norm(m) == Measure.NOMINAL]

    if keys == ["nominal", "temporal"] and values == ["quantitative"]:
        return 1 if n_cards[0] <= CATEGORY_GUARD else 2
    if keys == [] and values == ["nominal", "quantitative", "quantitative"]:
        return 3
    if keys == ["temporal"] and values == ["quantitative", "quantitative"]:
        return 4
    if keys == ["nominal", "nominal", "temporal"] and values == ["quantitative"]:
        return 5
    if keys == ["nominal", "temporal"] and values == ["quantitative", "quantitative"]:
        return 6
    return None


def assign_roles(fields: list[FieldDef], key: list[str], dataset: Dataset) -> Optional[RoleAssignment]:
    key_fields = [f for name in key for f in fields if f.name == name]
    value_fields = [f for f in fields if f.name not in key]
    key_types = [(f.measure, distinct_count(dataset, f.name)) for f in key_fields]
    rule = match_rule(key_types, [f.measure for f in value_fields])
    if rule is None:
        return None
    t_key = next((f.name for f in key_fields if f.measure == Measure.TEMPORAL), None)
    n_keys = tuple(f.name for f in key_fields if _norm(f.measure) == Measure.NOMINAL)
    if rule == 3:
        q = tuple(f.name for f in value_fields if f.measure == Measure.QUANTITATIVE)
        n = next(f.name for f in value_fields if _norm(f.measure) == Measure.NOMINAL)
        return RoleAssignment(rule, values=q, n_value=n)
    values = tuple(f.name for f in value_fields)
    return RoleAssignment(rule, t_key=t_key, n_keys=n_keys, values=values)


# Rule fragments. Channel maps are (channel, slot) with slots resolved
# against a RoleAssignment; traversals are lists of (slot, bin) steps.
_VISUAL = {
    1: ("line", [("x", "t_key"), ("y", "value0"), ("color", "n_key0")]),
    2: ("point", [("x", "t_key"), ("y", "n_key0"), ("color", "n_key0"), ("size", "value0")]),
    3: ("point", [("x", "value0"), ("y", "value1"), ("color", "n_value")]),
    4: ("line", [("x", "value0"), ("y", "value1"), ("order", "t_key")]),
    5: ("point", [("x", "value0"), ("y", "n_key1"), ("color", "t_key"), ("facet", "n_key0")]),
    # The printed fragment for this rule repeats value[0] on both axes; the
    # prose and the worked example use two distinct values, so y is value1.
    6: ("line", [("x", "value0"), ("y", "value1"), ("facet", "n_key0"),
                 ("color", "n_key0"), ("order", "t_key")]),
}

_AUDIO = {
    1: [("value0", None, [("n_key0", False), ("t_key", False)])],
    2: [("value0", None, [("n_key0", False), ("t_key", False)])],
    3: [("value0", "mean", [("value1", True)]),
        ("value1", "mean", [("value0", True)])],
    4: [("value0", None, [("t_key", False)]),
        ("value1", None, [("t_key", False)])],
    5: [("value0", None, [("n_key0", False), ("n_key1", False), ("t_key", False)])],
    6: [("value0", None, [("n_key0", False), ("t_key", False)]),
        ("value1", None, [("n_key0", False), ("t_key", False)])],
}

# Textual grouping outlines: either {"groupby", "children"} or a flat list.
_TEXT = {
    1: {"groupby": "n_key0", "children": ["t_key", "value0"]},
    2: ["t_key", "n_key0", "value0"],
    3: ["value0", "value1", "n_value"],
    4: ["t_key", "value0", "value1"],
    5: {"groupby": "n_key0", "children": ["value0", "n_key1", "t_key"]},
    6: {"groupby": "n_key0", "children": ["value0", "value1", "t_key"]},
}


def _slot(roles: RoleAssignment, slot: str) -> str:
    if slot == "t_key":
        return roles.t_key
    if slot == "n_value":
        return roles.n_value
    if slot.startswith("n_key"):
        return roles.n_keys[int(slot[5:])]
    if slot.startswith("value"):
        return roles.values[int(slot[5:])]
    raise KeyError(slot)


def generate_default(fields: list[FieldDef], key: list[str], dataset: Dataset) -> MultimodalSpec:
    """Default spec for typed fields and an inferred key.

    When a rule matches, fields not consumed by the rule are dropped (the
    editor re-adds them on demand); otherwise all fields are kept and the
    output has no units.
    """
    roles = assign_roles(list(fields), list(key), dataset)
    if roles is None:
        plain = tuple(FieldDef(f.name, f.measure, f.transform) for f in fields)
        return MultimodalSpec(fields=plain, key=tuple(key))

    refs: dict[str, list[EncodingRef]] = {}
    mark, channels = _VISUAL[roles.rule]
    for channel, slot in channels:
        refs.setdefault(_slot(roles, slot), []).append(EncodingRef("visual", "v0", channel))

    audio_units = []
    for i, (pitch_slot, aggregate, steps) in enumerate(_AUDIO[roles.rule]):
        unit_id = f"a{i}"
        override = Transform(aggregate=aggregate) if aggregate else None
        refs.setdefault(_slot(roles, pitch_slot), []).append(
            EncodingRef("audio", unit_id, "pitch", override))
        traversal = tuple(TraversalStep(_slot(roles, s), bin=b) for s, b in steps)
        audio_units.append(AudioUnit(unit_id, traversal))

    # Keep encoded fields plus the key (traversals reference key fields).
    used = set(refs) | set(key)
    out_fields = tuple(FieldDef(f.name, f.measure, encodings=tuple(refs.get(f.name, ())))
                       for f in fields if f.name in used)
    return MultimodalSpec(
        fields=out_fields,
        visual_units=(VisualUnit("v0", mark),),
        audio_units=tuple(audio_units),
        composition=Composition(visual_op="concat", visual_units=("v0",),
                                audio_op="concat",
                                audio_units=tuple(u.unit_id for u in audio_units)),
        key=tuple(key),
    )


def default_text_grouping(fields: list[FieldDef], key: list[str], dataset: Dataset):
    """Textual grouping outline for the same inputs as `generate_default`.

    Hierarchical outlines are {"groupby": field, "children": [fields]};
    the flat fallback is a plain list of field names.
    """
    roles = assign_roles(list(fields), list(key), dataset)
    if roles is None:
        return [f.name for f in fields]
    outline = _TEXT[roles.rule]
    if isinstance(outline, list):
        return [_slot(roles, s) for s in outline]
    return {"groupby": _slot(roles, outline["groupby"]),
            "children": [_slot(roles, s) for s in outline["children"]]}
