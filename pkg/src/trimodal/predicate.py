"""Selection predicates: the synchronization currency between modalities.

A predicate is a conjunction of per-field constraints (equality, half-open
range, membership). Every interaction surface emits one of these, and each
modality reifies it in its own way: the visual document as a conditional
encoding, the audio schedule as a domain filter, the textual tree as a
re-scope. The JSON encoding is the UI/service wire format:

    {"and": []}                                   true (select all)
    {"field": "symbol", "equal": "AAPL"}
    {"field": "year", "range": [1990, 1996]}      lo <= v < hi
    {"field": "site", "oneOf": ["Morris", "Duluth"]}
    {"and": [p, q, ...]}
"""

from __future__ import annotations

import datetime
from dataclasses import dataclass
from typing import Any, Optional

from .ingest import Dataset, parse_temporal
from .model import Measure


class UnknownFieldError(KeyError):
    pass


@dataclass(frozen=True)
class Predicate:
    def fields(self) -> set[str]:
        return set()


@dataclass(frozen=True)
class TruePredicate(Predicate):
    pass


TRUE = TruePredicate()


@dataclass(frozen=True)
class FieldEqual(Predicate):
    field: str
    value: Any

    def fields(self):
        return {self.field}


@dataclass(frozen=True)
class FieldRange(Predicate):
    """lo <= v < hi; `inclusive_hi` closes the top bin at the domain max."""
    field: str
    lo: Any
    hi: Any
    inclusive_hi: bool = False

    def fields(self):
        return {self.field}


@dataclass(frozen=True)
class FieldOneOf(Predicate):
    field: str
    values: frozenset

    def fields(self):
        return {self.field}


@dataclass(frozen=True)
class And(Predicate):
    parts: tuple[Predicate, ...] = ()

    def fields(self):
        out = set()
        for p in self.parts:
            out |= p.fields()
        return out


def conjoin(*preds: Predicate) -> Predicate:
    """Flattened conjunction with trues dropped."""
    parts: list[Predicate] = []
    for p in preds:
        if isinstance(p, TruePredicate):
            continue
        if isinstance(p, And):
            parts.extend(q for q in p.parts if not isinstance(q, TruePredicate))
        else:
            parts.append(p)
    if not parts:
        return TRUE
    if len(parts) == 1:
        return parts[0]
    return And(tuple(parts))


def _coerce(value, measure: Optional[Measure]):
    if measure == Measure.TEMPORAL:
        parsed = parse_temporal(value)
        return parsed if parsed is not None else value
    return value


def evaluate(pred: Predicate, row: tuple, dataset: Dataset) -> bool:
    """Does `row` (a tuple shaped like dataset rows) satisfy the predicate?"""
    if isinstance(pred, TruePredicate):
        return True
    if isinstance(pred, And):
        return all(evaluate(p, row, dataset) for p in pred.parts)
    try:
        i = dataset.index(pred.field)
    except KeyError:
        raise UnknownFieldError(pred.field) from None
    measure = dataset.columns[i].measure
    v = row[i]
    if v is None:
        return False
    if isinstance(pred, FieldEqual):
        return v == _coerce(pred.value, measure)
    if isinstance(pred, FieldOneOf):
        return v in {_coerce(x, measure) for x in pred.values}
    if isinstance(pred, FieldRange):
        lo = _coerce(pred.lo, measure)
        hi = _coerce(pred.hi, measure)
        if pred.inclusive_hi:
            return lo <= v <= hi
        return lo <= v < hi
    raise TypeError(f"unknown predicate {pred!r}")


def matching_rows(pred: Predicate, dataset: Dataset) -> list[int]:
    return [i for i, r in enumerate(dataset.rows) if evaluate(pred, r, dataset)]


# ---------------------------------------------------------------------------
# Wire format


def _value_to_json(v):
    if isinstance(v, (datetime.date, datetime.datetime)):
        return v.isoformat()
    return v


def to_json(pred: Predicate) -> dict:
    if isinstance(pred, TruePredicate):
        return {"and": []}
    if isinstance(pred, FieldEqual):
        return {"field": pred.field, "equal": _value_to_json(pred.value)}
    if isinstance(pred, FieldRange):
        out = {"field": pred.field, "range": [_value_to_json(pred.lo), _value_to_json(pred.hi)]}
        if pred.inclusive_hi:
            out["inclusive"] = True
        return out
    if isinstance(pred, FieldOneOf):
        return {"field": pred.field,
                "oneOf": sorted((_value_to_json(v) for v in pred.values), key=repr)}
    if isinstance(pred, And):
        return {"and": [to_json(p) for p in pred.parts]}
    raise TypeError(f"unknown predicate {pred!r}")


def from_json(doc: dict) -> Predicate:
    if not isinstance(doc, dict):
        raise ValueError("predicate must be a JSON object")
    if "and" in doc:
        parts = tuple(from_json(p) for p in doc["and"])
        return conjoin(*parts) if parts else TRUE
    if "field" not in doc:
        if not doc:
            return TRUE
        raise ValueError(f"malformed predicate: {doc!r}")
    f = doc["field"]
    if "equal" in doc:
        return FieldEqual(f, doc["equal"])
    if "range" in doc:
        lo, hi = doc["range"]
        return FieldRange(f, lo, hi, inclusive_hi=bool(doc.get("inclusive", False)))
    if "oneOf" in doc:
        return FieldOneOf(f, frozenset(doc["oneOf"]))
    raise ValueError(f"malformed predicate: {doc!r}")


# ---------------------------------------------------------------------------
# Emission sources and reification


@dataclass(frozen=True)
class SyncMessage:
    source: str  # "visual" | "text" | "audio"
    predicate: Predicate


@dataclass(frozen=True)
class ReifiedEffect:
    target: str           # modality receiving the effect
    kind: str             # "highlight" | "filter" | "rescope"
    predicate: Predicate  # the constraint the payload realizes
    payload: Any = None


def from_text_node(node) -> Predicate:
    """The predicate scoping a textual node (ancestors already conjoined)."""
    return node.predicate


def from_audio_position(state: dict, traversal, dataset: Dataset) -> Predicate:
    """Conjunction of constraints for the traversal steps fixed in `state`.

    `state` maps field name -> current value (discrete steps) or
    (lo, hi) bin bounds (binned steps).
    """
    parts = []
    for step in traversal:
        if step.field not in state:
            continue
        v = state[step.field]
        if step.bin:
            lo, hi = v
            domain_max = max((x for x in dataset.values(step.field) if x is not None),
                             default=hi)
            parts.append(FieldRange(step.field, lo, hi, inclusive_hi=(hi >= domain_max)))
        else:
            parts.append(FieldEqual(step.field, v))
    return conjoin(*parts)


def reify(message: SyncMessage, target: str, spec, dataset: Dataset,
          schedule_options=None) -> Optional[ReifiedEffect]:
    """Translate a sync message into the target modality's effect.

    The source modality gets no effect (its own state already changed).
    Targets with nothing to render (e.g. no visual units) return None.
    """
    if target == message.source:
        return None
    pred = message.predicate
    if target == "visual":
        from . import visual
        if not spec.visual_units:
            return None
        doc = visual.apply_highlight(visual.compile_visual(spec, dataset), pred, dataset)
        return ReifiedEffect("visual", "highlight", pred, doc)
    if target == "audio":
        from . import audio
        if not spec.audio_units:
            return None
        opts = schedule_options or audio.ScheduleOptions()
        opts = audio.ScheduleOptions(rate=opts.rate, ticks=opts.ticks,
                                     filter=conjoin(opts.filter, pred))
        schedules = [audio.schedule(u, spec, dataset, opts) for u in spec.audio_units]
        return ReifiedEffect("audio", "filter", pred, schedules)
    if target == "text":
        from . import textual
        tree = textual.rescope_tree(textual.build_tree(spec, dataset), pred, dataset)
        return ReifiedEffect("text", "rescope", pred, tree)
    raise ValueError(f"unknown modality {target!r}")
