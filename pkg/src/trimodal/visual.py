"""Visual compilation: spec -> Vega-Lite v6 document.

Rendering is out of scope; the output is a JSON document validating
against the vendored Vega-Lite v6 schema. Each unit carries an interval
selection parameter so a host UI can emit range predicates. Highlighting
reifies a predicate as a conditional opacity encoding: matching marks stay
fully opaque, the rest fade.
"""

from __future__ import annotations

import datetime
import json

from .ingest import Dataset
from .model import Measure, MultimodalSpec, unit_encodings
from .predicate import (
    And, FieldEqual, FieldOneOf, FieldRange, Predicate, TruePredicate, to_json,
)

SCHEMA_URL = "https://vega.github.io/schema/vega-lite/v6.json"
FACET_COLUMNS = 4
HIGHLIGHT_OPACITY = 1.0
FADE_OPACITY = 0.3


class NoVisualUnits(ValueError):
    """The spec has no visual units to compile."""


def _vl_type(measure: Measure, dataset: Dataset, fname: str) -> str:
    if measure == Measure.TEMPORAL:
        vals = [v for v in dataset.values(fname) if v is not None]
        if vals and all(isinstance(v, int) for v in vals):
            return "quantitative"  # bare years
        return "temporal"
    return measure.value


def _data_values(dataset: Dataset) -> list[dict]:
    out = []
    for rec in dataset.to_records():
        out.append({k: (v.isoformat() if isinstance(v, (datetime.date, datetime.datetime))
                        else v) for k, v in rec.items()})
    return out


def _unit_doc(spec: MultimodalSpec, dataset: Dataset, unit_id: str, mark: str) -> dict:
    enc = unit_encodings(spec, "visual", unit_id)
    encoding: dict = {}
    for channel, (fname, transform) in enc.items():
        if channel == "facet":
            continue
        fd = spec.field(fname)
        e: dict = {"field": fname, "type": _vl_type(fd.measure, dataset, fname)}
        if transform.aggregate is not None:
            e["aggregate"] = transform.aggregate
        if transform.bin:
            e["bin"] = {"maxbins": transform.bin_count} if transform.bin_count else True
        encoding[channel] = e
    unit = {
        "mark": {"type": mark, "point": False} if mark == "line" else {"type": mark},
        "encoding": encoding,
        "params": [{"name": f"sel_{unit_id}", "select": {"type": "interval"}}],
    }
    if "facet" in enc:
        fname = enc["facet"][0]
        fd = spec.field(fname)
        return {
            "facet": {"field": fname, "type": _vl_type(fd.measure, dataset, fname)},
            "columns": FACET_COLUMNS,
            "spec": unit,
        }
    return unit


def compile_visual(spec: MultimodalSpec, dataset: Dataset) -> dict:
    if not spec.visual_units:
        raise NoVisualUnits("spec has no visual units")
    units = [_unit_doc(spec, dataset, u.unit_id, u.mark) for u in spec.visual_units]
    doc: dict = {
        "$schema": SCHEMA_URL,
        "data": {"values": _data_values(dataset)},
    }
    if len(units) == 1:
        doc.update(units[0])
    elif spec.composition.visual_op == "layer":
        doc["layer"] = units
    else:
        doc["vconcat"] = units
    return doc


# ---------------------------------------------------------------------------
# Highlighting


def _expr_value(v) -> str:
    if isinstance(v, (datetime.date, datetime.datetime)):
        return json.dumps(v.isoformat())
    return json.dumps(v)


def predicate_expr(pred: Predicate) -> str:
    """Vega expression testing a datum against the predicate."""
    if isinstance(pred, TruePredicate):
        return "true"
    if isinstance(pred, FieldEqual):
        return f"datum[{json.dumps(pred.field)}] === {_expr_value(pred.value)}"
    if isinstance(pred, FieldRange):
        f = f"datum[{json.dumps(pred.field)}]"
        hi_op = "<=" if pred.inclusive_hi else "<"
        return (f"({f} >= {_expr_value(pred.lo)} && {f} {hi_op} {_expr_value(pred.hi)})")
    if isinstance(pred, FieldOneOf):
        f = f"datum[{json.dumps(pred.field)}]"
        opts = sorted((_expr_value(v) for v in pred.values))
        return "(" + " || ".join(f"{f} === {o}" for o in opts) + ")"
    if isinstance(pred, And):
        if not pred.parts:
            return "true"
        return "(" + " && ".join(predicate_expr(p) for p in pred.parts) + ")"
    raise TypeError(f"unknown predicate {pred!r}")


def _add_opacity(unit: dict, expr: str) -> None:
    if "spec" in unit:  # faceted unit
        _add_opacity(unit["spec"], expr)
        return
    if "layer" in unit:
        for u in unit["layer"]:
            _add_opacity(u, expr)
        return
    if "vconcat" in unit:
        for u in unit["vconcat"]:
            _add_opacity(u, expr)
        return
    unit.setdefault("encoding", {})["opacity"] = {
        "condition": {"test": expr, "value": HIGHLIGHT_OPACITY},
        "value": FADE_OPACITY,
    }


def apply_highlight(doc: dict, pred: Predicate, dataset: Dataset) -> dict:
    """New document with matching marks emphasized via conditional opacity."""
    out = json.loads(json.dumps(doc))
    _add_opacity(out, predicate_expr(pred))
    out.setdefault("usermeta", {})["selection"] = to_json(pred)
    return out
