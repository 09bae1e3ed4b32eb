import json
import pathlib

import jsonschema
import pytest

from trimodal.defaults import generate_default
from trimodal.ingest import infer_key
from trimodal.model import FieldDef, MultimodalSpec, unit_encodings
from trimodal.predicate import FieldEqual, FieldRange, TRUE, conjoin
from trimodal.visual import (
    NoVisualUnits, apply_highlight, compile_visual, predicate_expr,
)

SCHEMA_PATH = (pathlib.Path(__file__).resolve().parent.parent /
               "src" / "trimodal" / "schemas" / "vega-lite-v6.json")


@pytest.fixture(scope="module")
def validator():
    return jsonschema.Draft7Validator(json.loads(SCHEMA_PATH.read_text()))


def default_spec(ds, names=None):
    names = list(names or ds.column_names())
    fields = [FieldDef(n, ds.measure(n)) for n in names]
    return generate_default(fields, infer_key(ds, names), ds)


def test_stocks_line_unit(stocks, validator):
    doc = compile_visual(default_spec(stocks), stocks)
    assert doc["mark"]["type"] == "line"
    enc = doc["encoding"]
    assert enc["x"]["field"] == "date" and enc["x"]["type"] == "temporal"
    assert enc["y"]["field"] == "price" and enc["y"]["type"] == "quantitative"
    assert enc["color"]["field"] == "symbol"
    assert not list(validator.iter_errors(doc))


def test_interval_selection_always_present(stocks):
    doc = compile_visual(default_spec(stocks), stocks)
    assert doc["params"][0]["select"]["type"] == "interval"


def test_facet_lowers_to_facet_operator(gapminder, validator):
    spec = default_spec(gapminder, ["year", "country", "life_expect", "fertility"])
    doc = compile_visual(spec, gapminder)
    assert doc["facet"]["field"] == "country"
    assert doc["columns"] == 4
    assert doc["spec"]["mark"]["type"] == "line"
    assert doc["spec"]["encoding"]["order"]["field"] == "year"
    assert not list(validator.iter_errors(doc))


def test_no_visual_units_error(gapminder):
    spec = default_spec(gapminder)  # all six fields: no rule
    with pytest.raises(NoVisualUnits):
        compile_visual(spec, gapminder)


def test_channel_fidelity(stocks):
    spec = default_spec(stocks)
    doc = compile_visual(spec, stocks)
    enc = unit_encodings(spec, "visual", "v0")
    assert {(ch, doc["encoding"][ch]["field"]) for ch in doc["encoding"]} == \
        {(ch, f) for ch, (f, _) in enc.items()}


def test_highlight_adds_conditional_opacity(stocks, validator):
    doc = compile_visual(default_spec(stocks), stocks)
    out = apply_highlight(doc, FieldEqual("symbol", "AAPL"), stocks)
    cond = out["encoding"]["opacity"]
    assert cond["condition"]["value"] == 1.0 and cond["value"] == 0.3
    assert 'datum["symbol"] === "AAPL"' in cond["condition"]["test"]
    assert not list(validator.iter_errors(out))


def test_highlight_is_non_destructive(stocks):
    doc = compile_visual(default_spec(stocks), stocks)
    before = json.dumps(doc, sort_keys=True)
    out = apply_highlight(doc, FieldEqual("symbol", "AAPL"), stocks)
    assert json.dumps(doc, sort_keys=True) == before  # input untouched
    stripped = {k: v for k, v in out.items() if k != "usermeta"}
    stripped["encoding"] = {k: v for k, v in out["encoding"].items() if k != "opacity"}
    assert json.dumps(stripped, sort_keys=True) == before


def test_true_predicate_expr_matches_all(stocks):
    doc = compile_visual(default_spec(stocks), stocks)
    out = apply_highlight(doc, TRUE, stocks)
    assert out["encoding"]["opacity"]["condition"]["test"] == "true"


def test_predicate_expr_forms():
    p = conjoin(FieldEqual("a", 1), FieldRange("b", 0, 2, inclusive_hi=True))
    expr = predicate_expr(p)
    assert 'datum["a"] === 1' in expr
    assert 'datum["b"] <= 2' in expr and "&&" in expr


def test_layer_composition(stocks, validator):
    from dataclasses import replace
    from trimodal.model import Composition, EncodingRef, VisualUnit
    spec = default_spec(stocks)
    # Add a second layered unit sharing the x/y fields.
    fields = tuple(
        replace(f, encodings=f.encodings + tuple(
            EncodingRef("visual", "v1", r.channel)
            for r in f.encodings if r.modality == "visual"))
        for f in spec.fields)
    spec = replace(spec, fields=fields,
                   visual_units=spec.visual_units + (VisualUnit("v1", "point"),),
                   composition=replace(spec.composition, visual_op="layer",
                                       visual_units=("v0", "v1")))
    doc = compile_visual(spec, stocks)
    assert len(doc["layer"]) == 2
    assert not list(validator.iter_errors(doc))


def test_highlight_reaches_faceted_and_layered_units(gapminder, stocks):
    spec = default_spec(gapminder, ["year", "country", "life_expect", "fertility"])
    doc = apply_highlight(compile_visual(spec, gapminder),
                          FieldEqual("country", "China"), gapminder)
    assert "opacity" in doc["spec"]["encoding"]
