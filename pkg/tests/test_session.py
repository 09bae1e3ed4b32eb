import random

import pytest

from trimodal.model import (
    EncodingRef, Measure, Transform, TraversalStep, unit_encodings, validate,
)
from trimodal.session import (
    AddEncoding, AddUnit, EditorState, InvalidActionError, LoadDataset,
    MoveEncoding, RemoveEncoding, RemoveUnit, SetComposition, SetMark,
    SetMeasureType, SetTransform, SetTraversal, SwitchTab, ToggleField,
    apply_edit, available_actions, new_session,
)

STOCKS = open("src/trimodal/data/stocks.csv", "rb").read()
GAPMINDER = open("src/trimodal/data/gapminder.json", "rb").read()


@pytest.fixture
def stocks_state():
    return new_session(STOCKS, "csv")


def test_load_dataset_generates_defaults(stocks_state):
    assert stocks_state.spec.visual_units and stocks_state.spec.audio_units
    assert not stocks_state.dirty_defaults
    assert set(stocks_state.selected_fields) == {"symbol", "date", "price"}


def test_toggle_field_regenerates_defaults():
    state = new_session(GAPMINDER, "json-records")
    assert state.spec.visual_units == ()  # six fields: no rule
    for f in ("cluster", "pop"):
        state = apply_edit(state, ToggleField(f))
    # four fields left: faceted connected scatterplot + two audio units
    enc = unit_encodings(state.spec, "visual", "v0")
    assert enc["facet"][0] == "country" and enc["order"][0] == "year"
    assert len(state.spec.audio_units) == 2
    assert not state.dirty_defaults


def test_default_regeneration_is_pure():
    a = new_session(GAPMINDER, "json-records")
    b = new_session(GAPMINDER, "json-records")
    for f in ("cluster", "pop"):
        a = apply_edit(a, ToggleField(f))
        b = apply_edit(b, ToggleField(f))
    assert a.spec == b.spec


def test_manual_edit_sets_dirty_and_stops_regeneration(stocks_state):
    state = apply_edit(stocks_state, SetMark("v0", "point"))
    assert state.dirty_defaults
    before_units = (state.spec.visual_units, state.spec.audio_units)
    state = apply_edit(state, ToggleField("price"))
    state = apply_edit(state, ToggleField("price"))
    # spec units untouched; price came back without encodings
    assert (state.spec.visual_units, state.spec.audio_units) == before_units
    assert state.spec.field("price").encodings == ()


def test_refacet_walkthrough():
    state = new_session(GAPMINDER, "json-records")
    for f in ("cluster", "pop"):
        state = apply_edit(state, ToggleField(f))
    traversal_before = state.spec.audio_units[0].traversal
    state = apply_edit(state, RemoveEncoding("country", "visual", "v0", "facet"))
    state = apply_edit(state, MoveEncoding("year", "visual", "v0", "order",
                                           "visual", "v0", "facet"))
    enc = unit_encodings(state.spec, "visual", "v0")
    assert enc["facet"][0] == "year" and "order" not in enc
    assert state.spec.audio_units[0].traversal == traversal_before


def test_switch_tab_leaves_spec_unchanged(stocks_state):
    state = apply_edit(stocks_state, SwitchTab("visual"))
    assert state.spec == stocks_state.spec
    assert state.active_tab == "visual"
    assert not state.dirty_defaults


def test_duplicate_channel_rejected(stocks_state):
    with pytest.raises(InvalidActionError):
        apply_edit(stocks_state, AddEncoding("price", "visual", "v0", "y"))


def test_invalid_measure_change_rejected(stocks_state):
    state = apply_edit(stocks_state,
                       SetTransform("price", Transform(bin=True, bin_count=5)))
    with pytest.raises(InvalidActionError):
        apply_edit(state, SetMeasureType("price", Measure.NOMINAL))


def test_remove_unit_cascades_encodings(stocks_state):
    state = apply_edit(stocks_state, RemoveUnit("audio", "a0"))
    for f in state.spec.fields:
        assert all(r.unit_id != "a0" for r in f.encodings)
    assert state.spec.composition.audio_units == ()


def test_toggle_off_encoded_field_cascades_when_dirty(stocks_state):
    state = apply_edit(stocks_state, SetMark("v0", "point"))  # dirty
    state = apply_edit(state, ToggleField("date"))
    assert "date" not in state.spec.field_names()
    assert validate(state.spec) == []
    # date was the audio traversal's inner step and part of the key
    assert "date" not in [s.field for u in state.spec.audio_units for s in u.traversal]
    assert "date" not in state.spec.key


def test_set_traversal(stocks_state):
    state = apply_edit(stocks_state, SetTraversal(
        "a0", (TraversalStep("date"), TraversalStep("symbol"))))
    assert [s.field for s in state.spec.audio_units[0].traversal] == ["date", "symbol"]


def test_add_unit_allocates_fresh_id(stocks_state):
    state = apply_edit(stocks_state, AddUnit("visual"))
    assert [u.unit_id for u in state.spec.visual_units] == ["v0", "v1"]
    assert state.spec.composition.visual_units == ("v0", "v1")


def test_empty_session_offers_only_load_and_tabs():
    acts = available_actions(EditorState())
    kinds = {type(a) for a in acts}
    assert kinds == {LoadDataset, SwitchTab}


def test_available_actions_exclude_bound_channels(stocks_state):
    acts = available_actions(stocks_state)
    assert not any(isinstance(a, AddEncoding) and a.unit_id == "v0" and a.channel == "y"
                   for a in acts)


def test_available_actions_all_apply(stocks_state):
    for a in available_actions(stocks_state):
        if isinstance(a, LoadDataset):
            continue
        apply_edit(stocks_state, a)  # must not raise


def test_closure_fuzz_small():
    rng = random.Random(99)
    for _ in range(25):
        state = new_session(STOCKS, "csv")
        for _ in range(6):
            acts = [a for a in available_actions(state)
                    if not isinstance(a, LoadDataset)]
            if not acts:
                break
            state = apply_edit(state, rng.choice(acts))
            assert validate(state.spec) == []


def test_action_log_is_append_only(stocks_state):
    state = apply_edit(stocks_state, SwitchTab("audio"))
    state = apply_edit(state, SetMark("v0", "area"))
    assert state.log[-2:] == (SwitchTab("audio"), SetMark("v0", "area"))
