"""Structured-editing state machine.

Every edit is a transition from one valid spec to another: `apply_edit`
rejects any action whose resulting state fails validation, and
`available_actions` enumerates concrete actions guaranteed to succeed (it
filters candidates by actually applying them). While the spec still equals
the generated defaults, toggling a field re-runs key inference and default
generation; after the first manual edit (`dirty_defaults`), toggles only
add or remove the field so user work is never clobbered.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field, replace
from typing import Optional

from . import defaults as defaults_mod
from .ingest import Dataset, apply_types, infer_key, infer_types, load_dataset
from .model import (
    AGGREGATES, AUDIO_CHANNELS, MARKS, VISUAL_CHANNELS,
    AudioUnit, Composition, EncodingRef, FieldDef, Measure, MultimodalSpec,
    Transform, TraversalStep, VisualUnit, validate,
)

TABS = ("data", "fields", "visual", "audio")


class InvalidActionError(ValueError):
    def __init__(self, message, violations=()):
        self.violations = list(violations)
        super().__init__(message)


@dataclass(frozen=True)
class EditAction:
    pass


@dataclass(frozen=True)
class LoadDataset(EditAction):
    data: Optional[bytes] = None
    fmt: str = "csv"


@dataclass(frozen=True)
class ToggleField(EditAction):
    field: str


@dataclass(frozen=True)
class SetMeasureType(EditAction):
    field: str
    measure: Measure


@dataclass(frozen=True)
class SetTransform(EditAction):
    field: str
    transform: Transform


@dataclass(frozen=True)
class AddEncoding(EditAction):
    field: str
    modality: str
    unit_id: str
    channel: str
    override: Optional[Transform] = None


@dataclass(frozen=True)
class RemoveEncoding(EditAction):
    field: str
    modality: str
    unit_id: str
    channel: str


@dataclass(frozen=True)
class MoveEncoding(EditAction):
    field: str
    from_modality: str
    from_unit: str
    from_channel: str
    to_modality: str
    to_unit: str
    to_channel: str


@dataclass(frozen=True)
class SetMark(EditAction):
    unit_id: str
    mark: str


@dataclass(frozen=True)
class AddUnit(EditAction):
    modality: str
    unit_id: Optional[str] = None


@dataclass(frozen=True)
class RemoveUnit(EditAction):
    modality: str
    unit_id: str


@dataclass(frozen=True)
class SetTraversal(EditAction):
    unit_id: str
    steps: tuple[TraversalStep, ...]


@dataclass(frozen=True)
class SetComposition(EditAction):
    modality: str
    operator: str


@dataclass(frozen=True)
class SwitchTab(EditAction):
    tab: str


@dataclass(frozen=True)
class EditorState:
    dataset: Optional[Dataset] = None
    selected_fields: tuple[str, ...] = ()
    spec: MultimodalSpec = MultimodalSpec()
    active_tab: str = "data"
    dirty_defaults: bool = False
    log: tuple[EditAction, ...] = ()  # append-only, enables replay


def _check_state(state: EditorState) -> list[str]:
    problems = [f"{v.code} at {v.path}" for v in validate(state.spec)]
    cols = set(state.dataset.column_names()) if state.dataset else set()
    for f in state.selected_fields:
        if f not in cols:
            problems.append(f"selected field {f!r} not in dataset")
    for f in state.spec.field_names():
        if f not in set(state.selected_fields):
            problems.append(f"spec field {f!r} not selected")
    return problems


def _regenerate(state: EditorState, selected: tuple[str, ...]) -> EditorState:
    ds = state.dataset
    key = infer_key(ds, list(selected))
    fields = [FieldDef(n, ds.measure(n)) for n in ds.column_names() if n in selected]
    spec = defaults_mod.generate_default(fields, key, ds)
    return replace(state, selected_fields=selected, spec=spec)


def _remove_field(spec: MultimodalSpec, name: str) -> MultimodalSpec:
    """Drop a field and cascade: its encodings go with it, traversal steps
    over it are removed, and an audio unit left with encodings but an empty
    traversal is removed entirely."""
    fields = tuple(f for f in spec.fields if f.name != name)
    audio_units = []
    dead_units = set()
    for u in spec.audio_units:
        steps = tuple(s for s in u.traversal if s.field != name)
        enc_fields = [f for f in fields
                      for r in f.encodings
                      if r.modality == "audio" and r.unit_id == u.unit_id]
        if not steps and enc_fields:
            dead_units.add(u.unit_id)
            continue
        audio_units.append(AudioUnit(u.unit_id, steps))
    if dead_units:
        fields = tuple(
            replace(f, encodings=tuple(r for r in f.encodings
                                       if not (r.modality == "audio" and r.unit_id in dead_units)))
            for f in fields)
    comp = replace(spec.composition,
                   audio_units=tuple(u for u in spec.composition.audio_units
                                     if u not in dead_units))
    key = tuple(k for k in spec.key if k != name)
    return replace(spec, fields=fields, audio_units=tuple(audio_units),
                   composition=comp, key=key)


def _apply(state: EditorState, action: EditAction) -> EditorState:
    if isinstance(action, SwitchTab):
        if action.tab not in TABS:
            raise InvalidActionError(f"unknown tab {action.tab!r}")
        return replace(state, active_tab=action.tab)

    if isinstance(action, LoadDataset):
        if action.data is None:
            raise InvalidActionError("LoadDataset requires data")
        ds = load_dataset(action.data, action.fmt)
        ds = apply_types(ds, infer_types(ds))
        fresh = EditorState(dataset=ds, active_tab=state.active_tab)
        return _regenerate(fresh, ds.column_names())

    if state.dataset is None:
        raise InvalidActionError("no dataset loaded")

    if isinstance(action, ToggleField):
        if action.field not in state.dataset.column_names():
            raise InvalidActionError(f"unknown field {action.field!r}")
        if action.field in state.selected_fields:
            selected = tuple(f for f in state.selected_fields if f != action.field)
        else:
            selected = tuple(n for n in state.dataset.column_names()
                             if n in state.selected_fields or n == action.field)
        if not state.dirty_defaults:
            return _regenerate(state, selected)
        spec = state.spec
        if action.field in spec.field_names():
            spec = _remove_field(spec, action.field)
        elif action.field in selected:
            spec = replace(spec, fields=spec.fields +
                           (FieldDef(action.field, state.dataset.measure(action.field)),))
        return replace(state, selected_fields=selected, spec=spec)

    # Everything below is a manual edit.
    spec = state.spec

    if isinstance(action, SetMeasureType):
        fd = spec.field(action.field)
        if fd is None:
            raise InvalidActionError(f"unknown field {action.field!r}")
        fields = tuple(replace(f, measure=action.measure) if f.name == action.field else f
                       for f in spec.fields)
        spec = replace(spec, fields=fields)

    elif isinstance(action, SetTransform):
        fd = spec.field(action.field)
        if fd is None:
            raise InvalidActionError(f"unknown field {action.field!r}")
        fields = tuple(replace(f, transform=action.transform) if f.name == action.field else f
                       for f in spec.fields)
        spec = replace(spec, fields=fields)

    elif isinstance(action, AddEncoding):
        fd = spec.field(action.field)
        if fd is None:
            raise InvalidActionError(f"unknown field {action.field!r}")
        ref = EncodingRef(action.modality, action.unit_id, action.channel, action.override)
        fields = tuple(replace(f, encodings=f.encodings + (ref,)) if f.name == action.field else f
                       for f in spec.fields)
        spec = replace(spec, fields=fields)

    elif isinstance(action, RemoveEncoding):
        spec = _drop_ref(spec, action.field, action.modality, action.unit_id, action.channel)

    elif isinstance(action, MoveEncoding):
        moved = _find_ref(spec, action.field, action.from_modality,
                          action.from_unit, action.from_channel)
        if moved is None:
            raise InvalidActionError("no such encoding to move")
        spec = _drop_ref(spec, action.field, action.from_modality,
                         action.from_unit, action.from_channel)
        ref = EncodingRef(action.to_modality, action.to_unit, action.to_channel, moved.override)
        fields = tuple(replace(f, encodings=f.encodings + (ref,)) if f.name == action.field else f
                       for f in spec.fields)
        spec = replace(spec, fields=fields)

    elif isinstance(action, SetMark):
        if not any(u.unit_id == action.unit_id for u in spec.visual_units):
            raise InvalidActionError(f"unknown visual unit {action.unit_id!r}")
        spec = replace(spec, visual_units=tuple(
            replace(u, mark=action.mark) if u.unit_id == action.unit_id else u
            for u in spec.visual_units))

    elif isinstance(action, AddUnit):
        uid = action.unit_id or _fresh_unit_id(spec, action.modality)
        if action.modality == "visual":
            spec = replace(spec, visual_units=spec.visual_units + (VisualUnit(uid),),
                           composition=replace(spec.composition,
                                               visual_units=spec.composition.visual_units + (uid,)))
        elif action.modality == "audio":
            spec = replace(spec, audio_units=spec.audio_units + (AudioUnit(uid),),
                           composition=replace(spec.composition,
                                               audio_units=spec.composition.audio_units + (uid,)))
        else:
            raise InvalidActionError(f"unknown modality {action.modality!r}")

    elif isinstance(action, RemoveUnit):
        spec = _remove_unit(spec, action.modality, action.unit_id)

    elif isinstance(action, SetTraversal):
        if not any(u.unit_id == action.unit_id for u in spec.audio_units):
            raise InvalidActionError(f"unknown audio unit {action.unit_id!r}")
        spec = replace(spec, audio_units=tuple(
            replace(u, traversal=tuple(action.steps)) if u.unit_id == action.unit_id else u
            for u in spec.audio_units))

    elif isinstance(action, SetComposition):
        if action.modality == "visual":
            spec = replace(spec, composition=replace(spec.composition, visual_op=action.operator))
        elif action.modality == "audio":
            spec = replace(spec, composition=replace(spec.composition, audio_op=action.operator))
        else:
            raise InvalidActionError(f"unknown modality {action.modality!r}")

    else:
        raise InvalidActionError(f"unknown action {action!r}")

    return replace(state, spec=spec, dirty_defaults=True)


def _find_ref(spec, fname, modality, unit_id, channel):
    fd = spec.field(fname)
    if fd is None:
        return None
    for r in fd.encodings:
        if (r.modality, r.unit_id, r.channel) == (modality, unit_id, channel):
            return r
    return None


def _drop_ref(spec, fname, modality, unit_id, channel):
    if _find_ref(spec, fname, modality, unit_id, channel) is None:
        raise InvalidActionError("no such encoding")
    fields = tuple(
        replace(f, encodings=tuple(
            r for r in f.encodings
            if (r.modality, r.unit_id, r.channel) != (modality, unit_id, channel)))
        if f.name == fname else f
        for f in spec.fields)
    return replace(spec, fields=fields)


def _remove_unit(spec, modality, unit_id):
    if modality == "visual":
        if not any(u.unit_id == unit_id for u in spec.visual_units):
            raise InvalidActionError(f"unknown visual unit {unit_id!r}")
        spec = replace(spec, visual_units=tuple(u for u in spec.visual_units if u.unit_id != unit_id),
                       composition=replace(spec.composition, visual_units=tuple(
                           u for u in spec.composition.visual_units if u != unit_id)))
    elif modality == "audio":
        if not any(u.unit_id == unit_id for u in spec.audio_units):
            raise InvalidActionError(f"unknown audio unit {unit_id!r}")
        spec = replace(spec, audio_units=tuple(u for u in spec.audio_units if u.unit_id != unit_id),
                       composition=replace(spec.composition, audio_units=tuple(
                           u for u in spec.composition.audio_units if u != unit_id)))
    else:
        raise InvalidActionError(f"unknown modality {modality!r}")
    fields = tuple(
        replace(f, encodings=tuple(r for r in f.encodings
                                   if not (r.modality == modality and r.unit_id == unit_id)))
        for f in spec.fields)
    return replace(spec, fields=fields)


def _fresh_unit_id(spec, modality):
    prefix = "v" if modality == "visual" else "a"
    taken = {u.unit_id for u in (spec.visual_units if modality == "visual" else spec.audio_units)}
    i = 0
    while f"{prefix}{i}" in taken:
        i += 1
    return f"{prefix}{i}"


def apply_edit(state: EditorState, action: EditAction) -> EditorState:
    new_state = _apply(state, action)
    problems = _check_state(new_state)
    if problems:
        raise InvalidActionError("action yields an invalid state: " + "; ".join(problems),
                                 violations=problems)
    return replace(new_state, log=state.log + (action,))


# ---------------------------------------------------------------------------
# Action enumeration


def _candidate_actions(state: EditorState):
    for tab in TABS:
        if tab != state.active_tab:
            yield SwitchTab(tab)
    if state.dataset is None:
        yield LoadDataset()  # template: caller supplies the payload
        return
    ds = state.dataset
    for name in ds.column_names():
        yield ToggleField(name)
    spec = state.spec
    for f in spec.fields:
        for m in Measure:
            if m != f.measure:
                yield SetMeasureType(f.name, m)
        yield SetTransform(f.name, Transform())
        yield SetTransform(f.name, Transform(aggregate="mean"))
        if f.measure in (Measure.QUANTITATIVE, Measure.TEMPORAL):
            yield SetTransform(f.name, Transform(bin=True, bin_count=10))
    bound = {(r.unit_id, r.channel) for f in spec.fields for r in f.encodings}
    for u in spec.visual_units:
        for mark in MARKS:
            if mark != u.mark:
                yield SetMark(u.unit_id, mark)
        for ch in VISUAL_CHANNELS:
            if (u.unit_id, ch) in bound:
                continue
            for f in spec.fields:
                yield AddEncoding(f.name, "visual", u.unit_id, ch)
    for u in spec.audio_units:
        for ch in AUDIO_CHANNELS:
            if (u.unit_id, ch) in bound:
                continue
            for f in spec.fields:
                yield AddEncoding(f.name, "audio", u.unit_id, ch)
        fields = [s.field for s in u.traversal]
        for perm in itertools.islice(itertools.permutations(fields), 6):
            if list(perm) != fields:
                yield SetTraversal(u.unit_id, tuple(TraversalStep(f) for f in perm))
    for f in spec.fields:
        for r in f.encodings:
            yield RemoveEncoding(f.name, r.modality, r.unit_id, r.channel)
            targets = ([("visual", u.unit_id, ch) for u in spec.visual_units
                        for ch in VISUAL_CHANNELS] +
                       [("audio", u.unit_id, ch) for u in spec.audio_units
                        for ch in AUDIO_CHANNELS])
            for mod, uid, ch in targets:
                if (uid, ch) in bound:
                    continue
                yield MoveEncoding(f.name, r.modality, r.unit_id, r.channel, mod, uid, ch)
    yield AddUnit("visual")
    yield AddUnit("audio")
    for u in spec.visual_units:
        yield RemoveUnit("visual", u.unit_id)
    for u in spec.audio_units:
        yield RemoveUnit("audio", u.unit_id)
    for modality in ("visual", "audio"):
        for op in ("layer", "concat"):
            yield SetComposition(modality, op)


def available_actions(state: EditorState) -> list[EditAction]:
    """Concrete actions guaranteed valid: each candidate is applied and kept
    only if the resulting state passes validation."""
    out = []
    for action in _candidate_actions(state):
        if isinstance(action, LoadDataset):
            out.append(action)
            continue
        try:
            apply_edit(state, action)
        except InvalidActionError:
            continue
        out.append(action)
    return out


def new_session(data: bytes, fmt: str = "csv") -> EditorState:
    return apply_edit(EditorState(), LoadDataset(data, fmt))
