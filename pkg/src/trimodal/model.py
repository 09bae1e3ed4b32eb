"""The multimodal specification: field-oriented and encoding-oriented views.

A spec is stored field-first: each field carries the encoding references
that place it on visual or audio units. Units hold only their
modality-specific attributes (mark, traversal); their channel->field maps
are derived from the references, so the two orientations cannot drift
apart. `to_encoding_view` / `to_field_view` convert between the dual
orientations losslessly.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Optional


class Measure(str, Enum):
    QUANTITATIVE = "quantitative"
    NOMINAL = "nominal"
    ORDINAL = "ordinal"
    TEMPORAL = "temporal"


VISUAL_CHANNELS = ("x", "y", "color", "size", "facet", "order")
AUDIO_CHANNELS = ("pitch", "volume")
MARKS = ("point", "line", "bar", "area")
AGGREGATES = ("mean", "sum", "count", "min", "max")


@dataclass(frozen=True)
class Transform:
    aggregate: Optional[str] = None
    bin: bool = False
    bin_count: Optional[int] = None

    def is_identity(self) -> bool:
        return self.aggregate is None and not self.bin


@dataclass(frozen=True)
class EncodingRef:
    """Places a field on a (modality, unit, channel) slot.

    An optional transform override shadows the field-level transform for
    this channel only.
    """
    modality: str  # "visual" | "audio"
    unit_id: str
    channel: str
    override: Optional[Transform] = None


@dataclass(frozen=True)
class FieldDef:
    name: str
    measure: Measure
    transform: Transform = Transform()
    encodings: tuple[EncodingRef, ...] = ()


@dataclass(frozen=True)
class VisualUnit:
    unit_id: str
    mark: str = "point"


@dataclass(frozen=True)
class TraversalStep:
    field: str
    bin: bool = False
    bin_count: Optional[int] = None


@dataclass(frozen=True)
class AudioUnit:
    unit_id: str
    traversal: tuple[TraversalStep, ...] = ()


@dataclass(frozen=True)
class Composition:
    """How each modality's units are grouped: one operator over all units."""
    visual_op: str = "concat"  # "layer" | "concat"
    visual_units: tuple[str, ...] = ()
    audio_op: str = "concat"
    audio_units: tuple[str, ...] = ()


@dataclass(frozen=True)
class MultimodalSpec:
    fields: tuple[FieldDef, ...] = ()
    visual_units: tuple[VisualUnit, ...] = ()
    audio_units: tuple[AudioUnit, ...] = ()
    composition: Composition = Composition()
    key: tuple[str, ...] = ()

    def field(self, name: str) -> Optional[FieldDef]:
        for f in self.fields:
            if f.name == name:
                return f
        return None

    def field_names(self) -> tuple[str, ...]:
        return tuple(f.name for f in self.fields)


@dataclass(frozen=True)
class Violation:
    code: str
    path: str
    message: str


class InvalidSpecError(ValueError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(f"{v.code} at {v.path}" for v in self.violations))


class InconsistentViewError(ValueError):
    pass


def unit_encodings(spec: MultimodalSpec, modality: str, unit_id: str) -> dict[str, tuple[str, Transform]]:
    """Channel -> (field name, effective transform) for one unit."""
    out: dict[str, tuple[str, Transform]] = {}
    for f in spec.fields:
        for ref in f.encodings:
            if ref.modality == modality and ref.unit_id == unit_id:
                out[ref.channel] = (f.name, ref.override if ref.override is not None else f.transform)
    return out


def validate(spec: MultimodalSpec) -> list[Violation]:
    """Every invariant violation in the spec; an empty list means valid."""
    v: list[Violation] = []
    names = [f.name for f in spec.fields]
    seen = set()
    for i, f in enumerate(spec.fields):
        path = f"fields[{i}]"
        if not f.name:
            v.append(Violation("empty-field-name", path, "field name must be nonempty"))
        if f.name in seen:
            v.append(Violation("duplicate-field-name", path, f"field {f.name!r} defined twice"))
        seen.add(f.name)
        v.extend(_check_transform(f.transform, f.measure, path + ".transform"))
        if f.transform.aggregate is not None and f.transform.aggregate not in AGGREGATES:
            v.append(Violation("unknown-aggregate", path + ".transform",
                               f"unknown aggregate {f.transform.aggregate!r}"))

    vis_ids = {u.unit_id for u in spec.visual_units}
    aud_ids = {u.unit_id for u in spec.audio_units}

    taken: dict[tuple[str, str], str] = {}
    for i, f in enumerate(spec.fields):
        for j, ref in enumerate(f.encodings):
            path = f"fields[{i}].encodings[{j}]"
            if ref.modality == "visual":
                if ref.channel not in VISUAL_CHANNELS:
                    v.append(Violation("channel-modality-mismatch", path,
                                       f"{ref.channel!r} is not a visual channel"))
                if ref.unit_id not in vis_ids:
                    v.append(Violation("unknown-unit", path,
                                       f"visual unit {ref.unit_id!r} does not exist"))
            elif ref.modality == "audio":
                if ref.channel not in AUDIO_CHANNELS:
                    v.append(Violation("channel-modality-mismatch", path,
                                       f"{ref.channel!r} is not an audio channel"))
                if ref.unit_id not in aud_ids:
                    v.append(Violation("unknown-unit", path,
                                       f"audio unit {ref.unit_id!r} does not exist"))
            else:
                v.append(Violation("unknown-modality", path, f"unknown modality {ref.modality!r}"))
            slot = (ref.unit_id, ref.channel)
            if slot in taken:
                v.append(Violation("duplicate-channel", path,
                                   f"channel {ref.channel!r} of unit {ref.unit_id!r} already "
                                   f"bound to field {taken[slot]!r}"))
            else:
                taken[slot] = f.name
            if ref.override is not None:
                v.extend(_check_transform(ref.override, f.measure, path + ".override"))

    for i, u in enumerate(spec.visual_units):
        if u.mark not in MARKS:
            v.append(Violation("unknown-mark", f"visual_units[{i}]", f"unknown mark {u.mark!r}"))

    for i, u in enumerate(spec.audio_units):
        path = f"audio_units[{i}]"
        enc = unit_encodings(spec, "audio", u.unit_id)
        if enc and not u.traversal:
            v.append(Violation("traversal-empty", path,
                               f"audio unit {u.unit_id!r} has encodings but no traversal"))
        step_fields = [s.field for s in u.traversal]
        if len(step_fields) != len(set(step_fields)):
            v.append(Violation("traversal-duplicate-field", path,
                               "traversal fields must be distinct"))
        for j, step in enumerate(u.traversal):
            fd = spec.field(step.field)
            if fd is None:
                v.append(Violation("unknown-field", f"{path}.traversal[{j}]",
                                   f"traversal field {step.field!r} does not exist"))
            elif step.bin and fd.measure not in (Measure.QUANTITATIVE, Measure.TEMPORAL):
                v.append(Violation("bin-on-nominal", f"{path}.traversal[{j}]",
                                   f"cannot bin {fd.measure.value} field {step.field!r}"))

    v.extend(_check_composition(spec.composition.visual_units, vis_ids, "composition.visual"))
    v.extend(_check_composition(spec.composition.audio_units, aud_ids, "composition.audio"))
    if spec.composition.visual_op not in ("layer", "concat"):
        v.append(Violation("unknown-operator", "composition.visual", spec.composition.visual_op))
    if spec.composition.audio_op not in ("layer", "concat"):
        v.append(Violation("unknown-operator", "composition.audio", spec.composition.audio_op))

    if spec.composition.audio_op == "layer" and len(spec.audio_units) > 1:
        traversals = {u.traversal for u in spec.audio_units}
        if len(traversals) > 1:
            v.append(Violation("layered-traversal-mismatch", "composition.audio",
                               "layered audio units must share an identical traversal"))

    for k in spec.key:
        if k not in names:
            v.append(Violation("unknown-field", "key", f"key field {k!r} does not exist"))

    return v


def _check_transform(t: Transform, measure: Measure, path: str) -> list[Violation]:
    out = []
    if t.bin and measure not in (Measure.QUANTITATIVE, Measure.TEMPORAL):
        out.append(Violation("bin-on-nominal", path, f"cannot bin a {measure.value} field"))
    if t.aggregate is not None and t.aggregate not in AGGREGATES:
        out.append(Violation("unknown-aggregate", path, f"unknown aggregate {t.aggregate!r}"))
    return out


def _check_composition(listed: tuple[str, ...], ids: set[str], path: str) -> list[Violation]:
    out = []
    if sorted(listed) != sorted(ids):
        out.append(Violation("composition-coverage", path,
                             f"composition lists {listed!r} but units are {sorted(ids)!r}"))
    elif len(listed) != len(set(listed)):
        out.append(Violation("composition-coverage", path, "unit listed more than once"))
    return out


# ---------------------------------------------------------------------------
# Dual views


@dataclass(frozen=True)
class EncodingDef:
    field: str
    measure: Measure
    transform: Transform
    override: Optional[Transform] = None


@dataclass(frozen=True)
class UnitView:
    modality: str
    unit_id: str
    mark: Optional[str] = None
    traversal: tuple[TraversalStep, ...] = ()
    encodings: tuple[tuple[str, EncodingDef], ...] = ()  # (channel, def), channel-sorted


@dataclass(frozen=True)
class EncodingView:
    """Encoding-oriented projection: fields nested inside per-unit encodings."""
    units: tuple[UnitView, ...] = ()
    spare_fields: tuple[tuple[str, Measure, Transform], ...] = ()  # fields with no encodings
    key: tuple[str, ...] = ()
    composition: Composition = Composition()


def to_encoding_view(spec: MultimodalSpec) -> EncodingView:
    violations = validate(spec)
    if violations:
        raise InvalidSpecError(violations)
    units: list[UnitView] = []
    for u in spec.visual_units:
        units.append(UnitView("visual", u.unit_id, mark=u.mark,
                              encodings=_view_encodings(spec, "visual", u.unit_id)))
    for u in spec.audio_units:
        units.append(UnitView("audio", u.unit_id, traversal=u.traversal,
                              encodings=_view_encodings(spec, "audio", u.unit_id)))
    spare = tuple((f.name, f.measure, f.transform) for f in spec.fields if not f.encodings)
    return EncodingView(units=tuple(units), spare_fields=spare,
                        key=spec.key, composition=spec.composition)


def _view_encodings(spec, modality, unit_id):
    out = []
    for f in spec.fields:
        for ref in f.encodings:
            if ref.modality == modality and ref.unit_id == unit_id:
                out.append((ref.channel, EncodingDef(f.name, f.measure, f.transform, ref.override)))
    order = VISUAL_CHANNELS if modality == "visual" else AUDIO_CHANNELS
    out.sort(key=lambda e: order.index(e[0]))
    return tuple(out)


def to_field_view(view: EncodingView) -> MultimodalSpec:
    """Inverse of `to_encoding_view` on its image."""
    fields: dict[str, tuple[Measure, Transform]] = {}
    refs: dict[str, list[EncodingRef]] = {}
    taken: set[tuple[str, str]] = set()
    for u in view.units:
        for channel, enc in u.encodings:
            if (u.unit_id, channel) in taken:
                raise InconsistentViewError(
                    f"two encodings claim channel {channel!r} of unit {u.unit_id!r}")
            taken.add((u.unit_id, channel))
            known = fields.get(enc.field)
            if known is not None and known != (enc.measure, enc.transform):
                raise InconsistentViewError(
                    f"field {enc.field!r} has conflicting definitions across encodings")
            fields[enc.field] = (enc.measure, enc.transform)
            refs.setdefault(enc.field, []).append(
                EncodingRef(u.modality, u.unit_id, channel, enc.override))
    for name, measure, transform in view.spare_fields:
        known = fields.get(name)
        if known is not None and known != (measure, transform):
            raise InconsistentViewError(f"field {name!r} has conflicting definitions")
        fields[name] = (measure, transform)
        refs.setdefault(name, [])
    field_defs = tuple(FieldDef(name, m, t, tuple(refs[name])) for name, (m, t) in fields.items())
    visual_units = tuple(VisualUnit(u.unit_id, u.mark or "point")
                         for u in view.units if u.modality == "visual")
    audio_units = tuple(AudioUnit(u.unit_id, u.traversal)
                        for u in view.units if u.modality == "audio")
    return MultimodalSpec(fields=field_defs, visual_units=visual_units,
                          audio_units=audio_units, composition=view.composition,
                          key=view.key)


def canonical(spec: MultimodalSpec) -> MultimodalSpec:
    """Normalize ordering of unordered collections for structural comparison."""
    fields = tuple(sorted(
        (replace(f, encodings=tuple(sorted(f.encodings, key=lambda r: (r.modality, r.unit_id, r.channel))))
         for f in spec.fields), key=lambda f: f.name))
    return replace(spec,
                   fields=fields,
                   visual_units=tuple(sorted(spec.visual_units, key=lambda u: u.unit_id)),
                   audio_units=tuple(sorted(spec.audio_units, key=lambda u: u.unit_id)),
                   composition=replace(spec.composition,
                                       visual_units=tuple(sorted(spec.composition.visual_units)),
                                       audio_units=tuple(sorted(spec.composition.audio_units))))


def structurally_equal(a: MultimodalSpec, b: MultimodalSpec) -> bool:
    return canonical(a) == canonical(b)
