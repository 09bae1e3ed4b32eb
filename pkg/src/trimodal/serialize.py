"""JSON (de)serialization of the multimodal spec.

The document is field-oriented at the top level: fields carry their
encoding references, and the `visual` / `audio` sections hold only unit
attributes (mark, traversal) and the composition operator. The schema for
this format ships at trimodal/schemas/spec.schema.json.
"""

from __future__ import annotations

from .model import (
    AudioUnit, Composition, EncodingRef, FieldDef, Measure, MultimodalSpec,
    Transform, TraversalStep, VisualUnit,
)


def transform_to_json(t: Transform) -> dict:
    out: dict = {}
    if t.aggregate is not None:
        out["aggregate"] = t.aggregate
    if t.bin:
        out["bin"] = True
        if t.bin_count is not None:
            out["binCount"] = t.bin_count
    return out


def transform_from_json(d: dict) -> Transform:
    return Transform(aggregate=d.get("aggregate"),
                     bin=bool(d.get("bin", False)),
                     bin_count=d.get("binCount"))


def spec_to_json(spec: MultimodalSpec) -> dict:
    fields = []
    for f in spec.fields:
        fd: dict = {"name": f.name, "type": f.measure.value}
        if not f.transform.is_identity():
            fd["transform"] = transform_to_json(f.transform)
        encs = []
        for ref in f.encodings:
            e = {"modality": ref.modality, "unit": ref.unit_id, "channel": ref.channel}
            if ref.override is not None:
                e.update(transform_to_json(ref.override))
            encs.append(e)
        if encs:
            fd["encodings"] = encs
        fields.append(fd)
    visual = {
        "units": [{"unit": u.unit_id, "mark": u.mark} for u in spec.visual_units],
        "composition": spec.composition.visual_op,
    }
    audio_units = []
    for u in spec.audio_units:
        steps = []
        for s in u.traversal:
            step: dict = {"field": s.field}
            if s.bin:
                step["bin"] = True
                if s.bin_count is not None:
                    step["binCount"] = s.bin_count
            steps.append(step)
        audio_units.append({"unit": u.unit_id, "traversal": steps})
    audio = {"units": audio_units, "composition": spec.composition.audio_op}
    return {"fields": fields, "visual": visual, "audio": audio, "key": list(spec.key)}


def spec_from_json(doc: dict) -> MultimodalSpec:
    fields = []
    for fd in doc.get("fields", []):
        refs = []
        for e in fd.get("encodings", []):
            override = None
            if any(k in e for k in ("aggregate", "bin", "binCount")):
                override = transform_from_json(e)
            refs.append(EncodingRef(e["modality"], e["unit"], e["channel"], override))
        fields.append(FieldDef(
            name=fd["name"],
            measure=Measure(fd["type"]),
            transform=transform_from_json(fd.get("transform", {})),
            encodings=tuple(refs),
        ))
    visual = doc.get("visual", {})
    audio = doc.get("audio", {})
    visual_units = tuple(VisualUnit(u["unit"], u.get("mark", "point"))
                         for u in visual.get("units", []))
    audio_units = tuple(
        AudioUnit(u["unit"], tuple(
            TraversalStep(s["field"], bool(s.get("bin", False)), s.get("binCount"))
            for s in u.get("traversal", [])))
        for u in audio.get("units", []))
    composition = Composition(
        visual_op=visual.get("composition", "concat"),
        visual_units=tuple(u.unit_id for u in visual_units),
        audio_op=audio.get("composition", "concat"),
        audio_units=tuple(u.unit_id for u in audio_units),
    )
    return MultimodalSpec(fields=tuple(fields), visual_units=visual_units,
                          audio_units=audio_units, composition=composition,
                          key=tuple(doc.get("key", [])))
