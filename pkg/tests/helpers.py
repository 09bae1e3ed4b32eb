"""Shared test utilities."""

from trimodal.model import MultimodalSpec, unit_encodings


def spec_fragments(spec: MultimodalSpec) -> dict:
    """Project a spec onto the golden-fixture shape (mark, channel->field
    maps, audio pitch/traversal, key)."""
    out: dict = {"visual": None, "audio": [], "key": list(spec.key)}
    if spec.visual_units:
        unit = spec.visual_units[0]
        enc = unit_encodings(spec, "visual", unit.unit_id)
        out["visual"] = {"mark": unit.mark,
                         "encodings": {ch: f for ch, (f, _) in enc.items()}}
    for unit in spec.audio_units:
        enc = unit_encodings(spec, "audio", unit.unit_id)
        entry: dict = {}
        if "pitch" in enc:
            fname, transform = enc["pitch"]
            entry["pitch"] = fname
            if transform.aggregate is not None:
                entry["aggregate"] = transform.aggregate
        entry["traversal"] = [
            {"field": s.field, **({"bin": True} if s.bin else {})}
            for s in unit.traversal]
        out["audio"].append(entry)
    return out


def normalize_golden(doc: dict) -> dict:
    """Golden files omit None visual and use the same shape as spec_fragments."""
    return {"visual": doc.get("visual"), "audio": doc.get("audio", []),
            "key": doc.get("key", [])}
