"""Compile tabular data into linked visual, textual, and audio artifacts."""

from .ingest import Dataset, ParseError, infer_key, infer_types, load_dataset, load_typed
from .model import (
    AudioUnit, Composition, EncodingRef, FieldDef, InvalidSpecError, Measure,
    MultimodalSpec, Transform, TraversalStep, VisualUnit, validate,
)
from .predicate import (
    And, FieldEqual, FieldOneOf, FieldRange, Predicate, SyncMessage, TRUE,
    conjoin, evaluate, matching_rows, reify,
)
from .serialize import spec_from_json, spec_to_json

__version__ = "0.1.0"

__all__ = [
    "And", "AudioUnit", "Composition", "Dataset", "EncodingRef", "FieldDef",
    "FieldEqual", "FieldOneOf", "FieldRange", "InvalidSpecError", "Measure",
    "MultimodalSpec", "ParseError", "Predicate", "SyncMessage", "TRUE",
    "Transform", "TraversalStep", "VisualUnit", "conjoin", "evaluate",
    "infer_key", "infer_types", "load_dataset", "load_typed", "matching_rows",
    "reify", "spec_from_json", "spec_to_json", "validate",
]
