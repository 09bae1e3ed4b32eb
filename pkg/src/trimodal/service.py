"""HTTP service: sessions, edit actions, artifacts, and selection sync.

Endpoints:
    POST /sessions                       create a session from uploaded data
    GET  /sessions/{id}/state            current editor state + version
    POST /sessions/{id}/actions          apply one EditAction (409 if invalid)
    GET  /sessions/{id}/artifacts/{kind} visual | text | audio
    POST /sessions/{id}/selection        SyncMessage; returns reified effects

Every response carries the session's monotonically increasing state
version; selection posts must quote the current version or are rejected
with 409. Per-session edits are serialized through a lock; artifact reads
work on immutable state snapshots.
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass, field as dc_field
from typing import Optional

from fastapi import Body, FastAPI, HTTPException

from . import artifacts, session as session_mod
from .model import Measure, Transform, TraversalStep
from .predicate import TRUE, from_json as pred_from_json, to_json as pred_to_json
from .serialize import spec_to_json
from .session import (
    AddEncoding, AddUnit, EditorState, InvalidActionError, LoadDataset,
    MoveEncoding, RemoveEncoding, RemoveUnit, SetComposition, SetMark,
    SetMeasureType, SetTraversal, SetTransform, SwitchTab, ToggleField,
    apply_edit,
)

MAX_UPLOAD_BYTES = 10 * 1024 * 1024


@dataclass
class Session:
    state: EditorState
    version: int = 1
    selection: dict = dc_field(default_factory=lambda: {"and": []})
    lock: threading.Lock = dc_field(default_factory=threading.Lock)


def _transform_from(d: Optional[dict]) -> Optional[Transform]:
    if d is None:
        return None
    return Transform(aggregate=d.get("aggregate"), bin=bool(d.get("bin", False)),
                     bin_count=d.get("binCount"))


def action_from_json(doc: dict) -> session_mod.EditAction:
    kind = doc.get("type")
    if kind == "LoadDataset":
        return LoadDataset(doc["data"].encode("utf-8"), doc.get("format", "csv"))
    if kind == "ToggleField":
        return ToggleField(doc["field"])
    if kind == "SetMeasureType":
        return SetMeasureType(doc["field"], Measure(doc["measure"]))
    if kind == "SetTransform":
        return SetTransform(doc["field"], _transform_from(doc.get("transform")) or Transform())
    if kind == "AddEncoding":
        return AddEncoding(doc["field"], doc["modality"], doc["unit"], doc["channel"],
                           _transform_from(doc.get("override")))
    if kind == "RemoveEncoding":
        return RemoveEncoding(doc["field"], doc["modality"], doc["unit"], doc["channel"])
    if kind == "MoveEncoding":
        return MoveEncoding(doc["field"],
                            doc["from"]["modality"], doc["from"]["unit"], doc["from"]["channel"],
                            doc["to"]["modality"], doc["to"]["unit"], doc["to"]["channel"])
    if kind == "SetMark":
        return SetMark(doc["unit"], doc["mark"])
    if kind == "AddUnit":
        return AddUnit(doc["modality"], doc.get("unit"))
    if kind == "RemoveUnit":
        return RemoveUnit(doc["modality"], doc["unit"])
    if kind == "SetTraversal":
        steps = tuple(TraversalStep(s["field"], bool(s.get("bin", False)), s.get("binCount"))
                      for s in doc["steps"])
        return SetTraversal(doc["unit"], steps)
    if kind == "SetComposition":
        return SetComposition(doc["modality"], doc["operator"])
    if kind == "SwitchTab":
        return SwitchTab(doc["tab"])
    raise ValueError(f"unknown action type {kind!r}")


def state_to_json(state: EditorState) -> dict:
    ds = state.dataset
    return {
        "activeTab": state.active_tab,
        "dirtyDefaults": state.dirty_defaults,
        "selectedFields": list(state.selected_fields),
        "spec": spec_to_json(state.spec),
        "dataset": None if ds is None else {
            "columns": [{"name": c.name, "type": c.measure.value if c.measure else None}
                        for c in ds.columns],
            "rowCount": len(ds.rows),
        },
    }


def create_app() -> FastAPI:
    app = FastAPI(title="trimodal", version="0.1.0")
    sessions: dict[str, Session] = {}
    counter = itertools.count(1)
    registry_lock = threading.Lock()

    def get_session(session_id: str) -> Session:
        s = sessions.get(session_id)
        if s is None:
            raise HTTPException(status_code=404, detail="unknown session")
        return s

    @app.post("/sessions", status_code=201)
    def create_session(body: dict = Body(...)):
        data = body.get("data")
        if not isinstance(data, str):
            raise HTTPException(status_code=400, detail="missing dataset text in 'data'")
        raw = data.encode("utf-8")
        if len(raw) > MAX_UPLOAD_BYTES:
            raise HTTPException(status_code=400, detail="dataset exceeds 10 MB cap")
        fmt = body.get("format", "csv")
        try:
            state = session_mod.new_session(raw, fmt)
        except (InvalidActionError, ValueError) as e:
            raise HTTPException(status_code=400, detail=str(e))
        with registry_lock:
            session_id = f"s{next(counter)}"
            sessions[session_id] = Session(state)
        return {"session": session_id, "version": 1, "state": state_to_json(state)}

    @app.get("/sessions/{session_id}/state")
    def get_state(session_id: str):
        s = get_session(session_id)
        return {"version": s.version, "state": state_to_json(s.state),
                "selection": s.selection}

    @app.post("/sessions/{session_id}/actions")
    def post_action(session_id: str, body: dict = Body(...)):
        s = get_session(session_id)
        try:
            action = action_from_json(body)
        except (ValueError, KeyError, TypeError) as e:
            raise HTTPException(status_code=400, detail=f"malformed action: {e}")
        with s.lock:
            try:
                s.state = apply_edit(s.state, action)
            except InvalidActionError as e:
                raise HTTPException(status_code=409,
                                    detail={"error": str(e), "violations": e.violations})
            except ValueError as e:
                raise HTTPException(status_code=400, detail=str(e))
            s.version += 1
            return {"version": s.version, "state": state_to_json(s.state)}

    @app.get("/sessions/{session_id}/artifacts/{kind}")
    def get_artifact(session_id: str, kind: str):
        s = get_session(session_id)
        state, version = s.state, s.version
        try:
            selection = pred_from_json(s.selection)
        except ValueError:
            selection = TRUE
        if state.dataset is None:
            raise HTTPException(status_code=409, detail="no dataset loaded")
        if kind == "visual":
            doc = artifacts.visual_artifact(state.spec, state.dataset, selection)
            if doc is None:
                raise HTTPException(status_code=404, detail="spec has no visual units")
            return {"version": version, "artifact": doc}
        if kind == "text":
            return {"version": version,
                    "artifact": artifacts.text_artifact(state.spec, state.dataset, selection)}
        if kind == "audio":
            return {"version": version,
                    "artifact": artifacts.audio_artifact(state.spec, state.dataset, selection)}
        raise HTTPException(status_code=404, detail="unknown artifact kind")

    @app.post("/sessions/{session_id}/selection")
    def post_selection(session_id: str, body: dict = Body(...)):
        s = get_session(session_id)
        source = body.get("source")
        if source not in ("visual", "text", "audio"):
            raise HTTPException(status_code=400, detail="source must be visual|text|audio")
        try:
            pred = pred_from_json(body.get("predicate", {}))
        except ValueError as e:
            raise HTTPException(status_code=400, detail=f"malformed predicate: {e}")
        with s.lock:
            if body.get("version") != s.version:
                raise HTTPException(status_code=409,
                                    detail={"error": "stale version",
                                            "currentVersion": s.version})
            s.selection = pred_to_json(pred)
            state = s.state
            effects: dict = {}
            if source != "visual":
                doc = artifacts.visual_artifact(state.spec, state.dataset, pred)
                if doc is not None:
                    effects["visual"] = {"kind": "highlight", "payload": doc}
            if source != "audio" and state.spec.audio_units:
                effects["audio"] = {
                    "kind": "filter",
                    "payload": artifacts.audio_artifact(state.spec, state.dataset, pred),
                }
            if source != "text":
                effects["text"] = {
                    "kind": "rescope",
                    "payload": artifacts.text_artifact(state.spec, state.dataset, pred),
                }
            return {"version": s.version, "predicate": pred_to_json(pred),
                    "effects": effects}

    return app
