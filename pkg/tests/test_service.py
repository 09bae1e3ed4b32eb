import json
import pathlib

import pytest
from fastapi.testclient import TestClient

from trimodal import artifacts
from trimodal.service import create_app

DATA = pathlib.Path(__file__).resolve().parent.parent / "src" / "trimodal" / "data"
STOCKS = (DATA / "stocks.csv").read_text()


@pytest.fixture
def client():
    return TestClient(create_app())


@pytest.fixture
def sid(client):
    r = client.post("/sessions", json={"data": STOCKS, "format": "csv"})
    assert r.status_code == 201
    return r.json()["session"]


def test_create_session(client):
    r = client.post("/sessions", json={"data": STOCKS, "format": "csv"})
    body = r.json()
    assert r.status_code == 201 and body["version"] == 1
    assert body["state"]["dataset"]["rowCount"] == 360
    assert body["state"]["spec"]["visual"]["units"]


def test_upload_cap(client):
    r = client.post("/sessions", json={"data": "x" * (10 * 1024 * 1024 + 1)})
    assert r.status_code == 400


def test_malformed_upload(client):
    r = client.post("/sessions", json={"nope": 1})
    assert r.status_code == 400


def test_unknown_session_404(client):
    assert client.get("/sessions/ghost/state").status_code == 404


def test_action_bumps_version(client, sid):
    r = client.post(f"/sessions/{sid}/actions", json={"type": "SwitchTab", "tab": "visual"})
    assert r.status_code == 200 and r.json()["version"] == 2
    r = client.post(f"/sessions/{sid}/actions", json={"type": "ToggleField", "field": "price"})
    assert r.json()["version"] == 3


def test_invalid_action_409_with_report(client, sid):
    r = client.post(f"/sessions/{sid}/actions", json={
        "type": "AddEncoding", "field": "price",
        "modality": "visual", "unit": "v0", "channel": "y"})
    assert r.status_code == 409
    assert r.json()["detail"]["violations"]


def test_malformed_action_400(client, sid):
    assert client.post(f"/sessions/{sid}/actions",
                       json={"type": "Nope"}).status_code == 400


def test_artifact_endpoints(client, sid):
    vis = client.get(f"/sessions/{sid}/artifacts/visual")
    txt = client.get(f"/sessions/{sid}/artifacts/text")
    aud = client.get(f"/sessions/{sid}/artifacts/audio")
    assert vis.status_code == txt.status_code == aud.status_code == 200
    assert vis.json()["artifact"]["mark"]["type"] == "line"
    assert txt.json()["artifact"]["role"] == "root"
    assert aud.json()["artifact"][0]["unit"] == "a0"
    assert client.get(f"/sessions/{sid}/artifacts/smell").status_code == 404


def test_cli_api_parity(client, sid):
    """The API must serve byte-identical artifacts to the library builders."""
    from trimodal.session import new_session
    state = new_session(STOCKS.encode(), "csv")
    ds = state.dataset
    expected_vis = artifacts.dump_json(artifacts.visual_artifact(state.spec, ds))
    got = client.get(f"/sessions/{sid}/artifacts/visual").json()["artifact"]
    assert artifacts.dump_json(got) == expected_vis
    expected_txt = artifacts.dump_json(artifacts.text_artifact(state.spec, ds))
    got = client.get(f"/sessions/{sid}/artifacts/text").json()["artifact"]
    assert artifacts.dump_json(got) == expected_txt
    expected_aud = artifacts.dump_json(artifacts.audio_artifact(state.spec, ds))
    got = client.get(f"/sessions/{sid}/artifacts/audio").json()["artifact"]
    assert artifacts.dump_json(got) == expected_aud


def test_selection_returns_other_modalities(client, sid):
    r = client.post(f"/sessions/{sid}/selection", json={
        "version": 1, "source": "text",
        "predicate": {"field": "symbol", "equal": "AAPL"}})
    assert r.status_code == 200
    effects = r.json()["effects"]
    assert set(effects) == {"visual", "audio"}
    assert effects["visual"]["kind"] == "highlight"
    test = effects["visual"]["payload"]["encoding"]["opacity"]["condition"]["test"]
    assert "AAPL" in test
    tones = effects["audio"]["payload"][0]["tones"]
    assert tones
    assert all(t["predicate"]["and"][0] == {"field": "symbol", "equal": "AAPL"}
               for t in tones)


def test_stale_selection_version_409(client, sid):
    client.post(f"/sessions/{sid}/actions", json={"type": "SwitchTab", "tab": "audio"})
    r = client.post(f"/sessions/{sid}/selection", json={
        "version": 1, "source": "text", "predicate": {"and": []}})
    assert r.status_code == 409
    assert r.json()["detail"]["currentVersion"] == 2


def test_selection_influences_artifacts(client, sid):
    client.post(f"/sessions/{sid}/selection", json={
        "version": 1, "source": "visual",
        "predicate": {"field": "symbol", "equal": "GOOG"}})
    tree = client.get(f"/sessions/{sid}/artifacts/text").json()["artifact"]
    assert tree["predicate"] == {"field": "symbol", "equal": "GOOG"}


def test_version_monotone_across_many_actions(client, sid):
    last = 1
    for tab in ("fields", "visual", "audio", "data") * 3:
        r = client.post(f"/sessions/{sid}/actions",
                        json={"type": "SwitchTab", "tab": tab})
        assert r.json()["version"] == last + 1
        last += 1
