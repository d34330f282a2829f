import json

import pytest
from fastapi.testclient import TestClient

from gameflow import fixtures
from gameflow.service import create_app


@pytest.fixture()
def client():
    app = create_app(model_dir=fixtures.path("."))
    with TestClient(app) as c:
        yield c


def _create(client, **overrides):
    body = {"model_ref": "chiba_model.json",
            "opponent_tfs": fixtures.tfs_table()["Ryukyu"]}
    body.update(overrides)
    resp = client.post("/sessions", json=body)
    assert resp.status_code == 200, resp.text
    return resp.json()


def test_healthz(client):
    resp = client.get("/healthz")
    assert resp.status_code == 200
    assert resp.json()["status"] == "ok"


def test_create_session_returns_snapshot(client):
    out = _create(client)
    snap = out["snapshot"]
    assert snap["step"] == 0
    assert snap["score"] == {"a": "0", "b": "0"}
    assert float(snap["pw"]) == pytest.approx(0.6331, abs=5e-4)


def test_create_session_bad_model(client):
    resp = client.post("/sessions", json={
        "model_ref": "nope.json", "opponent_tfs": 1.0})
    assert resp.status_code == 400


def test_event_flow_and_state(client):
    sid = _create(client)["session_id"]
    r = client.post(f"/sessions/{sid}/events",
                    json={"type": "SCORE_FOR", "points": 2})
    assert r.status_code == 200
    r = client.post(f"/sessions/{sid}/events", json={"type": "TICK"})
    snap = r.json()
    assert snap["step"] == 1
    state = client.get(f"/sessions/{sid}/state").json()
    assert state["score"] == {"a": "2", "b": "0"}


def test_event_errors_are_409(client):
    sid = _create(client)["session_id"]
    r = client.post(f"/sessions/{sid}/events",
                    json={"type": "SUB_OUT", "player": "ghost"})
    assert r.status_code == 409
    assert r.json()["detail"]["category"] == "illegal-sub"


def test_unknown_session_404(client):
    assert client.get("/sessions/zzz/state").status_code == 404


def test_replay_endpoint_requires_full_game(client):
    sid = _create(client)["session_id"]
    assert client.get(f"/sessions/{sid}/replay").status_code == 409


def test_replay_endpoint_matches_live_path(client):
    sid = _create(client)["session_id"]
    with open(fixtures.path("chiba_ryukyu_events.jsonl")) as fh:
        for line in fh:
            r = client.post(f"/sessions/{sid}/events", json=json.loads(line))
            assert r.status_code == 200
    state = client.get(f"/sessions/{sid}/state").json()
    batch = client.get(f"/sessions/{sid}/replay").json()
    # decimal-string equality between live history and batch replay
    assert state["path"]["mt"] == batch["mt"]
    assert state["path"]["pw"] == batch["pw"]
    assert batch["score_a"][-1] == "73"
    assert batch["score_b"][-1] == "88"


def test_stream_emits_snapshots(client):
    sid = _create(client)["session_id"]
    with client.stream("GET", f"/sessions/{sid}/stream",
                       params={"limit": 1}) as resp:
        assert resp.headers["content-type"].startswith("text/event-stream")
        lines = [l for l in resp.iter_lines() if l.startswith("data: ")]
    assert len(lines) == 1
    snap = json.loads(lines[0][len("data: "):])
    assert snap["step"] == 0


def test_stream_receives_published_events(client):
    sid = _create(client)["session_id"]
    client.post(f"/sessions/{sid}/events", json={"type": "SCORE_FOR",
                                                 "points": 2})
    with client.stream("GET", f"/sessions/{sid}/stream",
                       params={"limit": 1}) as resp:
        lines = [l for l in resp.iter_lines() if l.startswith("data: ")]
    snap = json.loads(lines[0][len("data: "):])
    assert snap["score"] == {"a": "2", "b": "0"}
