import json

import pytest
from fastapi.testclient import TestClient

from schemeplan.cli import main
from schemeplan.dsl import parse_plan
from schemeplan.semantics import Extend, Reduce, initial_state, replay
from schemeplan.semantics import Trace as SemTrace
from schemeplan.service import create_app
from schemeplan.wire import to_wire

from .conftest import plan_path


@pytest.fixture
def client(tmp_path):
    app = create_app(data_dir=str(tmp_path / "store"))
    with TestClient(app) as client:
        client.app = app
        yield client


@pytest.fixture
def station_doc(station):
    return to_wire(station)


def create(client, doc):
    response = client.post("/v1/plans", json=doc)
    assert response.status_code == 201
    return response.json()["id"]


def test_healthz(client):
    assert client.get("/healthz").json() == {"status": "ok"}


def test_create_and_get(client, station_doc):
    pid = create(client, station_doc)
    got = client.get(f"/v1/plans/{pid}")
    assert got.status_code == 200
    assert got.json()["version"] == 1
    assert got.json()["plan"]["name"] == "SimpleStation"


def test_get_unknown_is_404(client):
    assert client.get("/v1/plans/nope").status_code == 404


def test_put_requires_matching_version(client, station_doc):
    pid = create(client, station_doc)
    stale = {**station_doc, "version": 7}
    assert client.put(f"/v1/plans/{pid}", json=stale).status_code == 409
    fresh = {**station_doc, "version": 1}
    response = client.put(f"/v1/plans/{pid}", json=fresh)
    assert response.status_code == 200 and response.json()["version"] == 2


def test_put_invalid_returns_violations_without_saving(client, station_doc):
    pid = create(client, station_doc)
    broken = json.loads(json.dumps(station_doc))
    broken["units"][0]["endB"] = broken["units"][0]["endA"]
    response = client.put(f"/v1/plans/{pid}", json={**broken, "version": 1})
    assert response.status_code == 422
    assert response.json()["violations"]
    assert client.get(f"/v1/plans/{pid}").json()["version"] == 1
    forced = client.put(f"/v1/plans/{pid}?force=true", json={**broken, "version": 1})
    assert forced.status_code == 200
    assert forced.json()["violations"]


def test_delete(client, station_doc):
    pid = create(client, station_doc)
    assert client.delete(f"/v1/plans/{pid}").status_code == 204
    assert client.get(f"/v1/plans/{pid}").status_code == 404
    assert client.delete(f"/v1/plans/{pid}").status_code == 404


def test_schema_error_is_400(client):
    response = client.post("/v1/plans", json={"formatVersion": 1, "name": "X"})
    assert response.status_code == 400
    assert response.json()["path"] == "/units"


def test_tables_generate(client):
    topo = to_wire(parse_plan(plan_path("tp_a.plan").read_text()))
    pid = create(client, topo)
    response = client.post(f"/v1/plans/{pid}/tables:generate")
    assert response.status_code == 200
    doc = response.json()
    assert doc["version"] == 2
    assert len(doc["plan"]["routes"]) == 4
    assert doc["plan"]["clear"]


def test_verify_matches_cli_byte_for_byte(client, station_doc, capsys):
    pid = create(client, station_doc)
    response = client.post(f"/v1/plans/{pid}/verify", json={"mode": "both"})
    assert main(["verify", str(plan_path("station.plan")), "--mode", "both", "--json"]) == 0
    cli_out = capsys.readouterr().out
    assert response.text == cli_out.rstrip("\n")


def test_verify_unsafe_counterexample(client, station):
    from dataclasses import replace

    mutated = replace(station, clear={**station.clear, "RX1": station.clear["RX1"] - {"PLAT1"}})
    pid = create(client, to_wire(mutated))
    response = client.post(f"/v1/plans/{pid}/verify", json={"mode": "explore"})
    body = response.json()["results"]["explore"]
    assert body["verdict"] == "Unsafe"
    assert len(body["counterexample"]) == 3


def test_verify_invalid_plan_is_422(client, station_doc):
    broken = json.loads(json.dumps(station_doc))
    broken["units"][0]["endB"] = broken["units"][0]["endA"]
    pid = None
    response = client.post("/v1/plans?force=true", json=broken)
    pid = response.json()["id"]
    assert client.post(f"/v1/plans/{pid}/verify", json={}).status_code == 422


def test_regions_endpoint(client, station_doc):
    pid = create(client, station_doc)
    body = client.get(f"/v1/plans/{pid}/regions").json()
    assert len(body["regions"]) == 4
    assert body["byRoute"]["R1Y"] == ["RG1"]


def test_simulation_session_flow(client, station_doc, station):
    pid = create(client, station_doc)
    session = client.post(f"/v1/plans/{pid}/sim").json()
    sid = session["session"]
    assert session["step"] == 0 and session["state"] == []
    assert {e["route"] for e in session["enabledEvents"] if e["type"] == "extend"} == set(station.routes)

    stepped = client.post(
        f"/v1/plans/{pid}/sim/{sid}/step",
        json={"event": {"type": "extend", "from": None, "route": "RX1"}},
    )
    assert stepped.status_code == 200
    assert stepped.json()["state"] == [[["LA1", "P1"], ["PLAT1"]]]

    blocked = client.post(
        f"/v1/plans/{pid}/sim/{sid}/step",
        json={"event": {"type": "extend", "from": None, "route": "RX1"}},
    )
    assert blocked.status_code == 409

    undone = client.post(f"/v1/plans/{pid}/sim/{sid}/undo")
    assert undone.status_code == 200 and undone.json()["state"] == []
    assert client.post(f"/v1/plans/{pid}/sim/{sid}/undo").status_code == 409


def test_session_log_replays(client, station_doc, station):
    pid = create(client, station_doc)
    sid = client.post(f"/v1/plans/{pid}/sim").json()["session"]
    moves = [
        {"type": "extend", "from": None, "route": "RX1"},
        {"type": "reduce", "ma": 0},
        {"type": "extend", "from": None, "route": "RX2"},
    ]
    for move in moves:
        assert client.post(f"/v1/plans/{pid}/sim/{sid}/step", json={"event": move}).status_code == 200
    log = client.get(f"/v1/plans/{pid}/sim/{sid}/log").json()["events"]
    assert len(log) == 3
    # replaying the returned log reproduces the session state
    state = initial_state()
    events = []
    from schemeplan.semantics import canonical_mas

    for entry in log:
        mas = canonical_mas(state)
        if entry["type"] == "extend":
            event = Extend(() if entry["from"] is None else mas[entry["from"]], entry["route"])
        else:
            event = Reduce(mas[entry["ma"]])
        events.append(event)
        state = replay(station, SemTrace(state, (event,)))[-1]
    current = client.get(f"/v1/plans/{pid}/sim/{sid}").json()["state"]
    assert [[list(r) for r in ma] for ma in sorted(state)] == current


def test_session_expiry(tmp_path, station_doc):
    app = create_app(data_dir=str(tmp_path / "store"), session_ttl=0.0)
    client = TestClient(app)
    pid = create(client, station_doc)
    sid = client.post(f"/v1/plans/{pid}/sim").json()["session"]
    assert client.get(f"/v1/plans/{pid}/sim/{sid}").status_code == 404


def test_concurrent_step_conflicts(client, station_doc):
    pid = create(client, station_doc)
    sid = client.post(f"/v1/plans/{pid}/sim").json()["session"]
    session = client.app.state.sessions[sid]
    assert session.lock.acquire(blocking=False)
    try:
        response = client.post(
            f"/v1/plans/{pid}/sim/{sid}/step",
            json={"event": {"type": "extend", "from": None, "route": "RX1"}},
        )
        assert response.status_code == 409
    finally:
        session.lock.release()


def test_unknown_session_404(client, station_doc):
    pid = create(client, station_doc)
    assert client.get(f"/v1/plans/{pid}/sim/ghost").status_code == 404
