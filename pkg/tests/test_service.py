"""HTTP facade: session lifecycle, isolation, deepening, cache replay."""
import pytest
from fastapi.testclient import TestClient

from boundsmith import sat
from boundsmith.service import create_app
from conftest import model_source


@pytest.fixture()
def client():
    return TestClient(create_app())


def post_model(client, name="sll"):
    resp = client.post("/models", json={"text": model_source(name)})
    assert resp.status_code == 201
    return resp.json()


def open_session(client, model_id, command="acyclic", size=1, mode="reach"):
    resp = client.post(
        "/sessions",
        json={"modelId": model_id, "command": command, "size": size, "mode": mode},
    )
    assert resp.status_code == 201
    return resp.json()


def test_post_model_summary(client):
    doc = post_model(client)
    assert [s["name"] for s in doc["sigs"]] == ["List", "Node"]
    assert doc["commands"] == [{"name": "acyclic", "scope": 3}]
    got = client.get(f"/models/{doc['modelId']}")
    assert got.status_code == 200 and got.json() == doc


def test_post_model_with_errors_is_422(client):
    resp = client.post("/models", json={"text": "sig A extends Zed {}"})
    assert resp.status_code == 422
    detail = resp.json()["detail"]
    assert detail[0]["line"] == 1 and "Zed" in detail[0]["message"]


def test_unknown_model_404(client):
    assert client.get("/models/xyz").status_code == 404
    resp = client.post(
        "/sessions", json={"modelId": "xyz", "command": "c", "size": 1}
    )
    assert resp.status_code == 404


def test_session_walkthrough_six_then_exhausted(client):
    model = post_model(client)
    session = open_session(client, model["modelId"], size=1)
    docs = []
    for _ in range(6):
        resp = client.post(f"/sessions/{session['id']}/next")
        assert resp.status_code == 200
        docs.append(resp.json())
    resp = client.post(f"/sessions/{session['id']}/next")
    assert resp.status_code in (200, 409)
    assert resp.json()["status"] == "exhausted"
    phases = [d["phase"] for d in docs]
    assert phases == ["List"] * 4 + ["Node"] * 2
    # further polls report exhausted with 409
    resp = client.post(f"/sessions/{session['id']}/next")
    assert resp.status_code == 409 and resp.json()["status"] == "exhausted"


def test_bad_session_inputs(client):
    model = post_model(client)
    resp = client.post(
        "/sessions",
        json={"modelId": model["modelId"], "command": "acyclic", "size": 9},
    )
    assert resp.status_code == 400
    resp = client.post(
        "/sessions",
        json={"modelId": model["modelId"], "command": "acyclic", "size": 1, "mode": "warp"},
    )
    assert resp.status_code == 400
    assert client.post("/sessions/nope/next").status_code == 404


def test_interleaved_sessions_are_isolated(client):
    model = post_model(client)
    s1 = open_session(client, model["modelId"], size=1)
    s2 = open_session(client, model["modelId"], size=2)

    def solo_sequence(size, count):
        fresh = TestClient(create_app())
        m = post_model(fresh)
        s = open_session(fresh, m["modelId"], size=size)
        return [fresh.post(f"/sessions/{s['id']}/next").json() for _ in range(count)]

    interleaved1, interleaved2 = [], []
    for _ in range(5):
        interleaved1.append(client.post(f"/sessions/{s1['id']}/next").json())
        interleaved2.append(client.post(f"/sessions/{s2['id']}/next").json())
    assert interleaved1 == solo_sequence(1, 5)
    assert interleaved2 == solo_sequence(2, 5)


def test_metrics_endpoint(client):
    model = post_model(client)
    session = open_session(client, model["modelId"], size=1)
    for _ in range(7):
        client.post(f"/sessions/{session['id']}/next")
    resp = client.get(f"/sessions/{session['id']}/metrics")
    assert resp.status_code == 200
    doc = resp.json()
    assert doc["scenarios"] == 6 and doc["pv"] == 4 and doc["mode"] == "reach"


def test_delete_session(client):
    model = post_model(client)
    session = open_session(client, model["modelId"], size=0)
    assert client.delete(f"/sessions/{session['id']}").status_code == 204
    assert client.post(f"/sessions/{session['id']}/next").status_code == 404
    assert client.delete(f"/sessions/{session['id']}").status_code == 404


def test_deepen_creates_only_new_sizes(client):
    model = post_model(client)
    for size in (0, 1):
        session = open_session(client, model["modelId"], size=size)
        while True:
            resp = client.post(f"/sessions/{session['id']}/next")
            if resp.json().get("status") == "exhausted":
                break
    created = client.post(
        f"/models/{model['modelId']}/deepen",
        json={"command": "acyclic", "newScope": 2},
    )
    assert created.status_code == 200
    docs = created.json()
    assert [d["size"] for d in docs] == [2]


def test_deepen_past_declared_scope(client):
    model = post_model(client, "shapes")
    created = client.post(
        f"/models/{model['modelId']}/deepen",
        json={"command": "drawn", "newScope": 3},
    )
    assert created.status_code == 200
    assert [d["size"] for d in created.json()] == [0, 1, 2, 3]


def test_restart_serves_from_cache_without_solving(tmp_path):
    cache_dir = str(tmp_path / "cache")
    app = create_app(cache_dir=cache_dir)
    client = TestClient(app)
    model = post_model(client)
    session = open_session(client, model["modelId"], size=1)
    first = []
    while True:
        doc = client.post(f"/sessions/{session['id']}/next").json()
        if doc.get("status") == "exhausted":
            break
        first.append(doc)

    # process restart: fresh app, same cache directory
    client2 = TestClient(create_app(cache_dir=cache_dir))
    model2 = post_model(client2)
    before = sat.solve_call_count()
    session2 = open_session(client2, model2["modelId"], size=1)
    replayed = []
    while True:
        doc = client2.post(f"/sessions/{session2['id']}/next").json()
        if doc.get("status") == "exhausted":
            break
        replayed.append(doc)
    assert sat.solve_call_count() == before  # zero solver calls
    assert replayed == first


def test_model_dir_preload(tmp_path):
    target = tmp_path / "models"
    target.mkdir()
    (target / "sll.bsm").write_text(model_source("sll"))
    client = TestClient(create_app(model_dir=str(target)))
    sessions = client.get("/sessions")
    assert sessions.status_code == 200
    # the preloaded model is addressable by its content hash
    import hashlib

    model_id = hashlib.sha256(model_source("sll").encode()).hexdigest()[:12]
    assert client.get(f"/models/{model_id}").status_code == 200


def test_malformed_body_is_400(client):
    resp = client.post("/sessions", json={"modelId": "x"})  # missing command
    assert resp.status_code == 400
    resp = client.post("/models", json={})
    assert resp.status_code == 400
