"""Rating service tests: session flow, response logging, report math,
and crash recovery from the append-only log."""

import json

import pytest
from fastapi.testclient import TestClient

from polargrid.server import LOG_NAME, create_app


@pytest.fixture()
def client(small_dataset_dir, tmp_path):
    app = create_app(small_dataset_dir, tmp_path)
    with TestClient(app) as c:
        c.log_dir = tmp_path
        yield c


def _new_session(client, n_items=4, seed=1):
    resp = client.post(
        "/api/session/new", json={"n_items": n_items, "seed": seed, "rater_id": "r1"}
    )
    assert resp.status_code == 200
    return resp.json()["session_id"]


def test_session_item_payload_hides_ground_truth(client):
    sid = _new_session(client)
    item = client.get(f"/api/session/{sid}/next").json()
    assert "ground_truth" not in json.dumps(item)
    for key in ("instance_id", "question", "answer_type", "image_url", "index", "total"):
        assert key in item


def test_full_session_round_trip(client, small_records):
    by_id = {r.instance_id: r for r in small_records}
    sid = _new_session(client, n_items=4)
    outcomes = []
    for _ in range(4):
        item = client.get(f"/api/session/{sid}/next").json()
        truth = by_id[item["instance_id"]].ground_truth
        resp = client.post(
            f"/api/session/{sid}/response",
            json={"instance_id": item["instance_id"], "answer": truth, "elapsed_ms": 1500},
        )
        assert resp.status_code == 200
        body = resp.json()
        assert body["correct"] is True
        assert body["ground_truth"] == truth
        outcomes.append(body)
    done = client.get(f"/api/session/{sid}/next").json()
    assert done == {"done": True, "answered": 4, "total": 4}
    log = (client.log_dir / LOG_NAME).read_text().splitlines()
    responses = [json.loads(l) for l in log if json.loads(l)["type"] == "response"]
    assert len(responses) == 4


def test_duplicate_and_invalid_submissions(client):
    sid = _new_session(client, n_items=2)
    item = client.get(f"/api/session/{sid}/next").json()
    iid = item["instance_id"]
    bad = client.post(
        f"/api/session/{sid}/response", json={"instance_id": iid, "answer": {"nope": 1}}
    )
    assert bad.status_code == 422
    ok = client.post(
        f"/api/session/{sid}/response", json={"instance_id": iid, "dont_know": True}
    )
    assert ok.status_code == 200
    dup = client.post(
        f"/api/session/{sid}/response", json={"instance_id": iid, "dont_know": True}
    )
    assert dup.status_code == 409
    foreign = client.post(
        f"/api/session/{sid}/response",
        json={"instance_id": "not_in_session", "dont_know": True},
    )
    assert foreign.status_code == 422


def test_unknown_session_404(client):
    assert client.get("/api/session/nope/next").status_code == 404


def test_no_consecutive_pair_members(client, small_records):
    by_id = {r.instance_id: r for r in small_records}
    for seed in range(5):
        resp = client.post("/api/session/new", json={"n_items": 20, "seed": seed})
        sid = resp.json()["session_id"]
        items = client.app.state.sessions[sid]["items"]
        keys = [(by_id[i].task_id, by_id[i].seed) for i in items]
        assert all(a != b for a, b in zip(keys, keys[1:]))


def test_human_report_math(client, small_records):
    by_id = {r.instance_id: r for r in small_records}
    sid = _new_session(client, n_items=4)
    answered = []
    for k in range(4):
        item = client.get(f"/api/session/{sid}/next").json()
        iid = item["instance_id"]
        if k == 3:
            client.post(f"/api/session/{sid}/response", json={"instance_id": iid, "dont_know": True})
            answered.append(None)
        else:
            truth = by_id[iid].ground_truth
            payload = truth if k < 2 else {"type": truth["type"], "value": truth["value"]}
            wrong = k == 2
            if wrong:
                # submit a wrong-but-well-formed answer for one item
                payload = _perturb(truth)
            client.post(
                f"/api/session/{sid}/response",
                json={"instance_id": iid, "answer": payload, "elapsed_ms": 1000},
            )
            answered.append(not wrong)
    report = client.get("/api/report/human").json()
    assert report["n_responses"] == 4
    overall = report["overall"]
    assert overall["n"] == 4
    assert overall["accuracy"] == pytest.approx(100.0 * 2 / 3)
    assert overall["dont_know_rate"] == pytest.approx(25.0)
    assert overall["avg_elapsed_ms"] == pytest.approx(1000.0)


def _perturb(truth):
    t, v = truth["type"], truth["value"]
    if t == "option_label":
        return {"type": t, "value": "A" if v != "A" else "B"}
    if t == "digit":
        return {"type": t, "value": v + 1}
    if t == "coordinate":
        return {"type": t, "value": [v[0], v[1] + 1] if v[1] == 0 else [v[0], v[1] - 1]}
    if t == "string":
        return {"type": t, "value": v + "X"}
    return {"type": t, "value": [x + 1 for x in v]}


def test_sessions_survive_restart(client, small_dataset_dir, small_records):
    by_id = {r.instance_id: r for r in small_records}
    sid = _new_session(client, n_items=3)
    item = client.get(f"/api/session/{sid}/next").json()
    client.post(
        f"/api/session/{sid}/response",
        json={"instance_id": item["instance_id"], "answer": by_id[item["instance_id"]].ground_truth},
    )
    # a fresh app over the same log must resume where the first left off
    app2 = create_app(small_dataset_dir, client.log_dir)
    with TestClient(app2) as c2:
        nxt = c2.get(f"/api/session/{sid}/next").json()
        assert nxt["index"] == 1
        assert nxt["instance_id"] != item["instance_id"]


def test_images_served(client, small_records):
    resp = client.get(f"/{small_records[0].image_path}")
    assert resp.status_code == 200
    assert b"<svg" in resp.content
