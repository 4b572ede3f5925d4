"""Human-rating service: sessions over a dataset, append-only response log,
and an aggregate human-accuracy report.

Ground truth is only ever revealed after a response has been logged.
The JSONL log is the source of truth; sessions are rebuilt from it on
startup, so a restart never loses progress.
"""

from __future__ import annotations

import json
import os
import random
import time
import uuid
from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.staticfiles import StaticFiles

from .answers import Answer
from .dataset import ManifestRecord, read_dataset

LOG_NAME = "responses.jsonl"


def _append_log(path: Path, entry: dict) -> None:
    with open(path, "a", encoding="utf-8") as fh:
        fh.write(json.dumps(entry, sort_keys=True) + "\n")
        fh.flush()
        os.fsync(fh.fileno())


def _read_log(path: Path) -> list[dict]:
    if not path.is_file():
        return []
    entries = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                entries.append(json.loads(line))
    return entries


def _pair_key(rec: ManifestRecord) -> tuple:
    return (rec.task_id, rec.seed)


def _sample_items(records: list[ManifestRecord], n_items: int, rng: random.Random) -> list[str]:
    """Sample instances so that no two consecutive items are the two
    members of the same Cartesian/Polar pair."""
    n_items = min(n_items, len(records))
    chosen = rng.sample(records, n_items)
    for _ in range(200):
        if all(
            _pair_key(a) != _pair_key(b) for a, b in zip(chosen, chosen[1:])
        ):
            break
        rng.shuffle(chosen)
    else:
        chosen.sort(key=lambda r: (r.task_id, r.topology, r.seed))
    return [r.instance_id for r in chosen]


def create_app(dataset_dir, log_dir, frontend_dir=None) -> FastAPI:
    dataset_dir = Path(dataset_dir)
    log_dir = Path(log_dir)
    log_dir.mkdir(parents=True, exist_ok=True)
    log_path = log_dir / LOG_NAME

    records = read_dataset(dataset_dir)
    by_id = {r.instance_id: r for r in records}

    # sessions: session_id -> {"items": [...], "answered": {...}, "rater_id": str}
    sessions: dict[str, dict] = {}
    for entry in _read_log(log_path):
        if entry.get("type") == "session":
            sessions[entry["session_id"]] = {
                "items": entry["items"],
                "answered": {},
                "rater_id": entry.get("rater_id", ""),
            }
        elif entry.get("type") == "response":
            sess = sessions.get(entry["session_id"])
            if sess is not None:
                sess["answered"][entry["instance_id"]] = entry

    app = FastAPI(title="polargrid rater")
    app.state.sessions = sessions
    app.state.records = by_id
    app.state.log_path = log_path

    def _get_session(session_id: str) -> dict:
        sess = sessions.get(session_id)
        if sess is None:
            raise HTTPException(status_code=404, detail="unknown session")
        return sess

    @app.post("/api/session/new")
    def new_session(body: dict | None = None):
        body = body or {}
        n_items = int(body.get("n_items", 20))
        if n_items < 1:
            raise HTTPException(status_code=422, detail="n_items must be >= 1")
        seed = body.get("seed")
        rng = random.Random(seed)
        session_id = uuid.uuid4().hex if seed is None else f"s{seed}-{len(sessions)}"
        items = _sample_items(records, n_items, rng)
        sessions[session_id] = {"items": items, "answered": {}, "rater_id": body.get("rater_id", "")}
        _append_log(
            log_path,
            {
                "type": "session",
                "session_id": session_id,
                "rater_id": body.get("rater_id", ""),
                "items": items,
                "ts": time.time(),
            },
        )
        return {"session_id": session_id, "n_items": len(items)}

    def _item_payload(rec: ManifestRecord, index: int, total: int) -> dict:
        return {
            "instance_id": rec.instance_id,
            "task_id": rec.task_id,
            "topology": rec.topology,
            "question": rec.question,
            "options": rec.options,
            "answer_type": rec.ground_truth["type"],
            "grid": rec.grid,
            "image_url": f"/{rec.image_path}",
            "index": index,
            "total": total,
        }

    @app.get("/api/session/{session_id}/next")
    def next_item(session_id: str):
        sess = _get_session(session_id)
        total = len(sess["items"])
        for i, iid in enumerate(sess["items"]):
            if iid not in sess["answered"]:
                return _item_payload(by_id[iid], i, total)
        return {"done": True, "answered": len(sess["answered"]), "total": total}

    @app.post("/api/session/{session_id}/response")
    def submit_response(session_id: str, body: dict):
        sess = _get_session(session_id)
        iid = body.get("instance_id")
        if iid not in sess["items"]:
            raise HTTPException(status_code=422, detail="instance not in session")
        if iid in sess["answered"]:
            raise HTTPException(status_code=409, detail="already answered")
        rec = by_id[iid]
        dont_know = bool(body.get("dont_know"))
        correct = None
        answer_json = None
        if not dont_know:
            try:
                answer = Answer.from_json(body["answer"])
            except (KeyError, TypeError, ValueError) as exc:
                raise HTTPException(status_code=422, detail=f"bad answer: {exc}") from exc
            truth = rec.answer
            if answer.type is truth.type and truth.type.value == "string":
                correct = answer.value.strip().casefold() == truth.value.strip().casefold()
            else:
                correct = answer == truth
            answer_json = answer.to_json()
        entry = {
            "type": "response",
            "session_id": session_id,
            "rater_id": sess["rater_id"],
            "instance_id": iid,
            "task_id": rec.task_id,
            "topology": rec.topology,
            "answer": answer_json,
            "dont_know": dont_know,
            "correct": correct,
            "elapsed_ms": body.get("elapsed_ms"),
            "ts": time.time(),
        }
        _append_log(log_path, entry)
        sess["answered"][iid] = entry
        return {
            "correct": correct,
            "dont_know": dont_know,
            "ground_truth": rec.ground_truth,
            "answered": len(sess["answered"]),
            "total": len(sess["items"]),
        }

    @app.get("/api/report/human")
    def human_report():
        responses = [e for e in _read_log(log_path) if e.get("type") == "response"]

        def block(group: list[dict]) -> dict:
            n = len(group)
            scored = [e for e in group if not e["dont_know"]]
            timed = [e["elapsed_ms"] for e in group if e.get("elapsed_ms") is not None]
            return {
                "n": n,
                "accuracy": (
                    100.0 * sum(e["correct"] for e in scored) / len(scored) if scored else None
                ),
                "dont_know_rate": 100.0 * (n - len(scored)) / n if n else None,
                "avg_elapsed_ms": sum(timed) / len(timed) if timed else None,
            }

        by_group: dict[str, list[dict]] = {}
        for e in responses:
            by_group.setdefault(f"{e['task_id']}/{e['topology']}", []).append(e)
        by_topology: dict[str, list[dict]] = {}
        for e in responses:
            by_topology.setdefault(e["topology"], []).append(e)
        return {
            "n_responses": len(responses),
            "n_raters": len({e["rater_id"] for e in responses}),
            "overall": block(responses),
            "by_topology": {k: block(v) for k, v in sorted(by_topology.items())},
            "by_task_topology": {k: block(v) for k, v in sorted(by_group.items())},
        }

    app.mount("/images", StaticFiles(directory=dataset_dir / "images"), name="images")
    if frontend_dir is not None and Path(frontend_dir).is_dir():
        app.mount("/ui", StaticFiles(directory=frontend_dir, html=True), name="ui")

    return app
