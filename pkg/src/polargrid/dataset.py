"""Dataset serialization: manifest.jsonl + SVG images, and chance baselines."""

from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass
from pathlib import Path

from .answers import Answer, AnswerType
from .render import render_scene
from .taskgen import Instance, Option


@dataclass
class ManifestRecord:
    """One manifest line: everything needed to evaluate an instance."""

    instance_id: str
    task_id: str
    topology: str
    boundary: str
    seed: int
    grid: dict
    question: str
    options: list | None
    ground_truth: dict
    puzzle: dict
    meta: dict
    image_path: str
    image_sha256: str

    @property
    def answer(self) -> Answer:
        return Answer.from_json(self.ground_truth)

    @property
    def option_list(self) -> list[Option] | None:
        if self.options is None:
            return None
        return [Option.from_json(o) for o in self.options]

    def to_json(self) -> dict:
        return {
            "instance_id": self.instance_id,
            "task_id": self.task_id,
            "topology": self.topology,
            "boundary": self.boundary,
            "seed": self.seed,
            "grid": self.grid,
            "question": self.question,
            "options": self.options,
            "ground_truth": self.ground_truth,
            "puzzle": self.puzzle,
            "meta": self.meta,
            "image_path": self.image_path,
            "image_sha256": self.image_sha256,
        }

    @staticmethod
    def from_json(obj: dict) -> "ManifestRecord":
        return ManifestRecord(**obj)


def _record_for(inst: Instance, image_path: str, digest: str) -> ManifestRecord:
    base = inst.to_json()
    return ManifestRecord(
        instance_id=base["instance_id"],
        task_id=base["task_id"],
        topology=base["topology"],
        boundary=base["boundary"],
        seed=base["seed"],
        grid=base["grid"],
        question=base["question"],
        options=base["options"],
        ground_truth=base["ground_truth"],
        puzzle=base["puzzle"],
        meta=base["meta"],
        image_path=image_path,
        image_sha256=digest,
    )


# Pair members must sit on adjacent manifest lines, so the Cartesian and
# Polar instances sort before any extra layout variants.
_TOPOLOGY_RANK = {"cartesian": 0, "polar": 1, "hexagonal": 2, "octagonal": 3}


def write_dataset(out_dir, pairs) -> int:
    """Render and write all pair members under out_dir.

    Produces manifest.jsonl (sorted by task, seed, topology) and one SVG
    per instance in images/.  Re-running with the same pairs rewrites
    identical bytes, so the operation is idempotent.
    """
    out = Path(out_dir)
    images = out / "images"
    images.mkdir(parents=True, exist_ok=True)
    records: list[ManifestRecord] = []
    for pair in pairs:
        for inst in pair.members:
            svg = render_scene(inst.scene)
            digest = hashlib.sha256(svg).hexdigest()
            name = f"{inst.task_id}_{inst.topology.value}_{inst.seed:06d}.svg"
            (images / name).write_bytes(svg)
            records.append(_record_for(inst, f"images/{name}", digest))
    records.sort(key=lambda r: (r.task_id, r.seed, _TOPOLOGY_RANK[r.topology]))
    with open(out / "manifest.jsonl", "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec.to_json(), sort_keys=True) + "\n")
    return len(records)


def read_dataset(dataset_dir) -> list[ManifestRecord]:
    path = Path(dataset_dir) / "manifest.jsonl"
    records = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                records.append(ManifestRecord.from_json(json.loads(line)))
    return records


def verify_images(dataset_dir, records=None) -> list[str]:
    """Return instance_ids whose image is missing or has a digest mismatch."""
    base = Path(dataset_dir)
    if records is None:
        records = read_dataset(dataset_dir)
    bad = []
    for rec in records:
        path = base / rec.image_path
        if not path.is_file() or hashlib.sha256(path.read_bytes()).hexdigest() != rec.image_sha256:
            bad.append(rec.instance_id)
    return bad


# ---------------------------------------------------------------------------
# Chance baselines


def _chance(rec: ManifestRecord) -> float:
    t = AnswerType(rec.ground_truth["type"])
    if t is AnswerType.OPTION_LABEL:
        return 1.0 / len(rec.options)
    if t is AnswerType.COORDINATE:
        return 1.0 / (rec.grid["major"] * rec.grid["minor"])
    return 0.0  # open-ended formats: a uniform guesser scores zero


def random_baseline(records) -> float:
    """Expected accuracy (percent) of a uniform random answerer."""
    records = list(records)
    if not records:
        raise ValueError("no records")
    return 100.0 * sum(_chance(r) for r in records) / len(records)


def baseline_by_task(records) -> dict:
    by_task: dict[str, list] = {}
    for rec in records:
        by_task.setdefault(rec.task_id, []).append(rec)
    return {task: random_baseline(rs) for task, rs in sorted(by_task.items())}


def simulate_random_answerer(records, n_trials: int = 1, seed: int = 0) -> float:
    """Empirical accuracy (percent) of uniformly random guessing."""
    rng = random.Random(seed)
    records = list(records)
    if not records or n_trials < 1:
        raise ValueError("need records and n_trials >= 1")
    hits = 0
    total = 0
    for _ in range(n_trials):
        for rec in records:
            truth = rec.answer
            t = truth.type
            if t is AnswerType.OPTION_LABEL:
                guess = rng.choice([o["label"] for o in rec.options])
                hits += guess == truth.value
            elif t is AnswerType.COORDINATE:
                cell = (
                    rng.randrange(rec.grid["major"]),
                    rng.randrange(rec.grid["minor"]),
                )
                hits += cell == truth.value
            # open-ended formats: uniform guessing over an unbounded space
            # never matches, so contribute zero hits
            total += 1
    return 100.0 * hits / total
