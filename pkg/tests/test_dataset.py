"""Dataset serialization tests: manifest layout, image integrity,
idempotence, and the random-answer baselines."""

import hashlib
import json
import xml.etree.ElementTree as ET
from pathlib import Path

import pytest

from polargrid.dataset import (
    ManifestRecord,
    baseline_by_task,
    random_baseline,
    read_dataset,
    simulate_random_answerer,
    verify_images,
    write_dataset,
)
from polargrid.taskgen import CATALOG, generate_dataset


def test_round_trip(small_dataset_dir, small_records):
    again = read_dataset(small_dataset_dir)
    assert [r.to_json() for r in again] == [r.to_json() for r in small_records]


def test_manifest_covers_all_tasks(small_records):
    assert {r.task_id for r in small_records} == set(CATALOG)


def test_pair_members_adjacent(small_records):
    """The Cartesian and Polar lines of a pair must sit next to each other."""
    for i in range(0, len(small_records)):
        rec = small_records[i]
        if rec.topology == "cartesian":
            nxt = small_records[i + 1]
            assert nxt.topology == "polar"
            assert (nxt.task_id, nxt.seed) == (rec.task_id, rec.seed)


def test_manifest_sorted_stably(small_records):
    keys = [(r.task_id, r.seed) for r in small_records]
    assert keys == sorted(keys)


def test_images_exist_and_verify(small_dataset_dir, small_records):
    assert verify_images(small_dataset_dir, small_records) == []
    for rec in small_records:
        svg = (Path(small_dataset_dir) / rec.image_path).read_bytes()
        ET.fromstring(svg)  # well-formed XML
        assert hashlib.sha256(svg).hexdigest() == rec.image_sha256


def test_verify_images_flags_tampering(tmp_path):
    pairs = list(generate_dataset(1, base_seed=0, tasks=["sudoku"]))
    write_dataset(tmp_path, pairs)
    records = read_dataset(tmp_path)
    target = tmp_path / records[0].image_path
    target.write_bytes(target.read_bytes() + b"<!-- -->")
    assert records[0].instance_id in verify_images(tmp_path, records)


def test_write_is_idempotent(tmp_path):
    pairs = list(generate_dataset(1, base_seed=3, tasks=["maze", "sudoku"]))
    write_dataset(tmp_path, pairs)
    first = (tmp_path / "manifest.jsonl").read_bytes()
    write_dataset(tmp_path, pairs)
    assert (tmp_path / "manifest.jsonl").read_bytes() == first


def test_manifest_lines_are_valid_json(small_dataset_dir):
    for line in (Path(small_dataset_dir) / "manifest.jsonl").read_text().splitlines():
        rec = ManifestRecord.from_json(json.loads(line))
        assert rec.instance_id


def test_fixed_option_baselines(small_records):
    per_task = baseline_by_task(small_records)
    assert per_task["sudoku"] == pytest.approx(20.0)
    assert per_task["monotonic_path"] == pytest.approx(100.0 / 6)
    assert per_task["word_search"] == 0.0  # open digit answer


def test_simulated_baseline_tracks_analytic(small_records):
    analytic = random_baseline(small_records)
    simulated = simulate_random_answerer(small_records, n_trials=400, seed=1)
    assert simulated == pytest.approx(analytic, abs=2.0)


def test_empty_dataset_rejected():
    with pytest.raises(ValueError):
        random_baseline([])
