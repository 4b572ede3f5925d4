"""Command line entry point: gen, validate, baseline, eval, report, serve."""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path

from .dataset import (
    baseline_by_task,
    random_baseline,
    read_dataset,
    simulate_random_answerer,
    write_dataset,
)
from .evalharness import (
    EvalResult,
    ModelConfig,
    PromptMode,
    aggregate,
    evaluate_records,
    report_text,
    write_report,
)
from .render import render_scene
from .taskgen import CATALOG, generate_dataset, generate_pair


def _parse_tasks(value: str | None) -> list[str] | None:
    if not value:
        return None
    tasks = [t.strip() for t in value.split(",") if t.strip()]
    unknown = [t for t in tasks if t not in CATALOG]
    if unknown:
        raise SystemExit(f"unknown tasks: {', '.join(unknown)}")
    return tasks


def cmd_gen(args) -> int:
    pairs = generate_dataset(args.n_per_task, args.base_seed, _parse_tasks(args.tasks))
    count = write_dataset(args.out, pairs)
    print(f"wrote {count} instances to {args.out}")
    return 0


def cmd_validate(args) -> int:
    """Regenerate every (task, seed) pair and diff it against the manifest."""
    records = read_dataset(args.dataset)
    by_key: dict[tuple, list] = {}
    for rec in records:
        by_key.setdefault((rec.task_id, rec.seed), []).append(rec)
    failures = 0
    for (task_id, seed), recs in sorted(by_key.items()):
        try:
            pair = generate_pair(task_id, seed)
        except Exception as exc:
            print(f"FAIL {task_id} seed {seed}: regeneration failed: {exc}")
            failures += len(recs)
            continue
        regen = {m.topology.value: m for m in pair.members}
        for rec in recs:
            inst = regen.get(rec.topology)
            label = rec.instance_id
            if inst is None:
                print(f"FAIL {label}: topology not regenerated")
                failures += 1
                continue
            fresh = inst.to_json()
            stored = rec.to_json()
            mismatch = [
                k
                for k in ("question", "options", "ground_truth", "puzzle", "grid", "boundary")
                if fresh[k] != stored[k]
            ]
            digest = hashlib.sha256(render_scene(inst.scene)).hexdigest()
            if digest != rec.image_sha256:
                mismatch.append("image_sha256")
            img = Path(args.dataset) / rec.image_path
            if not img.is_file() or hashlib.sha256(img.read_bytes()).hexdigest() != digest:
                mismatch.append("image_file")
            if mismatch:
                print(f"FAIL {label}: mismatch in {', '.join(mismatch)}")
                failures += 1
    print(f"validated {len(records)} instances, {failures} failures")
    return 1 if failures else 0


def cmd_baseline(args) -> int:
    records = read_dataset(args.dataset)
    print(f"expected random baseline: {random_baseline(records):.2f}%")
    for task, value in baseline_by_task(records).items():
        print(f"  {task:20s} {value:6.2f}%")
    if args.simulate:
        value = simulate_random_answerer(records, args.simulate, args.seed)
        print(f"simulated ({args.simulate} trials): {value:.2f}%")
    return 0


def _filter_records(records, args):
    tasks = _parse_tasks(args.tasks)
    if tasks:
        records = [r for r in records if r.task_id in tasks]
    if args.topology:
        records = [r for r in records if r.topology == args.topology]
    if args.limit:
        records = records[: args.limit]
    return records


def cmd_eval(args) -> int:
    records = _filter_records(read_dataset(args.dataset), args)
    if not records:
        print("no records selected", file=sys.stderr)
        return 1
    cfg = ModelConfig(endpoint=args.endpoint, model=args.model)
    mode = PromptMode(args.mode)

    def progress(done, total):
        print(f"\r{done}/{total}", end="", file=sys.stderr, flush=True)

    results = evaluate_records(records, cfg, mode, args.dataset, progress=progress)
    print(file=sys.stderr)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "results.jsonl", "w", encoding="utf-8") as fh:
        for r in results:
            fh.write(json.dumps(r.to_json(), sort_keys=True) + "\n")
    report = aggregate(results, records)
    write_report(report, out)
    print(report_text(report))
    return 0


def cmd_report(args) -> int:
    records = read_dataset(args.dataset)
    results = []
    with open(args.results, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                results.append(EvalResult.from_json(json.loads(line)))
    report = aggregate(results, records)
    if args.out:
        write_report(report, args.out)
    print(report_text(report))
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .server import create_app

    app = create_app(args.dataset, args.log_dir, frontend_dir=args.frontend)
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polargrid",
        description="Matched Cartesian/Polar grid-puzzle benchmark tools.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a dataset")
    p.add_argument("--out", required=True, help="output dataset directory")
    p.add_argument("--n-per-task", type=int, default=10, help="pairs per task")
    p.add_argument("--base-seed", type=int, default=0, help="first seed")
    p.add_argument("--tasks", help="comma-separated task ids (default: all)")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("validate", help="re-derive a dataset and diff it")
    p.add_argument("--dataset", required=True, help="dataset directory")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("baseline", help="random-answer baseline for a dataset")
    p.add_argument("--dataset", required=True, help="dataset directory")
    p.add_argument("--simulate", type=int, default=0, help="empirical trials")
    p.add_argument("--seed", type=int, default=0, help="simulation seed")
    p.set_defaults(func=cmd_baseline)

    p = sub.add_parser("eval", help="query a model over a dataset")
    p.add_argument("--dataset", required=True, help="dataset directory")
    p.add_argument("--endpoint", required=True, help="chat completions URL")
    p.add_argument("--model", required=True, help="model name")
    p.add_argument(
        "--mode",
        default="standard",
        choices=[m.value for m in PromptMode],
        help="prompting mode",
    )
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--tasks", help="comma-separated task ids")
    p.add_argument("--topology", help="restrict to one topology")
    p.add_argument("--limit", type=int, default=0, help="max records")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("report", help="aggregate saved eval results")
    p.add_argument("--results", required=True, help="results.jsonl path")
    p.add_argument("--dataset", required=True, help="dataset directory")
    p.add_argument("--out", help="directory for report.json/report.txt")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("serve", help="run the human-rating service")
    p.add_argument("--dataset", required=True, help="dataset directory")
    p.add_argument("--log-dir", required=True, help="response log directory")
    p.add_argument("--frontend", help="built rater UI directory")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except KeyboardInterrupt:
        return 1
    except SystemExit:
        raise
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
