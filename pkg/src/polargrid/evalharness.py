"""Model evaluation: prompt assembly, querying, answer parsing, scoring,
and aggregate reports with Cartesian/Polar deltas.

Prompts are message-part sequences: text parts plus image references
(dicts with an image path), resolved to base64 payloads at query time.
"""

from __future__ import annotations

import base64
import json
import os
import re
import time
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

import httpx

from .answers import Answer, AnswerType
from .dataset import ManifestRecord


class PromptMode(str, Enum):
    STANDARD = "standard"
    CONVERSION_HINT = "conversion_hint"
    FEW_SHOT = "few_shot"
    TWO_STAGE_CAPTION = "two_stage_caption"
    TWO_STAGE_ANSWER = "two_stage_answer"


FEW_SHOT_K = 5

_LAYOUT_LEGEND = {
    "cartesian": (
        "The image shows a rectangular grid. Coordinates are (row, column): "
        "row 0 is the top row, column 0 is the leftmost column."
    ),
    "polar": (
        "The image shows a circular grid of concentric rings split into "
        "sectors. Coordinates are (ring, sector): ring 0 is the innermost "
        "ring, sector 0 starts at 12 o'clock, and sector indices increase "
        "clockwise."
    ),
    "hexagonal": (
        "The image shows a field of hexagonal cells. Coordinates are "
        "(major, minor) indices as laid out in the image, and each cell "
        "touches up to six neighbors."
    ),
    "octagonal": (
        "The image shows a tiling of octagonal cells. Coordinates are "
        "(major, minor) indices, and each cell touches up to eight "
        "neighbors, including diagonals."
    ),
}

_CONVERSION_HINT = (
    "Hint: this circular layout is structurally identical to a rectangular "
    "grid. Ring i corresponds to row i and sector j to column j, so you may "
    "first rewrite the layout as a table and then solve on the table."
)

_FORMAT_INSTRUCTIONS = {
    AnswerType.OPTION_LABEL: "Finish with 'Answer: X' where X is the letter of the correct option.",
    AnswerType.DIGIT: "Finish with 'Answer: N' where N is a single integer.",
    AnswerType.COORDINATE: "Finish with 'Answer: (a, b)' giving the coordinate.",
    AnswerType.STRING: "Finish with 'Answer: WORD' giving the collected letters in order.",
    AnswerType.INT_LIST: "Finish with 'Answer: [a, b, c]' listing the values in the required order.",
}


def text_part(s: str) -> dict:
    return {"type": "text", "text": s}


def image_part(path: str) -> dict:
    return {"type": "image_ref", "path": path}


def _question_text(rec: ManifestRecord) -> str:
    lines = [rec.question]
    if rec.options:
        lines.append("Options:")
        for opt in rec.options:
            lines.append(f"{opt['label']}. {opt['text']}")
    lines.append(_FORMAT_INSTRUCTIONS[AnswerType(rec.ground_truth["type"])])
    return "\n".join(lines)


def few_shot_exemplars(records, rec: ManifestRecord, k: int = FEW_SHOT_K) -> list:
    """Solved exemplars: other seeds of the same task and layout."""
    pool = [
        r
        for r in records
        if r.task_id == rec.task_id
        and r.topology == rec.topology
        and r.instance_id != rec.instance_id
    ]
    pool.sort(key=lambda r: r.seed)
    return pool[:k]


def build_prompt(
    rec: ManifestRecord,
    mode: PromptMode,
    exemplars=None,
    caption: str | None = None,
) -> list:
    """Assemble the message-part sequence for one instance.

    FewShot needs >= 5 solved exemplar records; TwoStageAnswer needs the
    caption from the first stage and carries no image reference.
    """
    parts = [text_part(_LAYOUT_LEGEND[rec.topology])]
    if mode is PromptMode.CONVERSION_HINT and rec.topology == "polar":
        parts.append(text_part(_CONVERSION_HINT))
    if mode is PromptMode.FEW_SHOT:
        if exemplars is None or len(exemplars) < FEW_SHOT_K:
            raise ValueError(f"few-shot mode needs at least {FEW_SHOT_K} exemplars")
        parts.append(text_part("Here are solved examples of this task type:"))
        for i, ex in enumerate(exemplars[:FEW_SHOT_K], 1):
            parts.append(text_part(f"Example {i}:"))
            parts.append(image_part(ex.image_path))
            parts.append(text_part(f"{_question_text(ex)}\nAnswer: {ex.answer.display()}"))
        parts.append(text_part("Now the actual question:"))
    if mode is PromptMode.TWO_STAGE_CAPTION:
        parts.append(image_part(rec.image_path))
        parts.append(
            text_part(
                "Describe the grid in the image completely: its size and the "
                "contents of every cell, plus all walls, markers, and labels. "
                "Your description will later be used to answer a question "
                "without the image, so leave nothing out. Do not solve "
                "anything yet."
            )
        )
        return parts
    if mode is PromptMode.TWO_STAGE_ANSWER:
        if caption is None:
            raise ValueError("two-stage answer mode needs the stage-one caption")
        parts.append(text_part("A description of the image:\n" + caption))
        parts.append(text_part(_question_text(rec)))
        return parts
    parts.append(image_part(rec.image_path))
    parts.append(text_part(_question_text(rec)))
    return parts


# ---------------------------------------------------------------------------
# Model access


@dataclass
class ModelConfig:
    endpoint: str
    model: str
    api_key_env: str = "POLARGRID_API_KEY"
    max_tokens: int = 1024
    temperature: float = 0.0
    timeout: float = 120.0
    max_retries: int = 3
    backoff: float = 1.0

    @property
    def api_key(self) -> str:
        key = os.environ.get(self.api_key_env, "")
        if not key:
            raise RuntimeError(f"set {self.api_key_env} in the environment")
        return key


class QueryError(Exception):
    pass


def _resolve_parts(parts: list, dataset_dir) -> list:
    content = []
    for part in parts:
        if part["type"] == "text":
            content.append({"type": "text", "text": part["text"]})
        elif part["type"] == "image_ref":
            data = (Path(dataset_dir) / part["path"]).read_bytes()
            b64 = base64.b64encode(data).decode("ascii")
            content.append(
                {
                    "type": "image_url",
                    "image_url": {"url": f"data:image/svg+xml;base64,{b64}"},
                }
            )
        else:
            raise ValueError(f"unknown prompt part type {part['type']!r}")
    return content


def query_model(
    cfg: ModelConfig,
    parts: list,
    dataset_dir=".",
    transport: httpx.BaseTransport | None = None,
    sleep=time.sleep,
) -> str:
    """One chat completion; retries transient failures with backoff.

    A custom transport (e.g. httpx.MockTransport) makes this fully
    testable without network access.
    """
    payload = {
        "model": cfg.model,
        "max_tokens": cfg.max_tokens,
        "temperature": cfg.temperature,
        "messages": [{"role": "user", "content": _resolve_parts(parts, dataset_dir)}],
    }
    headers = {"Authorization": f"Bearer {cfg.api_key}"}
    last_error = None
    with httpx.Client(transport=transport, timeout=cfg.timeout) as client:
        for attempt in range(cfg.max_retries + 1):
            if attempt:
                sleep(cfg.backoff * (2 ** (attempt - 1)))
            try:
                resp = client.post(cfg.endpoint, json=payload, headers=headers)
            except httpx.TransportError as exc:
                last_error = str(exc)
                continue
            if resp.status_code == 200:
                try:
                    return resp.json()["choices"][0]["message"]["content"]
                except (KeyError, IndexError, ValueError) as exc:
                    raise QueryError(f"malformed completion payload: {exc}") from exc
            if resp.status_code in (408, 429) or resp.status_code >= 500:
                last_error = f"HTTP {resp.status_code}"
                continue
            raise QueryError(f"HTTP {resp.status_code}: {resp.text[:200]}")
    raise QueryError(f"giving up after {cfg.max_retries + 1} attempts: {last_error}")


# ---------------------------------------------------------------------------
# Parsing and scoring


_OPTION_PATTERNS = [
    re.compile(r"(?i)(?:final\s+answer|answer)\s*(?:is|:)?\s*\**\(?([A-F])\)?(?![A-Za-z])"),
    re.compile(r"(?i)\boption\s+([A-F])(?![A-Za-z])"),
    re.compile(r"\(([A-F])\)"),
    re.compile(r"(?<![A-Za-z0-9])([A-F])(?![A-Za-z0-9])"),
]
_INT_RE = re.compile(r"-?\d+")
_COORD_PAREN_RE = re.compile(r"\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\)")
_COORD_WORDY_RE = re.compile(
    r"(?i)\b(?:ring|row)\s*#?\s*(-?\d+)\s*(?:,|and)?\s*(?:sector|col(?:umn)?)\s*#?\s*(-?\d+)"
)
_INT_LIST_RE = re.compile(r"\[\s*-?\d+(?:\s*,\s*-?\d+)*\s*\]")
_WORD_AFTER_ANSWER_RE = re.compile(r"(?i)answer\s*(?:is|:)?\s*[\"']?([A-Za-z]+)")
_QUOTED_WORD_RE = re.compile(r"[\"']([A-Za-z]+)[\"']")
_CAPS_RUN_RE = re.compile(r"(?<![A-Za-z])([A-Z]{2,})(?![A-Za-z])")


def parse_answer(text: str, answer_type: AnswerType) -> Answer | None:
    """Extract the final well-formed answer of the given type, else None.

    The last occurrence wins within each grammar; parsing is total and
    never raises on model text.
    """
    if not text:
        return None
    if answer_type is AnswerType.OPTION_LABEL:
        for pat in _OPTION_PATTERNS:
            matches = pat.findall(text)
            if matches:
                return Answer.option(matches[-1].upper())
        return None
    if answer_type is AnswerType.DIGIT:
        matches = _INT_RE.findall(text)
        return Answer.digit(int(matches[-1])) if matches else None
    if answer_type is AnswerType.COORDINATE:
        best = None
        for pat in (_COORD_PAREN_RE, _COORD_WORDY_RE):
            for m in pat.finditer(text):
                if best is None or m.start() > best.start():
                    best = m
        if best is None:
            return None
        return Answer(AnswerType.COORDINATE, (int(best.group(1)), int(best.group(2))))
    if answer_type is AnswerType.STRING:
        for pat in (_WORD_AFTER_ANSWER_RE, _QUOTED_WORD_RE, _CAPS_RUN_RE):
            matches = pat.findall(text)
            if matches:
                return Answer.text(matches[-1])
        return None
    matches = _INT_LIST_RE.findall(text)
    if not matches:
        return None
    values = [int(x) for x in _INT_RE.findall(matches[-1])]
    if any(a < b for a, b in zip(values, values[1:])):
        return None  # a list in the wrong order is not a well-formed answer
    return Answer.int_list(values)


def score(parsed: Answer | None, truth: Answer) -> bool:
    """Exact match; strings compare case-insensitively after trimming."""
    if parsed is None or parsed.type is not truth.type:
        return False
    if truth.type is AnswerType.STRING:
        return parsed.value.strip().casefold() == truth.value.strip().casefold()
    return parsed.value == truth.value


_COORD_INVOKE_RE = re.compile(r"\(\s*\d+\s*,\s*\d+\s*\)")
_ROWCOL_RE = re.compile(r"(?i)\b(?:row|column|col)\s*#?\s*\d+")


def detect_coordinate_invocation(text: str) -> bool:
    """Lexical check for grid-coordinate talk: '(i, j)' tuples or
    'row/column N' references.  An approximation of judge-based tagging."""
    return bool(_COORD_INVOKE_RE.search(text) or _ROWCOL_RE.search(text))


class SizeMention(str, Enum):
    CORRECT = "correct"
    INCORRECT = "incorrect"
    UNMENTIONED = "unmentioned"


_AXIS_WORDS = r"(?:rows?|columns?|cols?|rings?|sectors?)"


def check_grid_size_mention(text: str, major: int, minor: int) -> SizeMention:
    """Classify whether the text states the grid size.

    Correct if any stated size matches (either axis order); Incorrect if
    sizes are stated but contradict; Unmentioned when no size appears.
    """
    mentions = [
        (int(a), int(b))
        for a, b in re.findall(r"(?<!\d)(\d+)\s*(?:x|X|×|by)\s*(\d+)(?!\d)", text)
    ]
    axis_counts = [int(v) for v in re.findall(rf"(?<!\d)(\d+)\s*{_AXIS_WORDS}", text)]
    if len(axis_counts) >= 2:
        mentions.append((axis_counts[0], axis_counts[1]))
    if not mentions:
        return SizeMention.UNMENTIONED
    expected = {(major, minor), (minor, major)}
    if any(m in expected for m in mentions):
        return SizeMention.CORRECT
    return SizeMention.INCORRECT


# ---------------------------------------------------------------------------
# Evaluation loop and aggregation


@dataclass
class EvalResult:
    instance_id: str
    task_id: str
    topology: str
    mode: str
    response: str
    parsed: dict | None
    correct: bool
    coordinate_invoked: bool
    grid_size_mention: str
    meta: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "instance_id": self.instance_id,
            "task_id": self.task_id,
            "topology": self.topology,
            "mode": self.mode,
            "response": self.response,
            "parsed": self.parsed,
            "correct": self.correct,
            "coordinate_invoked": self.coordinate_invoked,
            "grid_size_mention": self.grid_size_mention,
            "meta": self.meta,
        }

    @staticmethod
    def from_json(obj: dict) -> "EvalResult":
        return EvalResult(**obj)


def evaluate_record(
    rec: ManifestRecord,
    cfg: ModelConfig,
    mode: PromptMode,
    dataset_dir,
    records=None,
    transport=None,
    sleep=time.sleep,
) -> EvalResult:
    meta: dict = {}
    if mode in (PromptMode.TWO_STAGE_CAPTION, PromptMode.TWO_STAGE_ANSWER):
        caption = query_model(
            cfg,
            build_prompt(rec, PromptMode.TWO_STAGE_CAPTION),
            dataset_dir,
            transport=transport,
            sleep=sleep,
        )
        meta["caption"] = caption
        response = query_model(
            cfg,
            build_prompt(rec, PromptMode.TWO_STAGE_ANSWER, caption=caption),
            dataset_dir,
            transport=transport,
            sleep=sleep,
        )
        probe_text = caption + "\n" + response
    else:
        exemplars = None
        if mode is PromptMode.FEW_SHOT:
            if records is None:
                raise ValueError("few-shot mode needs the record pool")
            exemplars = few_shot_exemplars(records, rec)
        prompt = build_prompt(rec, mode, exemplars=exemplars)
        response = query_model(cfg, prompt, dataset_dir, transport=transport, sleep=sleep)
        probe_text = response
    truth = rec.answer
    parsed = parse_answer(response, truth.type)
    return EvalResult(
        instance_id=rec.instance_id,
        task_id=rec.task_id,
        topology=rec.topology,
        mode=mode.value,
        response=response,
        parsed=parsed.to_json() if parsed else None,
        correct=score(parsed, truth),
        coordinate_invoked=detect_coordinate_invocation(probe_text),
        grid_size_mention=check_grid_size_mention(
            probe_text, rec.grid["major"], rec.grid["minor"]
        ).value,
        meta=meta,
    )


def evaluate_records(
    records,
    cfg: ModelConfig,
    mode: PromptMode,
    dataset_dir,
    transport=None,
    sleep=time.sleep,
    progress=None,
) -> list[EvalResult]:
    records = list(records)
    results = []
    for i, rec in enumerate(records):
        results.append(
            evaluate_record(
                rec, cfg, mode, dataset_dir, records=records, transport=transport, sleep=sleep
            )
        )
        if progress:
            progress(i + 1, len(records))
    return results


def _accuracy(results) -> float | None:
    results = list(results)
    if not results:
        return None
    return 100.0 * sum(r.correct for r in results) / len(results)


def _cp_block(results) -> dict:
    cart = [r for r in results if r.topology == "cartesian"]
    polar = [r for r in results if r.topology == "polar"]
    c, p = _accuracy(cart), _accuracy(polar)
    return {
        "cartesian": c,
        "polar": p,
        "delta": (c - p) if c is not None and p is not None else None,
        "n": len(results),
    }


def aggregate(results, records) -> dict:
    """Summarize results: C/P accuracy and delta, overall and stratified.

    Every result must join a manifest record; orphans are an error.
    """
    results = list(results)
    recs = {r.instance_id: r for r in records}
    orphans = sorted({r.instance_id for r in results} - set(recs))
    if orphans:
        raise ValueError(f"results reference unknown instances: {', '.join(orphans)}")

    def by(keyfn) -> dict:
        groups: dict[str, list] = {}
        for r in results:
            groups.setdefault(keyfn(r, recs[r.instance_id]), []).append(r)
        return {k: _cp_block(g) for k, g in sorted(groups.items())}

    def rate_by_topology(flag) -> dict:
        out = {}
        for topo in sorted({r.topology for r in results}):
            group = [r for r in results if r.topology == topo]
            out[topo] = 100.0 * sum(flag(r) for r in group) / len(group)
        return out

    return {
        "n_results": len(results),
        "overall": _cp_block(results),
        "by_task": by(lambda r, m: r.task_id),
        "by_category": by(lambda r, m: m.meta.get("category", "?")),
        "by_alignment": by(lambda r, m: m.meta.get("alignment", "?")),
        "by_divergence": by(lambda r, m: m.meta.get("divergence", "?")),
        "by_answer_type": by(lambda r, m: m.ground_truth["type"]),
        "coordinate_invocation": rate_by_topology(lambda r: r.coordinate_invoked),
        "grid_size_mention": {
            kind.value: rate_by_topology(lambda r, k=kind: r.grid_size_mention == k.value)
            for kind in SizeMention
        },
    }


def _fmt(v) -> str:
    return f"{v:6.1f}" if v is not None else "   n/a"


def report_text(report: dict) -> str:
    lines = [f"results: {report['n_results']}"]
    o = report["overall"]
    lines.append(
        f"overall   cart {_fmt(o['cartesian'])}  polar {_fmt(o['polar'])}  delta {_fmt(o['delta'])}"
    )
    for section in ("by_category", "by_task", "by_alignment", "by_divergence", "by_answer_type"):
        lines.append(f"\n{section}")
        for name, block in report[section].items():
            lines.append(
                f"  {name:40s} cart {_fmt(block['cartesian'])}  "
                f"polar {_fmt(block['polar'])}  delta {_fmt(block['delta'])}  n={block['n']}"
            )
    lines.append("\ncoordinate invocation rate")
    for topo, rate in report["coordinate_invocation"].items():
        lines.append(f"  {topo:12s} {_fmt(rate)}")
    lines.append("grid size mention (percent of responses)")
    for kind, rates in report["grid_size_mention"].items():
        for topo, rate in rates.items():
            lines.append(f"  {kind:12s} {topo:12s} {_fmt(rate)}")
    return "\n".join(lines) + "\n"


def write_report(report: dict, out_dir) -> None:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "report.json").write_text(json.dumps(report, indent=2, sort_keys=True))
    (out / "report.txt").write_text(report_text(report))
