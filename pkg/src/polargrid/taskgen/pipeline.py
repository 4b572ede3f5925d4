"""Pair assembly: seeded rejection sampling, option labeling, validation.

generate_pair() drives a task builder under a deterministic per-attempt
RNG, turns the accepted draft into rendered instances, and re-validates
every instance by re-running its oracle on the emitted puzzle payload.
"""

from __future__ import annotations

import hashlib
import random
from fractions import Fraction

from .. import oracles
from ..answers import OPTION_LETTERS, Answer, AnswerType
from ..render import RenderError, SceneSpec, max_font_px, render_scene
from ..topology import Boundary, CellRef, GridSpec, Topology
from .catalog import CATALOG, Alignment, TaskSpec
from .generators import BUILDERS, Draft, SideDraft
from .instance import Instance, InstancePair, Option, list_to_cell

GENERATOR_VERSION = "1"
MAX_ATTEMPTS = 1000


class GenerationError(Exception):
    pass


class ValidationError(Exception):
    pass


def _sub_rng(task_id: str, seed: int, attempt: int) -> random.Random:
    key = f"{task_id}:{seed}:{attempt}".encode()
    digest = hashlib.blake2s(key, digest_size=8).digest()
    return random.Random(int.from_bytes(digest, "big"))


def _jsonable_truth(truth) -> object:
    if isinstance(truth, Fraction):
        return str(truth)
    if isinstance(truth, tuple):
        return list(truth)
    return truth


def _answer_for(spec: TaskSpec, side: SideDraft, truth_index: int | None) -> Answer:
    t = spec.answer_type
    if t is AnswerType.OPTION_LABEL:
        return Answer.option(OPTION_LETTERS[truth_index])
    if t is AnswerType.DIGIT:
        return Answer.digit(side.truth)
    if t is AnswerType.COORDINATE:
        return Answer.coordinate(*side.truth)
    if t is AnswerType.STRING:
        return Answer.text(side.truth)
    return Answer.int_list(side.truth)


def _assemble(spec: TaskSpec, seed: int, attempt: int, draft: Draft) -> InstancePair:
    pair_sides = [draft.sides[t] for t in (Topology.CARTESIAN, Topology.POLAR)]
    font = 16.0
    if any(s.cell_glyphs for s in pair_sides):
        font = min(max_font_px(s.grid, s.cell_glyphs) for s in pair_sides if s.cell_glyphs)

    cart_truth = draft.sides[Topology.CARTESIAN].truth
    instances: dict[Topology, Instance] = {}
    for topo in spec.layouts:
        side = draft.sides[topo]
        side_font = font
        if side.cell_glyphs and topo not in (Topology.CARTESIAN, Topology.POLAR):
            side_font = min(font, max_font_px(side.grid, side.cell_glyphs))
        scene = SceneSpec(
            grid=side.grid,
            cell_fills=side.cell_fills,
            cell_glyphs=side.cell_glyphs,
            overlays=side.overlays,
            font_px=side_font,
        )
        options = None
        if side.options is not None:
            options = [Option(OPTION_LETTERS[i], text) for i, text in enumerate(side.options)]
        answer = _answer_for(spec, side, draft.truth_index)
        meta = {
            "category": spec.category,
            "subcategory": spec.subcategory,
            "alignment": spec.alignment.value,
            "boundary_policy": spec.boundary_policy.value,
            "truth_value": _jsonable_truth(side.truth),
            "truth_display": options[draft.truth_index].text if options else answer.display(),
            "divergence": (
                "boundary"
                if spec.alignment is Alignment.PARTIALLY_ALIGNED and side.truth != cart_truth
                else "none"
            ),
            "generator_version": GENERATOR_VERSION,
            "attempt": attempt,
        }
        meta.update(draft.meta)
        instances[topo] = Instance(
            task_id=spec.task_id,
            topology=topo,
            boundary=side.grid.boundary,
            seed=seed,
            grid=side.grid,
            scene=scene,
            question=draft.question,
            ground_truth=answer,
            puzzle=side.puzzle,
            options=options,
            meta=meta,
        )

    variants = [instances[t] for t in spec.layouts if t not in (Topology.CARTESIAN, Topology.POLAR)]
    return InstancePair(
        task_id=spec.task_id,
        seed=seed,
        cartesian=instances[Topology.CARTESIAN],
        polar=instances[Topology.POLAR],
        variants=variants,
    )


def generate_pair(task_id: str, seed: int, max_attempts: int = MAX_ATTEMPTS) -> InstancePair:
    """Deterministically generate one validated Cartesian/Polar pair."""
    if task_id not in CATALOG:
        raise GenerationError(f"unknown task {task_id!r}")
    spec = CATALOG[task_id]
    for attempt in range(max_attempts):
        rng = _sub_rng(task_id, seed, attempt)
        draft = BUILDERS[task_id](rng)
        if draft is None:
            continue
        pair = _assemble(spec, seed, attempt, draft)
        if not all(validate_instance(inst)["passed"] for inst in pair.members):
            continue
        if spec.alignment is Alignment.FULLY_ALIGNED:
            if pair.cartesian.ground_truth != pair.polar.ground_truth:
                continue
        return pair
    raise GenerationError(f"no valid {task_id} pair for seed {seed} in {max_attempts} attempts")


def generate_dataset(n_per_task: int, base_seed: int = 0, tasks=None):
    """Yield validated pairs for every task, seeds base_seed..base_seed+n-1."""
    task_ids = sorted(tasks) if tasks else sorted(CATALOG)
    for task_id in task_ids:
        if task_id not in CATALOG:
            raise GenerationError(f"unknown task {task_id!r}")
        for i in range(n_per_task):
            yield generate_pair(task_id, base_seed + i)


# ---------------------------------------------------------------------------
# Validation


def _letters_map(rows) -> dict:
    return {
        CellRef(a, b): rows[a][b] for a in range(len(rows)) for b in range(len(rows[0]))
    }


def _walls_set(pairs) -> set:
    return {tuple(sorted((list_to_cell(u), list_to_cell(v)))) for u, v in pairs}


def _option_answer(inst: Instance, text: str) -> Answer:
    matches = [o.label for o in inst.options if o.text == text]
    if len(matches) != 1:
        raise ValidationError(
            f"{inst.instance_id}: {len(matches)} options match the recomputed answer {text!r}"
        )
    return Answer.option(matches[0])


def _recompute_sudoku(inst: Instance) -> Answer:
    p = inst.puzzle
    value = oracles.solve_sudoku_cell(p["board"], list_to_cell(p["cell"]))
    return _option_answer(inst, str(value))


def _recompute_n_queens(inst: Instance) -> Answer:
    p = inst.puzzle
    fixed = {int(r): c for r, c in p["fixed"].items()}
    count, witness = oracles.count_queen_completions(p["n"], fixed)
    if count != 1:
        raise ValidationError(f"{inst.instance_id}: {count} completions, expected 1")
    qrow = p["query_row"]
    return _option_answer(inst, f"({qrow}, {witness[qrow]})")


def _recompute_min_flips(inst: Instance) -> Answer:
    p = inst.puzzle
    value = oracles.min_flip_moves(p["cells"], p["strip_len"], p["target"], inst.boundary)
    if value is None:
        raise ValidationError(f"{inst.instance_id}: target unreachable")
    return _option_answer(inst, str(value))


def _recompute_bouncing_point(inst: Instance) -> Answer:
    p = inst.puzzle
    cell = oracles.simulate_bouncing_point(
        inst.grid, list_to_cell(p["start"]), tuple(p["velocity"]), p["steps"]
    )
    return Answer.coordinate(cell.major, cell.minor)


def _recompute_lattice_paths(inst: Instance) -> Answer:
    p = inst.puzzle
    moves = oracles.MoveSet.of((0, 1), (1, 0), (1, 1))
    count = oracles.count_monotone_paths(
        inst.grid,
        moves,
        list_to_cell(p["start"]),
        list_to_cell(p["end"]),
        frozenset(list_to_cell(c) for c in p["blocked"]),
    )
    return Answer.digit(count)


def _recompute_knight_paths(inst: Instance) -> Answer:
    p = inst.puzzle
    moves = oracles.MoveSet(
        tuple(oracles.Move(a, b, wrap=True) for a, b in oracles.KNIGHT_OFFSETS)
    )
    count = oracles.count_fixed_length_walks(
        inst.grid, moves, list_to_cell(p["start"]), list_to_cell(p["target"]), p["k"]
    )
    return Answer.digit(count)


def _recompute_random_walk(inst: Instance) -> Answer:
    p = inst.puzzle
    prob = oracles.walk_pass_probability(
        inst.grid, list_to_cell(p["a"]), list_to_cell(p["b"]), list_to_cell(p["c"])
    )
    text = f"{prob.numerator}/{prob.denominator}" if prob.denominator != 1 else str(prob.numerator)
    return _option_answer(inst, text)


def _recompute_maze(inst: Instance) -> Answer:
    p = inst.puzzle
    entrances = {label: list_to_cell(cell) for label, cell in p["entrances"].items()}
    label = oracles.solve_maze_entrance(
        inst.grid, _walls_set(p["walls"]), entrances, list_to_cell(p["exit"])
    )
    return _option_answer(inst, f"entrance {label}")


def _recompute_monotonic_path(inst: Instance) -> Answer:
    p = inst.puzzle
    values = {
        CellRef(a, b): p["values"][a][b]
        for a in range(inst.grid.major)
        for b in range(inst.grid.minor)
    }
    exits = {label: list_to_cell(cell) for label, cell in p["exits"].items()}
    label = oracles.solve_monotonic_exit(inst.grid, values, list_to_cell(p["start"]), exits)
    return _option_answer(inst, f"exit {label}")


def _recompute_word_search(inst: Instance) -> Answer:
    p = inst.puzzle
    count = oracles.count_word_paths(
        inst.grid, _letters_map(p["letters"]), p["word"], list_to_cell(p["start"])
    )
    return Answer.digit(count)


def _recompute_wall_follower(inst: Instance) -> Answer:
    from ..topology import Heading

    p = inst.puzzle
    _, cell = oracles.simulate_wall_follower(
        inst.grid, _walls_set(p["walls"]), list_to_cell(p["start"]), Heading(p["heading"])
    )
    return Answer.coordinate(cell.major, cell.minor)


def _recompute_grid_rotation(inst: Instance) -> Answer:
    p = inst.puzzle
    marked = list_to_cell(p["marked"])
    rotated = oracles.rotate_grid(inst.grid, {marked: 1}, p["quarter_turns"])
    (cell,) = rotated.keys()
    return _option_answer(inst, f"({cell.major}, {cell.minor})")


def _recompute_area_counting(inst: Instance) -> Answer:
    p = inst.puzzle
    shaded = {list_to_cell(c) for c in p["shaded"]}
    return Answer.digit(
        oracles.connected_region_size(inst.grid, shaded, list_to_cell(p["seed"]))
    )


def _recompute_pipe_lengths(inst: Instance) -> Answer:
    p = inst.puzzle
    coloring = {
        CellRef(a, b): p["colors"][a][b]
        for a in range(inst.grid.major)
        for b in range(inst.grid.minor)
    }
    return Answer.int_list(oracles.pipe_lengths(inst.grid, coloring))


def _recompute_letter_collection(inst: Instance) -> Answer:
    from ..topology import Heading

    p = inst.puzzle
    path = [(list_to_cell(cell), Heading(h)) for cell, h in p["path"]]
    letters = {list_to_cell(c): ch for c, ch in p["letters"]}
    return Answer.text(oracles.collect_right_hand_letters(inst.grid, path, letters))


RECOMPUTE = {
    "sudoku": _recompute_sudoku,
    "n_queens": _recompute_n_queens,
    "min_flips": _recompute_min_flips,
    "bouncing_point": _recompute_bouncing_point,
    "lattice_paths": _recompute_lattice_paths,
    "knight_paths": _recompute_knight_paths,
    "random_walk": _recompute_random_walk,
    "maze": _recompute_maze,
    "monotonic_path": _recompute_monotonic_path,
    "word_search": _recompute_word_search,
    "wall_follower": _recompute_wall_follower,
    "grid_rotation": _recompute_grid_rotation,
    "area_counting": _recompute_area_counting,
    "pipe_lengths": _recompute_pipe_lengths,
    "letter_collection": _recompute_letter_collection,
}


def recompute_answer(inst: Instance) -> Answer:
    """Re-derive the ground truth from the instance's puzzle payload alone."""
    if inst.task_id not in RECOMPUTE:
        raise ValidationError(f"no oracle dispatch for task {inst.task_id!r}")
    return RECOMPUTE[inst.task_id](inst)


def _check_answer_type(inst: Instance, spec: TaskSpec) -> None:
    if inst.ground_truth.type is not spec.answer_type:
        raise ValidationError(
            f"answer type {inst.ground_truth.type.value}, "
            f"catalog says {spec.answer_type.value}"
        )


def _check_options(inst: Instance, spec: TaskSpec) -> None:
    if spec.answer_type is not AnswerType.OPTION_LABEL:
        if inst.options:
            raise ValidationError("unexpected options on an open-format task")
        return
    if not inst.options:
        raise ValidationError("option task without options")
    labels = [o.label for o in inst.options]
    if labels != list(OPTION_LETTERS[: len(labels)]):
        raise ValidationError(f"bad option labels {labels}")
    if spec.n_options is not None and len(labels) != spec.n_options:
        raise ValidationError(f"{len(labels)} options, expected {spec.n_options}")
    if len({o.text for o in inst.options}) != len(labels):
        raise ValidationError("duplicate option texts")


def _check_oracle(inst: Instance) -> None:
    expected = recompute_answer(inst)
    if expected != inst.ground_truth:
        raise ValidationError(f"oracle answer {expected} != recorded {inst.ground_truth}")


def validate_instance(inst: Instance) -> dict:
    """Full instance check: answer-type conformance, option shape, oracle
    agreement on the puzzle payload, and collision-free rendering.

    Returns {"passed": bool, "checks": [{"name", "passed", "detail"}]}.
    """
    spec = CATALOG.get(inst.task_id)
    if spec is None:
        return {
            "passed": False,
            "checks": [
                {"name": "task", "passed": False, "detail": f"unknown task {inst.task_id!r}"}
            ],
        }
    steps = [
        ("answer_type", lambda: _check_answer_type(inst, spec)),
        ("options", lambda: _check_options(inst, spec)),
        ("oracle_agreement", lambda: _check_oracle(inst)),
        ("render", lambda: render_scene(inst.scene)),
    ]
    checks = []
    for name, fn in steps:
        try:
            fn()
            checks.append({"name": name, "passed": True, "detail": ""})
        except (ValidationError, RenderError, oracles.OracleError, ValueError) as exc:
            checks.append({"name": name, "passed": False, "detail": str(exc)})
    return {"passed": all(c["passed"] for c in checks), "checks": checks}
