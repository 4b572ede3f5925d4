"""Per-task puzzle builders.

Each builder consumes a seeded RNG and either returns a Draft (logical
content, per-layout truths, scene ingredients, option texts) or None to
signal that the sample failed a solvability/uniqueness check and should
be redrawn.  All answers come from the oracles module, never from the
construction record.
"""

from __future__ import annotations

import string
from dataclasses import dataclass, field
from fractions import Fraction

from .. import oracles
from ..answers import OPTION_LETTERS
from ..render import (
    ArrowMarker,
    CellMarker,
    EdgeLabel,
    EdgeWall,
    PathTrace,
)
from ..topology import (
    Boundary,
    CellRef,
    GridSpec,
    Heading,
    Topology,
    neighbors,
    step,
)
from .catalog import CATALOG, PAIR_LAYOUTS, WORD_SEARCH_LAYOUTS
from .instance import cell_to_list

FILL_DARK = "#37474f"
FILL_LIGHT = "#eceff1"
FILL_HILITE = "#fff3b0"
FILL_SHADED = "#90a4ae"

PIPE_COLORS = [
    "#e6194b", "#3cb44b", "#ffe119", "#4363d8", "#f58231", "#911eb4",
    "#46f0f0", "#f032e6", "#bcf60c", "#fabebe", "#008080", "#e6beff",
    "#9a6324", "#fffac8", "#800000", "#aaffc3", "#808000", "#ffd8b1",
]

DECOR_COLORS = ["#e6194b", "#3cb44b", "#4363d8", "#f58231", "#911eb4"]


@dataclass
class SideDraft:
    grid: GridSpec
    puzzle: dict
    truth: object
    cell_fills: dict = field(default_factory=dict)
    cell_glyphs: dict = field(default_factory=dict)
    overlays: list = field(default_factory=list)
    options: list | None = None  # option texts, index-aligned across sides


@dataclass
class Draft:
    question: str
    sides: dict
    truth_index: int | None = None  # option slot holding the truth
    meta: dict = field(default_factory=dict)


def _pair_grids(major: int, minor: int, cart_boundary: Boundary, polar_boundary: Boundary):
    return {
        Topology.CARTESIAN: GridSpec(Topology.CARTESIAN, major, minor, cart_boundary),
        Topology.POLAR: GridSpec(Topology.POLAR, major, minor, polar_boundary),
    }


def _bounded_pair(major: int, minor: int):
    return _pair_grids(major, minor, Boundary.BOUNDED, Boundary.BOUNDED)


def _wrapping_split_pair(major: int, minor: int):
    """Bounded Cartesian against wrapping Polar (the boundary-divergent setup)."""
    return _pair_grids(major, minor, Boundary.BOUNDED, Boundary.WRAPPING)


def _wrapping_pair(major: int, minor: int):
    return _pair_grids(major, minor, Boundary.WRAPPING, Boundary.WRAPPING)


def _insert_truth(rng, distractors: list, truth_text: str, index: int | None = None):
    """Place the truth among shuffled distractor texts; returns (texts, index)."""
    texts = [str(d) for d in distractors]
    if truth_text in texts:
        raise ValueError("distractor coincides with the truth")
    if len(set(texts)) != len(texts):
        raise ValueError("duplicate distractor")
    if index is None:
        index = rng.randrange(len(texts) + 1)
    texts.insert(index, truth_text)
    return texts, index


def _random_simple_path(rng, spec: GridSpec, src: CellRef, dst: CellRef, avoid=frozenset()):
    """Randomized DFS for a simple path src -> dst avoiding given cells."""
    if src in avoid or dst in avoid:
        return None
    seen = {src}
    path = [src]

    def rec() -> bool:
        cur = path[-1]
        if cur == dst:
            return True
        nbrs = sorted(neighbors(cur, spec))
        rng.shuffle(nbrs)
        for u in nbrs:
            if u in seen or u in avoid:
                continue
            seen.add(u)
            path.append(u)
            if rec():
                return True
            path.pop()
        return False

    return path if rec() else None


# ---------------------------------------------------------------------------
# Algorithmic logic


def _random_solved_board(rng, n: int):
    bh, bw = oracles._box_dims(n)
    board = [[0] * n for _ in range(n)]
    cells = [(r, c) for r in range(n) for c in range(n)]

    def rec(i: int) -> bool:
        if i == len(cells):
            return True
        r, c = cells[i]
        cands = oracles._sudoku_candidates(board, r, c, n, bh, bw)
        rng.shuffle(cands)
        for d in cands:
            board[r][c] = d
            if rec(i + 1):
                return True
            board[r][c] = 0
        return False

    return board if rec(0) else None


def build_sudoku(rng) -> Draft | None:
    spec = CATALOG["sudoku"]
    n = rng.choice(spec.param_ranges["sizes"])
    solved = _random_solved_board(rng, n)
    if solved is None:
        return None
    lo, hi = spec.param_ranges["holes_6" if n == 6 else "holes_9"]
    holes = rng.sample([(r, c) for r in range(n) for c in range(n)], rng.randint(lo, hi))
    board = [row[:] for row in solved]
    for r, c in holes:
        board[r][c] = 0
    target = CellRef(*rng.choice(holes))
    try:
        truth = oracles.solve_sudoku_cell(board, target)
    except oracles.AmbiguityError:
        return None

    bh, bw = oracles._box_dims(n)
    glyphs = {
        CellRef(r, c): str(board[r][c])
        for r in range(n)
        for c in range(n)
        if board[r][c] != 0
    }
    glyphs[target] = "?"
    overlays = []
    for r in range(n):
        for c in range(n):
            cell = CellRef(r, c)
            if r % bh == 0 and r > 0:
                overlays.append(EdgeWall(cell, Heading.MAJOR_MINUS))
            if c % bw == 0 and c > 0:
                overlays.append(EdgeWall(cell, Heading.MINOR_MINUS))
    fills = {target: FILL_HILITE}

    others = [d for d in range(1, n + 1) if d != truth]
    texts, idx = _insert_truth(rng, rng.sample(others, 4), str(truth))
    puzzle = {"n": n, "board": board, "cell": cell_to_list(target)}
    sides = {
        topo: SideDraft(
            grid=grid,
            puzzle=puzzle,
            truth=truth,
            cell_fills=dict(fills),
            cell_glyphs=dict(glyphs),
            overlays=list(overlays),
            options=list(texts),
        )
        for topo, grid in _bounded_pair(n, n).items()
    }
    question = (
        f"This is a {n}x{n} Sudoku variant: every line of cells along either axis "
        f"and every outlined {bh}x{bw} box contains each digit from 1 to {n} "
        "exactly once. Which digit belongs in the highlighted cell marked '?'?"
    )
    return Draft(question, sides, truth_index=idx, meta={"oracle": "solve_sudoku_cell"})


def _random_queens(rng, n: int) -> dict | None:
    cols: set[int] = set()
    d1: set[int] = set()
    d2: set[int] = set()
    placement: dict[int, int] = {}

    def rec(r: int) -> bool:
        if r == n:
            return True
        order = list(range(n))
        rng.shuffle(order)
        for c in order:
            if c in cols or (c - r) in d1 or (c + r) in d2:
                continue
            cols.add(c)
            d1.add(c - r)
            d2.add(c + r)
            placement[r] = c
            if rec(r + 1):
                return True
            del placement[r]
            cols.discard(c)
            d1.discard(c - r)
            d2.discard(c + r)
        return False

    return placement if rec(0) else None


def build_n_queens(rng) -> Draft | None:
    spec = CATALOG["n_queens"]
    n = rng.randint(*spec.param_ranges["n"])
    solution = _random_queens(rng, n)
    if solution is None:
        return None
    hidden = rng.sample(range(n), rng.randint(*spec.param_ranges["missing"]))
    fixed = {r: c for r, c in solution.items() if r not in hidden}
    count, _ = oracles.count_queen_completions(n, fixed)
    if count != 1:
        return None
    qrow = rng.choice(hidden)
    truth = (qrow, solution[qrow])

    glyphs = {CellRef(r, c): "Q" for r, c in fixed.items()}
    fills = {CellRef(qrow, c): FILL_HILITE for c in range(n)}
    others = [c for c in range(n) if c != truth[1]]
    distractors = [f"({qrow}, {c})" for c in rng.sample(others, 4)]
    texts, idx = _insert_truth(rng, distractors, f"({truth[0]}, {truth[1]})")
    puzzle = {
        "n": n,
        "fixed": {str(r): c for r, c in sorted(fixed.items())},
        "query_row": qrow,
    }
    sides = {
        topo: SideDraft(
            grid=grid,
            puzzle=puzzle,
            truth=truth,
            cell_fills=dict(fills),
            cell_glyphs=dict(glyphs),
            options=list(texts),
        )
        for topo, grid in _bounded_pair(n, n).items()
    }
    question = (
        f"{n} queens must be placed so that no two share a line along either axis "
        "or a diagonal. The shown queens ('Q') admit exactly one completion. "
        f"Which coordinate holds the queen in the highlighted line {qrow}?"
    )
    return Draft(question, sides, truth_index=idx, meta={"oracle": "count_queen_completions"})


def build_min_flips(rng) -> Draft | None:
    spec = CATALOG["min_flips"]
    n = rng.choice(spec.param_ranges["lengths"])
    strip = spec.param_ranges["strip_len"]
    pattern = [rng.randint(0, 1) for _ in range(n)]
    s = rng.randint(0, 1)
    target = [(s + i) % 2 for i in range(n)]
    truths = {}
    for topo, boundary in (
        (Topology.CARTESIAN, Boundary.BOUNDED),
        (Topology.POLAR, Boundary.WRAPPING),
    ):
        t = oracles.min_flip_moves(pattern, strip, target, boundary)
        if t is None:
            return None
        truths[topo] = t

    fills = {
        CellRef(0, i): (FILL_DARK if bit else "#ffffff") for i, bit in enumerate(pattern)
    }
    overlays = [CellMarker(CellRef(0, 0), "outline")]
    puzzle = {"cells": pattern, "strip_len": strip, "target": target}
    hi = max(truths.values())
    pool = [v for v in range(0, hi + 5) if v not in truths.values()]
    shared_idx = rng.randrange(5)
    grids = _wrapping_split_pair(1, n)
    sides = {}
    for topo in PAIR_LAYOUTS:
        texts, _ = _insert_truth(
            rng, rng.sample(pool, 4), str(truths[topo]), index=shared_idx
        )
        sides[topo] = SideDraft(
            grid=grids[topo],
            puzzle=puzzle,
            truth=truths[topo],
            cell_fills=dict(fills),
            overlays=list(overlays),
            options=texts,
        )
    target_color = "dark" if target[0] == 1 else "white"
    question = (
        f"Each move flips the colors of {strip} consecutive cells. What is the "
        "minimum number of moves needed to reach a perfectly alternating "
        f"pattern in which the outlined cell is {target_color}?"
    )
    return Draft(question, sides, truth_index=shared_idx, meta={"oracle": "min_flip_moves"})


def build_bouncing_point(rng) -> Draft | None:
    spec = CATALOG["bouncing_point"]
    m = rng.randint(*spec.param_ranges["major"])
    n = rng.randint(*spec.param_ranges["minor"])
    steps = rng.randint(*spec.param_ranges["steps"])
    start = CellRef(rng.randrange(m), rng.randrange(n))
    while True:
        vel = (rng.randint(-1, 1), rng.randint(-1, 1))
        if vel != (0, 0):
            break
    grids = _wrapping_split_pair(m, n)
    puzzle = {"start": cell_to_list(start), "velocity": list(vel), "steps": steps}
    sides = {}
    for topo in PAIR_LAYOUTS:
        truth = oracles.simulate_bouncing_point(grids[topo], start, vel, steps)
        sides[topo] = SideDraft(
            grid=grids[topo],
            puzzle=puzzle,
            truth=(truth.major, truth.minor),
            cell_glyphs={start: "P"},
            overlays=[CellMarker(start, "outline")],
        )
    question = (
        f"A point marked P moves with constant velocity {vel} in (major, minor) "
        "cells per tick. It reflects off any closed boundary and continues "
        f"around any boundary that wraps. Give the point's coordinate after "
        f"{steps} ticks."
    )
    return Draft(question, sides, meta={"oracle": "simulate_bouncing_point"})


# ---------------------------------------------------------------------------
# Combinatorics


def build_lattice_paths(rng) -> Draft | None:
    spec = CATALOG["lattice_paths"]
    m = rng.randint(*spec.param_ranges["major"])
    n = rng.randint(*spec.param_ranges["minor"])
    start, end = CellRef(0, 0), CellRef(m - 1, n - 1)
    candidates = [c for c in GridSpec(Topology.CARTESIAN, m, n).cells() if c not in (start, end)]
    blocked = frozenset(rng.sample(candidates, rng.randint(*spec.param_ranges["blocked"])))
    moves = oracles.MoveSet.of((0, 1), (1, 0), (1, 1))
    grids = _bounded_pair(m, n)
    truth = oracles.count_monotone_paths(grids[Topology.CARTESIAN], moves, start, end, blocked)
    if truth < 1:
        return None
    puzzle = {
        "blocked": sorted(cell_to_list(c) for c in blocked),
        "start": cell_to_list(start),
        "end": cell_to_list(end),
    }
    sides = {
        topo: SideDraft(
            grid=grid,
            puzzle=puzzle,
            truth=truth,
            cell_fills={c: FILL_DARK for c in sorted(blocked)},
            cell_glyphs={start: "S", end: "E"},
        )
        for topo, grid in grids.items()
    }
    question = (
        "Moving only by single steps of (+1, 0), (0, +1), or the diagonal "
        "(+1, +1), and never entering a dark cell, how many distinct paths "
        "lead from S to E? Answer with a number."
    )
    return Draft(question, sides, meta={"oracle": "count_monotone_paths"})


def build_knight_paths(rng) -> Draft | None:
    spec = CATALOG["knight_paths"]
    m = rng.randint(*spec.param_ranges["major"])
    n = rng.randint(*spec.param_ranges["minor"])
    k = rng.randint(*spec.param_ranges["k"])
    start = CellRef(rng.randrange(m), rng.randrange(n))
    while True:
        target = CellRef(rng.randrange(m), rng.randrange(n))
        if target != start:
            break
    moves = oracles.MoveSet(tuple(oracles.Move(a, b, wrap=True) for a, b in oracles.KNIGHT_OFFSETS))
    grids = _wrapping_split_pair(m, n)
    truths = {
        topo: oracles.count_fixed_length_walks(grids[topo], moves, start, target, k)
        for topo in PAIR_LAYOUTS
    }
    if truths[Topology.CARTESIAN] < 1:
        return None
    puzzle = {"start": cell_to_list(start), "target": cell_to_list(target), "k": k}
    sides = {
        topo: SideDraft(
            grid=grids[topo],
            puzzle=puzzle,
            truth=truths[topo],
            cell_glyphs={start: "K", target: "T"},
        )
        for topo in PAIR_LAYOUTS
    }
    question = (
        "A knight jumps by (±1, ±2) or (±2, ±1) cells; jumps may continue "
        "around a wrapping boundary but never off a closed one. How many "
        f"distinct {k}-jump sequences take the knight from K to T? "
        "Answer with a number."
    )
    return Draft(question, sides, meta={"oracle": "count_fixed_length_walks"})


def _fraction_text(v: Fraction) -> str:
    return f"{v.numerator}/{v.denominator}" if v.denominator != 1 else str(v.numerator)


def build_random_walk(rng) -> Draft | None:
    spec = CATALOG["random_walk"]
    m = rng.randint(*spec.param_ranges["major"])
    n = rng.randint(*spec.param_ranges["minor"])
    cells = [CellRef(a, b) for a in range(m) for b in range(n)]
    a, b, c = rng.sample(cells, 3)
    grids = _wrapping_split_pair(m, n)
    truths = {
        topo: oracles.walk_pass_probability(grids[topo], a, b, c) for topo in PAIR_LAYOUTS
    }
    truth_texts = {_fraction_text(v) for v in truths.values()}
    pool = []
    seen = set(truth_texts)
    for _ in range(200):
        d = rng.randint(2, 12)
        f = Fraction(rng.randint(1, d - 1), d)
        t = _fraction_text(f)
        if t not in seen:
            seen.add(t)
            pool.append(t)
        if len(pool) >= 8:
            break
    if len(pool) < 4:
        return None
    shared_idx = rng.randrange(5)
    puzzle = {"a": cell_to_list(a), "b": cell_to_list(b), "c": cell_to_list(c)}
    sides = {}
    for topo in PAIR_LAYOUTS:
        texts, _ = _insert_truth(
            rng, rng.sample(pool, 4), _fraction_text(truths[topo]), index=shared_idx
        )
        sides[topo] = SideDraft(
            grid=grids[topo],
            puzzle=puzzle,
            truth=truths[topo],
            cell_glyphs={a: "A", b: "B", c: "C"},
            options=texts,
        )
    question = (
        "A token starts at A and each tick moves to one of the adjacent cells "
        "chosen uniformly at random. The walk stops upon reaching B. Which "
        "option equals the probability that the token visits C before stopping?"
    )
    return Draft(question, sides, truth_index=shared_idx, meta={"oracle": "walk_pass_probability"})


# ---------------------------------------------------------------------------
# Navigation


def _boundary_sides(cell: CellRef, spec: GridSpec):
    return [h for h in Heading if step(cell, h, spec) is None]


def build_maze(rng) -> Draft | None:
    spec = CATALOG["maze"]
    m = rng.randint(*spec.param_ranges["major"])
    n = rng.randint(*spec.param_ranges["minor"])
    n_entr = rng.randint(*spec.param_ranges["entrances"])
    grid = GridSpec(Topology.CARTESIAN, m, n)
    border = [c for c in grid.cells() if _boundary_sides(c, grid)]
    interior = [c for c in grid.cells() if not _boundary_sides(c, grid)]
    exit_cell = rng.choice(interior)
    entrance_cells = rng.sample(border, n_entr)
    true_entrance = entrance_cells[0]
    path = _random_simple_path(rng, grid, true_entrance, exit_cell, avoid=set(entrance_cells[1:]))
    if path is None:
        return None
    used = set(path)
    corridors = [path]
    for decoy in entrance_cells[1:]:
        if decoy in used:
            return None
        corridor = [decoy]
        used.add(decoy)
        for _ in range(rng.randint(0, 3)):
            frontier = [u for u in sorted(neighbors(corridor[-1], grid)) if u not in used]
            if not frontier:
                break
            nxt = rng.choice(frontier)
            corridor.append(nxt)
            used.add(nxt)
        corridors.append(corridor)

    open_edges = set()
    for corridor in corridors:
        for u, v in zip(corridor, corridor[1:]):
            open_edges.add(tuple(sorted((u, v))))
    walls = []
    for cell in grid.cells():
        for h in (Heading.MAJOR_PLUS, Heading.MINOR_PLUS):
            other = step(cell, h, grid)
            if other is not None and tuple(sorted((cell, other))) not in open_edges:
                walls.append((cell, other))

    labels = list(OPTION_LETTERS[:n_entr])
    rng.shuffle(labels)
    entrances = dict(zip(labels, entrance_cells))
    try:
        truth = oracles.solve_maze_entrance(grid, set(map(tuple, walls)), entrances, exit_cell)
    except oracles.AmbiguityError:
        return None
    if truth != labels[0]:
        return None

    entrance_open = {}
    for label, cell in entrances.items():
        entrance_open[cell] = _boundary_sides(cell, grid)[0]
    overlays = [CellMarker(exit_cell, "star")]
    for cell, other in walls:
        h = Heading.MAJOR_PLUS if other.major > cell.major else Heading.MINOR_PLUS
        overlays.append(EdgeWall(cell, h))
    for cell in grid.cells():
        for h in _boundary_sides(cell, grid):
            if entrance_open.get(cell) == h:
                continue
            overlays.append(EdgeWall(cell, h))
    for label in sorted(entrances):
        cell = entrances[label]
        overlays.append(EdgeLabel(cell, entrance_open[cell], label))

    sorted_labels = sorted(entrances)
    texts = [f"entrance {L}" for L in sorted_labels]
    idx = sorted_labels.index(truth)
    puzzle = {
        "walls": [[cell_to_list(u), cell_to_list(v)] for u, v in sorted(walls)],
        "entrances": {L: cell_to_list(entrances[L]) for L in sorted_labels},
        "exit": cell_to_list(exit_cell),
    }
    grids = _bounded_pair(m, n)
    sides = {
        topo: SideDraft(
            grid=g,
            puzzle=puzzle,
            truth=truth,
            overlays=list(overlays),
            options=list(texts),
        )
        for topo, g in grids.items()
    }
    question = (
        f"The maze has {n_entr} labeled openings on its boundary and one goal "
        "cell marked with a star. Exactly one opening is connected to the goal "
        "through the corridors. Which one?"
    )
    return Draft(question, sides, truth_index=idx, meta={"oracle": "solve_maze_entrance"})


def build_monotonic_path(rng) -> Draft | None:
    spec = CATALOG["monotonic_path"]
    m = rng.randint(*spec.param_ranges["major"])
    n = rng.randint(*spec.param_ranges["minor"])
    grid = GridSpec(Topology.CARTESIAN, m, n, Boundary.WRAPPING)
    exit_cols = rng.sample(range(n), 6)
    exit_cells = [CellRef(m - 1, c) for c in exit_cols]
    true_exit = rng.choice(exit_cells)
    start = CellRef(0, rng.randrange(n))
    avoid = {c for c in exit_cells if c != true_exit}
    if start in avoid:
        return None
    path = _random_simple_path(rng, grid, start, true_exit, avoid=avoid)
    if path is None:
        return None
    total = m * n
    low = list(range(1, total - len(path) + 1))
    rng.shuffle(low)
    values = {}
    it = iter(low)
    for cell in grid.cells():
        if cell not in set(path):
            values[cell] = next(it)
    for offset, cell in enumerate(path):
        values[cell] = total - len(path) + 1 + offset

    labels = list(OPTION_LETTERS)
    rng.shuffle(labels)
    exits = dict(zip(labels, exit_cells))
    try:
        truth = oracles.solve_monotonic_exit(grid, values, start, exits)
    except oracles.AmbiguityError:
        return None

    glyphs = {cell: str(v) for cell, v in values.items()}
    overlays = [CellMarker(start, "outline")]
    for label in sorted(exits):
        overlays.append(EdgeLabel(exits[label], Heading.MAJOR_PLUS, label))
    sorted_labels = sorted(exits)
    texts = [f"exit {L}" for L in sorted_labels]
    idx = sorted_labels.index(truth)
    puzzle = {
        "values": [[values[CellRef(a, b)] for b in range(n)] for a in range(m)],
        "start": cell_to_list(start),
        "exits": {L: cell_to_list(exits[L]) for L in sorted_labels},
    }
    grids = _wrapping_pair(m, n)
    sides = {
        topo: SideDraft(
            grid=g,
            puzzle=puzzle,
            truth=truth,
            cell_glyphs=dict(glyphs),
            overlays=list(overlays),
            options=list(texts),
        )
        for topo, g in grids.items()
    }
    question = (
        "Every room shows a number. Starting from the outlined room you may "
        "repeatedly move to an adjacent room with a strictly larger number. "
        "Exactly one labeled exit can be reached this way. Which one?"
    )
    return Draft(question, sides, truth_index=idx, meta={"oracle": "solve_monotonic_exit"})


def build_word_search(rng) -> Draft | None:
    spec = CATALOG["word_search"]
    m = rng.choice((3, 5))
    n = rng.choice((5, 7))
    wl = rng.randint(*spec.param_ranges["word_len"])
    alphabet = rng.sample(string.ascii_uppercase, 6)
    word = "".join(rng.choice(alphabet) for _ in range(wl))
    center = CellRef(m // 2, n // 2)
    cart = GridSpec(Topology.CARTESIAN, m, n)
    letters = {cell: rng.choice(alphabet) for cell in cart.cells()}
    letters[center] = word[0]
    cur = center
    for ch in word[1:]:
        cur = rng.choice(sorted(neighbors(cur, cart)))
        letters[cur] = ch
    if letters[center] != word[0]:
        return None

    puzzle = {
        "letters": [[letters[CellRef(a, b)] for b in range(n)] for a in range(m)],
        "word": word,
        "start": cell_to_list(center),
    }
    grids = dict(_bounded_pair(m, n))
    grids[Topology.HEXAGONAL] = GridSpec(Topology.HEXAGONAL, m, n)
    grids[Topology.OCTAGONAL] = GridSpec(Topology.OCTAGONAL, m, n)
    sides = {}
    for topo in WORD_SEARCH_LAYOUTS:
        truth = oracles.count_word_paths(grids[topo], letters, word, center)
        sides[topo] = SideDraft(
            grid=grids[topo],
            puzzle=puzzle,
            truth=truth,
            cell_fills={center: FILL_HILITE},
            cell_glyphs=dict(letters),
        )
    question = (
        f"Starting at the highlighted cell and stepping between adjacent cells "
        f"(revisiting cells is allowed), how many distinct walks spell the word "
        f"{word}? Answer with a number."
    )
    return Draft(question, sides, meta={"oracle": "count_word_paths"})


def build_wall_follower(rng) -> Draft | None:
    spec = CATALOG["wall_follower"]
    m = rng.randint(*spec.param_ranges["major"])
    n = rng.randint(*spec.param_ranges["minor"])
    p = spec.param_ranges["wall_prob"]
    grid = GridSpec(Topology.CARTESIAN, m, n)
    walls = []
    for cell in grid.cells():
        for h in (Heading.MAJOR_PLUS, Heading.MINOR_PLUS):
            other = step(cell, h, grid)
            if other is not None and rng.random() < p:
                walls.append((cell, other))
    start = CellRef(rng.randrange(m), rng.randrange(n))
    heading = rng.choice(list(Heading))
    outcome, cell = oracles.simulate_wall_follower(grid, set(map(tuple, walls)), start, heading)

    overlays = [ArrowMarker(start, heading)]
    for u, v in walls:
        h = Heading.MAJOR_PLUS if v.major > u.major else Heading.MINOR_PLUS
        overlays.append(EdgeWall(u, h))
    for c in grid.cells():
        for h in _boundary_sides(c, grid):
            overlays.append(EdgeWall(c, h))
    puzzle = {
        "walls": [[cell_to_list(u), cell_to_list(v)] for u, v in sorted(walls)],
        "start": cell_to_list(start),
        "heading": heading.value,
    }
    grids = _bounded_pair(m, n)
    sides = {
        topo: SideDraft(grid=g, puzzle=puzzle, truth=(cell.major, cell.minor), overlays=list(overlays))
        for topo, g in grids.items()
    }
    question = (
        "A robot starts at the arrow, facing along it. When the edge ahead is "
        "open it moves forward one cell; at a wall it turns 90 degrees "
        "clockwise in place. It halts after turning four times in a row, and "
        "it is stuck in a cycle as soon as a position-and-facing state repeats "
        "after a move. Give the coordinate where the robot halts or first "
        "repeats a state."
    )
    return Draft(
        question,
        sides,
        meta={"oracle": "simulate_wall_follower", "outcome": outcome},
    )


# ---------------------------------------------------------------------------
# Spatial


def _rotation_image(topo: Topology, n: int, cell: CellRef, kind: str) -> CellRef:
    if topo is Topology.CARTESIAN:
        if kind == "mirror":
            return CellRef(cell.major, n - 1 - cell.minor)
        out = cell
        for _ in range(int(kind[3:]) % 4):
            out = CellRef(out.minor, n - 1 - out.major)
        return out
    if kind == "mirror":
        return CellRef(cell.major, (n - 1 - cell.minor) % n)
    k = int(kind[3:]) % 4
    return CellRef(cell.major, (cell.minor + k * (n // 4)) % n)


def build_grid_rotation(rng) -> Draft | None:
    spec = CATALOG["grid_rotation"]
    n = rng.choice(spec.param_ranges["sizes"])
    q = rng.randint(1, 3)
    grid = GridSpec(Topology.CARTESIAN, n, n)
    cells = list(grid.cells())
    marked = rng.choice(cells)
    decor = rng.sample([c for c in cells if c != marked], rng.randint(3, 5))
    fills = {c: DECOR_COLORS[i % len(DECOR_COLORS)] for i, c in enumerate(decor)}

    kinds = ["rot1", "rot2", "rot3", "rot0", "mirror"]
    rng.shuffle(kinds)
    truth_kind = f"rot{q}"
    idx = kinds.index(truth_kind)
    images = {
        topo: [_rotation_image(topo, n, marked, kind) for kind in kinds]
        for topo in PAIR_LAYOUTS
    }
    for topo in PAIR_LAYOUTS:
        if len(set(images[topo])) != len(kinds):
            return None

    grids = _bounded_pair(n, n)
    sides = {}
    for topo in PAIR_LAYOUTS:
        coords = images[topo]
        texts = [f"({c.major}, {c.minor})" for c in coords]
        sides[topo] = SideDraft(
            grid=grids[topo],
            puzzle={
                "n": n,
                "marked": cell_to_list(marked),
                "quarter_turns": q,
                "candidates": [cell_to_list(c) for c in coords],
            },
            truth=(coords[idx].major, coords[idx].minor),
            cell_fills=dict(fills),
            overlays=[CellMarker(marked, "star")],
            options=texts,
        )
    question = (
        "The whole picture is rotated clockwise about its center by "
        f"{q * 90} degrees. Which option gives the coordinate of the starred "
        "cell after the rotation?"
    )
    return Draft(question, sides, truth_index=idx, meta={"oracle": "rotate_grid"})


def build_area_counting(rng) -> Draft | None:
    spec = CATALOG["area_counting"]
    m = rng.randint(*spec.param_ranges["major"])
    n = rng.randint(*spec.param_ranges["minor"])
    size = rng.randint(*spec.param_ranges["region"])
    grid = GridSpec(Topology.CARTESIAN, m, n)
    seed = CellRef(rng.randrange(m), rng.randrange(n))
    region = {seed}
    while len(region) < size:
        frontier = sorted(
            {u for c in region for u in neighbors(c, grid)} - region
        )
        if not frontier:
            return None
        region.add(rng.choice(frontier))

    forbidden = region | {u for c in region for u in neighbors(c, grid)}
    shaded = set(region)
    if rng.random() < 0.8:
        starts = [c for c in grid.cells() if c not in forbidden]
        if starts:
            other = {rng.choice(starts)}
            goal = rng.randint(3, 7)
            while len(other) < goal:
                frontier = sorted(
                    {
                        u
                        for c in other
                        for u in neighbors(c, grid)
                        if u not in forbidden and u not in other
                    }
                )
                if not frontier:
                    break
                other.add(rng.choice(frontier))
            shaded |= other

    truth = oracles.connected_region_size(grid, shaded, seed)
    if truth != len(region):
        return None
    puzzle = {"shaded": sorted(cell_to_list(c) for c in shaded), "seed": cell_to_list(seed)}
    grids = _bounded_pair(m, n)
    sides = {
        topo: SideDraft(
            grid=g,
            puzzle=puzzle,
            truth=truth,
            cell_fills={c: FILL_SHADED for c in sorted(shaded)},
            overlays=[CellMarker(seed, "star")],
        )
        for topo, g in grids.items()
    }
    question = (
        "Some cells are shaded. How many shaded cells belong to the connected "
        "shaded region that contains the starred cell? Answer with a number."
    )
    return Draft(question, sides, meta={"oracle": "connected_region_size"})


def build_pipe_lengths(rng) -> Draft | None:
    spec = CATALOG["pipe_lengths"]
    m = rng.randint(*spec.param_ranges["major"])
    n = rng.randint(*spec.param_ranges["minor"])
    lo, hi = spec.param_ranges["segment"]
    coloring = {}
    color_iter = iter(rng.sample(PIPE_COLORS, len(PIPE_COLORS)))
    sizes = []
    for a in range(m):
        rem = n
        while rem:
            size = rng.randint(lo, min(hi, rem))
            if rem - size == 1:
                size += 1
            color = next(color_iter)
            start = n - rem
            for b in range(start, start + size):
                coloring[CellRef(a, b)] = color
            sizes.append(size)
            rem -= size

    grids = _bounded_pair(m, n)
    truth = tuple(oracles.pipe_lengths(grids[Topology.CARTESIAN], coloring))
    puzzle = {"colors": [[coloring[CellRef(a, b)] for b in range(n)] for a in range(m)]}
    sides = {
        topo: SideDraft(grid=g, puzzle=puzzle, truth=truth, cell_fills=dict(coloring))
        for topo, g in grids.items()
    }
    question = (
        "The grid is partitioned into colored pipes; each pipe is an "
        "unbranched run of connected cells of one color. List the pipe "
        "lengths from longest to shortest, e.g. [5, 3, 2]."
    )
    return Draft(question, sides, meta={"oracle": "pipe_lengths"})


# ---------------------------------------------------------------------------
# Visual pattern


def build_letter_collection(rng) -> Draft | None:
    spec = CATALOG["letter_collection"]
    m = rng.randint(*spec.param_ranges["major"])
    n = rng.randint(*spec.param_ranges["minor"])
    wl = rng.randint(*spec.param_ranges["word_len"])
    grid = GridSpec(Topology.CARTESIAN, m, n, Boundary.WRAPPING)

    path = []
    j = 0
    for a in range(m):
        for t in range(n):
            cell = CellRef(a, (j + t) % n)
            last_in_ring = t == n - 1
            h = Heading.MAJOR_PLUS if last_in_ring and a < m - 1 else Heading.MINOR_PLUS
            path.append((cell, h))
        j = (j + n - 1) % n

    transition_targets = {
        step(cell, Heading.MINOR_MINUS, grid)
        for cell, h in path
        if h is Heading.MAJOR_PLUS
    }
    candidates = [
        (i, CellRef(cell.major + 1, cell.minor))
        for i, (cell, h) in enumerate(path)
        if h is Heading.MINOR_PLUS
        and cell.major + 1 < m
        and CellRef(cell.major + 1, cell.minor) not in transition_targets
    ]
    if len(candidates) < wl:
        return None
    word = "".join(rng.choice(string.ascii_uppercase) for _ in range(wl))
    chosen = sorted(rng.sample(range(len(candidates)), wl))
    letters = {candidates[i][1]: ch for i, ch in zip(chosen, word)}

    truth = oracles.collect_right_hand_letters(grid, path, letters)
    if truth != word:
        return None
    puzzle = {
        "path": [[cell_to_list(cell), h.value] for cell, h in path],
        "letters": sorted([cell_to_list(c), ch] for c, ch in letters.items()),
    }
    overlays = [
        PathTrace(tuple(cell for cell, _ in path)),
        ArrowMarker(path[0][0], path[0][1]),
    ]
    grids = _wrapping_pair(m, n)
    sides = {
        topo: SideDraft(
            grid=g,
            puzzle=puzzle,
            truth=truth,
            cell_glyphs=dict(letters),
            overlays=list(overlays),
        )
        for topo, g in grids.items()
    }
    question = (
        "Follow the traced route from the arrow in the direction shown. "
        "Whenever a letter sits in the cell immediately to your right-hand "
        "side, collect it. Which letter sequence do you collect?"
    )
    return Draft(question, sides, meta={"oracle": "collect_right_hand_letters"})


BUILDERS = {
    "sudoku": build_sudoku,
    "n_queens": build_n_queens,
    "min_flips": build_min_flips,
    "bouncing_point": build_bouncing_point,
    "lattice_paths": build_lattice_paths,
    "knight_paths": build_knight_paths,
    "random_walk": build_random_walk,
    "maze": build_maze,
    "monotonic_path": build_monotonic_path,
    "word_search": build_word_search,
    "wall_follower": build_wall_follower,
    "grid_rotation": build_grid_rotation,
    "area_counting": build_area_counting,
    "pipe_lengths": build_pipe_lengths,
    "letter_collection": build_letter_collection,
}
