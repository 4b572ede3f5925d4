"""Puzzle oracle tests: frozen small examples plus cross-checks against
naive exhaustive enumerators and randomized properties."""

import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polargrid.oracles import (
    KNIGHT_OFFSETS,
    AmbiguityError,
    Move,
    MoveSet,
    OracleError,
    collect_right_hand_letters,
    connected_region_size,
    count_fixed_length_walks,
    count_monotone_paths,
    count_queen_completions,
    count_word_paths,
    min_flip_moves,
    pipe_lengths,
    rotate_grid,
    simulate_bouncing_point,
    simulate_wall_follower,
    solve_maze_entrance,
    solve_monotonic_exit,
    solve_sudoku_cell,
    walk_pass_probability,
)
from polargrid.topology import Boundary, CellRef, GridSpec, Heading, Topology, neighbors

C = CellRef


def cart(major, minor, boundary=Boundary.BOUNDED):
    return GridSpec(Topology.CARTESIAN, major, minor, boundary)


def polar(major, minor, boundary=Boundary.BOUNDED):
    return GridSpec(Topology.POLAR, major, minor, boundary)


RD = MoveSet.of((0, 1), (1, 0))
RDD = MoveSet.of((0, 1), (1, 0), (1, 1))


# ---------------------------------------------------------------------------
# Monotone paths


def test_lattice_paths_2x2():
    assert count_monotone_paths(cart(2, 2), RD, C(0, 0), C(1, 1)) == 2


def test_lattice_paths_blocked():
    got = count_monotone_paths(cart(2, 2), RD, C(0, 0), C(1, 1), blocked={C(0, 1)})
    assert got == 1


def test_delannoy_3x3():
    assert count_monotone_paths(cart(3, 3), RDD, C(0, 0), C(2, 2)) == 13


def test_paths_checkpoint_factorizes():
    spec = cart(4, 4)
    via = count_monotone_paths(spec, RD, C(0, 0), C(3, 3), checkpoint=C(1, 2))
    split = count_monotone_paths(spec, RD, C(0, 0), C(1, 2)) * count_monotone_paths(
        spec, RD, C(1, 2), C(3, 3)
    )
    assert via == split


def _naive_monotone(spec, moves, start, end, blocked=frozenset()):
    from polargrid.oracles import _apply_move

    def rec(cell):
        if cell == end:
            return 1
        total = 0
        for mv in moves.moves:
            nxt = _apply_move(cell, mv, spec)
            if nxt is not None and nxt not in blocked:
                total += rec(nxt)
        return total

    return 0 if start in blocked or end in blocked else rec(start)


def test_monotone_paths_match_naive_enumeration():
    rng = random.Random(7)
    for _ in range(60):
        m, n = rng.randint(2, 4), rng.randint(3, 4)
        spec = cart(m, n)
        blocked = set(rng.sample(list(spec.cells()), rng.randint(0, 2)))
        blocked.discard(C(0, 0))
        blocked.discard(C(m - 1, n - 1))
        moves = rng.choice([RD, RDD])
        want = _naive_monotone(spec, moves, C(0, 0), C(m - 1, n - 1), blocked)
        got = count_monotone_paths(spec, moves, C(0, 0), C(m - 1, n - 1), blocked)
        assert got == want


# ---------------------------------------------------------------------------
# Fixed-length walks


def test_walks_k0_at_target():
    assert count_fixed_length_walks(cart(3, 3), RD, C(1, 1), C(1, 1), 0) == 1


def test_knight_one_move():
    knight = MoveSet.of(*KNIGHT_OFFSETS)
    assert count_fixed_length_walks(cart(8, 8), knight, C(0, 0), C(1, 2), 1) == 1


def _naive_walks(spec, moves, start, target, k):
    from polargrid.oracles import _apply_move

    frontier = [start]
    for _ in range(k):
        nxt = []
        for cell in frontier:
            for mv in moves.moves:
                dest = _apply_move(cell, mv, spec)
                if dest is not None:
                    nxt.append(dest)
        frontier = nxt
    return frontier.count(target)


def test_walks_match_naive_enumeration():
    rng = random.Random(11)
    knight = MoveSet(tuple(Move(a, b, wrap=True) for a, b in KNIGHT_OFFSETS))
    for _ in range(40):
        spec = GridSpec(
            Topology.CARTESIAN,
            rng.randint(3, 4),
            rng.randint(3, 4),
            rng.choice([Boundary.BOUNDED, Boundary.WRAPPING]),
        )
        cells = list(spec.cells())
        start, target = rng.choice(cells), rng.choice(cells)
        k = rng.randint(0, 3)
        assert count_fixed_length_walks(spec, knight, start, target, k) == _naive_walks(
            spec, knight, start, target, k
        )


def test_wrapping_walks_dominate_bounded():
    knight = MoveSet(tuple(Move(a, b, wrap=True) for a, b in KNIGHT_OFFSETS))
    rng = random.Random(13)
    for _ in range(50):
        m, n = rng.randint(4, 6), rng.randint(5, 8)
        cells = [C(a, b) for a in range(m) for b in range(n)]
        start, target = rng.choice(cells), rng.choice(cells)
        k = rng.randint(2, 4)
        wrapped = count_fixed_length_walks(
            cart(m, n, Boundary.WRAPPING), knight, start, target, k
        )
        bounded = count_fixed_length_walks(cart(m, n), knight, start, target, k)
        assert wrapped >= bounded


# ---------------------------------------------------------------------------
# Random walk


def test_walk_path_graph_certain():
    spec = cart(1, 3)
    assert walk_pass_probability(spec, C(0, 0), C(0, 2), C(0, 1)) == 1


def test_walk_star_half():
    spec = cart(1, 3)
    assert walk_pass_probability(spec, C(0, 1), C(0, 0), C(0, 2)) == Fraction(1, 2)


def test_walk_rejects_degenerate():
    spec = cart(1, 3)
    with pytest.raises(OracleError):
        walk_pass_probability(spec, C(0, 0), C(0, 0), C(0, 1))


def test_walk_probability_in_unit_interval():
    rng = random.Random(3)
    for _ in range(60):
        spec = GridSpec(
            Topology.CARTESIAN,
            rng.randint(2, 3),
            rng.randint(3, 4),
            rng.choice([Boundary.BOUNDED, Boundary.WRAPPING]),
        )
        a, b, c = rng.sample(list(spec.cells()), 3)
        p = walk_pass_probability(spec, a, b, c)
        assert 0 <= p <= 1


# ---------------------------------------------------------------------------
# Minimum flips


def test_flips_already_alternating():
    target = [i % 2 for i in range(8)]
    assert min_flip_moves(list(target), 3, target, Boundary.BOUNDED) == 0


def test_flips_single_strip():
    target = [i % 2 for i in range(8)]
    cells = list(target)
    for i in range(2, 5):
        cells[i] ^= 1
    assert min_flip_moves(cells, 3, target, Boundary.BOUNDED) == 1


def test_flips_boundary_minima_differ_on_10_cells():
    cells = [0] * 10
    target = [i % 2 for i in range(10)]
    assert min_flip_moves(cells, 3, target, Boundary.WRAPPING) == 5
    assert min_flip_moves(cells, 3, target, Boundary.BOUNDED) is None


def _naive_flips(cells, strip_len, target, wrapping):
    n = len(cells)
    positions = range(n) if wrapping else range(n - strip_len + 1)
    start, goal = tuple(cells), tuple(target)
    frontier = {start}
    seen = {start}
    depth = 0
    while frontier:
        if goal in frontier:
            return depth
        nxt = set()
        for s in frontier:
            for p in positions:
                t = list(s)
                for j in range(strip_len):
                    t[(p + j) % n] ^= 1
                t = tuple(t)
                if t not in seen:
                    seen.add(t)
                    nxt.add(t)
        frontier = nxt
        depth += 1
    return None


def test_flips_match_naive_search():
    rng = random.Random(5)
    for _ in range(40):
        n = rng.choice([6, 8])
        cells = [rng.randint(0, 1) for _ in range(n)]
        phase = rng.randint(0, 1)
        target = [(i + phase) % 2 for i in range(n)]
        boundary = rng.choice([Boundary.BOUNDED, Boundary.WRAPPING])
        want = _naive_flips(cells, 3, target, boundary is Boundary.WRAPPING)
        assert min_flip_moves(cells, 3, target, boundary) == want


# ---------------------------------------------------------------------------
# Sudoku


def test_sudoku_forced_by_row():
    board = [[0] * 4 for _ in range(4)]
    board[0] = [1, 2, 0, 4]
    assert solve_sudoku_cell(board, C(0, 2)) == 3


def test_sudoku_solved_board_returns_printed_digit():
    board = [
        [1, 2, 3, 4],
        [3, 4, 1, 2],
        [2, 1, 4, 3],
        [4, 3, 2, 1],
    ]
    for r in range(4):
        for c in range(4):
            assert solve_sudoku_cell(board, C(r, c)) == board[r][c]


def test_sudoku_ambiguous_cell_rejected():
    board = [[0] * 4 for _ in range(4)]
    with pytest.raises(AmbiguityError):
        solve_sudoku_cell(board, C(0, 0))


# ---------------------------------------------------------------------------
# Queens


def test_queens_classic_counts():
    count, witness = count_queen_completions(4, {})
    assert count == 2 and witness is not None


def test_queens_fixed_placement():
    count, witness = count_queen_completions(4, {0: 1})
    assert count == 1
    assert witness[0] == 1


def test_queens_torus_has_no_solutions_n6():
    count, witness = count_queen_completions(6, {}, Boundary.WRAPPING)
    assert count == 0 and witness is None


def _naive_queens(n, boundary):
    import itertools

    total = 0
    for perm in itertools.permutations(range(n)):
        ok = True
        for r1, r2 in itertools.combinations(range(n), 2):
            c1, c2 = perm[r1], perm[r2]
            if boundary is Boundary.WRAPPING:
                if (c1 - r1) % n == (c2 - r2) % n or (c1 + r1) % n == (c2 + r2) % n:
                    ok = False
                    break
            elif abs(c1 - c2) == abs(r1 - r2):
                ok = False
                break
        total += ok
    return total


@pytest.mark.parametrize("n", [4, 5, 6, 7])
@pytest.mark.parametrize("boundary", [Boundary.BOUNDED, Boundary.WRAPPING])
def test_queens_match_naive_permutation_scan(n, boundary):
    assert count_queen_completions(n, {}, boundary)[0] == _naive_queens(n, boundary)


# ---------------------------------------------------------------------------
# Simulators


def test_wall_follower_sealed_cell_stops():
    outcome, cell = simulate_wall_follower(cart(1, 1), set(), C(0, 0), Heading.MINOR_PLUS)
    assert (outcome, cell) == ("stopped", C(0, 0))


def test_wall_follower_corridor_loops():
    outcome, _ = simulate_wall_follower(cart(1, 3), set(), C(0, 0), Heading.MINOR_PLUS)
    assert outcome == "loop"


def test_wall_follower_always_terminates():
    from polargrid.oracles import edge_key

    rng = random.Random(17)
    for _ in range(200):
        spec = GridSpec(
            Topology.CARTESIAN if rng.random() < 0.5 else Topology.POLAR,
            rng.randint(2, 4),
            rng.randint(3, 5),
        )
        walls = set()
        for cell in spec.cells():
            for h in Heading:
                if rng.random() < 0.3:
                    walls.add(edge_key(cell, h, spec))
        start = rng.choice(list(spec.cells()))
        outcome, cell = simulate_wall_follower(spec, walls, start, rng.choice(list(Heading)))
        assert outcome in ("stopped", "loop")
        assert spec.in_range(cell)


def test_bouncing_n0_is_start():
    assert simulate_bouncing_point(cart(3, 8), C(1, 5), (0, 1), 0) == C(1, 5)


def test_bouncing_minor_wraps():
    spec = cart(3, 8, Boundary.WRAPPING)
    assert simulate_bouncing_point(spec, C(1, 5), (0, 1), 7) == C(1, 4)


def test_bouncing_major_reflects():
    spec = polar(3, 4)
    assert simulate_bouncing_point(spec, C(1, 0), (1, 0), 3) == C(0, 0)


# ---------------------------------------------------------------------------
# Word paths / regions / pipes


def test_word_length_one():
    spec = cart(3, 3)
    letters = {c: "A" for c in spec.cells()}
    assert count_word_paths(spec, letters, "A", C(1, 1)) == 1


def test_word_paths_center_degree():
    spec = cart(3, 3)
    letters = {c: "A" for c in spec.cells()}
    assert count_word_paths(spec, letters, "AA", C(1, 1)) == 4


def test_word_paths_hex_flower_degree():
    spec = GridSpec(Topology.HEXAGONAL, 3, 3)
    center = C(1, 1)
    letters = {c: "A" for c in spec.cells()}
    degree = len(neighbors(center, spec))
    assert degree == 6
    assert count_word_paths(spec, letters, "AA", center) == 6


def test_region_sizes():
    spec = cart(3, 3)
    assert connected_region_size(spec, {C(0, 0)}, C(0, 0)) == 1
    block = {C(0, 0), C(0, 1), C(1, 0), C(1, 1)}
    assert connected_region_size(spec, block, C(0, 0)) == 4


def test_pipes_single_pipe_and_two_pipes():
    spec = cart(1, 12)
    assert pipe_lengths(spec, {c: "red" for c in spec.cells()}) == [12]
    spec = cart(1, 8)
    coloring = {C(0, i): ("a" if i < 5 else "b") for i in range(8)}
    assert pipe_lengths(spec, coloring) == [5, 3]


def test_pipes_reject_non_path():
    spec = cart(2, 2)
    with pytest.raises(OracleError):
        pipe_lengths(spec, {c: "x" for c in spec.cells()})


# ---------------------------------------------------------------------------
# Rotation


def test_rotation_corner_tracking():
    spec = cart(2, 2)
    assert rotate_grid(spec, {C(0, 0): "red"}, 1) == {C(0, 1): "red"}


def test_rotation_composition():
    rng = random.Random(23)
    for _ in range(300):
        topo = rng.choice([Topology.CARTESIAN, Topology.POLAR])
        n = rng.choice([4, 8])
        spec = GridSpec(topo, n, n) if topo is Topology.CARTESIAN else polar(rng.randint(2, 4), n)
        fills = {
            c: rng.choice("rgb") for c in spec.cells() if rng.random() < 0.4
        }
        once_twice = rotate_grid(spec, rotate_grid(spec, fills, 1), 1)
        assert once_twice == rotate_grid(spec, fills, 2)


def test_rotation_full_turn_identity():
    spec = cart(4, 4)
    fills = {C(1, 2): "red", C(3, 0): "blue"}
    assert rotate_grid(spec, rotate_grid(spec, fills, 2), 2) == fills


# ---------------------------------------------------------------------------
# Maze / monotonic / letters


def test_maze_single_open_corridor():
    from polargrid.oracles import edge_key

    spec = cart(1, 3)
    # wall between (0,1) and (0,2): only entrance A at (0,0) reaches (0,1)
    walls = {edge_key(C(0, 1), Heading.MINOR_PLUS, spec)}
    entrances = {"A": C(0, 0), "B": C(0, 2)}
    assert solve_maze_entrance(spec, walls, entrances, C(0, 1)) == "A"


def test_maze_label_permutation_invariance():
    from polargrid.oracles import edge_key

    spec = cart(1, 3)
    walls = {edge_key(C(0, 1), Heading.MINOR_PLUS, spec)}
    entrances = {"Q": C(0, 0), "Z": C(0, 2)}
    assert solve_maze_entrance(spec, walls, entrances, C(0, 1)) == "Q"


def test_monotonic_two_rooms():
    spec = cart(1, 2)
    values = {C(0, 0): 1, C(0, 1): 2}
    assert solve_monotonic_exit(spec, values, C(0, 0), {"A": C(0, 1)}) == "A"


def test_letters_empty_collection():
    spec = cart(3, 3)
    path = [(C(1, 0), Heading.MINOR_PLUS), (C(1, 1), Heading.MINOR_PLUS)]
    assert collect_right_hand_letters(spec, path, {}) == ""


def test_letters_straight_run_spells_word():
    spec = cart(3, 4)
    path = [(C(0, i), Heading.MINOR_PLUS) for i in range(3)]
    letters = {C(1, 0): "C", C(1, 1): "A", C(1, 2): "T"}
    assert collect_right_hand_letters(spec, path, letters) == "CAT"
