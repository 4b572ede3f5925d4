"""Independent ground-truth solvers: brute force, DP, BFS, and exact algebra.

Every task generator computes its answer through one of these oracles,
and validation re-runs the same oracle on the emitted puzzle content.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction

from .topology import (
    Boundary,
    CellRef,
    GridSpec,
    Heading,
    Topology,
    heading_delta,
    neighbors,
    rotate_clockwise,
    step,
)

MAX_FLIP_CELLS = 14


class OracleError(Exception):
    pass


class AmbiguityError(OracleError):
    """The instance does not pin down a unique answer."""


@dataclass(frozen=True)
class Move:
    dmajor: int
    dminor: int
    wrap: bool = False  # minor-axis offset may cross the angular seam


@dataclass(frozen=True)
class MoveSet:
    moves: tuple

    def __post_init__(self):
        if not self.moves:
            raise ValueError("move set must be non-empty")

    @staticmethod
    def of(*offsets, wrap: bool = False) -> "MoveSet":
        return MoveSet(tuple(Move(a, b, wrap) for a, b in offsets))


KNIGHT_OFFSETS = [
    (1, 2), (2, 1), (-1, 2), (-2, 1),
    (1, -2), (2, -1), (-1, -2), (-2, -1),
]


def _apply_move(cell: CellRef, mv: Move, spec: GridSpec) -> CellRef | None:
    a = cell.major + mv.dmajor
    if not 0 <= a < spec.major:
        return None
    b = cell.minor + mv.dminor
    if not 0 <= b < spec.minor:
        if mv.wrap and spec.boundary is Boundary.WRAPPING:
            b %= spec.minor
        else:
            return None
    return CellRef(a, b)


# ---------------------------------------------------------------------------
# Path counting


def count_monotone_paths(
    spec: GridSpec,
    moves: MoveSet,
    start: CellRef,
    end: CellRef,
    blocked: frozenset | set = frozenset(),
    checkpoint: CellRef | None = None,
) -> int:
    """Distinct move sequences start->end avoiding blocked cells.

    Requires an acyclic move set (every move strictly advances at least
    one shared axis).  With a checkpoint, only paths through it count;
    monotone moves visit the checkpoint at most once, so the count
    factors as count(start->cp) * count(cp->end).
    """
    spec.check(start)
    spec.check(end)
    if start in blocked or end in blocked:
        raise OracleError("start/end must be unblocked")
    mvs = moves.moves
    monotone = (
        all(m.dmajor >= 0 and m.dminor >= 0 and m.dmajor + m.dminor > 0 for m in mvs)
        or all(m.dmajor > 0 for m in mvs)
        or all(m.dminor > 0 for m in mvs)
    )
    if not monotone or any(m.wrap for m in mvs):
        raise OracleError("move set is not monotone; use count_fixed_length_walks")

    def count(src: CellRef, dst: CellRef) -> int:
        memo: dict[CellRef, int] = {}

        def rec(c: CellRef) -> int:
            if c == dst:
                return 1
            if c in memo:
                return memo[c]
            total = 0
            for mv in mvs:
                n = _apply_move(c, mv, spec)
                if n is not None and n not in blocked:
                    total += rec(n)
            memo[c] = total
            return total

        return rec(src)

    if checkpoint is None:
        return count(start, end)
    spec.check(checkpoint)
    if checkpoint in blocked:
        return 0
    return count(start, checkpoint) * count(checkpoint, end)


def count_fixed_length_walks(
    spec: GridSpec, moves: MoveSet, start: CellRef, target: CellRef, k: int
) -> int:
    """Number of length-k walks under the move set (DP over cell, steps)."""
    spec.check(start)
    spec.check(target)
    if k < 0:
        raise OracleError("k must be >= 0")
    ways = {start: 1}
    for _ in range(k):
        nxt: dict[CellRef, int] = {}
        for cell, n in ways.items():
            for mv in moves.moves:
                dest = _apply_move(cell, mv, spec)
                if dest is not None:
                    nxt[dest] = nxt.get(dest, 0) + n
        ways = nxt
    return ways.get(target, 0)


# ---------------------------------------------------------------------------
# Random walk hitting probability


def walk_pass_probability(spec: GridSpec, a: CellRef, b: CellRef, c: CellRef) -> Fraction:
    """Exact probability that a uniform neighbor walk from A, absorbed at
    B, visits C at least once.

    Equivalent to the hitting probability h(A) with h(C)=1, h(B)=0 and
    h(v) = mean of h over neighbors elsewhere; solved with rational
    Gaussian elimination.
    """
    for cell in (a, b, c):
        spec.check(cell)
    if a == b or b == c:
        raise OracleError("A, B, C must be distinct from B")
    if not _reachable(spec, a, b):
        raise OracleError("B is not reachable from A")
    if a == c:
        return Fraction(1)

    unknowns = [cell for cell in spec.cells() if cell not in (b, c)]
    index = {cell: i for i, cell in enumerate(unknowns)}
    n = len(unknowns)
    # rows: h(v) - (1/deg) * sum h(u) = (count of C-neighbors)/deg
    mat = [[Fraction(0)] * (n + 1) for _ in range(n)]
    for i, v in enumerate(unknowns):
        nbrs = sorted(neighbors(v, spec))
        deg = len(nbrs)
        mat[i][i] += Fraction(1)
        for u in nbrs:
            if u == c:
                mat[i][n] += Fraction(1, deg)
            elif u == b:
                pass
            else:
                mat[i][index[u]] -= Fraction(1, deg)
    _solve_inplace(mat, n)
    return mat[index[a]][n]


def _reachable(spec: GridSpec, src: CellRef, dst: CellRef) -> bool:
    seen = {src}
    q = deque([src])
    while q:
        v = q.popleft()
        if v == dst:
            return True
        for u in neighbors(v, spec):
            if u not in seen:
                seen.add(u)
                q.append(u)
    return False


def _solve_inplace(mat, n: int) -> None:
    for col in range(n):
        piv = next(r for r in range(col, n) if mat[r][col] != 0)
        mat[col], mat[piv] = mat[piv], mat[col]
        inv = 1 / mat[col][col]
        mat[col] = [x * inv for x in mat[col]]
        for r in range(n):
            if r != col and mat[r][col] != 0:
                f = mat[r][col]
                mat[r] = [x - f * y for x, y in zip(mat[r], mat[col])]


# ---------------------------------------------------------------------------
# Strip flips


def min_flip_moves(cells, strip_len: int, target, boundary: Boundary) -> int | None:
    """Minimum contiguous strip flips turning `cells` into `target`.

    BFS over the full 2^n state space; wrapping permits strips that
    cross the seam.  Returns None when the target is unreachable.
    """
    n = len(cells)
    if n < strip_len:
        raise OracleError("pattern shorter than strip length")
    if n > MAX_FLIP_CELLS:
        raise OracleError(f"flip state space capped at {MAX_FLIP_CELLS} cells")
    if len(target) != n:
        raise OracleError("target length mismatch")
    start = sum(bit << i for i, bit in enumerate(cells))
    goal = sum(bit << i for i, bit in enumerate(target))
    positions = range(n) if boundary is Boundary.WRAPPING else range(n - strip_len + 1)
    masks = []
    for p in positions:
        m = 0
        for j in range(strip_len):
            m |= 1 << ((p + j) % n)
        masks.append(m)
    dist = {start: 0}
    q = deque([start])
    while q:
        s = q.popleft()
        if s == goal:
            return dist[s]
        d = dist[s] + 1
        for m in masks:
            t = s ^ m
            if t not in dist:
                dist[t] = d
                q.append(t)
    return None


# ---------------------------------------------------------------------------
# Sudoku


def _box_dims(n: int) -> tuple[int, int]:
    return {4: (2, 2), 6: (2, 3), 9: (3, 3)}[n]


def _sudoku_candidates(board, r, c, n, bh, bw):
    used = set(board[r]) | {board[i][c] for i in range(n)}
    br, bc = (r // bh) * bh, (c // bw) * bw
    for i in range(br, br + bh):
        for j in range(bc, bc + bw):
            used.add(board[i][j])
    return [d for d in range(1, n + 1) if d not in used]


def solve_sudoku_cell(board, cell: CellRef) -> int:
    """Value of the highlighted cell, required to agree across all
    completions of the board (0 marks an empty cell)."""
    n = len(board)
    if n not in (4, 6, 9):
        raise OracleError("board size must be 4, 6, or 9")
    bh, bw = _box_dims(n)
    grid = [row[:] for row in board]
    empties = [(r, c) for r in range(n) for c in range(n) if grid[r][c] == 0]
    values: set[int] = set()

    def rec(idx: int) -> bool:
        """Returns True to abort early (second distinct value found)."""
        if idx == len(empties):
            values.add(grid[cell.major][cell.minor])
            return len(values) > 1
        # most-constrained-first keeps the search shallow
        best_k, best_cands = idx, None
        for k in range(idx, len(empties)):
            r, c = empties[k]
            cands = _sudoku_candidates(grid, r, c, n, bh, bw)
            if best_cands is None or len(cands) < len(best_cands):
                best_k, best_cands = k, cands
                if len(cands) <= 1:
                    break
        empties[idx], empties[best_k] = empties[best_k], empties[idx]
        r, c = empties[idx]
        for d in best_cands:
            grid[r][c] = d
            if rec(idx + 1):
                grid[r][c] = 0
                return True
            grid[r][c] = 0
        empties[idx], empties[best_k] = empties[best_k], empties[idx]
        return False

    rec(0)
    if not values:
        raise OracleError("board has no completion")
    if len(values) > 1:
        raise AmbiguityError(f"highlighted cell admits multiple values {sorted(values)}")
    return values.pop()


# ---------------------------------------------------------------------------
# N-Queens


def count_queen_completions(
    n: int, fixed, boundary: Boundary = Boundary.BOUNDED
) -> tuple[int, dict | None]:
    """Completions of a partial N-Queens placement (fixed: row -> column).

    Wrapping evaluates attacks on the torus, where diagonals are residue
    classes of c-r and c+r mod N.  Returns (count, one completion).
    """
    if n > 12:
        raise OracleError("board size capped at 12")
    fixed = dict(fixed)
    torus = boundary is Boundary.WRAPPING
    mod = n if torus else None

    def diag1(r, c):
        return (c - r) % mod if torus else c - r

    def diag2(r, c):
        return (c + r) % mod if torus else c + r

    cols, d1, d2 = set(), set(), set()
    for r, c in fixed.items():
        if c in cols or diag1(r, c) in d1 or diag2(r, c) in d2:
            raise OracleError("fixed queens attack each other")
        cols.add(c)
        d1.add(diag1(r, c))
        d2.add(diag2(r, c))

    placement: dict[int, int] = dict(fixed)
    witness: dict | None = None
    count = 0

    def rec(r: int):
        nonlocal count, witness
        if r == n:
            count += 1
            if witness is None:
                witness = dict(placement)
            return
        if r in fixed:
            rec(r + 1)
            return
        for c in range(n):
            if c in cols or diag1(r, c) in d1 or diag2(r, c) in d2:
                continue
            cols.add(c)
            d1.add(diag1(r, c))
            d2.add(diag2(r, c))
            placement[r] = c
            rec(r + 1)
            del placement[r]
            cols.discard(c)
            d1.discard(diag1(r, c))
            d2.discard(diag2(r, c))

    rec(0)
    return count, witness


# ---------------------------------------------------------------------------
# Simulations


def edge_key(cell: CellRef, h: Heading, spec: GridSpec):
    """Canonical key for the edge on side h of cell (shared with the
    neighbor's opposite side).  Boundary edges key on the cell itself."""
    other = step(cell, h, spec)
    if other is None:
        return (cell, h.value)
    a, b = sorted([cell, other])
    return (a, b)


def simulate_wall_follower(
    spec: GridSpec, walls, start: CellRef, heading: Heading
) -> tuple[str, CellRef]:
    """Right-turning robot: move forward while the front edge is open,
    rotate clockwise at walls.

    Returns ("stopped", cell) after four consecutive rotations without
    movement, or ("loop", cell) when a (cell, heading) state repeats
    after a move; the reported cell is the first repeated position.
    """
    spec.check(start)
    wallset = set(walls)

    def blocked(cell: CellRef, h: Heading) -> bool:
        if step(cell, h, spec) is None:
            return True
        return edge_key(cell, h, spec) in wallset

    cell, h = start, heading
    seen = {(cell, h)}
    rotations = 0
    budget = 4 * spec.cell_count * 4 + 8
    for _ in range(budget):
        if blocked(cell, h):
            h = rotate_clockwise(h)
            rotations += 1
            if rotations == 4:
                return ("stopped", cell)
            continue
        rotations = 0
        cell = step(cell, h, spec)
        if (cell, h) in seen:
            return ("loop", cell)
        seen.add((cell, h))
    raise OracleError("wall follower exceeded its step budget")


def simulate_bouncing_point(
    spec: GridSpec, start: CellRef, velocity: tuple[int, int], n: int
) -> CellRef:
    """Advance a point n steps; the major axis reflects at both rims,
    the minor axis wraps (wrapping) or reflects (bounded)."""
    spec.check(start)
    da, db = velocity
    if abs(da) > 1 or abs(db) > 1:
        raise OracleError("velocity components must be in -1..1")
    a, b = start.major, start.minor
    for _ in range(n):
        na = a + da
        if na < 0 or na >= spec.major:
            da = -da
            na = a + da
        a = max(0, min(spec.major - 1, na))
        nb = b + db
        if spec.boundary is Boundary.WRAPPING:
            nb %= spec.minor
        elif nb < 0 or nb >= spec.minor:
            db = -db
            nb = b + db
        b = max(0, min(spec.minor - 1, nb))
    return CellRef(a, b)


# ---------------------------------------------------------------------------
# Letters and regions


def count_word_paths(spec: GridSpec, letters, word: str, start: CellRef) -> int:
    """Walks over neighbors() spelling the word from start; revisits allowed."""
    spec.check(start)
    if not word:
        raise OracleError("word must be non-empty")
    if letters.get(start) != word[0]:
        raise OracleError("start cell letter does not match the word")
    ways = {start: 1}
    for ch in word[1:]:
        nxt: dict[CellRef, int] = {}
        for cell, n in ways.items():
            for u in neighbors(cell, spec):
                if letters.get(u) == ch:
                    nxt[u] = nxt.get(u, 0) + n
        ways = nxt
    return sum(ways.values())


def connected_region_size(spec: GridSpec, shaded, seed: CellRef) -> int:
    if seed not in shaded:
        raise OracleError("seed must be shaded")
    seen = {seed}
    q = deque([seed])
    while q:
        v = q.popleft()
        for u in neighbors(v, spec):
            if u in shaded and u not in seen:
                seen.add(u)
                q.append(u)
    return len(seen)


def pipe_lengths(spec: GridSpec, coloring) -> list[int]:
    """Sizes of the color classes, sorted descending.  Each class must be
    a connected simple path of cells."""
    classes: dict[str, list[CellRef]] = {}
    for cell in spec.cells():
        if cell not in coloring:
            raise OracleError(f"coloring must be total; missing {cell}")
        classes.setdefault(coloring[cell], []).append(cell)
    for color, cells in classes.items():
        cellset = set(cells)
        degs = [len([u for u in neighbors(c, spec) if u in cellset]) for c in cells]
        if len(cells) == 1:
            continue
        if sorted(degs) != [1, 1] + [2] * (len(cells) - 2):
            raise OracleError(f"color class {color!r} is not a simple path")
        if connected_region_size(spec, cellset, cells[0]) != len(cells):
            raise OracleError(f"color class {color!r} is disconnected")
    return sorted((len(v) for v in classes.values()), reverse=True)


def rotate_grid(spec: GridSpec, fills, quarter_turns: int):
    """Rotate a fill map clockwise by quarter turns.

    Cartesian requires a square grid; Polar shifts sector indices by
    quarter_turns * minor/4 and requires minor divisible by 4.
    """
    if not 1 <= quarter_turns <= 3:
        raise OracleError("quarter_turns must be 1..3")
    if spec.topology is Topology.CARTESIAN:
        if spec.major != spec.minor:
            raise OracleError("Cartesian rotation requires a square grid")
        out = dict(fills)
        for _ in range(quarter_turns):
            out = {CellRef(c.minor, spec.major - 1 - c.major): v for c, v in out.items()}
        return out
    if spec.topology is Topology.POLAR:
        if spec.minor % 4 != 0:
            raise OracleError("Polar rotation requires sector count divisible by 4")
        shift = quarter_turns * (spec.minor // 4)
        return {CellRef(c.major, (c.minor + shift) % spec.minor): v for c, v in fills.items()}
    raise OracleError("rotation defined for Cartesian/Polar grids")


# ---------------------------------------------------------------------------
# Mazes and routing


def open_edge_neighbors(spec: GridSpec, walls, cell: CellRef):
    wallset = set(walls)
    for h in Heading:
        other = step(cell, h, spec)
        if other is not None and edge_key(cell, h, spec) not in wallset:
            yield other


def solve_maze_entrance(spec: GridSpec, walls, entrances, exit_cell: CellRef) -> str:
    """Label of the unique entrance whose open-edge BFS reaches the exit."""
    if len(entrances) < 2:
        raise OracleError("need at least two labeled entrances")
    seen = {exit_cell}
    q = deque([exit_cell])
    while q:
        v = q.popleft()
        for u in open_edge_neighbors(spec, walls, v):
            if u not in seen:
                seen.add(u)
                q.append(u)
    hits = sorted(label for label, cell in entrances.items() if cell in seen)
    if len(hits) != 1:
        raise AmbiguityError(f"{len(hits)} entrances reach the exit: {hits}")
    return hits[0]


def solve_monotonic_exit(spec: GridSpec, room_values, start: CellRef, exits) -> str:
    """Label of the unique exit reachable by a strictly increasing walk."""
    reachable = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for u in neighbors(v, spec):
            if u not in reachable and room_values[u] > room_values[v]:
                reachable.add(u)
                stack.append(u)
    hits = sorted(label for label, cell in exits.items() if cell in reachable)
    if len(hits) != 1:
        raise AmbiguityError(f"{len(hits)} exits reachable by increasing walks: {hits}")
    return hits[0]


def collect_right_hand_letters(spec: GridSpec, path, letters) -> str:
    """Concatenate letters in the cell to the right of the heading at each
    path step; off-grid or letterless cells contribute nothing."""
    for (cell, h), (nxt, _) in zip(path, path[1:]):
        if step(cell, h, spec) != nxt:
            raise OracleError(f"path step {cell} -{h}-> {nxt} is not a unit move")
    out = []
    for cell, h in path:
        right = step(cell, rotate_clockwise(h), spec)
        if right is not None and right in letters:
            out.append(letters[right])
    return "".join(out)
