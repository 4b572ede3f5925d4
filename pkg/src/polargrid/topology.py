"""Dual-topology grid kernel: cell indexing, adjacency, and single steps.

A grid is a major x minor lattice.  In Cartesian layouts major/minor are
rows/columns; in Polar layouts they are rings/sectors (ring 0 innermost,
sector 0 at 12 o'clock, increasing clockwise).  The two layouts share the
same index space, so the Cartesian->Polar mapping is the identity on
indices and adjacency under a bounded boundary is isomorphic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum


class Topology(str, Enum):
    CARTESIAN = "cartesian"
    POLAR = "polar"
    HEXAGONAL = "hexagonal"
    OCTAGONAL = "octagonal"


class Boundary(str, Enum):
    BOUNDED = "bounded"
    WRAPPING = "wrapping"


class Heading(Enum):
    """One of the four axis directions.

    MAJOR_PLUS is outward in Polar / down in Cartesian; MINOR_PLUS is
    clockwise in Polar / right in Cartesian.
    """

    MAJOR_PLUS = "major+"
    MAJOR_MINUS = "major-"
    MINOR_PLUS = "minor+"
    MINOR_MINUS = "minor-"


# Clockwise rotation order (right turn), matching the Polar clockwise
# sector convention: right -> down -> left -> up in Cartesian terms.
_CLOCKWISE = [
    Heading.MINOR_PLUS,
    Heading.MAJOR_PLUS,
    Heading.MINOR_MINUS,
    Heading.MAJOR_MINUS,
]

_HEADING_DELTA = {
    Heading.MAJOR_PLUS: (1, 0),
    Heading.MAJOR_MINUS: (-1, 0),
    Heading.MINOR_PLUS: (0, 1),
    Heading.MINOR_MINUS: (0, -1),
}


def rotate_clockwise(h: Heading, quarter_turns: int = 1) -> Heading:
    i = _CLOCKWISE.index(h)
    return _CLOCKWISE[(i + quarter_turns) % 4]


def heading_delta(h: Heading) -> tuple[int, int]:
    return _HEADING_DELTA[h]


@dataclass(frozen=True, order=True)
class CellRef:
    major: int
    minor: int

    def __post_init__(self):
        if self.major < 0 or self.minor < 0:
            raise ValueError(f"cell indices must be non-negative, got {self}")


@dataclass(frozen=True)
class GridSpec:
    topology: Topology
    major: int
    minor: int
    boundary: Boundary = Boundary.BOUNDED
    inner_radius_ratio: float = 0.25

    def __post_init__(self):
        if self.major < 1 or self.minor < 1:
            raise ValueError("grid dimensions must be >= 1")
        if self.topology is Topology.POLAR and self.minor < 3:
            raise ValueError("polar grids need at least 3 sectors")
        if self.topology is Topology.POLAR and not (0.0 < self.inner_radius_ratio < 1.0):
            raise ValueError("inner_radius_ratio must lie in (0, 1)")
        if self.topology is Topology.HEXAGONAL and self.boundary is Boundary.WRAPPING:
            raise ValueError("hexagonal grids are bounded only")

    def in_range(self, cell: CellRef) -> bool:
        return 0 <= cell.major < self.major and 0 <= cell.minor < self.minor

    def check(self, cell: CellRef) -> None:
        if not self.in_range(cell):
            raise IndexError(f"cell {cell} out of range for {self.major}x{self.minor} grid")

    def cells(self):
        """All cells in row-major (major, minor) order."""
        for a in range(self.major):
            for b in range(self.minor):
                yield CellRef(a, b)

    @property
    def cell_count(self) -> int:
        return self.major * self.minor


def map_cell(cell: CellRef, spec: GridSpec) -> CellRef:
    """Map a Cartesian cell to its Polar image (row->ring, column->sector).

    The mapping is the identity on indices and therefore a bijection;
    applying it with a Polar spec inverts it.
    """
    if spec.topology not in (Topology.CARTESIAN, Topology.POLAR):
        raise ValueError("map_cell is defined for Cartesian and Polar grids")
    spec.check(cell)
    return CellRef(cell.major, cell.minor)


_HEX_DELTAS = [(1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1)]
_OCT_DELTAS = [
    (1, 0), (-1, 0), (0, 1), (0, -1),
    (1, 1), (1, -1), (-1, 1), (-1, -1),
]


def _offset_neighbors(cell: CellRef, spec: GridSpec, deltas) -> set[CellRef]:
    out: set[CellRef] = set()
    wrap = spec.boundary is Boundary.WRAPPING
    for da, db in deltas:
        a = cell.major + da
        if not 0 <= a < spec.major:
            continue
        b = cell.minor + db
        if wrap:
            b %= spec.minor
        elif not 0 <= b < spec.minor:
            continue
        out.add(CellRef(a, b))
    out.discard(cell)  # degenerate wrap on tiny minor axes
    return out


def neighbors(cell: CellRef, spec: GridSpec) -> set[CellRef]:
    """Adjacent cells under the grid's topology and boundary condition.

    Cartesian/Polar use 4-adjacency; the minor axis wraps under a
    wrapping boundary while the major axis never wraps.  Hexagonal uses
    axial 6-adjacency; Octagonal cells of a truncated-square tiling use
    8-adjacency.
    """
    spec.check(cell)
    if spec.topology is Topology.HEXAGONAL:
        return _offset_neighbors(cell, spec, _HEX_DELTAS)
    if spec.topology is Topology.OCTAGONAL:
        return _offset_neighbors(cell, spec, _OCT_DELTAS)
    return _offset_neighbors(cell, spec, [(1, 0), (-1, 0), (0, 1), (0, -1)])


def step(cell: CellRef, h: Heading, spec: GridSpec) -> CellRef | None:
    """Move one cell along a heading; returns None when blocked.

    The minor axis wraps under a wrapping boundary; the major axis is
    always bounded.
    """
    spec.check(cell)
    da, db = heading_delta(h)
    a = cell.major + da
    if not 0 <= a < spec.major:
        return None
    b = cell.minor + db
    if not 0 <= b < spec.minor:
        if spec.boundary is Boundary.WRAPPING and spec.topology is not Topology.HEXAGONAL:
            b %= spec.minor
        else:
            return None
    return CellRef(a, b)
