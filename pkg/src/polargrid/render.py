"""Deterministic SVG rendering for Cartesian, Polar, and tiling layouts.

All renderers are pure functions of the scene: identical scenes produce
byte-identical documents.  Anti-collision constraints are enforced as
hard errors rather than silent shrinking.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .topology import Boundary, CellRef, GridSpec, Heading, Topology, heading_delta

# A glyph anchored with font_px must have at least this much room along
# the tightest axis of its cell (arc length for Polar sectors).
COLLISION_FACTOR = 1.0
# Minimum center-to-center distance between two glyph anchors, in ems.
ANCHOR_SPACING_FACTOR = 0.8
# Fraction of the glyph em-square a rendered letter occupies horizontally;
# used for bounding-box calibration checks.
GLYPH_WIDTH_RATIO = 0.7

CANVAS_DEFAULT = (480, 480)
MARGIN = 24.0


class RenderError(Exception):
    pass


@dataclass(frozen=True)
class EdgeWall:
    """A wall on one side of a cell (drawn as a thick edge segment)."""

    cell: CellRef
    side: Heading


@dataclass(frozen=True)
class CellMarker:
    cell: CellRef
    kind: str = "star"  # star | dot | outline
    color: str = "#d62728"


@dataclass(frozen=True)
class PathTrace:
    cells: tuple
    color: str = "#1f77b4"


@dataclass(frozen=True)
class EdgeLabel:
    """A text label just outside the grid, next to one side of a cell."""

    cell: CellRef
    side: Heading
    text: str


@dataclass(frozen=True)
class ArrowMarker:
    cell: CellRef
    heading: Heading
    color: str = "#2ca02c"


@dataclass
class SceneSpec:
    grid: GridSpec
    cell_fills: dict = field(default_factory=dict)
    cell_glyphs: dict = field(default_factory=dict)
    overlays: list = field(default_factory=list)
    canvas: tuple = CANVAS_DEFAULT
    font_px: float = 16.0

    def __post_init__(self):
        for cell in list(self.cell_fills) + list(self.cell_glyphs):
            self.grid.check(cell)


def _f(v: float) -> str:
    return f"{v:.2f}"


def _svg_open(canvas) -> list[str]:
    w, h = canvas
    return [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{w}" height="{h}" viewBox="0 0 {w} {h}">',
    ]


def _text(x: float, y: float, s: str, font_px: float, color: str = "#000000") -> str:
    esc = s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
    return (
        f'<text x="{_f(x)}" y="{_f(y)}" text-anchor="middle" '
        f'dominant-baseline="central" font-family="sans-serif" '
        f'font-size="{_f(font_px)}" fill="{color}">{esc}</text>'
    )


def _sorted_items(d: dict):
    return sorted(d.items(), key=lambda kv: (kv[0].major, kv[0].minor))


def min_glyph_span(scene: SceneSpec) -> tuple[float, CellRef | None]:
    """Tightest label-anchor span across glyph-bearing cells.

    For Cartesian grids this is the smaller cell dimension; for Polar it
    is the smaller of the centroid arc length and the radial depth.
    """
    if not scene.cell_glyphs:
        return math.inf, None
    geo = _geometry(scene)
    worst, worst_cell = math.inf, None
    for cell in scene.cell_glyphs:
        span = geo.glyph_span(cell)
        if span < worst:
            worst, worst_cell = span, cell
    return worst, worst_cell


def _check_collisions(scene: SceneSpec) -> None:
    span, cell = min_glyph_span(scene)
    if span < scene.font_px * COLLISION_FACTOR:
        hint = ""
        if scene.grid.topology is Topology.POLAR:
            hint = "; increase inner_radius_ratio or reduce font_px"
        raise RenderError(
            f"glyph collision at cell ({cell.major}, {cell.minor}): "
            f"font {scene.font_px}px exceeds available span {span:.2f}px{hint}"
        )


# ---------------------------------------------------------------------------
# Geometry backends


class _CartesianGeometry:
    def __init__(self, scene: SceneSpec):
        w, h = scene.canvas
        self.grid = scene.grid
        self.cw = (w - 2 * MARGIN) / self.grid.minor
        self.ch = (h - 2 * MARGIN) / self.grid.major
        self.x0 = MARGIN
        self.y0 = MARGIN

    def cell_rect(self, cell: CellRef):
        x = self.x0 + cell.minor * self.cw
        y = self.y0 + cell.major * self.ch
        return x, y, self.cw, self.ch

    def centroid(self, cell: CellRef):
        x, y, w, h = self.cell_rect(cell)
        return x + w / 2, y + h / 2

    def glyph_span(self, cell: CellRef) -> float:
        return min(self.cw, self.ch)

    def edge_segment(self, cell: CellRef, side: Heading):
        x, y, w, h = self.cell_rect(cell)
        if side is Heading.MAJOR_MINUS:
            return (x, y), (x + w, y)
        if side is Heading.MAJOR_PLUS:
            return (x, y + h), (x + w, y + h)
        if side is Heading.MINOR_MINUS:
            return (x, y), (x, y + h)
        return (x + w, y), (x + w, y + h)

    def edge_path(self, cell: CellRef, side: Heading) -> str:
        (x1, y1), (x2, y2) = self.edge_segment(cell, side)
        return f"M {_f(x1)} {_f(y1)} L {_f(x2)} {_f(y2)}"

    def label_anchor(self, cell: CellRef, side: Heading, offset: float):
        (x1, y1), (x2, y2) = self.edge_segment(cell, side)
        mx, my = (x1 + x2) / 2, (y1 + y2) / 2
        da, db = heading_delta(side)
        return mx + db * offset, my + da * offset


class _PolarGeometry:
    def __init__(self, scene: SceneSpec):
        w, h = scene.canvas
        self.grid = scene.grid
        self.cx, self.cy = w / 2, h / 2
        self.outer = 0.5 * min(w, h) - MARGIN
        self.r0 = self.grid.inner_radius_ratio * self.outer
        self.dr = (self.outer - self.r0) / self.grid.major
        self.dtheta = 360.0 / self.grid.minor

    def point(self, r: float, theta_deg: float):
        t = math.radians(theta_deg)
        return self.cx + r * math.cos(t), self.cy - r * math.sin(t)

    def cell_angles(self, cell: CellRef):
        """(start, end) math angles; sectors sweep clockwise from 12 o'clock."""
        t1 = 90.0 - cell.minor * self.dtheta
        return t1, t1 - self.dtheta

    def cell_radii(self, cell: CellRef):
        r1 = self.r0 + cell.major * self.dr
        return r1, r1 + self.dr

    def centroid(self, cell: CellRef):
        r1, r2 = self.cell_radii(cell)
        t1, t2 = self.cell_angles(cell)
        return self.point((r1 + r2) / 2, (t1 + t2) / 2)

    def glyph_span(self, cell: CellRef) -> float:
        r1, r2 = self.cell_radii(cell)
        rc = (r1 + r2) / 2
        arc = rc * math.radians(self.dtheta)
        return min(arc, self.dr)

    def sector_path(self, cell: CellRef) -> str:
        r1, r2 = self.cell_radii(cell)
        t1, t2 = self.cell_angles(cell)
        ax, ay = self.point(r2, t1)
        bx, by = self.point(r2, t2)
        cx2, cy2 = self.point(r1, t2)
        dx, dy = self.point(r1, t1)
        # decreasing math angle is a clockwise sweep on screen (sweep=1)
        return (
            f"M {_f(ax)} {_f(ay)} "
            f"A {_f(r2)} {_f(r2)} 0 0 1 {_f(bx)} {_f(by)} "
            f"L {_f(cx2)} {_f(cy2)} "
            f"A {_f(r1)} {_f(r1)} 0 0 0 {_f(dx)} {_f(dy)} Z"
        )

    def edge_path(self, cell: CellRef, side: Heading) -> str:
        r1, r2 = self.cell_radii(cell)
        t1, t2 = self.cell_angles(cell)
        if side is Heading.MINOR_MINUS:
            (x1, y1), (x2, y2) = self.point(r1, t1), self.point(r2, t1)
            return f"M {_f(x1)} {_f(y1)} L {_f(x2)} {_f(y2)}"
        if side is Heading.MINOR_PLUS:
            (x1, y1), (x2, y2) = self.point(r1, t2), self.point(r2, t2)
            return f"M {_f(x1)} {_f(y1)} L {_f(x2)} {_f(y2)}"
        r = r2 if side is Heading.MAJOR_PLUS else r1
        ax, ay = self.point(r, t1)
        bx, by = self.point(r, t2)
        return f"M {_f(ax)} {_f(ay)} A {_f(r)} {_f(r)} 0 0 1 {_f(bx)} {_f(by)}"

    def label_anchor(self, cell: CellRef, side: Heading, offset: float):
        r1, r2 = self.cell_radii(cell)
        t1, t2 = self.cell_angles(cell)
        tm = (t1 + t2) / 2
        if side is Heading.MAJOR_PLUS:
            return self.point(r2 + offset, tm)
        if side is Heading.MAJOR_MINUS:
            return self.point(max(r1 - offset, 0.0), tm)
        rm = (r1 + r2) / 2
        span = offset / max(rm, 1e-9) * 180.0 / math.pi
        if side is Heading.MINOR_MINUS:
            return self.point(rm, t1 + span)
        return self.point(rm, t2 - span)


def _geometry(scene: SceneSpec):
    if scene.grid.topology is Topology.CARTESIAN:
        return _CartesianGeometry(scene)
    if scene.grid.topology is Topology.POLAR:
        return _PolarGeometry(scene)
    raise RenderError(f"no cell geometry for topology {scene.grid.topology}")


# ---------------------------------------------------------------------------
# Overlay emission (shared between the two cell geometries)


def _emit_overlays(scene: SceneSpec, geo, parts: list[str]) -> None:
    for ov in scene.overlays:
        if isinstance(ov, EdgeWall):
            parts.append(
                f'<path d="{geo.edge_path(ov.cell, ov.side)}" fill="none" '
                f'stroke="#111111" stroke-width="4" stroke-linecap="round"/>'
            )
        elif isinstance(ov, PathTrace):
            pts = [geo.centroid(c) for c in ov.cells]
            d = "M " + " L ".join(f"{_f(x)} {_f(y)}" for x, y in pts)
            parts.append(
                f'<path d="{d}" fill="none" stroke="{ov.color}" '
                f'stroke-width="2.5" stroke-dasharray="5 3"/>'
            )
        elif isinstance(ov, CellMarker):
            x, y = geo.centroid(ov.cell)
            r = max(scene.font_px * 0.35, 4.0)
            if ov.kind == "dot":
                parts.append(f'<circle cx="{_f(x)}" cy="{_f(y)}" r="{_f(r)}" fill="{ov.color}"/>')
            elif ov.kind == "outline":
                parts.append(
                    f'<circle cx="{_f(x)}" cy="{_f(y)}" r="{_f(r * 1.6)}" '
                    f'fill="none" stroke="{ov.color}" stroke-width="2.5"/>'
                )
            else:  # star
                pts = []
                for k in range(10):
                    rr = r * 1.6 if k % 2 == 0 else r * 0.7
                    t = math.pi / 2 + k * math.pi / 5
                    pts.append(f"{_f(x + rr * math.cos(t))},{_f(y - rr * math.sin(t))}")
                parts.append(f'<polygon points="{" ".join(pts)}" fill="{ov.color}"/>')
        elif isinstance(ov, EdgeLabel):
            x, y = geo.label_anchor(ov.cell, ov.side, scene.font_px * 0.9)
            parts.append(_text(x, y, ov.text, scene.font_px, "#b22222"))
        elif isinstance(ov, ArrowMarker):
            x, y = geo.centroid(ov.cell)
            # direction toward the heading-side edge midpoint
            (ex, ey) = geo.label_anchor(ov.cell, ov.heading, 0.01)
            dx, dy = ex - x, ey - y
            n = math.hypot(dx, dy) or 1.0
            dx, dy = dx / n, dy / n
            L = scene.font_px * 0.9
            tx, ty = x + dx * L, y + dy * L
            parts.append(
                f'<path d="M {_f(x)} {_f(y)} L {_f(tx)} {_f(ty)}" stroke="{ov.color}" '
                f'stroke-width="3" fill="none"/>'
            )
            hx, hy = -dy, dx
            parts.append(
                f'<polygon points="{_f(tx + dx * 6)},{_f(ty + dy * 6)} '
                f'{_f(tx + hx * 4)},{_f(ty + hy * 4)} '
                f'{_f(tx - hx * 4)},{_f(ty - hy * 4)}" fill="{ov.color}"/>'
            )
        else:
            raise RenderError(f"unknown overlay primitive {ov!r}")


def _emit_glyphs(scene: SceneSpec, geo, parts: list[str]) -> None:
    for cell, glyph in _sorted_items(scene.cell_glyphs):
        x, y = geo.centroid(cell)
        parts.append(_text(x, y, str(glyph), scene.font_px))


# ---------------------------------------------------------------------------
# Renderers


def render_cartesian(scene: SceneSpec) -> bytes:
    if scene.grid.topology is not Topology.CARTESIAN:
        raise RenderError("render_cartesian requires a Cartesian grid")
    _check_collisions(scene)
    geo = _CartesianGeometry(scene)
    _check_anchor_spacing(scene, geo)
    parts = _svg_open(scene.canvas)
    for cell in scene.grid.cells():
        x, y, w, h = geo.cell_rect(cell)
        fill = scene.cell_fills.get(cell, "#ffffff")
        parts.append(
            f'<rect x="{_f(x)}" y="{_f(y)}" width="{_f(w)}" height="{_f(h)}" '
            f'fill="{fill}" stroke="#555555" stroke-width="1"/>'
        )
    _emit_overlays(scene, geo, parts)
    _emit_glyphs(scene, geo, parts)
    parts.append("</svg>")
    return "\n".join(parts).encode("utf-8")


def render_polar(scene: SceneSpec) -> bytes:
    if scene.grid.topology is not Topology.POLAR:
        raise RenderError("render_polar requires a Polar grid")
    _check_collisions(scene)
    geo = _PolarGeometry(scene)
    _check_anchor_spacing(scene, geo)
    parts = _svg_open(scene.canvas)
    for cell in scene.grid.cells():
        fill = scene.cell_fills.get(cell, "#ffffff")
        parts.append(
            f'<path d="{geo.sector_path(cell)}" fill="{fill}" '
            f'stroke="#555555" stroke-width="1"/>'
        )
    _emit_overlays(scene, geo, parts)
    _emit_glyphs(scene, geo, parts)
    parts.append("</svg>")
    return "\n".join(parts).encode("utf-8")


class _HexGeometry:
    """Flat-top hexagons on axial coordinates (major=r, minor=q)."""

    def __init__(self, scene: SceneSpec):
        g = scene.grid
        w, h = scene.canvas
        # raw axial centers in units of hex size 1
        raw = {}
        for cell in g.cells():
            q, r = cell.minor, cell.major
            raw[cell] = (1.5 * q, math.sqrt(3) * (r + q / 2))
        xs = [p[0] for p in raw.values()]
        ys = [p[1] for p in raw.values()]
        span_x = (max(xs) - min(xs)) + 2
        span_y = (max(ys) - min(ys)) + math.sqrt(3)
        self.size = min((w - 2 * MARGIN) / span_x, (h - 2 * MARGIN) / span_y)
        ox = w / 2 - self.size * (max(xs) + min(xs)) / 2
        oy = h / 2 - self.size * (max(ys) + min(ys)) / 2
        self.centers = {c: (ox + self.size * x, oy + self.size * y) for c, (x, y) in raw.items()}

    def centroid(self, cell: CellRef):
        return self.centers[cell]

    def glyph_span(self, cell: CellRef) -> float:
        return math.sqrt(3) * self.size  # across flats

    def hex_points(self, cell: CellRef) -> str:
        cx, cy = self.centers[cell]
        pts = []
        for k in range(6):
            t = math.radians(60 * k)
            pts.append(f"{_f(cx + self.size * math.cos(t))},{_f(cy + self.size * math.sin(t))}")
        return " ".join(pts)


class _OctGeometry:
    """Truncated-square tiling: octagon cells on a square lattice."""

    def __init__(self, scene: SceneSpec):
        g = scene.grid
        w, h = scene.canvas
        self.pitch = min((w - 2 * MARGIN) / g.minor, (h - 2 * MARGIN) / g.major)
        self.side = self.pitch / (1 + math.sqrt(2))
        ox = w / 2 - self.pitch * g.minor / 2
        oy = h / 2 - self.pitch * g.major / 2
        self.origin = (ox + self.pitch / 2, oy + self.pitch / 2)

    def centroid(self, cell: CellRef):
        ox, oy = self.origin
        return ox + cell.minor * self.pitch, oy + cell.major * self.pitch

    def glyph_span(self, cell: CellRef) -> float:
        return self.pitch * 0.9

    def oct_points(self, cell: CellRef) -> str:
        cx, cy = self.centroid(cell)
        circ = self.side / (2 * math.sin(math.pi / 8))
        pts = []
        for k in range(8):
            t = math.radians(22.5 + 45 * k)
            pts.append(f"{_f(cx + circ * math.cos(t))},{_f(cy + circ * math.sin(t))}")
        return " ".join(pts)

    def square_points(self, a: int, b: int) -> str:
        """Filler square between octagons (a, b)..(a+1, b+1), rotated 45 deg."""
        ox, oy = self.origin
        cx = ox + (b + 0.5) * self.pitch
        cy = oy + (a + 0.5) * self.pitch
        r = self.side / math.sqrt(2)
        pts = []
        for k in range(4):
            t = math.radians(90 * k)
            pts.append(f"{_f(cx + r * math.cos(t))},{_f(cy + r * math.sin(t))}")
        return " ".join(pts)


def render_tiling(scene: SceneSpec) -> bytes:
    """Render Hexagonal or Octagonal word-search layouts."""
    g = scene.grid
    if g.topology is Topology.HEXAGONAL:
        geo = _HexGeometry(scene)
        _check_collisions_with(scene, geo)
        parts = _svg_open(scene.canvas)
        for cell in g.cells():
            fill = scene.cell_fills.get(cell, "#ffffff")
            parts.append(
                f'<polygon points="{geo.hex_points(cell)}" fill="{fill}" '
                f'stroke="#555555" stroke-width="1"/>'
            )
        _emit_glyphs(scene, geo, parts)
        parts.append("</svg>")
        return "\n".join(parts).encode("utf-8")
    if g.topology is Topology.OCTAGONAL:
        geo = _OctGeometry(scene)
        _check_collisions_with(scene, geo)
        parts = _svg_open(scene.canvas)
        for cell in g.cells():
            fill = scene.cell_fills.get(cell, "#ffffff")
            parts.append(
                f'<polygon points="{geo.oct_points(cell)}" fill="{fill}" '
                f'stroke="#555555" stroke-width="1"/>'
            )
        for a in range(g.major - 1):
            for b in range(g.minor - 1):
                parts.append(
                    f'<polygon points="{geo.square_points(a, b)}" fill="#eeeeee" '
                    f'stroke="#555555" stroke-width="1"/>'
                )
        _emit_glyphs(scene, geo, parts)
        parts.append("</svg>")
        return "\n".join(parts).encode("utf-8")
    raise RenderError(f"render_tiling supports hexagonal/octagonal only, got {g.topology}")


def _check_collisions_with(scene: SceneSpec, geo) -> None:
    for cell in scene.cell_glyphs:
        span = geo.glyph_span(cell)
        if span < scene.font_px * COLLISION_FACTOR:
            raise RenderError(
                f"glyph collision at cell ({cell.major}, {cell.minor}): "
                f"font {scene.font_px}px exceeds available span {span:.2f}px"
            )
    _check_anchor_spacing(scene, geo)


def _check_anchor_spacing(scene: SceneSpec, geo) -> None:
    """No two glyph anchors may sit closer than ANCHOR_SPACING_FACTOR
    times the font size, or adjacent labels would visually overlap."""
    limit = scene.font_px * ANCHOR_SPACING_FACTOR
    anchors = [(cell, geo.centroid(cell)) for cell, _ in _sorted_items(scene.cell_glyphs)]
    for i, (ca, (ax, ay)) in enumerate(anchors):
        for cb, (bx, by) in anchors[i + 1 :]:
            if math.hypot(ax - bx, ay - by) < limit:
                raise RenderError(
                    f"glyph anchors too close: ({ca.major}, {ca.minor}) and "
                    f"({cb.major}, {cb.minor}) are within {limit:.2f}px"
                )


def render_scene(scene: SceneSpec) -> bytes:
    t = scene.grid.topology
    if t is Topology.CARTESIAN:
        return render_cartesian(scene)
    if t is Topology.POLAR:
        return render_polar(scene)
    return render_tiling(scene)


def max_font_px(grid: GridSpec, glyph_cells, canvas=CANVAS_DEFAULT, base: float = 18.0) -> float:
    """Largest legal glyph font for a scene, capped at base.

    Used for cross-layout calibration: computing this for both members
    of a pair and taking the minimum keeps glyph areas matched.
    """
    scene = SceneSpec(grid=grid, cell_glyphs={c: "X" for c in glyph_cells}, canvas=canvas)
    if grid.topology in (Topology.CARTESIAN, Topology.POLAR):
        span, _ = min_glyph_span(scene)
    else:
        geo = _HexGeometry(scene) if grid.topology is Topology.HEXAGONAL else _OctGeometry(scene)
        span = min((geo.glyph_span(c) for c in glyph_cells), default=math.inf)
    return min(base, span * 0.92)
