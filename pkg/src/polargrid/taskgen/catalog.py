"""The 15-task catalog: categories, answer formats, alignment, boundaries."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from ..answers import AnswerType
from ..topology import Topology


class Alignment(str, Enum):
    FULLY_ALIGNED = "fully_aligned"
    PARTIALLY_ALIGNED = "partially_aligned"


class BoundaryPolicy(str, Enum):
    BOUNDED = "bounded"
    WRAPPING = "wrapping"
    TOPOLOGY_INVARIANT = "topology_invariant"


CATEGORY_ALGO = "Algorithmic Logic & Simulation"
CATEGORY_COMBO = "Combinatorics & Probability"
CATEGORY_NAV = "Navigation & Routing"
CATEGORY_SPATIAL = "Spatial Transformation & Geometry"
CATEGORY_VISUAL = "Visual Pattern Matching"

PAIR_LAYOUTS = (Topology.CARTESIAN, Topology.POLAR)
WORD_SEARCH_LAYOUTS = PAIR_LAYOUTS + (Topology.HEXAGONAL, Topology.OCTAGONAL)


@dataclass(frozen=True)
class TaskSpec:
    task_id: str
    name: str
    category: str
    subcategory: str
    answer_type: AnswerType
    alignment: Alignment
    boundary_policy: BoundaryPolicy
    n_options: int | None = None  # None: no options, or variable (maze)
    layouts: tuple = PAIR_LAYOUTS
    param_ranges: dict = field(default_factory=dict)


def _t(**kw) -> TaskSpec:
    return TaskSpec(**kw)


CATALOG: dict[str, TaskSpec] = {
    t.task_id: t
    for t in [
        _t(
            task_id="sudoku",
            name="Sudoku",
            category=CATEGORY_ALGO,
            subcategory="Constraint Satisfaction",
            answer_type=AnswerType.OPTION_LABEL,
            alignment=Alignment.FULLY_ALIGNED,
            boundary_policy=BoundaryPolicy.TOPOLOGY_INVARIANT,
            n_options=5,
            param_ranges={"sizes": (6, 9), "holes_6": (8, 12), "holes_9": (12, 18)},
        ),
        _t(
            task_id="n_queens",
            name="N-Queens",
            category=CATEGORY_ALGO,
            subcategory="Constraint Satisfaction",
            answer_type=AnswerType.OPTION_LABEL,
            alignment=Alignment.FULLY_ALIGNED,
            boundary_policy=BoundaryPolicy.BOUNDED,
            n_options=5,
            param_ranges={"n": (5, 8), "missing": (2, 3)},
        ),
        _t(
            task_id="min_flips",
            name="Minimum Flips",
            category=CATEGORY_ALGO,
            subcategory="Move Optimization",
            answer_type=AnswerType.OPTION_LABEL,
            alignment=Alignment.PARTIALLY_ALIGNED,
            boundary_policy=BoundaryPolicy.WRAPPING,
            n_options=5,
            param_ranges={"lengths": (8, 10, 12, 14), "strip_len": 3},
        ),
        _t(
            task_id="bouncing_point",
            name="Bouncing Point",
            category=CATEGORY_ALGO,
            subcategory="Motion & Trajectory Prediction",
            answer_type=AnswerType.COORDINATE,
            alignment=Alignment.PARTIALLY_ALIGNED,
            boundary_policy=BoundaryPolicy.WRAPPING,
            param_ranges={"major": (3, 6), "minor": (4, 10), "steps": (5, 20)},
        ),
        _t(
            task_id="lattice_paths",
            name="Lattice Paths",
            category=CATEGORY_COMBO,
            subcategory="Bounded Combinatorics",
            answer_type=AnswerType.DIGIT,
            alignment=Alignment.FULLY_ALIGNED,
            boundary_policy=BoundaryPolicy.BOUNDED,
            param_ranges={"major": (3, 5), "minor": (3, 5), "blocked": (0, 3)},
        ),
        _t(
            task_id="knight_paths",
            name="Knight Paths",
            category=CATEGORY_COMBO,
            subcategory="Topological Combinatorics",
            answer_type=AnswerType.DIGIT,
            alignment=Alignment.PARTIALLY_ALIGNED,
            boundary_policy=BoundaryPolicy.WRAPPING,
            param_ranges={"major": (4, 6), "minor": (5, 8), "k": (2, 4)},
        ),
        _t(
            task_id="random_walk",
            name="Random Walk",
            category=CATEGORY_COMBO,
            subcategory="Stochastic Processes",
            answer_type=AnswerType.OPTION_LABEL,
            alignment=Alignment.PARTIALLY_ALIGNED,
            boundary_policy=BoundaryPolicy.WRAPPING,
            n_options=5,
            param_ranges={"major": (3, 4), "minor": (4, 5)},
        ),
        _t(
            task_id="maze",
            name="Maze",
            category=CATEGORY_NAV,
            subcategory="Optimal Pathfinding",
            answer_type=AnswerType.OPTION_LABEL,
            alignment=Alignment.FULLY_ALIGNED,
            boundary_policy=BoundaryPolicy.BOUNDED,
            n_options=None,  # option count = entrance count, varies per instance
            param_ranges={"major": (4, 6), "minor": (5, 8), "entrances": (3, 6)},
        ),
        _t(
            task_id="monotonic_path",
            name="Monotonic Path",
            category=CATEGORY_NAV,
            subcategory="Constraint-Based Routing",
            answer_type=AnswerType.OPTION_LABEL,
            alignment=Alignment.FULLY_ALIGNED,
            boundary_policy=BoundaryPolicy.WRAPPING,
            n_options=6,
            param_ranges={"major": (3, 5), "minor": (6, 9)},
        ),
        _t(
            task_id="word_search",
            name="Word Search",
            category=CATEGORY_NAV,
            subcategory="Constraint-Based Routing",
            answer_type=AnswerType.DIGIT,
            alignment=Alignment.FULLY_ALIGNED,
            boundary_policy=BoundaryPolicy.TOPOLOGY_INVARIANT,
            layouts=WORD_SEARCH_LAYOUTS,
            param_ranges={"major": (3, 5), "minor": (5, 7), "word_len": (3, 4)},
        ),
        _t(
            task_id="wall_follower",
            name="Wall Follower",
            category=CATEGORY_NAV,
            subcategory="Rule-Based Navigation",
            answer_type=AnswerType.COORDINATE,
            alignment=Alignment.FULLY_ALIGNED,
            boundary_policy=BoundaryPolicy.BOUNDED,
            param_ranges={"major": (3, 6), "minor": (4, 8), "wall_prob": 0.3},
        ),
        _t(
            task_id="grid_rotation",
            name="Grid Rotation",
            category=CATEGORY_SPATIAL,
            subcategory="Rotations & Reflections",
            answer_type=AnswerType.OPTION_LABEL,
            alignment=Alignment.FULLY_ALIGNED,
            boundary_policy=BoundaryPolicy.TOPOLOGY_INVARIANT,
            n_options=5,
            param_ranges={"sizes": (4, 8)},
        ),
        _t(
            task_id="area_counting",
            name="Area Counting",
            category=CATEGORY_SPATIAL,
            subcategory="Geometric Measurement & Counting",
            answer_type=AnswerType.DIGIT,
            alignment=Alignment.FULLY_ALIGNED,
            boundary_policy=BoundaryPolicy.BOUNDED,
            param_ranges={"major": (4, 6), "minor": (5, 9), "region": (4, 9)},
        ),
        _t(
            task_id="pipe_lengths",
            name="Pipe Lengths",
            category=CATEGORY_SPATIAL,
            subcategory="Geometric Measurement & Counting",
            answer_type=AnswerType.INT_LIST,
            alignment=Alignment.FULLY_ALIGNED,
            boundary_policy=BoundaryPolicy.TOPOLOGY_INVARIANT,
            param_ranges={"major": (3, 5), "minor": (4, 7), "segment": (2, 5)},
        ),
        _t(
            task_id="letter_collection",
            name="Letter Collection",
            category=CATEGORY_VISUAL,
            subcategory="Visual Spotting & Search",
            answer_type=AnswerType.STRING,
            alignment=Alignment.FULLY_ALIGNED,
            boundary_policy=BoundaryPolicy.WRAPPING,
            param_ranges={"major": (3, 4), "minor": (6, 9), "word_len": (3, 6)},
        ),
    ]
}

PARTIALLY_ALIGNED_TASKS = frozenset(
    t.task_id for t in CATALOG.values() if t.alignment is Alignment.PARTIALLY_ALIGNED
)
