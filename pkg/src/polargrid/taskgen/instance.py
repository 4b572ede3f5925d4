"""Instance and pair containers plus their JSON forms."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..answers import Answer
from ..render import SceneSpec
from ..topology import Boundary, CellRef, GridSpec, Topology


def cell_to_list(cell: CellRef) -> list:
    return [cell.major, cell.minor]


def list_to_cell(obj) -> CellRef:
    return CellRef(int(obj[0]), int(obj[1]))


@dataclass(frozen=True)
class Option:
    label: str
    text: str

    def to_json(self) -> dict:
        return {"label": self.label, "text": self.text}

    @staticmethod
    def from_json(obj: dict) -> "Option":
        return Option(obj["label"], obj["text"])


@dataclass
class Instance:
    """One rendered puzzle: a question, an image, and its ground truth.

    puzzle holds the logical content that the scene renders (boards,
    walls, letters, ...) so the truth can be recomputed from the instance
    alone, without re-running generation.
    """

    task_id: str
    topology: Topology
    boundary: Boundary
    seed: int
    grid: GridSpec
    scene: SceneSpec
    question: str
    ground_truth: Answer
    puzzle: dict
    options: list[Option] | None = None
    meta: dict = field(default_factory=dict)

    @property
    def instance_id(self) -> str:
        return f"{self.task_id}_{self.topology.value}_{self.seed:06d}"

    def to_json(self) -> dict:
        return {
            "instance_id": self.instance_id,
            "task_id": self.task_id,
            "topology": self.topology.value,
            "boundary": self.boundary.value,
            "seed": self.seed,
            "grid": {
                "major": self.grid.major,
                "minor": self.grid.minor,
                "inner_radius_ratio": self.grid.inner_radius_ratio,
            },
            "question": self.question,
            "options": [o.to_json() for o in self.options] if self.options else None,
            "ground_truth": self.ground_truth.to_json(),
            "puzzle": self.puzzle,
            "meta": self.meta,
        }


@dataclass
class InstancePair:
    """Matched Cartesian/Polar instances, plus any extra tiling variants."""

    task_id: str
    seed: int
    cartesian: Instance
    polar: Instance
    variants: list[Instance] = field(default_factory=list)

    @property
    def members(self) -> list[Instance]:
        return [self.cartesian, self.polar] + self.variants
