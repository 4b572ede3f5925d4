from .catalog import (
    Alignment,
    BoundaryPolicy,
    CATALOG,
    PAIR_LAYOUTS,
    TaskSpec,
    WORD_SEARCH_LAYOUTS,
)
from .generators import BUILDERS
from .instance import Instance, InstancePair, Option, cell_to_list, list_to_cell
from .pipeline import (
    GENERATOR_VERSION,
    GenerationError,
    ValidationError,
    generate_dataset,
    generate_pair,
    recompute_answer,
    validate_instance,
)

__all__ = [
    "Alignment",
    "BoundaryPolicy",
    "BUILDERS",
    "CATALOG",
    "GENERATOR_VERSION",
    "GenerationError",
    "Instance",
    "InstancePair",
    "Option",
    "PAIR_LAYOUTS",
    "TaskSpec",
    "ValidationError",
    "WORD_SEARCH_LAYOUTS",
    "cell_to_list",
    "generate_dataset",
    "generate_pair",
    "list_to_cell",
    "recompute_answer",
    "validate_instance",
]
