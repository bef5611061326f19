"""Cube height, cube width, 2-dimension and irreducible inclusion representations of finite posets."""

__version__ = "0.1.0"

from .poset import Poset, parse_poset, format_poset, block_decomposition, component_decomposition  # noqa: E402
from .representation import Representation, canonical_representation, validate_representation  # noqa: E402
from .solvers import ParamReport, params, is_irreducible, reduce_to_irreducible  # noqa: E402
from .characterization import in_miir, in_mtd, in_mcw, in_nmiir, check_property  # noqa: E402

__all__ = [
    "ParamReport",
    "Poset",
    "Representation",
    "block_decomposition",
    "canonical_representation",
    "check_property",
    "component_decomposition",
    "format_poset",
    "in_mcw",
    "in_miir",
    "in_mtd",
    "in_nmiir",
    "is_irreducible",
    "params",
    "parse_poset",
    "reduce_to_irreducible",
    "validate_representation",
]
