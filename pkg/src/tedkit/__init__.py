"""Ordered labeled tree edit distance: engines, step counting and checks."""
from .costs import CostModel, builtin_paper, builtin_unit, from_table
from .engines import (
    DistanceTables,
    distance,
    forest_distance,
    ted_batch,
    ted_demaine,
    ted_klein,
    ted_naive,
    ted_zhang_shasha,
)
from .enumeration import Scheme, Subforest, enumerate_scheme
from .mapping import EditMapping, recover_mapping, validate_mapping
from .oracle import brute_force_distance, string_edit_distance
from .strategy import StepReport, StrategyPlan, count_steps, plan, ted_combined
from .tree import ParseError, Tree, parse_tree, serialize_tree

__version__ = "0.1.0"

__all__ = [
    "CostModel",
    "DistanceTables",
    "EditMapping",
    "ParseError",
    "Scheme",
    "StepReport",
    "StrategyPlan",
    "Subforest",
    "Tree",
    "brute_force_distance",
    "builtin_paper",
    "builtin_unit",
    "count_steps",
    "distance",
    "enumerate_scheme",
    "forest_distance",
    "from_table",
    "parse_tree",
    "plan",
    "recover_mapping",
    "serialize_tree",
    "string_edit_distance",
    "ted_batch",
    "ted_combined",
    "ted_demaine",
    "ted_klein",
    "ted_naive",
    "ted_zhang_shasha",
    "validate_mapping",
]
