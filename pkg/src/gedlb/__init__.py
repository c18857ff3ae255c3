"""Guaranteed lower bounds on graph edit distance via invariant convex relaxations."""

from ._native import COMPILED
from .graphs import (EditSet, Graph, adjacency, apply_edits, exact_ged,
                     exact_ged_ext, random_edits)
from .relax import (BoundResult, Direction, lower_bound, lower_bound_ext,
                    sh_admm, success_check, symmetric_lower_bound)
from .sets import f_value, g_value, make_set

__version__ = "0.1.0"
__all__ = [
    "BoundResult",
    "COMPILED",
    "Direction",
    "EditSet",
    "Graph",
    "__version__",
    "adjacency",
    "apply_edits",
    "exact_ged",
    "exact_ged_ext",
    "f_value",
    "g_value",
    "lower_bound",
    "lower_bound_ext",
    "make_set",
    "random_edits",
    "sh_admm",
    "success_check",
    "symmetric_lower_bound",
]
