"""Python interface to the rigidmatch engines."""
from ._rigidmatch import (
    RigidmatchError,
    brute_force_objective,
    distance_matrix,
    generate_instance,
    is_chordal,
    match,
    objective_residual,
    run_benchmark,
    squared_cycle_edges,
    three_tree_edges,
)

__all__ = [
    "RigidmatchError",
    "brute_force_objective",
    "distance_matrix",
    "generate_instance",
    "is_chordal",
    "match",
    "objective_residual",
    "run_benchmark",
    "squared_cycle_edges",
    "three_tree_edges",
]
