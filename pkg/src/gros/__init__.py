"""GROS: split a sample into groups, fit one estimator per group, keep the deepest.

The selection works in any (pseudo)metric space; ``gros.core`` holds the
depth functional and the selection rules, ``gros.metrics`` the distance
backends, and the remaining modules the applications built on them.
"""

from .core import (
    CandidatePool,
    GrosSelection,
    binomial_tail_bound,
    choose_k,
    depth,
    minimize_on_line,
    minimize_over_pool,
    partition_indices,
    select_index,
    select_on_line,
)

__all__ = [
    "CandidatePool",
    "GrosSelection",
    "binomial_tail_bound",
    "choose_k",
    "depth",
    "minimize_on_line",
    "minimize_over_pool",
    "partition_indices",
    "select_index",
    "select_on_line",
]
