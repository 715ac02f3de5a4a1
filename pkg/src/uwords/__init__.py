"""Shortened universal words for d-dimensional permutations."""
from .builder import UWordMatrix, build_uword, eulerian_path, extend_matrix, generate
from .compress import (
    RemovalPlan,
    apply_removals,
    plan_removals,
    post_removal_diagnosis,
    removal_capacity,
)
from .counting import (
    admissible_lengths,
    best_eulerian_count,
    brute_force_eulerian_count,
    count_arborescences,
    cycle_count,
    max_removals,
    uword_lower_bound,
)
from .errors import *  # noqa: F401,F403
from .graph import (
    ClusterGraph,
    build_cluster_graph,
    check_eulerian,
    classify_type,
    parallel_cycles,
    signature_of,
    target_signature_of,
    to_dot,
    twin_classes,
)
from .perm import (
    adjoin_relative,
    enumerate_dperms,
    expand_window,
    order_isomorphic,
    reduce_matrix,
    reduce_word,
)
from .verify import oracle_cover_multiset, verify_ucycle, verify_uword

__version__ = "0.1.0"
