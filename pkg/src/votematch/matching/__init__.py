"""Matching solvers: exhaustive oracles, blossom-based optimizers and the
randomized exact-matching test."""

from .algebraic import AlgebraicAnswer, RandomizedConfig, decide_exact_pm_randomized
from .blossom import max_weight_matching
from .bmatching import (decide_exact_perfect_b_matching, find_exact_perfect_b_matching,
                        max_cardinality_b_matching, max_weight_b_matching)
from .oracles import (brute_force_b_matching_profile, brute_force_color_profile,
                      brute_force_max_b_matching, brute_force_max_weight_matching,
                      brute_force_red_profile, exact_b_matching_exists, find_exact_b_matching,
                      permanent_red_profile)

__all__ = [
    "AlgebraicAnswer", "RandomizedConfig", "decide_exact_pm_randomized", "max_weight_matching",
    "decide_exact_perfect_b_matching", "find_exact_perfect_b_matching",
    "max_cardinality_b_matching", "max_weight_b_matching", "brute_force_b_matching_profile",
    "brute_force_color_profile", "brute_force_max_b_matching", "brute_force_max_weight_matching",
    "brute_force_red_profile", "exact_b_matching_exists", "find_exact_b_matching",
    "permanent_red_profile",
]
