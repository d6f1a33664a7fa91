"""Instance transformers between control problems and matching problems.

Every transformer is a deterministic function of its input (including the
order of voters and edges) and returns either a :class:`ReductionOutput` or,
when the construction itself settles the question, a :class:`Decided`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .base import Decided, Normalized, PreprocessOutcome, ReductionOutput, fresh_name
from .cycles import ecs_to_edge_disjoint, edge_disjoint_ecs_to_fl_ccav_exact, verify_cycle_certificate
from .first_last import (fl_ccav_exact_preprocess, fl_ccav_exact_to_epbbm, fl_ccav_exact_to_fl_ccrv,
                         fl_ccrv_exact_to_red_blue_bipartite)
from .gadgets import b_matching_to_matching, epm_to_restricted_epm, red_blue_to_red
from .sweeps import ccav_to_ccav_exact_sweep, ccrv_to_ccrv_exact_sweep
from .two_approval import (restricted_epm_to_twoapp_ccrv_exact, twoapp_ccav_exact_to_maxcard_b_matching,
                           twoapp_ccrv_exact_to_red_blue_b_matching, twoapp_ccrv_to_maxweight_b_matching)


@dataclass(frozen=True)
class RegistryEntry:
    name: str
    func: Callable
    source: str  # "control", "graph" or "digraph"
    target: str  # "control", "graph", "digraph", "controls" (a sweep) or "normalized"


REGISTRY: dict[str, RegistryEntry] = {
    entry.name: entry for entry in (
        RegistryEntry("ecs_to_edge_disjoint", ecs_to_edge_disjoint, "digraph", "digraph"),
        RegistryEntry("edge_disjoint_ecs_to_fl_ccav_exact", edge_disjoint_ecs_to_fl_ccav_exact,
                      "digraph", "control"),
        RegistryEntry("fl_ccav_exact_preprocess", fl_ccav_exact_preprocess, "control", "normalized"),
        RegistryEntry("fl_ccav_exact_to_epbbm", fl_ccav_exact_to_epbbm, "control", "graph"),
        RegistryEntry("b_matching_to_matching", b_matching_to_matching, "graph", "graph"),
        RegistryEntry("red_blue_to_red", red_blue_to_red, "graph", "graph"),
        RegistryEntry("fl_ccav_exact_to_fl_ccrv", fl_ccav_exact_to_fl_ccrv, "control", "control"),
        RegistryEntry("ccrv_to_ccrv_exact_sweep", ccrv_to_ccrv_exact_sweep, "control", "controls"),
        RegistryEntry("ccav_to_ccav_exact_sweep", ccav_to_ccav_exact_sweep, "control", "controls"),
        RegistryEntry("fl_ccrv_exact_to_red_blue_bipartite", fl_ccrv_exact_to_red_blue_bipartite,
                      "control", "graph"),
        RegistryEntry("twoapp_ccrv_exact_to_red_blue_b_matching",
                      twoapp_ccrv_exact_to_red_blue_b_matching, "control", "graph"),
        RegistryEntry("epm_to_restricted_epm", epm_to_restricted_epm, "graph", "graph"),
        RegistryEntry("restricted_epm_to_twoapp_ccrv_exact", restricted_epm_to_twoapp_ccrv_exact,
                      "graph", "control"),
        RegistryEntry("twoapp_ccav_exact_to_maxcard_b_matching",
                      twoapp_ccav_exact_to_maxcard_b_matching, "control", "graph"),
        RegistryEntry("twoapp_ccrv_to_maxweight_b_matching", twoapp_ccrv_to_maxweight_b_matching,
                      "control", "graph"),
    )
}

__all__ = [
    "Decided", "Normalized", "PreprocessOutcome", "ReductionOutput", "fresh_name", "REGISTRY",
    "RegistryEntry", "ecs_to_edge_disjoint", "edge_disjoint_ecs_to_fl_ccav_exact",
    "verify_cycle_certificate", "fl_ccav_exact_preprocess", "fl_ccav_exact_to_epbbm",
    "fl_ccav_exact_to_fl_ccrv", "fl_ccrv_exact_to_red_blue_bipartite", "b_matching_to_matching",
    "epm_to_restricted_epm", "red_blue_to_red", "ccav_to_ccav_exact_sweep",
    "ccrv_to_ccrv_exact_sweep", "restricted_epm_to_twoapp_ccrv_exact",
    "twoapp_ccav_exact_to_maxcard_b_matching", "twoapp_ccrv_exact_to_red_blue_b_matching",
    "twoapp_ccrv_to_maxweight_b_matching",
]
