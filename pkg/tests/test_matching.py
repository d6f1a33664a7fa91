from __future__ import annotations

import random
from dataclasses import replace

import pytest

from votematch.errors import CapExceeded, ContractError, StructureError
from votematch.graph import (BMatchingInstance, Color, GraphBuilder, Mode, unit_capacities,
                             verify_certificate)
from votematch.harness.generators import random_b_matching
from votematch.matching import (RandomizedConfig, brute_force_b_matching_profile,
                                brute_force_color_profile, brute_force_max_b_matching,
                                brute_force_max_weight_matching, brute_force_red_profile,
                                decide_exact_perfect_b_matching, decide_exact_pm_randomized,
                                exact_b_matching_exists, find_exact_b_matching,
                                find_exact_perfect_b_matching, max_cardinality_b_matching,
                                max_weight_b_matching, max_weight_matching, permanent_red_profile)
from votematch.matching.algebraic import MERSENNE_61


def k4(red=((0, 1), (2, 3))):
    """Complete graph on four vertices; ``red`` lists red index pairs."""
    g = GraphBuilder()
    names = "abcd"
    for v in names:
        g.vertex(v)
    for i in range(4):
        for j in range(i + 1, 4):
            g.edge(names[i], names[j], Color.RED if (i, j) in red else Color.NONE, i + j)
    return g.build()


def test_k4_red_profile():
    # three perfect matchings: {ab,cd} has two reds, the other two have none
    assert brute_force_red_profile(k4()) == {2: 1, 0: 2}


def test_parallel_edges_count_separately():
    g = GraphBuilder()
    g.vertex("a")
    g.vertex("b")
    g.edge("a", "b", Color.RED)
    g.edge("a", "b")
    assert brute_force_color_profile(g.build()) == {(1, 0): 1, (0, 0): 1}


def test_odd_graph_has_no_perfect_matching():
    g = GraphBuilder()
    for v in "abc":
        g.vertex(v)
    g.edge("a", "b")
    assert brute_force_red_profile(g.build()) == {}


def test_oracle_cap():
    g = GraphBuilder()
    for i in range(18):
        g.vertex(f"v{i}")
    with pytest.raises(CapExceeded):
        brute_force_red_profile(g.build())


def test_permanent_needs_bipartition():
    with pytest.raises(StructureError):
        permanent_red_profile(k4())


def test_permanent_matches_enumeration():
    rng = random.Random(7)
    for _ in range(60):
        inst = random_b_matching(rng, max_vertices=8, max_edges=12, bipartite=True, blue=False)
        assert permanent_red_profile(inst.graph) == brute_force_red_profile(inst.graph)


def test_max_weight_matching_k4():
    cert = max_weight_matching(k4())
    # best is ad (3) + bc (3)
    assert sum(k4().edges[i].weight for i in cert.edges) == brute_force_max_weight_matching(k4()) == 6


def test_max_weight_rejects_digraph():
    g = GraphBuilder(directed=True)
    g.vertex("a")
    with pytest.raises(StructureError):
        max_weight_matching(g.build())


def test_max_b_matchings_against_enumeration():
    rng = random.Random(11)
    for _ in range(80):
        inst = random_b_matching(rng, max_vertices=6, max_edges=9, weights=True)
        card = max_cardinality_b_matching(inst)
        weight = max_weight_b_matching(inst)
        assert verify_certificate(inst, card, Mode.MAX_CARDINALITY)
        assert verify_certificate(inst, weight, Mode.MAX_WEIGHT)
        assert len(card.edges) == brute_force_max_b_matching(inst)
        total = sum(inst.graph.edges[i].weight for i in weight.edges)
        assert total == brute_force_max_b_matching(inst, weighted=True)


def test_find_exact_b_matching_agrees_with_profile():
    rng = random.Random(3)
    for _ in range(80):
        inst = random_b_matching(rng)
        cert = find_exact_b_matching(inst)
        assert (cert is not None) == exact_b_matching_exists(inst)
        if cert is not None:
            assert verify_certificate(inst, cert)


def test_randomized_decider_on_k4():
    g = k4()
    for k, expected in ((0, True), (1, False), (2, True)):
        assert bool(decide_exact_pm_randomized(g, k)) is expected


def test_randomized_no_reports_error_bound():
    answer = decide_exact_pm_randomized(k4(), 1)
    assert answer.trials_run == 20
    assert answer.error_log10 < -300


def test_randomized_deterministic_no_paths():
    assert decide_exact_pm_randomized(k4(), 3).trials_run == 0
    g = GraphBuilder()
    for v in "abc":
        g.vertex(v)
    assert decide_exact_pm_randomized(g.build(), 0).reason == "odd number of vertices"


def test_randomized_with_blue_variable():
    g = GraphBuilder()
    for v in "abcd":
        g.vertex(v)
    g.edge("a", "b", Color.RED)
    g.edge("c", "d", Color.BLUE)
    g.edge("a", "c")
    g.edge("b", "d")
    graph = g.build()
    assert decide_exact_pm_randomized(graph, 1, ell=1)
    assert not decide_exact_pm_randomized(graph, 1, ell=0)
    assert decide_exact_pm_randomized(graph, 0, ell=0)


def test_config_validation():
    with pytest.raises(ContractError):
        RandomizedConfig(trials=0)
    with pytest.raises(ContractError):
        RandomizedConfig(prime=15)
    cfg = RandomizedConfig().with_seed(5).with_trials(3)
    assert (cfg.prime, cfg.trials, cfg.seed) == (MERSENNE_61, 3, 5)


def test_small_prime_still_never_false_positive():
    cfg = RandomizedConfig(prime=101, trials=2)
    rng = random.Random(5)
    for i in range(60):
        inst = random_b_matching(rng)
        if decide_exact_perfect_b_matching(inst, cfg.with_seed(i)):
            assert exact_b_matching_exists(inst)


def test_b_matching_decider_and_witness_agree_with_oracle():
    rng = random.Random(21)
    for i in range(120):
        inst = random_b_matching(rng)
        cfg = RandomizedConfig(seed=i)
        truth = exact_b_matching_exists(inst)
        assert bool(decide_exact_perfect_b_matching(inst, cfg)) is truth
        cert = find_exact_perfect_b_matching(inst, cfg)
        assert (cert is not None) is truth
        if cert is not None:
            assert verify_certificate(inst, cert)


def test_path_gadget_option_agrees():
    rng = random.Random(8)
    for i in range(40):
        inst = random_b_matching(rng, max_vertices=5, max_edges=6)
        if inst.blue_target is None:
            continue
        cfg = RandomizedConfig(seed=i)
        assert (bool(decide_exact_perfect_b_matching(inst, cfg, via_paths=True))
                is exact_b_matching_exists(inst))


def test_capacity_above_degree_is_deterministic_no():
    g = GraphBuilder()
    g.vertex("a")
    g.vertex("b")
    g.edge("a", "b")
    inst = BMatchingInstance(g.build(), {"a": 2, "b": 2})
    answer = decide_exact_perfect_b_matching(inst)
    assert not answer and answer.trials_run == 0


def test_profile_of_b_matching_counts_subsets():
    g = GraphBuilder()
    g.vertex("a")
    g.vertex("b")
    g.edge("a", "b", Color.RED, times=3)
    inst = BMatchingInstance(g.build(), {"a": 2, "b": 2}, 2)
    assert brute_force_b_matching_profile(inst) == {(2, 0): 3}
    assert replace(inst, red_target=1).red_target == 1
    assert not exact_b_matching_exists(replace(inst, red_target=1))
    assert unit_capacities(inst.graph) == {"a": 1, "b": 1}
