from __future__ import annotations

import random

import pytest

from votematch.election import Action, Rule, certificate_wins
from votematch.errors import CapExceeded, UnsupportedBackend
from votematch.graph import BMatchingInstance, Color, GraphBuilder, Mode, verify_certificate
from votematch.harness import generators as gen
from votematch.harness.fixtures import SHORTCUT_WITNESS, bowtie_digraph, shortcut_election
from votematch.matching import RandomizedConfig, brute_force_max_b_matching
from votematch.reductions import verify_cycle_certificate
from votematch.solvers import (Answer, Backend, default_backend, edge_disjoint_cycles_oracle,
                               oracle_control, replay, solve_control, solve_exact_cycle_sum,
                               solve_matching, vertex_disjoint_cycles_oracle)


def test_oracle_finds_reference_witness():
    verdict = oracle_control(shortcut_election())
    assert verdict.answer is Answer.YES
    assert verdict.certificate == SHORTCUT_WITNESS


def test_oracle_caps():
    rng = random.Random(0)
    inst = gen.random_control_sized(rng, Rule.FIRST_LAST, Action.ADD, True, 9, 3, 3, 1)
    with pytest.raises(CapExceeded):
        oracle_control(inst)
    assert oracle_control(inst, max_candidates=9).answer in (Answer.YES, Answer.NO)


def test_randomized_yes_replays():
    verdict = solve_control(shortcut_election(), Backend.RANDOMIZED)
    assert verdict and replay(shortcut_election(), verdict)
    assert verdict.trials == 20 and verdict.seed == 0


def test_randomized_no_is_probably_no():
    # a single added voter cannot close the gap of two points
    verdict = solve_control(shortcut_election(1), Backend.RANDOMIZED)
    assert not oracle_control(shortcut_election(1))
    assert verdict.answer in (Answer.PROBABLY_NO, Answer.NO)
    if verdict.answer is Answer.PROBABLY_NO:
        assert verdict.error_log10 < -300


def test_adding_every_voter_makes_a_tie():
    inst = shortcut_election(5)
    assert oracle_control(inst)
    assert solve_control(inst, Backend.RANDOMIZED)


def test_default_backends():
    inst = shortcut_election()
    assert default_backend(inst) is Backend.RANDOMIZED
    two = inst.with_changes(rule=Rule.TWO_APPROVAL)
    assert default_backend(two) is Backend.POLY
    assert default_backend(two.with_changes(action=Action.REPLACE)) is Backend.RANDOMIZED
    assert default_backend(two.with_changes(action=Action.REPLACE, exact=False)) is Backend.POLY


@pytest.mark.parametrize("rule, action, exact, backend", [
    (Rule.FIRST_LAST, Action.ADD, True, Backend.POLY),
    (Rule.TWO_APPROVAL, Action.REPLACE, True, Backend.POLY),
    (Rule.TWO_APPROVAL, Action.ADD, True, Backend.RANDOMIZED),
])
def test_unsupported_backends(rule, action, exact, backend):
    inst = gen.random_control(random.Random(1), rule, action, exact, min_candidates=3)
    with pytest.raises(UnsupportedBackend):
        solve_control(inst, backend)


@pytest.mark.parametrize("rule, action, exact, backend", [
    (Rule.FIRST_LAST, Action.ADD, False, Backend.RANDOMIZED),
    (Rule.FIRST_LAST, Action.REPLACE, True, Backend.RANDOMIZED),
    (Rule.TWO_APPROVAL, Action.ADD, False, Backend.POLY),
    (Rule.TWO_APPROVAL, Action.REPLACE, True, Backend.RANDOMIZED),
    (Rule.TWO_APPROVAL, Action.REPLACE, False, Backend.POLY),
])
def test_solvers_agree_with_oracle(rule, action, exact, backend):
    rng = random.Random(f"{rule}{action}{exact}")
    for i in range(40):
        inst = gen.random_control(rng, rule, action, exact)
        truth = bool(oracle_control(inst))
        verdict = solve_control(inst, backend, RandomizedConfig(seed=i))
        assert bool(verdict) == truth
        if verdict:
            assert certificate_wins(inst, verdict.certificate)


def test_cycle_oracles_on_bowtie():
    assert vertex_disjoint_cycles_oracle(bowtie_digraph(6)) is None
    assert edge_disjoint_cycles_oracle(bowtie_digraph(6)) is not None
    assert vertex_disjoint_cycles_oracle(bowtie_digraph(3)) is not None
    assert vertex_disjoint_cycles_oracle(bowtie_digraph(0)).edges == ()


def test_cycle_sum_backends():
    assert solve_exact_cycle_sum(bowtie_digraph(6)).answer is Answer.NO
    verdict = solve_exact_cycle_sum(bowtie_digraph(3), Backend.RANDOMIZED)
    assert verdict
    assert verify_cycle_certificate(bowtie_digraph(3), verdict.certificate)
    with pytest.raises(UnsupportedBackend):
        solve_exact_cycle_sum(bowtie_digraph(3), Backend.POLY)


def test_cycle_sum_randomized_matches_oracle():
    rng = random.Random(13)
    for i in range(40):
        inst = gen.random_digraph(rng, max_vertices=5, max_arcs=8)
        truth = vertex_disjoint_cycles_oracle(inst) is not None
        assert bool(solve_exact_cycle_sum(inst, Backend.RANDOMIZED, RandomizedConfig(seed=i))) == truth


def weighted_path() -> BMatchingInstance:
    g = GraphBuilder()
    for v in "abcd":
        g.vertex(v)
    g.edge("a", "b", Color.RED, 2)
    g.edge("b", "c", Color.NONE, 5)
    g.edge("c", "d", Color.RED, 2)
    return BMatchingInstance(g.build(), {v: 1 for v in "abcd"}, 2)


def test_solve_matching_modes():
    inst = weighted_path()
    assert solve_matching(inst, backend=Backend.ORACLE)
    exact = solve_matching(inst)
    assert exact and verify_certificate(inst, exact.certificate)
    weight = solve_matching(inst, Mode.MAX_WEIGHT, Backend.POLY, threshold=5)
    assert weight and weight.details["value"] == 5
    assert not solve_matching(inst, Mode.MAX_WEIGHT, Backend.POLY, threshold=6)
    card = solve_matching(inst, Mode.MAX_CARDINALITY, Backend.POLY)
    assert card.details["value"] == brute_force_max_b_matching(inst) == 2
    with pytest.raises(UnsupportedBackend):
        solve_matching(inst, Mode.MAX_WEIGHT, Backend.RANDOMIZED)
    with pytest.raises(UnsupportedBackend):
        solve_matching(inst, backend=Backend.POLY)


def test_solve_matching_no_answers():
    inst = BMatchingInstance(weighted_path().graph, {v: 1 for v in "abcd"}, 1)
    assert solve_matching(inst, backend=Backend.ORACLE).answer is Answer.NO
    verdict = solve_matching(inst)
    assert verdict.answer is Answer.PROBABLY_NO
    assert verdict.error_log10 < -300
