"""Acceptance criteria, one test each.

Every test prints a single PASS/FAIL line (visible even under captured
output) before asserting, so a run of this file doubles as a report.
"""

from __future__ import annotations

import random
import time
from dataclasses import replace

import pytest

from votematch.election import Action, Rule, certificate_wins
from votematch.graph import Color, Mode, verify_certificate
from votematch.harness import generators as gen
from votematch.harness.bench import DEFAULT_CASES, run_bench
from votematch.harness.campaign import run_campaign
from votematch.harness.fixtures import SHORTCUT_WITNESS, bowtie_digraph, shortcut_election
from votematch.harness.fuzz import CONTROL_TARGETS, TARGETS, FuzzConfig, run_fuzz
from votematch.matching import (brute_force_b_matching_profile, brute_force_color_profile,
                                brute_force_max_b_matching, brute_force_max_weight_matching,
                                brute_force_red_profile, find_exact_b_matching,
                                max_cardinality_b_matching, max_weight_matching,
                                permanent_red_profile)
from votematch.reductions import (REGISTRY, Decided, b_matching_to_matching,
                                  edge_disjoint_ecs_to_fl_ccav_exact, fl_ccav_exact_preprocess,
                                  fl_ccav_exact_to_epbbm, red_blue_to_red)
from votematch.solvers import Answer, Backend, oracle_control, solve_control, solve_exact_cycle_sum


@pytest.fixture
def report(capsys):
    def emit(number: int, title: str, ok: bool, detail: str) -> None:
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} -- {detail}")
        assert ok, detail
    return emit


def test_criterion_1_shared_vertex_cycles(report):
    start = time.perf_counter()
    inst = bowtie_digraph(6)
    verdict = solve_exact_cycle_sum(inst, Backend.ORACLE)
    naive = oracle_control(edge_disjoint_ecs_to_fl_ccav_exact(inst).target)
    elapsed = time.perf_counter() - start
    ok = verdict.answer is Answer.NO and naive.answer is Answer.YES and elapsed < 1.0
    report(1, "two triangles sharing a vertex, k=6", ok,
           f"oracle {verdict.answer.value}, unsplit translation {naive.answer.value}, "
           f"{elapsed:.3f} s (limit 1 s)")


def test_criterion_2_first_last_adding_end_to_end(report):
    start = time.perf_counter()
    src = shortcut_election(2)
    scores = src.registered_scores()
    out = fl_ccav_exact_to_epbbm(fl_ccav_exact_preprocess(src))
    target = out.target
    cert = find_exact_b_matching(target)
    reds = None if cert is None else sum(target.graph.edges[i].color is Color.RED
                                         for i in cert.edges)
    graph_ok = (target.graph.is_bipartite and cert is not None and reds == 2
                and bool(verify_certificate(target, cert))
                and certificate_wins(src, out.lift(cert)))
    randomized = solve_control(src, Backend.RANDOMIZED)
    oracle = oracle_control(src)
    elapsed = time.perf_counter() - start
    ok = (scores == {"p": 1, "a": 3, "b": -2, "c": -2} and graph_ok
          and randomized.answer is Answer.YES and certificate_wins(src, randomized.certificate)
          and oracle.answer is Answer.YES and oracle.certificate == SHORTCUT_WITNESS
          and elapsed < 5.0)
    report(2, "First-Last exact adding, k=2", ok,
           f"perfect b-matching with {reds} red edges, randomized {randomized.answer.value}, "
           f"oracle witness U{[j + 1 for j in oracle.certificate.added]}, "
           f"{elapsed:.3f} s (limit 5 s)")


def test_criterion_3_reduction_campaign(report):
    start = time.perf_counter()
    campaign = run_campaign(instances=1000, seed=0)
    elapsed = time.perf_counter() - start
    disagreements = sum(r.disagreements for r in campaign.rows)
    lift_failures = sum(r.lift_failures for r in campaign.rows)
    ok = (len(campaign.rows) == len(REGISTRY) and all(r.instances >= 1000 for r in campaign.rows)
          and disagreements == 0 and lift_failures == 0 and elapsed < 1800)
    report(3, "reduction equivalence campaign", ok,
           f"{len(campaign.rows)} reductions x 1000 instances, {disagreements} disagreements, "
           f"{lift_failures} witness failures, {elapsed:.1f} s (limit 1800 s)")


def test_criterion_4_one_sided_error(report):
    randomized = tuple(t for t in TARGETS if t.backend is Backend.RANDOMIZED)
    fuzz = run_fuzz(FuzzConfig(randomized, count=500, seed=0))
    fp = sum(r.false_positives for r in fuzz.rows)
    fn = sum(r.false_negatives for r in fuzz.rows)
    cert = sum(r.certificate_failures for r in fuzz.rows)
    worst = max(r.worst_error_log10 for r in fuzz.rows)
    ok = fp == 0 and fn == 0 and cert == 0 and worst < -300
    report(4, "randomized backend contract", ok,
           f"{len(fuzz.rows)} targets x 500 instances, {fp} false positives, {fn} false negatives, "
           f"worst error bound 10^{worst:.1f} (limit 10^-300)")


def test_criterion_5_polynomial_backends(report):
    poly = tuple(t for t in CONTROL_TARGETS if t.backend is Backend.POLY
                 and t.rule is Rule.TWO_APPROVAL
                 and ((t.action is Action.ADD and t.exact) or (t.action is Action.REPLACE
                                                               and not t.exact)))
    fuzz = run_fuzz(FuzzConfig(poly, count=500, seed=1))
    disagree = sum(r.instances - r.agree for r in fuzz.rows)
    cert = sum(r.certificate_failures for r in fuzz.rows)
    case = next(c for c in DEFAULT_CASES if c.candidates == 50 and c.voters == 200)
    bench = run_bench((case,), seed=0, repeats=3)[0]
    ok = (len(fuzz.rows) == 2 and disagree == 0 and cert == 0 and bench.within_limit
          and bench.certificate_ok)
    report(5, "deterministic 2-Approval backends", ok,
           f"{', '.join(r.name for r in fuzz.rows)}: {disagree} disagreements in "
           f"{sum(r.instances for r in fuzz.rows)}; 50x200 replacement worst "
           f"{bench.worst:.2f} s (limit 10 s)")


def test_criterion_6_matching_engine_oracles(report):
    weight_bad = card_bad = perm_bad = 0
    for i in range(500):
        rng = random.Random(f"engine:{i}")
        inst = gen.random_b_matching(rng, max_vertices=8, max_edges=12, weights=True)
        g = inst.graph
        cert = max_weight_matching(g)
        weight_bad += (sum(g.edges[j].weight for j in cert.edges)
                       != brute_force_max_weight_matching(g))
        card = max_cardinality_b_matching(inst)
        card_bad += (not verify_certificate(inst, card, Mode.MAX_CARDINALITY)
                     or len(card.edges) != brute_force_max_b_matching(inst))
    perm_checked = perm_nonempty = 0
    for i in range(500):
        rng = random.Random(f"permanent:{i}")
        inst = gen.random_b_matching(rng, max_vertices=8, max_edges=12, bipartite=True,
                                     blue=False, unit=True)
        perm_checked += 1
        expected = brute_force_red_profile(inst.graph)
        perm_nonempty += bool(expected)
        perm_bad += permanent_red_profile(inst.graph) != expected
    ok = weight_bad == card_bad == perm_bad == 0
    report(6, "matching engine against enumeration", ok,
           f"500 weighted graphs: {weight_bad} max-weight and {card_bad} max-cardinality "
           f"mismatches; {perm_checked} bipartite graphs ({perm_nonempty} with a perfect matching): "
           f"{perm_bad} red-profile mismatches")


def test_criterion_7_gadget_exactness(report):
    tutte_bad = tutte_checked = 0
    i = 0
    while tutte_checked < 500:
        i += 1
        rng = random.Random(f"tutte:{i}")
        src = gen.random_b_matching(rng, max_vertices=8, max_edges=10)
        out = b_matching_to_matching(src)
        if isinstance(out, Decided):
            # the shortcut only fires when some capacity exceeds the degree
            tutte_bad += bool(brute_force_b_matching_profile(src))
            continue
        tutte_checked += 1
        expected = {key: out.details["multiplicity"] * c
                    for key, c in brute_force_b_matching_profile(src).items()}
        tutte_bad += brute_force_color_profile(out.target.graph, cap=64) != expected

    path_bad = path_checked = 0
    i = 0
    while path_checked < 500:
        i += 1
        rng = random.Random(f"paths:{i}")
        src = gen.random_b_matching(rng, max_vertices=8, max_edges=10, unit=True)
        g = src.graph
        if not g.count(Color.BLUE):
            continue
        path_checked += 1
        source = brute_force_color_profile(g)
        base = red_blue_to_red(replace(src, red_target=0, blue_target=0))
        n = base.details["n"]
        target = brute_force_red_profile(base.target.graph, cap=128)
        for k in range(g.n // 2 + 1):
            for ell in range(g.n // 2 + 1):
                out = red_blue_to_red(replace(src, red_target=k, blue_target=ell))
                shift_ok = out.target.red_target == ell * out.details["n"] + k
                count_ok = out.details["n"] != n or target.get(ell * n + k, 0) == source.get(
                    (k, ell), 0)
                path_bad += not (shift_ok and count_ok)
    ok = tutte_bad == 0 and path_bad == 0
    report(7, "gadget exactness", ok,
           f"{tutte_checked} capacity expansions: {tutte_bad} profile mismatches; "
           f"{path_checked} blue-path expansions: {path_bad} target or count mismatches")
