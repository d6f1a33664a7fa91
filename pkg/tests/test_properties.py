"""Property checks driven by hypothesis: invariances and round trips."""

from __future__ import annotations

import random

from hypothesis import given, settings
from hypothesis import strategies as st

from votematch.election import (Action, Election, Rule, Vote, certificate_wins, format_instance,
                                parse_instance, score)
from votematch.graph import (BMatchingInstance, Color, GraphBuilder, format_graph, parse_graph,
                             verify_certificate)
from votematch.harness import generators as gen
from votematch.matching import (RandomizedConfig, brute_force_red_profile,
                                decide_exact_perfect_b_matching, exact_b_matching_exists,
                                find_exact_b_matching)
from votematch.solvers import oracle_control

seeds = st.integers(min_value=0, max_value=2**32 - 1)
rules = st.sampled_from(list(Rule))
actions = st.sampled_from(list(Action))


def _control(seed, rule, action, exact):
    return gen.random_control(random.Random(seed), rule, action, exact)


@given(seeds, rules)
def test_score_totals(seed, rule):
    rng = random.Random(seed)
    cands = gen.candidate_names(rng.randint(3, 6))
    votes = [gen.random_vote(rng, cands) for _ in range(rng.randint(0, 8))]
    total = sum(score(votes, rule, cands).values())
    assert total == (0 if rule is Rule.FIRST_LAST else 2 * len(votes))


@given(seeds, rules, actions, st.booleans())
def test_instance_text_round_trip(seed, rule, action, exact):
    inst = _control(seed, rule, action, exact)
    assert parse_instance(format_instance(inst)) == inst


@given(seeds, rules, actions, st.booleans())
@settings(max_examples=60)
def test_oracle_invariant_under_candidate_renaming(seed, rule, action, exact):
    inst = _control(seed, rule, action, exact)
    names = {c: f"n{c}" for c in inst.candidates}

    def rename(v: Vote) -> Vote:
        return Vote(tuple(names[c] for c in v.ranking))

    election = Election(tuple(names[c] for c in inst.candidates),
                        tuple(map(rename, inst.registered)), tuple(map(rename, inst.unregistered)))
    renamed = inst.with_changes(election=election, preferred=names[inst.preferred])
    verdict = oracle_control(inst)
    assert bool(oracle_control(renamed)) == bool(verdict)
    if verdict:
        assert certificate_wins(renamed, verdict.certificate)


@given(seeds, rules, actions)
@settings(max_examples=60)
def test_budget_monotone_without_exactness(seed, rule, action):
    inst = _control(seed, rule, action, False)
    if oracle_control(inst):
        assert oracle_control(inst.with_changes(budget=inst.budget + 1))


@given(seeds)
@settings(max_examples=60)
def test_b_matching_certificate_invariant_under_relabeling(seed):
    rng = random.Random(seed)
    inst = gen.random_b_matching(rng)
    cert = find_exact_b_matching(inst)
    g = inst.graph
    shuffled = list(g.vertices)
    rng.shuffle(shuffled)
    mapping = {v: f"r{w}" for v, w in zip(g.vertices, shuffled)}
    relabeled = BMatchingInstance(g.relabel(mapping),
                                  {mapping[v]: c for v, c in inst.capacities.items()},
                                  inst.red_target, inst.blue_target)
    assert exact_b_matching_exists(relabeled) == (cert is not None)
    if cert is not None:
        assert verify_certificate(relabeled, cert)


@given(seeds)
def test_graph_text_round_trip(seed):
    inst = gen.random_b_matching(random.Random(seed), weights=True)
    assert parse_graph(format_graph(inst)).instance == inst


@given(seeds, st.integers(min_value=0, max_value=10**6))
@settings(max_examples=80)
def test_randomized_yes_is_never_wrong(seed, cfg_seed):
    inst = gen.random_b_matching(random.Random(seed))
    cfg = RandomizedConfig(prime=10007, trials=1, seed=cfg_seed)
    if decide_exact_perfect_b_matching(inst, cfg):
        assert exact_b_matching_exists(inst)


@given(seeds)
@settings(max_examples=60)
def test_red_profile_total_ignores_colors(seed):
    inst = gen.random_b_matching(random.Random(seed), unit=True)
    g = inst.graph
    plain = GraphBuilder()
    for v in g.vertices:
        plain.vertex(v)
    for e in g.edges:
        plain.edge(e.u, e.v, Color.NONE)
    total = sum(brute_force_red_profile(g).values())
    assert brute_force_red_profile(plain.build()) == ({0: total} if total else {})
