"""b-matching solvers built on the vertex-expansion gadget."""

from __future__ import annotations

from collections import Counter
from dataclasses import replace

from ..graph import (BMatchingInstance, Color, GraphBuilder, MatchingCertificate, Mode,
                     validate, verify_certificate)
from ..reductions.base import Decided
from ..reductions.gadgets import b_matching_to_matching, red_blue_to_red
from .algebraic import AlgebraicAnswer, RandomizedConfig, decide_exact_pm_randomized
from .blossom import max_weight_matching


def _max_b_matching(instance: BMatchingInstance, weighted: bool) -> MatchingCertificate:
    g = instance.graph
    if weighted:
        kept = [e for e in g.edges if e.weight > 0]
        total = sum(e.weight for e in kept)
    else:
        kept = list(g.edges)
        total = len(kept)
    sub, old_ids = g.subgraph(e.id for e in kept)
    # unit weights for cardinality; padding must outweigh every real edge together
    if not weighted:
        builder = GraphBuilder()
        for v in sub.vertices:
            builder.vertex(v)
        for e in sub.edges:
            builder.edge(e.u, e.v, e.color, 1)
        sub = builder.build(sub.bipartition)
    caps = {v: max(0, instance.b(v)) for v in g.vertices}
    inst = BMatchingInstance(sub, caps)
    expanded = b_matching_to_matching(inst, pad_weight=total + 1, clamp=True)
    matching = max_weight_matching(expanded.target.graph)
    lifted = expanded.lift(matching)
    return MatchingCertificate(tuple(old_ids[i] for i in lifted.edges))


def max_cardinality_b_matching(instance: BMatchingInstance) -> MatchingCertificate:
    """A largest edge multiset with every vertex v used at most b(v) times."""
    return _max_b_matching(instance, weighted=False)


def max_weight_b_matching(instance: BMatchingInstance) -> MatchingCertificate:
    """A heaviest edge multiset with every vertex v used at most b(v) times."""
    return _max_b_matching(instance, weighted=True)


def _deterministic_no(instance: BMatchingInstance) -> str | None:
    g = instance.graph
    problems = [p for p in validate(instance)
                if p.startswith(("capacity imbalance", "capacity parity", "red target",
                                 "blue target", "negative"))]
    if problems:
        return problems[0]
    for v in g.vertices:
        if g.degree(v) < instance.b(v):
            return f"vertex {v} has fewer edges than its capacity"
    return None


def decide_exact_perfect_b_matching(instance: BMatchingInstance,
                                    cfg: RandomizedConfig | None = None,
                                    via_paths: bool = False) -> AlgebraicAnswer:
    """Randomized test for a perfect b-matching meeting the color targets.

    By default both color targets go straight into the algebraic test as two
    variables.  ``via_paths`` instead folds blue into red with the path
    gadget first, which is exact but grows the graph by a factor of n per
    blue edge.
    """
    cfg = cfg or RandomizedConfig()
    reason = _deterministic_no(instance)
    if reason is not None:
        return AlgebraicAnswer(False, 0, float("-inf"), reason)
    if via_paths and instance.blue_target is not None:
        folded = red_blue_to_red(instance)
        if isinstance(folded, Decided):
            return AlgebraicAnswer(folded.answer, 0, float("-inf"), folded.reason)
        target = folded.target
        return decide_exact_pm_randomized(target.graph, target.red_target, cfg)
    expanded = b_matching_to_matching(instance)
    if isinstance(expanded, Decided):
        return AlgebraicAnswer(expanded.answer, 0, float("-inf"), expanded.reason)
    target = expanded.target
    return decide_exact_pm_randomized(target.graph, target.red_target, cfg, target.blue_target)


def find_exact_perfect_b_matching(instance: BMatchingInstance,
                                  cfg: RandomizedConfig | None = None,
                                  probe_trials: int = 3) -> MatchingCertificate | None:
    """Construct a witness by self-reduction on the colored edges.

    Colored edges are dropped one at a time whenever the rest still admits a
    solution; what survives is exactly the colored part of some solution,
    which is then completed with uncolored edges by a max-cardinality
    b-matching.  Returns None when no verified witness was found.
    """
    cfg = cfg or RandomizedConfig()
    for trials in dict.fromkeys((probe_trials, cfg.trials)):
        probe = cfg.with_trials(trials)
        if not decide_exact_perfect_b_matching(instance, probe):
            continue
        cert = _self_reduce(instance, probe)
        if cert is not None and verify_certificate(instance, cert, Mode.PERFECT_EXACT):
            return cert
    return None


def _self_reduce(instance: BMatchingInstance, cfg: RandomizedConfig) -> MatchingCertificate | None:
    g = instance.graph
    alive = set(range(len(g.edges)))
    for e in g.edges:
        if e.color is Color.NONE or (e.color is Color.BLUE and instance.blue_target is None):
            continue
        trial = alive - {e.id}
        sub, old = g.subgraph(trial)
        if decide_exact_perfect_b_matching(replace(instance, graph=sub), cfg):
            alive = trial
    colored = [i for i in sorted(alive) if g.edges[i].color is not Color.NONE
               and not (g.edges[i].color is Color.BLUE and instance.blue_target is None)]
    used: Counter[str] = Counter()
    for i in colored:
        used[g.edges[i].u] += 1
        used[g.edges[i].v] += 1
    residual = {v: instance.b(v) - used[v] for v in g.vertices}
    if any(c < 0 for c in residual.values()):
        return None
    plain = [i for i in sorted(alive) if i not in set(colored)]
    sub, old = g.subgraph(plain)
    fill = max_cardinality_b_matching(BMatchingInstance(sub, residual))
    return MatchingCertificate(tuple(colored) + tuple(old[i] for i in fill.edges))
