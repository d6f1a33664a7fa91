"""Seeded random instance generators.

Every generator takes a :class:`random.Random` so a campaign is reproducible
from one integer seed.  Matching instances are planted: capacities and color
targets come from a random edge subset, so roughly half of them are
solvable instead of almost none.
"""

from __future__ import annotations

import random
from collections import Counter

from ..election import Action, ControlInstance, Election, Rule, Vote
from ..graph import BMatchingInstance, Color, CycleSumInstance, GraphBuilder


_LETTERS = [c for c in "abcdefghijklmnoqrstuvwxyz"]


def candidate_names(n: int) -> list[str]:
    """p followed by n - 1 rivals: single letters while they last, then c1, c2, ..."""
    if n - 1 <= len(_LETTERS):
        return ["p"] + _LETTERS[: n - 1]
    return ["p"] + [f"c{i}" for i in range(1, n)]


def random_vote(rng: random.Random, candidates: list[str]) -> Vote:
    ranking = list(candidates)
    rng.shuffle(ranking)
    return Vote(tuple(ranking))


def random_control(rng: random.Random, rule: Rule, action: Action, exact: bool,
                   max_candidates: int = 6, max_voters: int = 8,
                   min_candidates: int = 2) -> ControlInstance:
    """A small control instance; p is the preferred candidate."""
    cands = candidate_names(rng.randint(min_candidates, max_candidates))
    if rule is Rule.TWO_APPROVAL and len(cands) < 3:
        cands = candidate_names(3)
    total = rng.randint(1, max_voters)
    n_reg = rng.randint(0, total)
    registered = tuple(random_vote(rng, cands) for _ in range(n_reg))
    unregistered = tuple(random_vote(rng, cands) for _ in range(total - n_reg))
    if action is Action.ADD:
        cap = len(unregistered)
    else:
        cap = min(len(registered), len(unregistered))
    budget = rng.randint(0, max(cap, 0) + (1 if rng.random() < 0.1 else 0))
    return ControlInstance(Election(tuple(cands), registered, unregistered), rule, "p",
                           budget, action, exact)


def random_control_sized(rng: random.Random, rule: Rule, action: Action, exact: bool,
                         n_candidates: int, n_registered: int, n_unregistered: int,
                         budget: int) -> ControlInstance:
    """A control instance of exactly the requested dimensions."""
    cands = candidate_names(n_candidates)
    registered = tuple(random_vote(rng, cands) for _ in range(n_registered))
    unregistered = tuple(random_vote(rng, cands) for _ in range(n_unregistered))
    return ControlInstance(Election(tuple(cands), registered, unregistered), rule, "p",
                           budget, action, exact)


def random_b_matching(rng: random.Random, max_vertices: int = 7, max_edges: int = 9,
                      bipartite: bool | None = None, colors: bool = True, blue: bool = True,
                      weights: bool = False, unit: bool = False) -> BMatchingInstance:
    """A planted b-matching instance with occasional perturbations."""
    n = rng.randint(2, max_vertices)
    if unit and n % 2 and rng.random() < 0.8:
        n = n + 1 if n < max_vertices else n - 1
    if bipartite is None:
        bipartite = rng.random() < 0.5
    vs = [f"v{i}" for i in range(n)]
    left, right = vs[: n // 2], vs[n // 2:]
    builder = GraphBuilder()
    for v in vs:
        builder.vertex(v)
    palette = [Color.NONE, Color.RED, Color.BLUE] if blue else [Color.NONE, Color.RED]
    for _ in range(rng.randint(0, max_edges)):
        u, w = (rng.choice(left), rng.choice(right)) if bipartite else rng.sample(vs, 2)
        color = rng.choice(palette) if colors else Color.NONE
        builder.edge(u, w, color, rng.randint(-2, 9) if weights else 1)
    graph = builder.build((left, right) if bipartite else None)

    used: set[str] = set()
    plant = []
    for e in graph.edges:
        if rng.random() < 0.5 and not (unit and (e.u in used or e.v in used)):
            plant.append(e)
            used |= {e.u, e.v}
    if unit:
        caps = {v: 1 for v in vs}
    else:
        deg: Counter[str] = Counter()
        for e in plant:
            deg[e.u] += 1
            deg[e.v] += 1
        caps = {v: deg[v] + (rng.random() < 0.1) for v in vs}
    noise = [0, 0, 0, 1, -1]
    red = max(0, sum(e.color is Color.RED for e in plant) + rng.choice(noise))
    blue_target = None
    if blue and colors and rng.random() < 0.5:
        blue_target = max(0, sum(e.color is Color.BLUE for e in plant) + rng.choice(noise))
    return BMatchingInstance(graph, caps, red, blue_target)


def random_restricted_epm(rng: random.Random, max_vertices: int = 8,
                          max_edges: int = 10) -> BMatchingInstance:
    """Unit capacities, even vertex count and exactly n/2 red edges."""
    n = 2 * rng.randint(1, max_vertices // 2)
    vs = [f"v{i}" for i in range(n)]
    builder = GraphBuilder()
    for v in vs:
        builder.vertex(v)
    pairs = [tuple(rng.sample(vs, 2)) for _ in range(n // 2)]
    for u, w in pairs:
        builder.edge(u, w, Color.RED)
    # a planted perfect matching keeps yes instances common
    perm = list(vs)
    rng.shuffle(perm)
    for i in range(0, n, 2):
        if rng.random() < 0.7:
            builder.edge(perm[i], perm[i + 1])
    for _ in range(rng.randint(0, max(0, max_edges - n))):
        builder.edge(*rng.sample(vs, 2))
    graph = builder.build()
    return BMatchingInstance(graph, {v: 1 for v in vs}, rng.randint(0, n // 2))


def random_digraph(rng: random.Random, max_vertices: int = 6, max_arcs: int = 10,
                   loops: bool = False) -> CycleSumInstance:
    n = rng.randint(1, max_vertices)
    vs = [f"v{i}" for i in range(n)]
    builder = GraphBuilder(directed=True)
    for v in vs:
        builder.vertex(v)
    for _ in range(rng.randint(0, max_arcs)):
        if loops and rng.random() < 0.1:
            v = rng.choice(vs)
            builder.edge(v, v)
        elif n >= 2:
            builder.edge(*rng.sample(vs, 2))
    return CycleSumInstance(builder.build(), rng.randint(0, n))
