"""Exact cycle sum: splitting vertices, and the translation to First-Last adding."""

from __future__ import annotations

from collections import Counter

from ..election import (Action, ControlCertificate, ControlInstance, Election, Rule,
                        make_vote)
from ..errors import ContractError
from ..graph import CycleSumInstance, GraphBuilder, MatchingCertificate, Verification
from .base import ReductionOutput, fresh_name


def verify_cycle_certificate(instance: CycleSumInstance, cert: MatchingCertificate,
                             vertex_disjoint: bool = True) -> Verification:
    """An arc set is a union of edge-disjoint cycles iff every vertex is balanced;
    the cycles are vertex-disjoint iff additionally no vertex is entered twice."""
    g = instance.digraph
    if len(set(cert.edges)) != len(cert.edges):
        return Verification(False, "duplicate arc")
    if len(cert.edges) != instance.target_sum:
        return Verification(False, f"total length {len(cert.edges)} != {instance.target_sum}")
    out_deg: Counter[str] = Counter()
    in_deg: Counter[str] = Counter()
    for i in cert.edges:
        e = g.edges[i]
        out_deg[e.u] += 1
        in_deg[e.v] += 1
    for v in g.vertices:
        if out_deg[v] != in_deg[v]:
            return Verification(False, f"vertex {v} is unbalanced")
        if vertex_disjoint and in_deg[v] > 1:
            return Verification(False, f"vertex {v} lies on two cycles")
    return Verification(True)


def ecs_to_edge_disjoint(src: CycleSumInstance) -> ReductionOutput:
    """Split each vertex v into v -> v' so cycles sharing v must share that arc.

    Every original arc (v, w) becomes (v', w); the target doubles.
    """
    g = src.digraph
    taken = set(g.vertices)
    builder = GraphBuilder(directed=True)
    prime: dict[str, str] = {}
    for v in g.vertices:
        builder.vertex(v)
        prime[v] = fresh_name(f"{v}'", taken)
        taken.add(prime[v])
        builder.vertex(prime[v])
    for v in g.vertices:
        builder.edge(v, prime[v])
    for e in g.edges:
        builder.edge(prime[e.u], e.v)
    target = CycleSumInstance(builder.build(), 2 * src.target_sum)
    offset = g.n

    def lift(cert: MatchingCertificate) -> MatchingCertificate:
        return MatchingCertificate(tuple(i - offset for i in cert.edges if i >= offset))

    trace = (f"{g.n} vertices split into {target.digraph.n}; target {src.target_sum} -> "
             f"{target.target_sum}",)
    return ReductionOutput(target, trace, lift)


def edge_disjoint_ecs_to_fl_ccav_exact(src: CycleSumInstance) -> ReductionOutput:
    """One unregistered voter b > ... > a per arc (a, b), a fresh preferred
    candidate and no registered voters; add exactly target-sum voters.

    Applied to an unsplit digraph this answers the edge-disjoint question,
    which can differ from the vertex-disjoint one.
    """
    g = src.digraph
    for e in g.edges:
        if e.u == e.v:
            raise ContractError(f"self-loop at {e.u} has no First-Last voter")
    p = fresh_name("p", set(g.vertices))
    candidates = tuple(g.vertices) + (p,)
    votes = tuple(make_vote(e.v, e.u, candidates) for e in g.edges)
    instance = ControlInstance(Election(candidates, (), votes), Rule.FIRST_LAST, p,
                               src.target_sum, Action.ADD, exact=True)

    def lift(cert: ControlCertificate) -> MatchingCertificate:
        return MatchingCertificate(cert.added)

    trace = (f"{len(votes)} unregistered voters, budget {src.target_sum}",)
    return ReductionOutput(instance, trace, lift)
