"""Hand-built reference instances used by tests, the CLI and the benchmarks."""

from __future__ import annotations

from ..election import Action, ControlCertificate, ControlInstance, Election, Rule, make_vote
from ..graph import CycleSumInstance, GraphBuilder

BOWTIE_ARCS = (("a", "b"), ("b", "c"), ("c", "a"), ("a", "d"), ("d", "e"), ("e", "a"))


def bowtie_digraph(target_sum: int = 6) -> CycleSumInstance:
    """Two directed triangles sharing vertex a."""
    builder = GraphBuilder(directed=True)
    for v in "abcde":
        builder.vertex(v)
    for u, v in BOWTIE_ARCS:
        builder.edge(u, v)
    return CycleSumInstance(builder.build(), target_sum)


def shortcut_election(budget: int = 2) -> ControlInstance:
    """First-Last exact adding with registered scores a=3, b=-2, c=-2, p=1.

    Adding b > ... > a together with one c > ... > a voter makes p tie a
    for the win.
    """
    cands = ("p", "a", "b", "c")
    registered = (make_vote("a", "b", cands), make_vote("a", "b", cands),
                  make_vote("a", "c", cands), make_vote("p", "c", cands))
    unregistered = (make_vote("b", "a", cands), make_vote("c", "a", cands),
                    make_vote("c", "a", cands), make_vote("b", "c", cands),
                    make_vote("a", "b", cands))
    return ControlInstance(Election(cands, registered, unregistered), Rule.FIRST_LAST, "p",
                           budget, Action.ADD, exact=True)


SHORTCUT_WITNESS = ControlCertificate((), (0, 1))


def registered_shortcut_counterexample() -> ControlInstance:
    """First-Last exact adding where the registered profile ranks p last.

    Translating it to replacement without rewriting the registered voters
    lets the replacement drop a p-last voter, which exact adding cannot do.
    """
    cands = ("p", "c", "d")
    registered = (make_vote("p", "d", cands), make_vote("p", "c", cands),
                  make_vote("c", "p", cands, second="d"), make_vote("c", "d", cands, second="p"))
    unregistered = (make_vote("c", "d", cands, second="p"),)
    return ControlInstance(Election(cands, registered, unregistered), Rule.FIRST_LAST, "p",
                           1, Action.ADD, exact=True)
