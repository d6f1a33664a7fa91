"""Maximum-weight matching on colored multigraphs via rustworkx's blossom solver.

rustworkx runs Edmonds' primal-dual blossom algorithm with integer weights,
so results are exact; parallel edges are collapsed to the heaviest copy first.
"""

from __future__ import annotations

import rustworkx as rx

from ..errors import StructureError
from ..graph import ColoredMultigraph, MatchingCertificate


def max_weight_matching(graph: ColoredMultigraph, max_cardinality: bool = False
                        ) -> MatchingCertificate:
    """A matching of maximum total weight.

    Edges of nonpositive weight never help and are ignored unless
    ``max_cardinality`` asks for the heaviest among maximum-size matchings.
    """
    if graph.directed:
        raise StructureError("matching needs an undirected graph")
    best: dict[tuple[int, int], tuple[int, int]] = {}
    idx = graph.index
    for e in graph.edges:
        if e.weight <= 0 and not max_cardinality:
            continue
        key = tuple(sorted((idx[e.u], idx[e.v])))
        held = best.get(key)
        if held is None or e.weight > held[0]:
            best[key] = (e.weight, e.id)
    rg = rx.PyGraph(multigraph=False)
    rg.add_nodes_from(range(graph.n))
    for (i, j), (w, eid) in best.items():
        rg.add_edge(i, j, (w, eid))
    pairs = rx.max_weight_matching(rg, max_cardinality=max_cardinality,
                                   weight_fn=lambda data: data[0], verify_optimum=False)
    chosen = [best[tuple(sorted(pair))][1] for pair in pairs]
    return MatchingCertificate(tuple(chosen))
