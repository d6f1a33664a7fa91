"""Graph-to-graph gadgets: b-matching to matching, two colors to one, and
padding an exact-matching instance to the restricted form.
"""

from __future__ import annotations

from math import factorial

from ..errors import ContractError, StructureError
from ..graph import BMatchingInstance, Color, GraphBuilder, MatchingCertificate, unit_capacities
from .base import Decided, ReductionOutput, fresh_name


def _lift_edges(origin: list[int | None]):
    def lift(cert: MatchingCertificate) -> MatchingCertificate:
        return MatchingCertificate(tuple(origin[i] for i in cert.edges if origin[i] is not None))
    return lift


def is_unit(instance: BMatchingInstance) -> bool:
    return all(instance.b(v) == 1 for v in instance.graph.vertices)


def b_matching_to_matching(src: BMatchingInstance, *, compress: bool = True,
                           pad_weight: int = 0, clamp: bool = False
                           ) -> ReductionOutput | Decided:
    """Expand every vertex v into a complete bipartite block.

    v becomes end vertices v#1..v#d (d = deg v), one per incident edge, plus
    d - b(v) padding vertices joined to every end.  Original edge e, the i-th
    edge at v and the j-th at w, becomes (v#i, w#j) with e's color and
    weight; padding edges are uncolored with weight ``pad_weight``.

    With ``compress`` a vertex with b(v) = 1 stays a single vertex and a
    vertex with b(v) = 0 is dropped with its edges; both shortcuts keep the
    perfect matchings in bijection with the full gadget's up to a constant
    factor.  ``details["multiplicity"]`` is the number of target perfect
    matchings per source perfect b-matching.

    ``clamp`` replaces b(v) by min(b(v), deg v) instead of answering no, which
    is what the max-weight and max-cardinality pipelines need.
    """
    g = src.graph
    if g.directed:
        raise StructureError("b-matching gadget needs an undirected graph")
    b = {v: src.b(v) for v in g.vertices}
    for v in g.vertices:
        if g.degree(v) < b[v]:
            if clamp:
                b[v] = g.degree(v)
            else:
                return Decided(False, f"vertex {v} has degree {g.degree(v)} < b = {b[v]}")

    taken = set(g.vertices)
    builder = GraphBuilder()
    ends: dict[str, list[str]] = {}
    pads: dict[str, list[str]] = {}
    side_of: dict[str, int] = {}
    multiplicity = 1
    for v in g.vertices:
        d = g.degree(v)
        if compress and b[v] == 0:
            ends[v], pads[v] = [], []
            continue
        if compress and b[v] == 1:
            ends[v] = [builder.vertex(v)] * d
            pads[v] = []
            if g.bipartition is not None:
                side_of[v] = g.side(v)
            continue
        multiplicity *= factorial(d - b[v])
        ends[v] = []
        for i in range(1, d + 1):
            name = fresh_name(f"{v}#{i}", taken)
            taken.add(name)
            ends[v].append(builder.vertex(name))
        pads[v] = []
        for j in range(1, d - b[v] + 1):
            name = fresh_name(f"{v}#p{j}", taken)
            taken.add(name)
            pads[v].append(builder.vertex(name))
        if g.bipartition is not None:
            s = g.side(v)
            side_of.update({u: s for u in ends[v]})
            side_of.update({u: 1 - s for u in pads[v]})

    # position of each edge in the incidence list of each endpoint
    position: dict[tuple[str, int], int] = {}
    for v in g.vertices:
        for i, e in enumerate(g.incident(v)):
            position[(v, e.id)] = i

    origin: list[int | None] = []
    for e in g.edges:
        if not ends[e.u] or not ends[e.v]:
            continue
        builder.edge(ends[e.u][position[(e.u, e.id)]], ends[e.v][position[(e.v, e.id)]],
                     e.color, e.weight)
        origin.append(e.id)
    for v in g.vertices:
        for end in ends[v] if pads[v] else ():
            for pad in pads[v]:
                builder.edge(end, pad, Color.NONE, pad_weight)
                origin.append(None)

    bip = None
    if g.bipartition is not None:
        left = [u for u, s in side_of.items() if s == 0]
        right = [u for u, s in side_of.items() if s == 1]
        bip = (left, right)
    graph = builder.build(bip)
    target = BMatchingInstance(graph, unit_capacities(graph), src.red_target, src.blue_target)
    trace = (
        f"expanded {g.n} vertices / {len(g.edges)} edges into "
        f"{graph.n} vertices / {len(graph.edges)} edges",
    )
    return ReductionOutput(target, trace, _lift_edges(origin),
                           details={"multiplicity": multiplicity, "edge_origin": origin,
                                    "capacities": b})


def red_blue_to_red(src: BMatchingInstance) -> ReductionOutput | Decided:
    """Fold the blue target into the red one with alternating paths.

    Every blue edge (u, v) becomes a path of 2n - 1 edges, red at both ends
    and alternating in between, so a chosen blue edge contributes n red edges
    and an unchosen one contributes none.  The new red target is l*n + k.
    Instances with general capacities are expanded to b = 1 first.
    """
    if not is_unit(src):
        expanded = b_matching_to_matching(src)
        if isinstance(expanded, Decided):
            return expanded
        inner = red_blue_to_red(expanded.target)
        if isinstance(inner, Decided):
            return inner
        return ReductionOutput(inner.target, expanded.trace + inner.trace,
                               lambda cert: expanded.lift(inner.lift(cert)),
                               details={**inner.details, "expansion": expanded.details})

    g = src.graph
    k = src.red_target
    ell = src.blue_target
    if ell is None:
        # blue is unconstrained, so it behaves exactly like uncolored
        ell = 0
        recolor = True
    else:
        recolor = False

    taken = set(g.vertices)
    builder = GraphBuilder()
    side_of: dict[str, int] = {}
    for v in g.vertices:
        builder.vertex(v)
        if g.bipartition is not None:
            side_of[v] = g.side(v)
    pad_edges: list[tuple[str, str]] = []
    n = g.n
    while max(k, ell) >= n:
        a = fresh_name("pad0", taken)
        taken.add(a)
        c = fresh_name("pad1", taken)
        taken.add(c)
        builder.vertex(a)
        builder.vertex(c)
        side_of[a], side_of[c] = 0, 1
        pad_edges.append((a, c))
        n += 2

    origin: list[int | None] = []
    for e in g.edges:
        if e.color is Color.BLUE and not recolor:
            path = [e.u]
            for i in range(1, 2 * n - 1):
                name = fresh_name(f"e{e.id}.{i}", taken)
                taken.add(name)
                path.append(builder.vertex(name))
                if g.bipartition is not None:
                    side_of[name] = side_of[e.u] if i % 2 == 0 else 1 - side_of[e.u]
            path.append(e.v)
            for i in range(2 * n - 1):
                color = Color.RED if i % 2 == 0 else Color.NONE
                builder.edge(path[i], path[i + 1], color)
                origin.append(e.id if i == 0 else None)
        else:
            color = Color.NONE if e.color is Color.BLUE else e.color
            builder.edge(e.u, e.v, color, e.weight)
            origin.append(e.id)
    for a, c in pad_edges:
        builder.edge(a, c)
        origin.append(None)

    bip = None
    if g.bipartition is not None:
        bip = ([u for u, s in side_of.items() if s == 0], [u for u, s in side_of.items() if s == 1])
    graph = builder.build(bip)
    target = BMatchingInstance(graph, unit_capacities(graph), ell * n + k, None)
    trace = (f"n = {n} after {len(pad_edges)} padding edges; red target {ell}*{n} + {k}",)
    return ReductionOutput(target, trace, _lift_edges(origin), details={"n": n})


def epm_to_restricted_epm(src: BMatchingInstance) -> ReductionOutput | Decided:
    """Pad so that the red edges number exactly half the vertices.

    Too many red edges: add isolated uncolored edges.  Too few: add an even
    number of fresh vertices carrying a red perfect matching plus further red
    edges (lexicographic pair order), and raise the target by half of them.
    """
    if not is_unit(src):
        raise ContractError("exact perfect matching instances need b = 1 everywhere")
    g = src.graph
    n = g.n
    if n % 2:
        return Decided(False, "odd number of vertices")
    reds = g.count(Color.RED)
    taken = set(g.vertices)
    builder = GraphBuilder()
    for v in g.vertices:
        builder.vertex(v)
    for e in g.edges:
        color = Color.RED if e.color is Color.RED else Color.NONE
        builder.edge(e.u, e.v, color, e.weight)
    target_k = src.red_target
    if reds > n // 2:
        for _ in range(reds - n // 2):
            a = fresh_name("iso0", taken)
            taken.add(a)
            c = fresh_name("iso1", taken)
            taken.add(c)
            builder.vertex(a)
            builder.vertex(c)
            builder.edge(a, c)
        note = f"added {reds - n // 2} isolated uncolored edges"
    elif reds < n // 2:
        nh = 2
        while reds + nh * (nh - 1) // 2 < (n + nh) // 2:
            nh += 2
        fresh = []
        for i in range(nh):
            name = fresh_name(f"h{i}", taken)
            taken.add(name)
            fresh.append(builder.vertex(name))
        pairs = [(fresh[i], fresh[i + 1]) for i in range(0, nh, 2)]
        needed = (n + nh) // 2 - reds - len(pairs)
        matched = set(pairs)
        for i in range(nh):
            for j in range(i + 1, nh):
                if needed == 0:
                    break
                if (fresh[i], fresh[j]) not in matched:
                    pairs.append((fresh[i], fresh[j]))
                    needed -= 1
        for a, c in pairs:
            builder.edge(a, c, Color.RED)
        target_k += nh // 2
        note = f"added a {nh}-vertex red component, target +{nh // 2}"
    else:
        note = "already balanced"
    graph = builder.build(None)
    origin: list[int | None] = [e.id for e in g.edges] + [None] * (len(graph.edges) - len(g.edges))
    target = BMatchingInstance(graph, unit_capacities(graph), target_k, None)
    return ReductionOutput(target, (note,), _lift_edges(origin))


def is_restricted(instance: BMatchingInstance) -> bool:
    g = instance.graph
    return is_unit(instance) and 2 * g.count(Color.RED) == g.n

