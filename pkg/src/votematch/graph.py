"""Colored multigraphs, b-matching instances and their certificates.

Edge ids are dense integers in insertion order.  Every construction in the
package builds graphs through :class:`GraphBuilder`, so the same input always
produces the same ids.
"""

from __future__ import annotations

import re
from collections import Counter
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property

from .errors import ParseError, StructureError


class Color(str, Enum):
    NONE = "none"
    RED = "red"
    BLUE = "blue"


@dataclass(frozen=True)
class Edge:
    u: str
    v: str
    color: Color = Color.NONE
    weight: int = 0
    id: int = 0

    def other(self, w: str) -> str:
        return self.v if w == self.u else self.u


@dataclass(frozen=True)
class ColoredMultigraph:
    vertices: tuple[str, ...]
    edges: tuple[Edge, ...] = ()
    bipartition: tuple[frozenset[str], frozenset[str]] | None = None
    directed: bool = False

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise StructureError("vertex ids must be unique")
        for i, e in enumerate(self.edges):
            if e.id != i:
                raise StructureError(f"edge ids must be dense and ordered, edge {i} has id {e.id}")

    @cached_property
    def index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def _incidence(self) -> dict[str, tuple[Edge, ...]]:
        inc: dict[str, list[Edge]] = {v: [] for v in self.vertices}
        for e in self.edges:
            inc[e.u].append(e)
            if e.v != e.u:
                inc[e.v].append(e)
        return {v: tuple(es) for v, es in inc.items()}

    def incident(self, v: str) -> tuple[Edge, ...]:
        return self._incidence[v]

    def degree(self, v: str) -> int:
        return len(self._incidence[v])

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def is_bipartite(self) -> bool:
        return self.bipartition is not None

    def count(self, color: Color) -> int:
        return sum(1 for e in self.edges if e.color is color)

    def side(self, v: str) -> int:
        """0 for the left side of the bipartition, 1 for the right."""
        if self.bipartition is None:
            raise StructureError("graph has no bipartition")
        return 0 if v in self.bipartition[0] else 1

    def relabel(self, mapping: Mapping[str, str]) -> ColoredMultigraph:
        bip = None
        if self.bipartition is not None:
            bip = tuple(frozenset(mapping[v] for v in side) for side in self.bipartition)
        return ColoredMultigraph(
            tuple(mapping[v] for v in self.vertices),
            tuple(Edge(mapping[e.u], mapping[e.v], e.color, e.weight, e.id) for e in self.edges),
            bip, self.directed)

    def subgraph(self, edge_ids: Iterable[int]) -> tuple[ColoredMultigraph, list[int]]:
        """Keep all vertices and the listed edges; returns the graph and new->old id map."""
        keep = sorted(set(edge_ids))
        b = GraphBuilder(directed=self.directed)
        for v in self.vertices:
            b.vertex(v)
        for i in keep:
            e = self.edges[i]
            b.edge(e.u, e.v, e.color, e.weight)
        return b.build(self.bipartition), keep


class GraphBuilder:
    """Incremental construction of a :class:`ColoredMultigraph`."""

    def __init__(self, directed: bool = False):
        self.directed = directed
        self._vertices: list[str] = []
        self._seen: set[str] = set()
        self._edges: list[Edge] = []

    def vertex(self, v: str) -> str:
        if v not in self._seen:
            self._seen.add(v)
            self._vertices.append(v)
        return v

    def __contains__(self, v: str) -> bool:
        return v in self._seen

    def edge(self, u: str, v: str, color: Color = Color.NONE, weight: int = 0,
             times: int = 1) -> list[int]:
        if u not in self._seen or v not in self._seen:
            raise StructureError(f"edge ({u}, {v}) has an unknown endpoint")
        if u == v and not self.directed:
            raise StructureError(f"self-loop at {u} in an undirected graph")
        ids = []
        for _ in range(times):
            ids.append(len(self._edges))
            self._edges.append(Edge(u, v, color, weight, len(self._edges)))
        return ids

    def build(self, bipartition: tuple[Iterable[str], Iterable[str]] | None = None
              ) -> ColoredMultigraph:
        bip = None
        if bipartition is not None:
            bip = (frozenset(bipartition[0]), frozenset(bipartition[1]))
        return ColoredMultigraph(tuple(self._vertices), tuple(self._edges), bip, self.directed)


@dataclass(frozen=True)
class BMatchingInstance:
    graph: ColoredMultigraph
    capacities: Mapping[str, int] = field(default_factory=dict)
    red_target: int = 0
    blue_target: int | None = None

    def b(self, v: str) -> int:
        return self.capacities.get(v, 0)


@dataclass(frozen=True)
class CycleSumInstance:
    digraph: ColoredMultigraph
    target_sum: int

    def __post_init__(self):
        if not self.digraph.directed:
            raise StructureError("exact cycle sum needs a directed graph")
        if self.target_sum < 0:
            raise StructureError("target sum must be nonnegative")


@dataclass(frozen=True)
class MatchingCertificate:
    edges: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(sorted(self.edges)))


class Mode(str, Enum):
    PERFECT_EXACT = "perfect"
    MAX_CARDINALITY = "maxcard"
    MAX_WEIGHT = "maxweight"


@dataclass(frozen=True)
class Verification:
    accepted: bool
    reason: str = ""

    def __bool__(self) -> bool:
        return self.accepted


def unit_capacities(graph: ColoredMultigraph) -> dict[str, int]:
    return {v: 1 for v in graph.vertices}


def validate(instance: BMatchingInstance) -> list[str]:
    """List every invariant violation of ``instance``; an empty list means ok."""
    g = instance.graph
    problems = []
    vset = set(g.vertices)
    for e in g.edges:
        if e.u not in vset or e.v not in vset:
            problems.append(f"edge {e.id} has an endpoint outside the vertex set")
        elif e.u == e.v and not g.directed:
            problems.append(f"edge {e.id} is a self-loop")
    if g.bipartition is not None:
        left, right = g.bipartition
        if left & right or (left | right) != vset:
            problems.append("bipartition does not split the vertex set")
        for e in g.edges:
            if (e.u in left) == (e.v in left):
                problems.append(f"edge {e.id} does not cross the bipartition")
    for v in instance.capacities:
        if v not in vset:
            problems.append(f"capacity given for unknown vertex {v}")
    for v in g.vertices:
        if v not in instance.capacities:
            problems.append(f"no capacity for vertex {v}")
        elif instance.capacities[v] < 0:
            problems.append(f"negative capacity at {v}")
    if instance.red_target < 0:
        problems.append("negative red target")
    elif instance.red_target > g.count(Color.RED):
        problems.append("red target exceeds the number of red edges")
    if instance.blue_target is not None:
        if instance.blue_target < 0:
            problems.append("negative blue target")
        elif instance.blue_target > g.count(Color.BLUE):
            problems.append("blue target exceeds the number of blue edges")
    if g.bipartition is not None:
        left_sum = sum(instance.b(v) for v in g.bipartition[0])
        right_sum = sum(instance.b(v) for v in g.bipartition[1])
        if left_sum != right_sum:
            problems.append(f"capacity imbalance: {left_sum} vs {right_sum}")
    elif sum(instance.b(v) for v in g.vertices) % 2:
        problems.append("capacity parity: total capacity is odd")
    return problems


def certificate_weight(graph: ColoredMultigraph, cert: MatchingCertificate) -> int:
    return sum(graph.edges[i].weight for i in cert.edges)


def verify_certificate(instance: BMatchingInstance, cert: MatchingCertificate,
                       mode: Mode = Mode.PERFECT_EXACT) -> Verification:
    """Replay ``cert`` against ``instance``.

    Perfect mode needs exact degrees b(v) and the color targets; the max modes
    only need degrees at most b(v).
    """
    g = instance.graph
    for i in cert.edges:
        if not 0 <= i < len(g.edges):
            raise StructureError(f"unknown edge id {i}")
    if len(set(cert.edges)) != len(cert.edges):
        return Verification(False, "duplicate edge in certificate")
    deg: Counter[str] = Counter()
    for i in cert.edges:
        e = g.edges[i]
        deg[e.u] += 1
        deg[e.v] += 1
    for v in g.vertices:
        b = instance.b(v)
        if deg[v] > b:
            return Verification(False, f"vertex {v} over capacity ({deg[v]} > {b})")
        if mode is Mode.PERFECT_EXACT and deg[v] < b:
            return Verification(False, f"vertex {v} under capacity ({deg[v]} < {b})")
    if mode is Mode.PERFECT_EXACT:
        reds = sum(1 for i in cert.edges if g.edges[i].color is Color.RED)
        if reds != instance.red_target:
            return Verification(False, f"red count {reds} != {instance.red_target}")
        if instance.blue_target is not None:
            blues = sum(1 for i in cert.edges if g.edges[i].color is Color.BLUE)
            if blues != instance.blue_target:
                return Verification(False, f"blue count {blues} != {instance.blue_target}")
    return Verification(True)


# -- text format ----------------------------------------------------------

_TOKEN = re.compile(r"^[^\s,#=:]+$")


@dataclass(frozen=True)
class GraphDocument:
    """A parsed graph file: a b-matching instance or a cycle-sum instance."""

    instance: BMatchingInstance | CycleSumInstance
    mode: Mode = Mode.PERFECT_EXACT
    threshold: int | None = None


def _parse_int(value: str, lineno: int, what: str) -> int:
    try:
        return int(value)
    except ValueError:
        raise ParseError(f"{what} must be an integer, got {value!r}", lineno) from None


def parse_graph(text: str) -> GraphDocument:
    vertices: list[str] | None = None
    left = right = None
    directed = False
    caps: dict[str, int] = {}
    k = 0
    ell = None
    mode = Mode.PERFECT_EXACT
    threshold = None
    edge_lines: list[tuple[int, list[str]]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line == "directed":
            directed = True
            continue
        key, sep, value = line.partition(":")
        if sep:
            key, value = key.strip(), value.strip()
            items = [t.strip() for t in value.split(",") if t.strip()]
            if key == "vertices":
                for t in items:
                    if not _TOKEN.match(t):
                        raise ParseError(f"bad vertex id {t!r}", lineno)
                vertices = items
            elif key == "left":
                left = items
            elif key == "right":
                right = items
            elif key == "b":
                for item in items:
                    v, eq, num = item.partition("=")
                    if not eq:
                        raise ParseError(f"expected v=capacity, got {item!r}", lineno)
                    caps[v.strip()] = _parse_int(num.strip(), lineno, "capacity")
            elif key == "k":
                k = _parse_int(value, lineno, "k")
            elif key == "l":
                ell = _parse_int(value, lineno, "l")
            elif key == "mode":
                try:
                    mode = Mode(value)
                except ValueError:
                    raise ParseError(f"unknown mode {value!r}", lineno) from None
            elif key == "threshold":
                threshold = _parse_int(value, lineno, "threshold")
            else:
                raise ParseError(f"unknown key {key!r}", lineno)
            continue
        edge_lines.append((lineno, line.split()))
    if vertices is None:
        raise ParseError("missing 'vertices:' line")
    b = GraphBuilder(directed=directed)
    for v in vertices:
        b.vertex(v)
    for lineno, parts in edge_lines:
        if len(parts) not in (2, 3, 4):
            raise ParseError(f"expected 'u v [color] [weight]', got {' '.join(parts)!r}", lineno)
        u, v = parts[0], parts[1]
        color = Color.NONE
        weight = 0
        if len(parts) >= 3:
            token = parts[2].lower()
            if token in ("none", "uncolored", "-"):
                color = Color.NONE
            elif token in ("red", "blue"):
                color = Color(token)
            else:
                raise ParseError(f"unknown color {parts[2]!r}", lineno)
        if len(parts) == 4:
            weight = _parse_int(parts[3], lineno, "weight")
        try:
            b.edge(u, v, color, weight)
        except StructureError as exc:
            raise ParseError(str(exc), lineno) from None
    bip = None
    if left is not None or right is not None:
        if left is None or right is None:
            raise ParseError("a bipartition needs both 'left:' and 'right:'")
        bip = (left, right)
    graph = b.build(bip)
    if directed:
        return GraphDocument(CycleSumInstance(graph, k))
    for v in vertices:
        caps.setdefault(v, 0)
    inst = BMatchingInstance(graph, caps, k, ell)
    return GraphDocument(inst, mode, threshold)


def format_graph(instance: BMatchingInstance | CycleSumInstance, mode: Mode | None = None,
                 threshold: int | None = None) -> str:
    if isinstance(instance, CycleSumInstance):
        g = instance.digraph
        lines = [f"vertices: {','.join(g.vertices)}", "directed", f"k: {instance.target_sum}"]
        lines += [f"{e.u} {e.v}" for e in g.edges]
        return "\n".join(lines) + "\n"
    g = instance.graph
    lines = [f"vertices: {','.join(g.vertices)}"]
    if g.bipartition is not None:
        order = {v: i for i, v in enumerate(g.vertices)}
        for name, side in zip(("left", "right"), g.bipartition):
            lines.append(f"{name}: {','.join(sorted(side, key=order.__getitem__))}")
    lines.append("b: " + ",".join(f"{v}={instance.b(v)}" for v in g.vertices))
    lines.append(f"k: {instance.red_target}")
    if instance.blue_target is not None:
        lines.append(f"l: {instance.blue_target}")
    if mode is not None and mode is not Mode.PERFECT_EXACT:
        lines.append(f"mode: {mode.value}")
    if threshold is not None:
        lines.append(f"threshold: {threshold}")
    for e in g.edges:
        line = f"{e.u} {e.v} {e.color.value}"
        if e.weight:
            line += f" {e.weight}"
        lines.append(line)
    return "\n".join(lines) + "\n"


def edges_between(graph: ColoredMultigraph) -> dict[tuple[str, str], list[Edge]]:
    """Group edges by unordered endpoint pair (ordered pair for digraphs)."""
    groups: dict[tuple[str, str], list[Edge]] = {}
    for e in graph.edges:
        key = (e.u, e.v)
        if not graph.directed and graph.index[e.u] > graph.index[e.v]:
            key = (e.v, e.u)
        groups.setdefault(key, []).append(e)
    return groups


def vertex_sequence(graph: ColoredMultigraph) -> Sequence[str]:
    return graph.vertices
