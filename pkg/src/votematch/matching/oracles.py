"""Exhaustive reference answers for small matching instances.

These are deliberately plain: memoized enumeration over vertex bitmasks or
edge classes, with no algebra and no blossom machinery, so they can serve as
ground truth for everything else in the package.
"""

from __future__ import annotations

from collections import Counter
from functools import lru_cache
from itertools import permutations
from math import comb

from ..errors import CapExceeded, StructureError
from ..graph import BMatchingInstance, Color, ColoredMultigraph, MatchingCertificate

RedProfile = dict[int, int]
ColorProfile = dict[tuple[int, int], int]

DEFAULT_VERTEX_CAP = 16


def _check_cap(graph: ColoredMultigraph, cap: int) -> None:
    if graph.directed:
        raise StructureError("matching oracles need an undirected graph")
    if graph.n > cap:
        raise CapExceeded(f"{graph.n} vertices exceeds the oracle cap of {cap}")


def brute_force_color_profile(graph: ColoredMultigraph, cap: int = DEFAULT_VERTEX_CAP
                              ) -> ColorProfile:
    """Count perfect matchings by (red edges, blue edges); parallel edges count separately."""
    _check_cap(graph, cap)
    n = graph.n
    if n % 2:
        return {}
    idx = graph.index
    # adjacency: for vertex i, list of (j, red, blue) with j > i
    adj: list[list[tuple[int, int, int]]] = [[] for _ in range(n)]
    for e in graph.edges:
        i, j = sorted((idx[e.u], idx[e.v]))
        adj[i].append((j, int(e.color is Color.RED), int(e.color is Color.BLUE)))

    @lru_cache(maxsize=None)
    def count(mask: int) -> tuple[tuple[tuple[int, int], int], ...]:
        if mask == 0:
            return (((0, 0), 1),)
        i = (mask & -mask).bit_length() - 1
        rest = mask & ~(1 << i)
        total: Counter[tuple[int, int]] = Counter()
        for j, r, b in adj[i]:
            if rest >> j & 1:
                for (rr, bb), c in count(rest & ~(1 << j)):
                    total[(rr + r, bb + b)] += c
        return tuple(total.items())

    return {key: c for key, c in count((1 << n) - 1) if c}


def brute_force_red_profile(graph: ColoredMultigraph, cap: int = DEFAULT_VERTEX_CAP) -> RedProfile:
    """Number of perfect matchings with exactly r red edges, for every r."""
    out: Counter[int] = Counter()
    for (r, _), c in brute_force_color_profile(graph, cap).items():
        out[r] += c
    return dict(out)


def permanent_red_profile(graph: ColoredMultigraph, cap: int = 10) -> RedProfile:
    """Red profile of a bipartite graph as the permanent of a polynomial matrix.

    Entry (i, j) is ``plain + red * x`` for the edge counts between left i
    and right j; the coefficient of x^r in the permanent, summed over all
    permutations directly, counts perfect matchings with r red edges.
    """
    if graph.bipartition is None:
        raise StructureError("permanent count needs a bipartite graph")
    _check_cap(graph, cap)
    left = [v for v in graph.vertices if graph.side(v) == 0]
    right = [v for v in graph.vertices if graph.side(v) == 1]
    if len(left) != len(right):
        return {}
    col = {v: j for j, v in enumerate(right)}
    row = {v: i for i, v in enumerate(left)}
    entry = [[[0, 0] for _ in right] for _ in left]
    for e in graph.edges:
        u, v = (e.u, e.v) if e.u in row else (e.v, e.u)
        entry[row[u]][col[v]][int(e.color is Color.RED)] += 1
    total = [0] * (len(left) + 1)
    for perm in permutations(range(len(right))):
        poly = [1]
        for i, j in enumerate(perm):
            plain, red = entry[i][j]
            if not plain and not red:
                break
            poly = [(poly[d] if d < len(poly) else 0) * plain
                    + (poly[d - 1] if d >= 1 else 0) * red for d in range(len(poly) + 1)]
        else:
            for d, c in enumerate(poly):
                total[d] += c
    return {r: c for r, c in enumerate(total) if c}


def _edge_classes(graph: ColoredMultigraph, by_weight: bool):
    groups: dict[tuple, list[int]] = {}
    idx = graph.index
    for e in graph.edges:
        u, v = sorted((idx[e.u], idx[e.v]))
        key = (u, v, e.color, e.weight if by_weight else 0)
        groups.setdefault(key, []).append(e.id)
    return list(groups.items())


def brute_force_b_matching_profile(instance: BMatchingInstance, cap: int = DEFAULT_VERTEX_CAP
                                   ) -> ColorProfile:
    """Count perfect b-matchings (edge subsets) by (red edges, blue edges)."""
    g = instance.graph
    _check_cap(g, cap)
    classes = _edge_classes(g, by_weight=False)
    n = g.n
    last_use = [-1] * n
    for ci, ((u, v, _, _), _) in enumerate(classes):
        last_use[u] = last_use[v] = ci
    start = tuple(instance.b(v) for v in g.vertices)
    for i in range(n):
        if last_use[i] == -1 and start[i] != 0:
            return {}

    @lru_cache(maxsize=None)
    def walk(ci: int, caps: tuple[int, ...]) -> tuple[tuple[tuple[int, int], int], ...]:
        if ci == len(classes):
            return (((0, 0), 1),) if not any(caps) else ()
        (u, v, color, _), ids = classes[ci]
        total: Counter[tuple[int, int]] = Counter()
        for t in range(min(len(ids), caps[u], caps[v]) + 1):
            new = list(caps)
            new[u] -= t
            new[v] -= t
            if (last_use[u] == ci and new[u]) or (last_use[v] == ci and new[v]):
                continue
            ways = comb(len(ids), t)
            r = t if color is Color.RED else 0
            b = t if color is Color.BLUE else 0
            for (rr, bb), c in walk(ci + 1, tuple(new)):
                total[(rr + r, bb + b)] += ways * c
        return tuple(total.items())

    return {key: c for key, c in walk(0, start) if c}


def brute_force_max_b_matching(instance: BMatchingInstance, weighted: bool = False,
                               cap: int = DEFAULT_VERTEX_CAP) -> int:
    """Optimum size (or weight) of a b-matching with degrees at most b(v).

    With ``weighted`` only positive-weight edges are worth taking.
    """
    g = instance.graph
    _check_cap(g, cap)
    classes = _edge_classes(g, by_weight=weighted)

    @lru_cache(maxsize=None)
    def best(ci: int, caps: tuple[int, ...]) -> int:
        if ci == len(classes):
            return 0
        (u, v, _, w), ids = classes[ci]
        value = w if weighted else 1
        top = min(len(ids), caps[u], caps[v]) if value > 0 else 0
        result = best(ci + 1, caps)
        for t in range(1, top + 1):
            new = list(caps)
            new[u] -= t
            new[v] -= t
            result = max(result, t * value + best(ci + 1, tuple(new)))
        return result

    return best(0, tuple(max(0, instance.b(v)) for v in g.vertices))


def brute_force_max_weight_matching(graph: ColoredMultigraph, cap: int = DEFAULT_VERTEX_CAP) -> int:
    """Maximum total weight over all (not necessarily perfect) matchings."""
    _check_cap(graph, cap)
    n = graph.n
    idx = graph.index
    adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for e in graph.edges:
        i, j = sorted((idx[e.u], idx[e.v]))
        adj[i].append((j, e.weight))

    @lru_cache(maxsize=None)
    def best(mask: int) -> int:
        if mask == 0:
            return 0
        i = (mask & -mask).bit_length() - 1
        rest = mask & ~(1 << i)
        result = best(rest)
        for j, w in adj[i]:
            if rest >> j & 1:
                result = max(result, w + best(rest & ~(1 << j)))
        return result

    return best((1 << n) - 1)


def exact_b_matching_exists(instance: BMatchingInstance, cap: int = DEFAULT_VERTEX_CAP) -> bool:
    """Ground truth for the exact perfect b-matching question, both color targets."""
    profile = brute_force_b_matching_profile(instance, cap)
    k, ell = instance.red_target, instance.blue_target
    return any(r == k and (ell is None or b == ell) for (r, b), c in profile.items() if c)


def find_exact_b_matching(instance: BMatchingInstance, cap: int = DEFAULT_VERTEX_CAP
                          ) -> MatchingCertificate | None:
    """An explicit perfect b-matching meeting the color targets, by search."""
    g = instance.graph
    _check_cap(g, cap)
    edges = g.edges
    k, ell = instance.red_target, instance.blue_target
    n = g.n
    idx = g.index
    remaining_at = [0] * n
    for e in edges:
        remaining_at[idx[e.u]] += 1
        remaining_at[idx[e.v]] += 1
    caps = [instance.b(v) for v in g.vertices]
    chosen: list[int] = []
    dead: set = set()

    def search(i: int, reds: int, blues: int) -> bool:
        if any(c > r for c, r in zip(caps, remaining_at)):
            return False
        if i == len(edges):
            return not any(caps) and reds == k and (ell is None or blues == ell)
        state = (i, tuple(caps), reds, blues)
        if state in dead:
            return False
        e = edges[i]
        u, v = idx[e.u], idx[e.v]
        is_red = e.color is Color.RED
        is_blue = e.color is Color.BLUE
        remaining_at[u] -= 1
        remaining_at[v] -= 1
        ok = False
        if caps[u] and caps[v] and reds + is_red <= k and (ell is None or blues + is_blue <= ell):
            caps[u] -= 1
            caps[v] -= 1
            chosen.append(e.id)
            ok = search(i + 1, reds + is_red, blues + is_blue)
            if not ok:
                chosen.pop()
            caps[u] += 1
            caps[v] += 1
        if not ok:
            ok = search(i + 1, reds, blues)
        remaining_at[u] += 1
        remaining_at[v] += 1
        if not ok:
            dead.add(state)
        return ok

    if search(0, 0, 0):
        return MatchingCertificate(tuple(chosen))
    return None
