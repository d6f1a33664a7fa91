"""First-Last control: greedy preprocessing and the bipartite b-matching
constructions for exact adding and exact replacing, plus the translation of
exact adding into replacing.

A First-Last voter f > ... > l moves one point from l to f, so a set of
added voters is an integer flow between candidates.  In the bipartite graph
an added voter is a colored edge (l, f'); uncolored (a, a') and (x, a')
edges absorb the remaining capacity exactly when every rival ends at or
below the preferred candidate.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

from ..election import (Action, ControlCertificate, ControlInstance, Election, Rule, Vote,
                        make_vote, score)
from ..errors import ContractError
from ..graph import BMatchingInstance, Color, GraphBuilder, MatchingCertificate
from .base import Decided, Normalized, ReductionOutput, fresh_name


def _require(instance: ControlInstance, action: Action, exact: bool = True) -> None:
    if instance.rule is not Rule.FIRST_LAST:
        raise ContractError("expected a First-Last instance")
    if instance.action is not action:
        raise ContractError(f"expected control by {action.value}")
    if exact and not instance.exact:
        raise ContractError("expected the exact variant")


def _neutral(vote: Vote, p: str) -> bool:
    return vote.first != p and vote.last != p


def _pick_p_first(base: dict[str, int], items: Sequence[tuple[int, Vote]], k: int,
                  p: str) -> list[int] | None:
    """Choose k voters ranking p first so every rival ends at most s_p + k."""
    final_p = base[p] + k
    by_last: dict[str, list[int]] = {}
    for j, vote in items:
        by_last.setdefault(vote.last, []).append(j)
    chosen: list[int] = []
    for a, s in base.items():
        if a == p:
            continue
        deficit = max(0, s - final_p)
        if deficit > len(by_last.get(a, ())):
            return None
        chosen += by_last.get(a, [])[:deficit]
    if len(chosen) > k:
        return None
    picked = set(chosen)
    for j, _ in items:
        if len(chosen) == k:
            break
        if j not in picked:
            chosen.append(j)
    return chosen


def _pick_p_last(base: dict[str, int], items: Sequence[tuple[int, Vote]], k: int,
                 p: str) -> list[int] | None:
    """Choose k voters ranking p last so every rival ends at most s_p - k."""
    final_p = base[p] - k
    by_first: dict[str, list[int]] = {}
    for j, vote in items:
        by_first.setdefault(vote.first, []).append(j)
    chosen: list[int] = []
    for a, s in base.items():
        if a == p:
            continue
        room = final_p - s
        if room < 0:
            return None
        chosen += by_first.get(a, [])[:room]
    return chosen[:k] if len(chosen) >= k else None


def fl_ccav_exact_preprocess(src: ControlInstance) -> Decided | Normalized:
    """Settle the easy cases of First-Last exact adding, or strip it down to
    voters that give the preferred candidate zero points.

    With at least k voters ranking p first only those are worth adding and a
    greedy check decides.  Otherwise all of them are added, and the voters
    not ranking p last are treated the same way: if they cannot fill the
    budget they are all added and the rest is chosen greedily among p-last
    voters; if they can, p-last voters are dropped.
    """
    _require(src, Action.ADD)
    p = src.preferred
    pool = src.unregistered
    k = src.budget
    base = src.registered_scores()
    if k > len(pool):
        return Decided(False, f"budget {k} exceeds the {len(pool)} unregistered voters")
    if k == 0:
        wins = src.preferred_wins(base)
        return Decided(wins, "budget 0: current winners decide",
                       ControlCertificate() if wins else None)

    p_first = [(j, w) for j, w in enumerate(pool) if w.first == p]
    if len(p_first) >= k:
        chosen = _pick_p_first(base, p_first, k, p)
        if chosen is None:
            return Decided(False, "no choice of p-first voters beats every rival")
        return Decided(True, "greedy choice among p-first voters", ControlCertificate((), chosen))

    committed = [j for j, _ in p_first]
    k -= len(committed)
    base = score((pool[j] for j in committed), Rule.FIRST_LAST, base=base)
    rest = [(j, w) for j, w in enumerate(pool) if w.first != p]
    neutral = [(j, w) for j, w in rest if w.last != p]
    if len(neutral) < k:
        committed += [j for j, _ in neutral]
        k -= len(neutral)
        base = score((w for _, w in neutral), Rule.FIRST_LAST, base=base)
        p_last = [(j, w) for j, w in rest if w.last == p]
        chosen = _pick_p_last(base, p_last, k, p)
        if chosen is None:
            return Decided(False, "no choice of p-last voters keeps p a winner")
        return Decided(True, "greedy choice among p-last voters",
                       ControlCertificate((), committed + chosen))

    registered = src.registered + tuple(pool[j] for j in committed)
    residual = src.with_changes(
        election=Election(src.candidates, registered, tuple(w for _, w in neutral)), budget=k)
    return Normalized(residual, tuple(committed), tuple(j for j, _ in neutral), src)


# -- bipartite construction -------------------------------------------------

@dataclass
class _Pool:
    color: Color
    kind: str  # "zero", "first" or "last": what the members give p
    members: list[tuple[int, Vote]]
    target: int


@dataclass
class _Built:
    instance: BMatchingInstance
    tags: list[tuple[int, int] | None]  # per edge: (pool index, voter index) or None


def _build_graph(candidates: Sequence[str], p: str, base: dict[str, int],
                 pools: list[_Pool]) -> _Built | Decided:
    c_first = sum(pool.target for pool in pools if pool.kind == "first")
    c_last = sum(pool.target for pool in pools if pool.kind == "last")
    final_p = base[p] + c_first - c_last
    others = [a for a in candidates if a != p]
    # b(a) must leave room for every chosen voter ranking a last, not just be >= 0
    def out_bound(a: str) -> int:
        return sum(min(pool.target, sum(v.last == a for _, v in pool.members)) for pool in pools)

    big_m = max([0] + [final_p - base[a] + out_bound(a) for a in others])
    b_x = sum(final_p - base[a] for a in others) + c_first - c_last
    if b_x < 0:
        return Decided(False, f"b(x) = {b_x} is negative: the rivals hold too many points")

    taken = set(candidates)
    builder = GraphBuilder()
    left: list[str] = []
    right: list[str] = []
    caps: dict[str, int] = {}
    prime: dict[str, str] = {}
    for a in others:
        prime[a] = fresh_name(f"{a}'", taken)
        taken.add(prime[a])
        left.append(builder.vertex(a))
        right.append(builder.vertex(prime[a]))
        caps[a] = big_m + base[a] - final_p
        caps[prime[a]] = big_m
    p_left = p_right = None
    if c_last:
        p_left = builder.vertex(p)
        left.append(p_left)
        caps[p_left] = c_last
    if c_first:
        p_right = fresh_name(f"{p}'", taken)
        taken.add(p_right)
        right.append(builder.vertex(p_right))
        caps[p_right] = c_first
    x = fresh_name("x", taken)
    left.append(builder.vertex(x))
    caps[x] = b_x

    tags: list[tuple[int, int] | None] = []
    for pi, pool in enumerate(pools):
        for j, vote in pool.members:
            lo = p_left if vote.last == p else vote.last
            hi = p_right if vote.first == p else prime[vote.first]
            builder.edge(lo, hi, pool.color)
            tags.append((pi, j))
    for a in others:
        supply = min(caps[a], big_m)
        builder.edge(a, prime[a], times=supply)
        tags += [None] * supply
    for a in others:
        supply = min(b_x, big_m)
        builder.edge(x, prime[a], times=supply)
        tags += [None] * supply

    red = sum(pool.target for pool in pools if pool.color is Color.RED)
    blue_pools = [pool for pool in pools if pool.color is Color.BLUE]
    blue = sum(pool.target for pool in blue_pools) if blue_pools else None
    graph = builder.build((left, right))
    return _Built(BMatchingInstance(graph, caps, red, blue), tags)


def _as_normalized(src: Normalized | ControlInstance) -> Normalized:
    if isinstance(src, Normalized):
        return src
    _require(src, Action.ADD)
    if not all(_neutral(w, src.preferred) for w in src.unregistered):
        raise ContractError("every unregistered voter must give the preferred candidate 0 points;"
                            " run fl_ccav_exact_preprocess first")
    return Normalized(src, (), tuple(range(len(src.unregistered))), src)


def fl_ccav_exact_to_epbbm(src: Normalized | ControlInstance) -> ReductionOutput | Decided:
    """Exact adding as an exact perfect bipartite b-matching with k red edges."""
    norm = _as_normalized(src)
    inst = norm.instance
    base = inst.registered_scores()
    pool = _Pool(Color.RED, "zero", list(enumerate(inst.unregistered)), inst.budget)
    built = _build_graph(inst.candidates, inst.preferred, base, [pool])
    if isinstance(built, Decided):
        return built
    tags = built.tags

    def lift(cert: MatchingCertificate) -> ControlCertificate:
        added = [tags[i][1] for i in cert.edges if tags[i] is not None]
        return norm.lift(ControlCertificate((), tuple(added)))

    g = built.instance.graph
    trace = (f"s = {base}", f"{g.n} vertices, {len(g.edges)} edges, red target {inst.budget}")
    return ReductionOutput(built.instance, trace, lift,
                           details={"capacities": dict(built.instance.capacities)})


# -- exact adding as replacing ---------------------------------------------

def _canonical_votes(scores: dict[str, int], candidates: Sequence[str]) -> list[tuple[str, str]]:
    """(first, last) pairs realizing a zero-sum score vector with one voter per unit."""
    plus = [c for c in candidates for _ in range(max(0, scores[c]))]
    minus = [c for c in candidates for _ in range(max(0, -scores[c]))]
    return list(zip(plus, minus))


def fl_ccav_exact_to_fl_ccrv(src: Normalized | ControlInstance, exact: bool = False,
                             canonicalize_registered: bool = True) -> ReductionOutput | Decided:
    """Exact adding of k voters as replacing (at most or exactly) k voters.

    Fresh candidates a_1..a_k, b_1..b_k get s_p + 1 registered voters
    a_i > ... > b_i each, so every a_i must lose one such voter.  The
    registered voters are first rewritten into an equivalent profile where p
    is never ranked last; otherwise removing a p-last voter would raise p
    and open a shortcut that exact adding does not have.
    """
    norm = _as_normalized(src)
    inst = norm.instance
    p = inst.preferred
    base = inst.registered_scores()
    s_p = base[p]
    if s_p < 0:
        return Decided(False, f"s_p = {s_p} < 0 and unregistered voters give p nothing")
    k = inst.budget
    taken = set(inst.candidates)
    a_names, b_names = [], []
    for i in range(1, k + 1):
        a_names.append(fresh_name(f"a{i}", taken))
        taken.add(a_names[-1])
        b_names.append(fresh_name(f"b{i}", taken))
        taken.add(b_names[-1])
    extra = tuple(a_names) + tuple(b_names)
    candidates = tuple(inst.candidates) + extra

    def extend(vote: Vote) -> Vote:
        return Vote(vote.ranking[:-1] + extra + vote.ranking[-1:])

    if canonicalize_registered:
        registered = [make_vote(f, l, candidates) for f, l in _canonical_votes(base, inst.candidates)]
    else:
        registered = [extend(v) for v in inst.registered]
    for a, b in zip(a_names, b_names):
        registered += [make_vote(a, b, candidates)] * (s_p + 1)
    unregistered = tuple(extend(w) for w in inst.unregistered)
    target = ControlInstance(Election(candidates, tuple(registered), unregistered),
                             Rule.FIRST_LAST, p, k, Action.REPLACE, exact)

    def lift(cert: ControlCertificate) -> ControlCertificate:
        return norm.lift(ControlCertificate((), cert.added))

    trace = (f"s_p = {s_p}; {2 * k} new candidates, {k * (s_p + 1)} new registered voters",)
    return ReductionOutput(target, trace, lift)


# -- exact replacing as two-color exact b-matching ------------------------

def _classify(members: list[tuple[int, Vote]], target: int, p: str):
    """Commit what every solution takes from one pool; returns
    (committed, kind, candidates, remaining target)."""
    if target == 0:
        return [], None, [], 0
    if target == len(members):
        return [j for j, _ in members], None, [], 0
    p_first = [(j, v) for j, v in members if v.first == p]
    if len(p_first) >= target:
        return [], "first", p_first, target
    committed = [j for j, _ in p_first]
    target -= len(p_first)
    rest = [(j, v) for j, v in members if v.first != p]
    neutral = [(j, v) for j, v in rest if v.last != p]
    if len(neutral) >= target:
        return committed, "zero", neutral, target
    committed += [j for j, _ in neutral]
    target -= len(neutral)
    return committed, "last", [(j, v) for j, v in rest if v.last == p], target


def fl_ccrv_exact_to_red_blue_bipartite(src: ControlInstance) -> ReductionOutput | Decided:
    """Exact replacement of z voters as a red-blue exact perfect bipartite b-matching.

    Replacing z voters means building a fresh election from |X| - z
    registered voters (red) and z unregistered voters (blue).  Each pool is
    preprocessed on its own; a pool restricted to p-first (p-last) voters
    routes its edges through an extra vertex p' (p) whose capacity is that
    pool's remaining target.
    """
    _require(src, Action.REPLACE)
    p = src.preferred
    xs, ys = src.registered, src.unregistered
    z = src.budget
    if z > len(xs) or z > len(ys):
        return Decided(False, f"cannot replace {z} voters with {len(xs)} registered "
                              f"and {len(ys)} unregistered")
    committed_x, kind_x, cand_x, k = _classify(list(enumerate(xs)), len(xs) - z, p)
    committed_y, kind_y, cand_y, ell = _classify(list(enumerate(ys)), z, p)
    base = score([xs[j] for j in committed_x] + [ys[j] for j in committed_y],
                 Rule.FIRST_LAST, src.candidates)

    def certificate(kept: list[int], added: list[int]) -> ControlCertificate:
        kept_set = set(committed_x) | set(kept)
        removed = [i for i in range(len(xs)) if i not in kept_set]
        return ControlCertificate(tuple(removed), tuple(committed_y) + tuple(added))

    if kind_x is None and kind_y is None:
        wins = src.preferred_wins(base)
        return Decided(wins, "both pools fully determined", certificate([], []) if wins else None)

    pools = []
    if kind_x is not None:
        pools.append(_Pool(Color.RED, kind_x, cand_x, k))
    if kind_y is not None:
        pools.append(_Pool(Color.BLUE, kind_y, cand_y, ell))
    built = _build_graph(src.candidates, p, base, pools)
    if isinstance(built, Decided):
        return built
    instance = built.instance
    if instance.blue_target is None:
        instance = BMatchingInstance(instance.graph, instance.capacities, instance.red_target, 0)
    tags = built.tags

    def lift(cert: MatchingCertificate) -> ControlCertificate:
        kept, added = [], []
        for i in cert.edges:
            if tags[i] is None:
                continue
            pool = pools[tags[i][0]]
            (kept if pool.color is Color.RED else added).append(tags[i][1])
        return certificate(kept, added)

    g = instance.graph
    trace = (f"registered pool: {kind_x or 'fixed'} target {k}; "
             f"unregistered pool: {kind_y or 'fixed'} target {ell}",
             f"{g.n} vertices, {len(g.edges)} edges")
    return ReductionOutput(instance, trace, lift)
