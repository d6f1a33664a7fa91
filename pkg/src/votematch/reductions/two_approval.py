"""2-Approval control as b-matching: a voter approving {a, b} is the edge (a, b).

Every construction here fixes the preferred candidate's final score first
(taking as many p-approving voters as the budget allows), which turns "p is
a winner" into "no vertex exceeds b(c) = s_p".
"""

from __future__ import annotations

from ..election import (Action, ControlCertificate, ControlInstance, Election, Rule, Vote,
                        make_vote, score)
from ..errors import ContractError
from ..graph import BMatchingInstance, Color, GraphBuilder, MatchingCertificate
from .base import Decided, ReductionOutput, fresh_name
from .gadgets import is_restricted


def _require(instance: ControlInstance, action: Action, exact: bool | None) -> None:
    if instance.rule is not Rule.TWO_APPROVAL:
        raise ContractError("expected a 2-Approval instance")
    if instance.action is not action:
        raise ContractError(f"expected control by {action.value}")
    if exact is not None and instance.exact != exact:
        raise ContractError("expected the exact variant" if exact else "expected the budget variant")


def _approves(vote: Vote, c: str) -> bool:
    return c in vote.top_two


def _other(vote: Vote, c: str) -> str:
    a, b = vote.top_two
    return b if a == c else a


def _graph_on_candidates(candidates):
    builder = GraphBuilder()
    for c in candidates:
        builder.vertex(c)
    x = builder.vertex(fresh_name("x", set(candidates)))
    return builder, x


def twoapp_ccrv_exact_to_red_blue_b_matching(src: ControlInstance) -> ReductionOutput | Decided:
    """Exact replacement of l voters as a red-blue exact perfect b-matching.

    Keep k = |X| - l registered voters (red edges) and add l unregistered
    ones (blue edges); b(c) = s_p for every candidate and x soaks up the
    unused capacity of the rivals.
    """
    _require(src, Action.REPLACE, exact=True)
    p = src.preferred
    xs, ys = src.registered, src.unregistered
    ell = src.budget
    if ell > len(xs) or ell > len(ys):
        return Decided(False, f"cannot replace {ell} voters")
    k = len(xs) - ell
    s_p = (min(k, sum(_approves(v, p) for v in xs))
           + min(ell, sum(_approves(w, p) for w in ys)))
    n_c = len(src.candidates)
    b_x = n_c * s_p - 2 * (k + ell)
    if b_x < 0:
        return Decided(False, f"b(x) = {b_x}: the {k + ell} voters hand out more points than "
                              f"{n_c} candidates at {s_p} can hold")
    builder, x = _graph_on_candidates(src.candidates)
    tags: list[tuple[str, int] | None] = []
    for i, v in enumerate(xs):
        builder.edge(*v.top_two, Color.RED)
        tags.append(("X", i))
    for j, w in enumerate(ys):
        builder.edge(*w.top_two, Color.BLUE)
        tags.append(("Y", j))
    for c in src.candidates:
        if c != p:
            builder.edge(c, x, times=s_p)
            tags += [None] * s_p
    graph = builder.build()
    caps = {c: s_p for c in src.candidates}
    caps[x] = b_x
    target = BMatchingInstance(graph, caps, k, ell)

    def lift(cert: MatchingCertificate) -> ControlCertificate:
        kept = {tags[i][1] for i in cert.edges if tags[i] and tags[i][0] == "X"}
        added = [tags[i][1] for i in cert.edges if tags[i] and tags[i][0] == "Y"]
        removed = [i for i in range(len(xs)) if i not in kept]
        return ControlCertificate(tuple(removed), tuple(added))

    trace = (f"s_p = {s_p}, b(x) = {b_x}, targets red {k} blue {ell}",)
    return ReductionOutput(target, trace, lift)


def restricted_epm_to_twoapp_ccrv_exact(src: BMatchingInstance) -> ReductionOutput | Decided:
    """Restricted exact perfect matching as exact replacement under 2-Approval.

    Red edges are registered voters, the others unregistered, plus one
    registered voter approving {p, p'} that pins every score at most 1.
    Replace exactly n/2 - l voters.
    """
    if not is_restricted(src):
        raise ContractError("the red edges must number exactly half the vertices, with b = 1")
    g = src.graph
    n = g.n
    budget = n // 2 - src.red_target
    if budget < 0:
        return Decided(False, f"target {src.red_target} exceeds n/2 = {n // 2}")
    taken = set(g.vertices)
    p = fresh_name("p", taken)
    taken.add(p)
    p2 = fresh_name("p'", taken)
    candidates = tuple(g.vertices) + (p, p2)
    reds = [e for e in g.edges if e.color is Color.RED]
    plain = [e for e in g.edges if e.color is not Color.RED]
    registered = [make_vote(e.u, None, candidates, second=e.v) for e in reds]
    registered.append(make_vote(p, None, candidates, second=p2))
    unregistered = [make_vote(e.u, None, candidates, second=e.v) for e in plain]
    target = ControlInstance(Election(candidates, tuple(registered), tuple(unregistered)),
                             Rule.TWO_APPROVAL, p, budget, Action.REPLACE, exact=True)

    def lift(cert: ControlCertificate) -> MatchingCertificate:
        removed = set(cert.removed)
        kept = [e.id for i, e in enumerate(reds) if i not in removed]
        return MatchingCertificate(tuple(kept) + tuple(plain[j].id for j in cert.added))

    trace = (f"{len(reds) + 1} registered, {len(plain)} unregistered, replace exactly {budget}",)
    return ReductionOutput(target, trace, lift)


def twoapp_ccav_exact_to_maxcard_b_matching(src: ControlInstance) -> ReductionOutput | Decided:
    """Exact adding under 2-Approval as max-cardinality b-matching.

    p-approving voters are added first; the rest of the budget must fit in a
    b-matching on the remaining voters with b(a) = s_p - s_a.  The target
    carries ``threshold`` = remaining budget.
    """
    _require(src, Action.ADD, exact=True)
    p = src.preferred
    pool = src.unregistered
    k = src.budget
    base = src.registered_scores()
    if k > len(pool):
        return Decided(False, f"budget {k} exceeds the {len(pool)} unregistered voters")
    if k == 0:
        wins = src.preferred_wins(base)
        return Decided(wins, "budget 0: current winners decide", ControlCertificate() if wins else None)
    approvers = [j for j, w in enumerate(pool) if _approves(w, p)]
    if len(approvers) >= k:
        final_p = base[p] + k
        by_other: dict[str, list[int]] = {}
        for j in approvers:
            by_other.setdefault(_other(pool[j], p), []).append(j)
        chosen: list[int] = []
        for a, s in base.items():
            if a == p:
                continue
            room = final_p - s
            if room < 0:
                return Decided(False, f"{a} already beats every reachable score of p")
            chosen += by_other.get(a, [])[:room]
        if len(chosen) < k:
            return Decided(False, "p-approving voters overload the rivals")
        return Decided(True, "greedy choice among p-approving voters",
                       ControlCertificate((), tuple(chosen[:k])))

    k -= len(approvers)
    base = score((pool[j] for j in approvers), Rule.TWO_APPROVAL, base=base)
    rest = [j for j, w in enumerate(pool) if not _approves(w, p)]
    caps = {a: base[p] - s for a, s in base.items() if a != p}
    negative = [a for a, c in caps.items() if c < 0]
    if negative:
        return Decided(False, f"{negative[0]} is already ahead of p")
    builder = GraphBuilder()
    for a in caps:
        builder.vertex(a)
    for j in rest:
        builder.edge(*pool[j].top_two)
    target = BMatchingInstance(builder.build(), caps)

    def lift(cert: MatchingCertificate) -> ControlCertificate:
        picked = [rest[i] for i in cert.edges][:k]
        return ControlCertificate((), tuple(approvers) + tuple(picked))

    trace = (f"{len(approvers)} p-approvers committed; need a b-matching of size {k}",)
    return ReductionOutput(target, trace, lift, threshold=k)


def twoapp_ccrv_to_maxweight_b_matching(src: ControlInstance) -> ReductionOutput | Decided:
    """Replacement of at most l voters under 2-Approval as max-weight b-matching.

    Light edges: registered voters weigh |X| + 1, unregistered |X|; heavy
    (c, x) edges weigh more than all light edges together.  Control is
    possible iff the optimum reaches b(x)H + |X|^2 + (|X| - l), which forces
    exactly |X| light edges with at least |X| - l of them registered.
    """
    _require(src, Action.REPLACE, exact=False)
    p = src.preferred
    xs, ys = src.registered, src.unregistered
    ell = src.budget
    size = len(xs)
    x_p = sum(_approves(v, p) for v in xs)
    y_p = sum(_approves(w, p) for w in ys)
    s_p = x_p + min(ell, size - x_p, y_p)
    n_c = len(src.candidates)
    b_x = n_c * s_p - 2 * size
    if b_x < 0:
        return Decided(False, f"b(x) = {b_x} is negative")
    heavy = (size + 1) * size + size * len(ys) + 1
    builder, x = _graph_on_candidates(src.candidates)
    tags: list[tuple[str, int] | None] = []
    for i, v in enumerate(xs):
        builder.edge(*v.top_two, Color.NONE, size + 1)
        tags.append(("X", i))
    for j, w in enumerate(ys):
        builder.edge(*w.top_two, Color.NONE, size)
        tags.append(("Y", j))
    for c in src.candidates:
        if c != p:
            builder.edge(c, x, Color.NONE, heavy, times=s_p)
            tags += [None] * s_p
    caps = {c: s_p for c in src.candidates}
    caps[x] = b_x
    target = BMatchingInstance(builder.build(), caps)
    threshold = b_x * heavy + size * size + (size - ell)

    def lift(cert: MatchingCertificate) -> ControlCertificate:
        kept = {tags[i][1] for i in cert.edges if tags[i] and tags[i][0] == "X"}
        added = [tags[i][1] for i in cert.edges if tags[i] and tags[i][0] == "Y"]
        removed = [i for i in range(size) if i not in kept]
        return ControlCertificate(tuple(removed), tuple(added))

    trace = (f"s_p = {s_p}, b(x) = {b_x}, H = {heavy}, threshold {threshold}",)
    return ReductionOutput(target, trace, lift, threshold=threshold,
                           details={"heavy": heavy, "s_p": s_p, "b_x": b_x})
