"""End-to-end deciders for control problems, exact cycle sums and matchings.

Three backends:

* ``ORACLE`` enumerates every legal choice (small instances only);
* ``POLY`` runs the deterministic max-cardinality / max-weight pipelines
  available for 2-Approval adding and budgeted replacing;
* ``RANDOMIZED`` reduces to exact perfect matching and runs the algebraic
  test, which never reports a false "yes".
"""

from __future__ import annotations

import math
import time
from collections.abc import Sequence
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
from typing import Any

import networkx as nx

from .election import (Action, ControlCertificate, ControlInstance, Rule, certificate_wins,
                       score)
from .errors import CapExceeded, UnsupportedBackend
from .graph import (BMatchingInstance, CycleSumInstance, MatchingCertificate, Mode,
                    verify_certificate)
from .matching import (RandomizedConfig, decide_exact_perfect_b_matching,
                       find_exact_b_matching, find_exact_perfect_b_matching,
                       max_cardinality_b_matching, max_weight_b_matching)
from .reductions import (Decided, ReductionOutput, ccav_to_ccav_exact_sweep,
                         ccrv_to_ccrv_exact_sweep, ecs_to_edge_disjoint,
                         edge_disjoint_ecs_to_fl_ccav_exact, fl_ccav_exact_preprocess,
                         fl_ccav_exact_to_epbbm, fl_ccrv_exact_to_red_blue_bipartite,
                         twoapp_ccav_exact_to_maxcard_b_matching,
                         twoapp_ccrv_exact_to_red_blue_b_matching,
                         twoapp_ccrv_to_maxweight_b_matching)


class Answer(str, Enum):
    YES = "Yes"
    NO = "No"
    PROBABLY_NO = "ProbablyNo"

    @property
    def positive(self) -> bool:
        return self is Answer.YES


class Backend(str, Enum):
    ORACLE = "oracle"
    POLY = "poly"
    RANDOMIZED = "randomized"


@dataclass
class Verdict:
    answer: Answer
    backend: Backend
    certificate: Any = None
    elapsed: float = 0.0
    trials: int | None = None
    seed: int | None = None
    error_log10: float | None = None
    note: str = ""
    details: dict[str, Any] = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.answer.positive


# -- oracle -----------------------------------------------------------------

ORACLE_MAX_CANDIDATES = 8
ORACLE_MAX_VOTERS = 10


def _deltas(votes, rule: Rule, candidates: Sequence[str]) -> list[tuple[int, ...]]:
    out = []
    for v in votes:
        s = score([v], rule, candidates)
        out.append(tuple(s[c] for c in candidates))
    return out


def oracle_control(instance: ControlInstance, max_candidates: int = ORACLE_MAX_CANDIDATES,
                   max_voters: int = ORACLE_MAX_VOTERS) -> Verdict:
    """Try every legal (removed, added) pair; exact and budget semantics honored."""
    start = time.perf_counter()
    cands = instance.candidates
    n_voters = len(instance.registered) + len(instance.unregistered)
    if len(cands) > max_candidates or n_voters > max_voters:
        raise CapExceeded(f"oracle caps are {max_candidates} candidates / {max_voters} voters, "
                          f"got {len(cands)} / {n_voters}")
    rule = instance.rule
    p_idx = cands.index(instance.preferred)
    base = instance.registered_scores()
    base_vec = [base[c] for c in cands]
    reg = _deltas(instance.registered, rule, cands)
    unreg = _deltas(instance.unregistered, rule, cands)
    k = instance.budget
    sizes = [k] if instance.exact else range(k + 1)
    width = len(cands)

    def wins(vec) -> bool:
        return vec[p_idx] == max(vec) if vec else True

    def total(vec, picks, table, sign):
        vec = list(vec)
        for i in picks:
            row = table[i]
            for c in range(width):
                vec[c] += sign * row[c]
        return vec

    found = None
    for size in sizes:
        if instance.action is Action.ADD:
            if size > len(unreg):
                continue
            for added in combinations(range(len(unreg)), size):
                if wins(total(base_vec, added, unreg, 1)):
                    found = ControlCertificate((), added)
                    break
        else:
            if size > len(reg) or size > len(unreg):
                continue
            for removed in combinations(range(len(reg)), size):
                after = total(base_vec, removed, reg, -1)
                for added in combinations(range(len(unreg)), size):
                    if wins(total(after, added, unreg, 1)):
                        found = ControlCertificate(removed, added)
                        break
                if found:
                    break
        if found:
            break
    answer = Answer.YES if found else Answer.NO
    return Verdict(answer, Backend.ORACLE, found, time.perf_counter() - start)


# -- randomized building blocks -------------------------------------------

@dataclass
class _Outcome:
    found: bool
    certificate: Any = None
    deterministic: bool = True
    error_log10: float = float("-inf")
    trials: int = 0
    note: str = ""


def _log10_sum(values: Sequence[float]) -> float:
    finite = [v for v in values if v != float("-inf")]
    if not finite:
        return float("-inf")
    top = max(finite)
    return top + math.log10(sum(10 ** (v - top) for v in finite))


def _from_decided(decided: Decided) -> _Outcome:
    return _Outcome(decided.answer, decided.certificate, True, note=decided.reason)


def _randomized_graph(out: ReductionOutput, cfg: RandomizedConfig) -> _Outcome:
    """Decide an exact perfect b-matching target and lift a witness on success."""
    target: BMatchingInstance = out.target
    answer = decide_exact_perfect_b_matching(target, cfg)
    if not answer.found:
        deterministic = answer.trials_run == 0
        return _Outcome(False, None, deterministic, answer.error_log10, answer.trials_run,
                        answer.reason)
    cert = find_exact_perfect_b_matching(target, cfg)
    lifted = out.lift(cert) if cert is not None else None
    note = "witness recovered" if lifted is not None else "witness extraction failed"
    return _Outcome(True, lifted, False, float("-inf"), answer.trials_run, note)


def _combine_sweep(outcomes: list[_Outcome]) -> _Outcome:
    for o in outcomes:
        if o.found:
            return o
    return _Outcome(False, None, all(o.deterministic for o in outcomes),
                    _log10_sum([o.error_log10 for o in outcomes]),
                    sum(o.trials for o in outcomes), "no exact size succeeded")


def _fl_ccav_exact(instance: ControlInstance, cfg: RandomizedConfig) -> _Outcome:
    pre = fl_ccav_exact_preprocess(instance)
    if isinstance(pre, Decided):
        return _from_decided(pre)
    out = fl_ccav_exact_to_epbbm(pre)
    if isinstance(out, Decided):
        return _from_decided(out)
    return _randomized_graph(out, cfg)


def _fl_ccrv_exact(instance: ControlInstance, cfg: RandomizedConfig) -> _Outcome:
    out = fl_ccrv_exact_to_red_blue_bipartite(instance)
    if isinstance(out, Decided):
        return _from_decided(out)
    return _randomized_graph(out, cfg)


def _twoapp_ccrv_exact(instance: ControlInstance, cfg: RandomizedConfig) -> _Outcome:
    out = twoapp_ccrv_exact_to_red_blue_b_matching(instance)
    if isinstance(out, Decided):
        return _from_decided(out)
    return _randomized_graph(out, cfg)


# -- polynomial building blocks -------------------------------------------

def _twoapp_ccav_exact_poly(instance: ControlInstance) -> _Outcome:
    out = twoapp_ccav_exact_to_maxcard_b_matching(instance)
    if isinstance(out, Decided):
        return _from_decided(out)
    cert = max_cardinality_b_matching(out.target)
    if len(cert.edges) >= out.threshold:
        return _Outcome(True, out.lift(cert), note=f"b-matching of size {len(cert.edges)}")
    return _Outcome(False, note=f"largest b-matching has {len(cert.edges)} < {out.threshold} edges")


def _twoapp_ccrv_poly(instance: ControlInstance) -> _Outcome:
    out = twoapp_ccrv_to_maxweight_b_matching(instance)
    if isinstance(out, Decided):
        return _from_decided(out)
    cert = max_weight_b_matching(out.target)
    weight = sum(out.target.graph.edges[i].weight for i in cert.edges)
    if weight >= out.threshold:
        return _Outcome(True, out.lift(cert), note=f"weight {weight} >= {out.threshold}")
    return _Outcome(False, note=f"weight {weight} < {out.threshold}")


def _sweep(instance: ControlInstance, exact_solver) -> _Outcome:
    sweep = (ccav_to_ccav_exact_sweep if instance.action is Action.ADD
             else ccrv_to_ccrv_exact_sweep)(instance)
    outcomes = []
    for exact in sweep.target:
        o = exact_solver(exact)
        outcomes.append(o)
        if o.found:
            break
    return _combine_sweep(outcomes)


def default_backend(instance: ControlInstance) -> Backend:
    if instance.rule is Rule.TWO_APPROVAL and not (instance.action is Action.REPLACE
                                                   and instance.exact):
        return Backend.POLY
    return Backend.RANDOMIZED


def solve_control(instance: ControlInstance, backend: Backend | None = None,
                  cfg: RandomizedConfig | None = None) -> Verdict:
    """Decide a control instance with the chosen backend.

    Yes answers carry a :class:`ControlCertificate` that replays through
    :func:`certificate_wins`; the randomized backend recovers it by
    self-reduction and notes when it could not.
    """
    backend = backend or default_backend(instance)
    cfg = cfg or RandomizedConfig()
    if backend is Backend.ORACLE:
        return oracle_control(instance)
    start = time.perf_counter()
    rule, action, exact = instance.rule, instance.action, instance.exact
    name = instance.problem_name()

    if backend is Backend.POLY:
        if rule is Rule.FIRST_LAST:
            raise UnsupportedBackend(f"no deterministic polynomial algorithm for {name}")
        if action is Action.ADD:
            outcome = (_twoapp_ccav_exact_poly(instance) if exact
                       else _sweep(instance, _twoapp_ccav_exact_poly))
        elif not exact:
            outcome = _twoapp_ccrv_poly(instance)
        else:
            raise UnsupportedBackend(f"no deterministic polynomial algorithm for {name}")
    else:
        if rule is Rule.FIRST_LAST:
            solver = _fl_ccav_exact if action is Action.ADD else _fl_ccrv_exact
        elif action is Action.REPLACE:
            solver = _twoapp_ccrv_exact
        else:
            raise UnsupportedBackend(f"{name} has no randomized pipeline; use the poly backend")
        outcome = solver(instance, cfg) if exact else _sweep(instance, lambda e: solver(e, cfg))

    if outcome.found:
        answer = Answer.YES
    else:
        answer = Answer.NO if outcome.deterministic else Answer.PROBABLY_NO
    randomized = backend is Backend.RANDOMIZED
    return Verdict(answer, backend, outcome.certificate, time.perf_counter() - start,
                   trials=cfg.trials if randomized else None,
                   seed=cfg.seed if randomized else None,
                   error_log10=outcome.error_log10 if answer is Answer.PROBABLY_NO else None,
                   note=outcome.note)


def replay(instance: ControlInstance, verdict: Verdict) -> bool:
    """True when a Yes verdict's certificate really makes the preferred candidate win."""
    return verdict.certificate is not None and certificate_wins(instance, verdict.certificate)


# -- exact cycle sum --------------------------------------------------------

ORACLE_MAX_VERTICES = 12
ORACLE_MAX_CYCLES = 200_000


def vertex_disjoint_cycles_oracle(instance: CycleSumInstance, cap: int = ORACLE_MAX_VERTICES
                                  ) -> MatchingCertificate | None:
    """Arcs of vertex-disjoint cycles with total length exactly k, or None."""
    g = instance.digraph
    if g.n > cap:
        raise CapExceeded(f"{g.n} vertices exceeds the cycle oracle cap of {cap}")
    k = instance.target_sum
    if k == 0:
        return MatchingCertificate(())
    first_arc: dict[tuple[str, str], int] = {}
    for e in g.edges:
        first_arc.setdefault((e.u, e.v), e.id)
    dg = nx.DiGraph()
    dg.add_nodes_from(g.vertices)
    dg.add_edges_from(first_arc)
    idx = g.index
    reach: dict[int, tuple[int, ...]] = {0: ()}
    for count, cycle in enumerate(nx.simple_cycles(dg)):
        if count >= ORACLE_MAX_CYCLES:
            raise CapExceeded("too many simple cycles for the oracle")
        mask = 0
        for v in cycle:
            mask |= 1 << idx[v]
        arcs = tuple(first_arc[(cycle[i], cycle[(i + 1) % len(cycle)])] for i in range(len(cycle)))
        for have, chosen in list(reach.items()):
            if have & mask == 0 and bin(have | mask).count("1") <= k and (have | mask) not in reach:
                reach[have | mask] = chosen + arcs
    for mask, arcs in reach.items():
        if bin(mask).count("1") == k:
            return MatchingCertificate(arcs)
    return None


def edge_disjoint_cycles_oracle(instance: CycleSumInstance, max_arcs: int = 40
                                ) -> MatchingCertificate | None:
    """Arcs of edge-disjoint cycles with total length exactly k, or None.

    Such an arc set is exactly a balanced one (in-degree = out-degree), so
    this searches arc subsets of size k with a balance vector, memoized.
    """
    g = instance.digraph
    if len(g.edges) > max_arcs:
        raise CapExceeded(f"{len(g.edges)} arcs exceeds the oracle cap of {max_arcs}")
    k = instance.target_sum
    idx = g.index
    arcs = [(idx[e.u], idx[e.v]) for e in g.edges]
    m = len(arcs)
    remaining = [[0] * g.n for _ in range(m + 1)]
    for i in range(m - 1, -1, -1):
        remaining[i] = list(remaining[i + 1])
        u, v = arcs[i]
        remaining[i][u] += 1
        if v != u:
            remaining[i][v] += 1
    dead: set = set()
    chosen: list[int] = []

    def search(i: int, balance: tuple[int, ...], size: int) -> bool:
        if size > k or size + (m - i) < k:
            return False
        if any(abs(b) > r for b, r in zip(balance, remaining[i])):
            return False
        if i == m:
            return size == k and not any(balance)
        key = (i, balance, size)
        if key in dead:
            return False
        u, v = arcs[i]
        bal = list(balance)
        bal[u] += 1
        bal[v] -= 1
        chosen.append(i)
        if search(i + 1, tuple(bal), size + 1):
            return True
        chosen.pop()
        if search(i + 1, balance, size):
            return True
        dead.add(key)
        return False

    if search(0, (0,) * g.n, 0):
        return MatchingCertificate(tuple(chosen))
    return None


def solve_exact_cycle_sum(instance: CycleSumInstance, backend: Backend = Backend.ORACLE,
                          cfg: RandomizedConfig | None = None) -> Verdict:
    start = time.perf_counter()
    if backend is Backend.ORACLE:
        cert = vertex_disjoint_cycles_oracle(instance)
        answer = Answer.YES if cert is not None else Answer.NO
        return Verdict(answer, backend, cert, time.perf_counter() - start)
    if backend is not Backend.RANDOMIZED:
        raise UnsupportedBackend("exact cycle sum has oracle and randomized backends only")
    cfg = cfg or RandomizedConfig()
    split = ecs_to_edge_disjoint(instance)
    control = edge_disjoint_ecs_to_fl_ccav_exact(split.target)
    verdict = solve_control(control.target, Backend.RANDOMIZED, cfg)
    if verdict.answer is Answer.YES and verdict.certificate is not None:
        verdict.certificate = split.lift(control.lift(verdict.certificate))
    verdict.elapsed = time.perf_counter() - start
    return verdict


# -- matching instances -----------------------------------------------------

def solve_matching(instance: BMatchingInstance, mode: Mode = Mode.PERFECT_EXACT,
                   backend: Backend = Backend.RANDOMIZED, threshold: int | None = None,
                   cfg: RandomizedConfig | None = None) -> Verdict:
    """Exact perfect b-matching (oracle or randomized) or max b-matching against a threshold."""
    start = time.perf_counter()
    cfg = cfg or RandomizedConfig()
    if mode is not Mode.PERFECT_EXACT:
        if backend is Backend.RANDOMIZED:
            raise UnsupportedBackend("optimization modes use the poly backend")
        solver = max_weight_b_matching if mode is Mode.MAX_WEIGHT else max_cardinality_b_matching
        cert = solver(instance)
        if mode is Mode.MAX_WEIGHT:
            value = sum(instance.graph.edges[i].weight for i in cert.edges)
        else:
            value = len(cert.edges)
        ok = threshold is None or value >= threshold
        return Verdict(Answer.YES if ok else Answer.NO, Backend.POLY, cert,
                       time.perf_counter() - start, note=f"optimum {value}",
                       details={"value": value})
    if backend is Backend.ORACLE:
        cert = find_exact_b_matching(instance)
        answer = Answer.YES if cert is not None else Answer.NO
        return Verdict(answer, backend, cert, time.perf_counter() - start)
    if backend is Backend.POLY:
        raise UnsupportedBackend("exact perfect matching has no deterministic polynomial algorithm")
    answer = decide_exact_perfect_b_matching(instance, cfg)
    if answer.found:
        cert = find_exact_perfect_b_matching(instance, cfg)
        if cert is not None and not verify_certificate(instance, cert):
            cert = None
        return Verdict(Answer.YES, backend, cert, time.perf_counter() - start, cfg.trials,
                       cfg.seed, note=answer.reason)
    result = Answer.NO if answer.trials_run == 0 else Answer.PROBABLY_NO
    return Verdict(result, backend, None, time.perf_counter() - start, cfg.trials, cfg.seed,
                   answer.error_log10 if result is Answer.PROBABLY_NO else None, answer.reason)
