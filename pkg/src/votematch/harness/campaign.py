"""Reduction equivalence campaigns.

For every registered reduction, draw seeded source instances, decide the
source with an exhaustive oracle and the produced target with an oracle (or
with the randomized solver when the target is too large to enumerate), and
count disagreements.  When the target side yields a witness it is lifted
back and replayed on the source.
"""

from __future__ import annotations

import random
import time
from collections.abc import Callable, Iterable
from dataclasses import dataclass, field, replace
from pathlib import Path

from ..election import (Action, ControlInstance, Rule, certificate_wins, format_instance)
from ..graph import (BMatchingInstance, CycleSumInstance, MatchingCertificate, Mode, format_graph,
                     verify_certificate)
from ..matching import (RandomizedConfig, brute_force_max_b_matching,
                        decide_exact_pm_randomized, find_exact_b_matching, max_cardinality_b_matching,
                        max_weight_b_matching)
from ..reductions import (REGISTRY, Decided, Normalized, ReductionOutput,
                          verify_cycle_certificate)
from ..solvers import edge_disjoint_cycles_oracle, oracle_control, vertex_disjoint_cycles_oracle
from . import generators as gen

# target graphs from the gadgets outgrow the default oracle cap
TARGET_VERTEX_CAP = 48
TARGET_ORACLE_LIMIT = 40


@dataclass
class Probe:
    """One source instance pushed through one reduction."""

    source: bool
    target: bool
    lift_ok: bool | None = None
    decided: bool = False
    text: str = ""


@dataclass
class CampaignRow:
    name: str
    instances: int = 0
    yes: int = 0
    decided: int = 0
    disagreements: int = 0
    lift_checked: int = 0
    lift_failures: int = 0
    elapsed: float = 0.0
    failures: list[int] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.disagreements == 0 and self.lift_failures == 0


@dataclass
class RunReport:
    seed: int
    rows: list[CampaignRow] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.rows)

    def to_tsv(self) -> str:
        head = "reduction\tinstances\tyes\tdecided\tdisagreements\tlift_checked\tlift_failures\tseconds"
        lines = [head]
        for r in self.rows:
            lines.append(f"{r.name}\t{r.instances}\t{r.yes}\t{r.decided}\t{r.disagreements}\t"
                         f"{r.lift_checked}\t{r.lift_failures}\t{r.elapsed:.2f}")
        return "\n".join(lines) + "\n"


def _control_text(instance: ControlInstance) -> str:
    return format_instance(instance)


def _graph_text(instance: BMatchingInstance | CycleSumInstance) -> str:
    return format_graph(instance)


def _find(instance: BMatchingInstance) -> MatchingCertificate | None:
    return find_exact_b_matching(instance, cap=TARGET_VERTEX_CAP)


def _control_until(rng: random.Random, rule: Rule, action: Action, exact: bool,
                   accept: Callable[[ControlInstance], bool] = lambda _: True,
                   attempts: int = 50, **kw) -> ControlInstance:
    inst = gen.random_control(rng, rule, action, exact, **kw)
    for _ in range(attempts):
        if accept(inst):
            break
        inst = gen.random_control(rng, rule, action, exact, **kw)
    return inst


def _reaches_target(rng: random.Random, name: str, share: float = 0.75):
    """Acceptance test that, for a ``share`` of draws, rejects instances the
    reduction settles on its own, so most probes exercise the construction."""
    insist = rng.random() < share
    func = REGISTRY[name].func
    return lambda inst: not insist or not isinstance(func(inst), Decided)


def _graph_until(rng: random.Random, accept: Callable[[BMatchingInstance], bool],
                 attempts: int = 50, **kw) -> BMatchingInstance:
    inst = gen.random_b_matching(rng, **kw)
    for _ in range(attempts):
        if accept(inst):
            break
        inst = gen.random_b_matching(rng, **kw)
    return inst


def _control_to_graph(src: ControlInstance, out: ReductionOutput | Decided) -> Probe:
    source = oracle_control(src).answer.positive
    if isinstance(out, Decided):
        lift = certificate_wins(src, out.certificate) if out.certificate is not None else None
        return Probe(source, out.answer, lift, True, _control_text(src))
    cert = _find(out.target)
    lift = certificate_wins(src, out.lift(cert)) if cert is not None else None
    return Probe(source, cert is not None, lift, False, _control_text(src))


def _control_to_control(src: ControlInstance, out: ReductionOutput | Decided,
                        **caps) -> Probe:
    source = oracle_control(src).answer.positive
    if isinstance(out, Decided):
        lift = certificate_wins(src, out.certificate) if out.certificate is not None else None
        return Probe(source, out.answer, lift, True, _control_text(src))
    verdict = oracle_control(out.target, **caps)
    lift = None
    if verdict.certificate is not None:
        lift = certificate_wins(src, out.lift(verdict.certificate))
    return Probe(source, verdict.answer.positive, lift, False, _control_text(src))


def _graph_to_graph(src: BMatchingInstance, out: ReductionOutput | Decided) -> Probe:
    source = _find(src) is not None
    if isinstance(out, Decided):
        return Probe(source, out.answer, None, True, _graph_text(src))
    cert = _find(out.target)
    lift = None
    if cert is not None:
        lift = bool(verify_certificate(src, out.lift(cert), Mode.PERFECT_EXACT))
    return Probe(source, cert is not None, lift, False, _graph_text(src))


# -- per reduction: draw a source instance, then check one -----------------
#
# A check runs the reduction on a given source, decides both sides and
# replays the lifted witness; the CLI's ``reduce --verify`` uses it as is.

def check_ecs_to_edge_disjoint(src: CycleSumInstance, cfg: RandomizedConfig) -> Probe:
    out = REGISTRY["ecs_to_edge_disjoint"].func(src)
    cert = edge_disjoint_cycles_oracle(out.target)
    lift = None
    if cert is not None:
        lift = bool(verify_cycle_certificate(src, out.lift(cert), vertex_disjoint=True))
    source = vertex_disjoint_cycles_oracle(src) is not None
    return Probe(source, cert is not None, lift, False, _graph_text(src))


def draw_ecs_to_edge_disjoint(rng: random.Random) -> CycleSumInstance:
    return gen.random_digraph(rng, max_vertices=5, max_arcs=9, loops=True)


def check_edge_disjoint_ecs_to_fl_ccav_exact(src: CycleSumInstance, cfg: RandomizedConfig) -> Probe:
    out = REGISTRY["edge_disjoint_ecs_to_fl_ccav_exact"].func(src)
    verdict = oracle_control(out.target, max_candidates=16, max_voters=24)
    lift = None
    if verdict.certificate is not None:
        lift = bool(verify_cycle_certificate(src, out.lift(verdict.certificate),
                                             vertex_disjoint=False))
    source = edge_disjoint_cycles_oracle(src) is not None
    return Probe(source, verdict.answer.positive, lift, False, _graph_text(src))


def draw_edge_disjoint_ecs_to_fl_ccav_exact(rng: random.Random) -> CycleSumInstance:
    return gen.random_digraph(rng, max_vertices=5, max_arcs=8)


def check_fl_ccav_exact_preprocess(src: ControlInstance, cfg: RandomizedConfig) -> Probe:
    out = REGISTRY["fl_ccav_exact_preprocess"].func(src)
    source = oracle_control(src).answer.positive
    if isinstance(out, Decided):
        lift = certificate_wins(src, out.certificate) if out.certificate is not None else None
        return Probe(source, out.answer, lift, True, _control_text(src))
    p = out.instance.preferred
    neutral = all(w.first != p and w.last != p for w in out.instance.unregistered)
    verdict = oracle_control(out.instance)
    lift = neutral if verdict.certificate is None else (
        neutral and certificate_wins(src, out.lift(verdict.certificate)))
    return Probe(source, verdict.answer.positive, lift, False, _control_text(src))


def draw_fl_ccav_exact_preprocess(rng: random.Random) -> ControlInstance:
    return gen.random_control(rng, Rule.FIRST_LAST, Action.ADD, True)


def _normalizes(inst: ControlInstance) -> bool:
    return isinstance(REGISTRY["fl_ccav_exact_preprocess"].func(inst), Normalized)


def check_fl_ccav_exact_to_epbbm(src: ControlInstance, cfg: RandomizedConfig) -> Probe:
    pre = REGISTRY["fl_ccav_exact_preprocess"].func(src)
    out = pre if isinstance(pre, Decided) else REGISTRY["fl_ccav_exact_to_epbbm"].func(pre)
    return _control_to_graph(src, out)


def draw_fl_ccav_exact_to_epbbm(rng: random.Random) -> ControlInstance:
    return _control_until(rng, Rule.FIRST_LAST, Action.ADD, True, _normalizes)


def check_b_matching_to_matching(src: BMatchingInstance, cfg: RandomizedConfig) -> Probe:
    return _graph_to_graph(src, REGISTRY["b_matching_to_matching"].func(src))


def draw_b_matching_to_matching(rng: random.Random) -> BMatchingInstance:
    return _graph_until(rng, _reaches_target(rng, "b_matching_to_matching"),
                        max_vertices=6, max_edges=7)


def check_red_blue_to_red(src: BMatchingInstance, cfg: RandomizedConfig) -> Probe:
    out = REGISTRY["red_blue_to_red"].func(src)
    source = _find(src) is not None
    if isinstance(out, Decided):
        return Probe(source, out.answer, None, True, _graph_text(src))
    target = out.target
    if target.graph.n <= TARGET_ORACLE_LIMIT:
        cert = _find(target)
        lift = bool(verify_certificate(src, out.lift(cert))) if cert is not None else None
        return Probe(source, cert is not None, lift, False, _graph_text(src))
    answer = decide_exact_pm_randomized(target.graph, target.red_target, cfg)
    return Probe(source, answer.found, None, False, _graph_text(src))


def draw_red_blue_to_red(rng: random.Random) -> BMatchingInstance:
    src = _graph_until(rng, lambda g: g.blue_target is not None, max_vertices=5, max_edges=5)
    if src.blue_target is None:
        src = replace(src, blue_target=rng.randint(0, 2))
    return src


def check_fl_ccav_exact_to_fl_ccrv(src: ControlInstance, cfg: RandomizedConfig,
                                   exact: bool = False) -> Probe:
    pre = REGISTRY["fl_ccav_exact_preprocess"].func(src)
    if isinstance(pre, Decided):
        return _control_to_control(src, pre)
    out = REGISTRY["fl_ccav_exact_to_fl_ccrv"].func(pre, exact=exact)
    return _control_to_control(src, out, max_candidates=16, max_voters=40)


def draw_fl_ccav_exact_to_fl_ccrv(rng: random.Random) -> ControlInstance:
    return _control_until(rng, Rule.FIRST_LAST, Action.ADD, True, _normalizes,
                          max_candidates=4, max_voters=6)


def _check_sweep(name: str, src: ControlInstance) -> Probe:
    out = REGISTRY[name].func(src)
    source = oracle_control(src).answer.positive
    target, lift = False, None
    for exact in out.target:
        verdict = oracle_control(exact)
        if verdict.answer.positive:
            target = True
            lift = certificate_wins(src, out.lift(verdict.certificate))
            break
    return Probe(source, target, lift, False, _control_text(src))


def check_ccrv_to_ccrv_exact_sweep(src: ControlInstance, cfg: RandomizedConfig) -> Probe:
    return _check_sweep("ccrv_to_ccrv_exact_sweep", src)


def draw_ccrv_to_ccrv_exact_sweep(rng: random.Random) -> ControlInstance:
    rule = rng.choice([Rule.FIRST_LAST, Rule.TWO_APPROVAL])
    return gen.random_control(rng, rule, Action.REPLACE, False)


def check_ccav_to_ccav_exact_sweep(src: ControlInstance, cfg: RandomizedConfig) -> Probe:
    return _check_sweep("ccav_to_ccav_exact_sweep", src)


def draw_ccav_to_ccav_exact_sweep(rng: random.Random) -> ControlInstance:
    rule = rng.choice([Rule.FIRST_LAST, Rule.TWO_APPROVAL])
    return gen.random_control(rng, rule, Action.ADD, False)


def check_fl_ccrv_exact_to_red_blue_bipartite(src: ControlInstance, cfg: RandomizedConfig) -> Probe:
    return _control_to_graph(src, REGISTRY["fl_ccrv_exact_to_red_blue_bipartite"].func(src))


def draw_fl_ccrv_exact_to_red_blue_bipartite(rng: random.Random) -> ControlInstance:
    name = "fl_ccrv_exact_to_red_blue_bipartite"
    return _control_until(rng, Rule.FIRST_LAST, Action.REPLACE, True, _reaches_target(rng, name))


def check_twoapp_ccrv_exact_to_red_blue_b_matching(src: ControlInstance,
                                                   cfg: RandomizedConfig) -> Probe:
    return _control_to_graph(src, REGISTRY["twoapp_ccrv_exact_to_red_blue_b_matching"].func(src))


def draw_twoapp_ccrv_exact_to_red_blue_b_matching(rng: random.Random) -> ControlInstance:
    name = "twoapp_ccrv_exact_to_red_blue_b_matching"
    return _control_until(rng, Rule.TWO_APPROVAL, Action.REPLACE, True, _reaches_target(rng, name))


def check_epm_to_restricted_epm(src: BMatchingInstance, cfg: RandomizedConfig) -> Probe:
    return _graph_to_graph(src, REGISTRY["epm_to_restricted_epm"].func(src))


def draw_epm_to_restricted_epm(rng: random.Random) -> BMatchingInstance:
    return _graph_until(rng, _reaches_target(rng, "epm_to_restricted_epm"),
                        max_vertices=8, max_edges=9, blue=False, unit=True)


def check_restricted_epm_to_twoapp_ccrv_exact(src: BMatchingInstance,
                                              cfg: RandomizedConfig) -> Probe:
    out = REGISTRY["restricted_epm_to_twoapp_ccrv_exact"].func(src)
    source = _find(src) is not None
    if isinstance(out, Decided):
        return Probe(source, out.answer, None, True, _graph_text(src))
    verdict = oracle_control(out.target, max_candidates=16, max_voters=24)
    lift = None
    if verdict.certificate is not None:
        lift = bool(verify_certificate(src, out.lift(verdict.certificate)))
    return Probe(source, verdict.answer.positive, lift, False, _graph_text(src))


def draw_restricted_epm_to_twoapp_ccrv_exact(rng: random.Random) -> BMatchingInstance:
    return gen.random_restricted_epm(rng, max_vertices=6, max_edges=7)


def _threshold_check(src: ControlInstance, out: ReductionOutput | Decided, weighted: bool) -> Probe:
    source = oracle_control(src).answer.positive
    if isinstance(out, Decided):
        lift = certificate_wins(src, out.certificate) if out.certificate is not None else None
        return Probe(source, out.answer, lift, True, _control_text(src))
    best = brute_force_max_b_matching(out.target, weighted, cap=TARGET_VERTEX_CAP)
    target = best >= out.threshold
    lift = None
    if target:
        cert = (max_weight_b_matching if weighted else max_cardinality_b_matching)(out.target)
        lift = certificate_wins(src, out.lift(cert))
    return Probe(source, target, lift, False, _control_text(src))


def check_twoapp_ccav_exact_to_maxcard_b_matching(src: ControlInstance,
                                                  cfg: RandomizedConfig) -> Probe:
    out = REGISTRY["twoapp_ccav_exact_to_maxcard_b_matching"].func(src)
    return _threshold_check(src, out, weighted=False)


def draw_twoapp_ccav_exact_to_maxcard_b_matching(rng: random.Random) -> ControlInstance:
    name = "twoapp_ccav_exact_to_maxcard_b_matching"
    return _control_until(rng, Rule.TWO_APPROVAL, Action.ADD, True, _reaches_target(rng, name))


def check_twoapp_ccrv_to_maxweight_b_matching(src: ControlInstance, cfg: RandomizedConfig) -> Probe:
    out = REGISTRY["twoapp_ccrv_to_maxweight_b_matching"].func(src)
    return _threshold_check(src, out, weighted=True)


def draw_twoapp_ccrv_to_maxweight_b_matching(rng: random.Random) -> ControlInstance:
    name = "twoapp_ccrv_to_maxweight_b_matching"
    return _control_until(rng, Rule.TWO_APPROVAL, Action.REPLACE, False, _reaches_target(rng, name))


CHECKS: dict[str, Callable[..., Probe]] = {name: globals()[f"check_{name}"] for name in REGISTRY}
DRAWS: dict[str, Callable[[random.Random], object]] = {
    name: globals()[f"draw_{name}"] for name in REGISTRY
}


def probe(name: str, rng: random.Random, cfg: RandomizedConfig) -> Probe:
    src = DRAWS[name](rng)
    if name == "fl_ccav_exact_to_fl_ccrv":
        # cover both the budget and the exact replacement targets
        return check_fl_ccav_exact_to_fl_ccrv(src, cfg, exact=rng.random() < 0.5)
    return CHECKS[name](src, cfg)


def run_campaign(names: Iterable[str] | None = None, instances: int = 1000, seed: int = 0,
                 cfg: RandomizedConfig | None = None, dump_dir: Path | None = None,
                 progress: Callable[[CampaignRow], None] | None = None) -> RunReport:
    """Run ``instances`` probes for each named reduction (all by default)."""
    cfg = cfg or RandomizedConfig(seed=seed)
    report = RunReport(seed)
    for name in names or REGISTRY:
        row = CampaignRow(name)
        start = time.perf_counter()
        for i in range(instances):
            rng = random.Random(f"{seed}:{name}:{i}")
            result = probe(name, rng, cfg.with_seed(seed * 1_000_003 + i))
            row.instances += 1
            row.yes += result.source
            row.decided += result.decided
            bad = result.source != result.target
            if result.lift_ok is not None:
                row.lift_checked += 1
                if not result.lift_ok:
                    row.lift_failures += 1
                    bad = True
            if result.source != result.target:
                row.disagreements += 1
            if bad:
                row.failures.append(i)
                if dump_dir is not None:
                    dump_dir.mkdir(parents=True, exist_ok=True)
                    (dump_dir / f"{name}-{seed}-{i}.txt").write_text(result.text)
        row.elapsed = time.perf_counter() - start
        report.rows.append(row)
        if progress is not None:
            progress(row)
    return report
