"""Solver-versus-oracle fuzzing for every control row, exact cycle sum and
exact perfect b-matching.

A randomized "Yes" contradicted by the oracle is a false positive and must
never happen; a randomized "ProbablyNo" on a yes instance is a false
negative and is only expected with negligible probability.
"""

from __future__ import annotations

import random
import statistics
import time
from collections.abc import Callable
from dataclasses import dataclass, field
from pathlib import Path

from ..election import Action, Rule, format_instance
from ..errors import ContractError
from ..graph import format_graph, verify_certificate
from ..matching import RandomizedConfig, find_exact_b_matching
from ..reductions import verify_cycle_certificate
from ..solvers import (ORACLE_MAX_CANDIDATES, ORACLE_MAX_VOTERS, Answer, Backend, oracle_control,
                       replay, solve_control, solve_exact_cycle_sum, solve_matching,
                       vertex_disjoint_cycles_oracle)
from . import generators as gen


@dataclass(frozen=True)
class FuzzTarget:
    name: str
    kind: str  # "control", "cycles" or "matching"
    backend: Backend
    rule: Rule | None = None
    action: Action | None = None
    exact: bool = False


CONTROL_TARGETS = tuple(
    FuzzTarget(f"{rule.value}-{action.value}{'-exact' if exact else ''}-{backend.value}",
               "control", backend, rule, action, exact)
    for rule, action, exact, backend in (
        (Rule.FIRST_LAST, Action.ADD, True, Backend.RANDOMIZED),
        (Rule.FIRST_LAST, Action.ADD, False, Backend.RANDOMIZED),
        (Rule.FIRST_LAST, Action.REPLACE, True, Backend.RANDOMIZED),
        (Rule.FIRST_LAST, Action.REPLACE, False, Backend.RANDOMIZED),
        (Rule.TWO_APPROVAL, Action.ADD, True, Backend.POLY),
        (Rule.TWO_APPROVAL, Action.ADD, False, Backend.POLY),
        (Rule.TWO_APPROVAL, Action.REPLACE, True, Backend.RANDOMIZED),
        (Rule.TWO_APPROVAL, Action.REPLACE, False, Backend.POLY),
        (Rule.TWO_APPROVAL, Action.REPLACE, False, Backend.RANDOMIZED),
    )
)

TARGETS = CONTROL_TARGETS + (
    FuzzTarget("exact-cycle-sum-randomized", "cycles", Backend.RANDOMIZED),
    FuzzTarget("exact-perfect-b-matching-randomized", "matching", Backend.RANDOMIZED),
)


TARGETS_BY_NAME = {t.name: t for t in TARGETS}


@dataclass(frozen=True)
class FuzzConfig:
    targets: tuple[FuzzTarget, ...] = TARGETS
    count: int = 200
    seed: int = 0
    max_candidates: int = 6
    max_voters: int = 8
    max_vertices: int = 7
    randomized: RandomizedConfig = field(default_factory=RandomizedConfig)

    def __post_init__(self):
        if self.max_candidates > ORACLE_MAX_CANDIDATES or self.max_voters > ORACLE_MAX_VOTERS:
            raise ContractError("fuzz caps exceed what the control oracle can enumerate")
        if self.max_vertices > 10:
            raise ContractError("fuzz graphs are capped at 10 vertices")
        if self.count < 0:
            raise ContractError("count must be nonnegative")


@dataclass
class FuzzRow:
    name: str
    backend: Backend
    instances: int = 0
    yes: int = 0
    agree: int = 0
    false_positives: int = 0
    false_negatives: int = 0
    certificate_failures: int = 0
    elapsed: float = 0.0
    times: list[float] = field(default_factory=list)
    worst_error_log10: float = float("-inf")
    failures: list[int] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (self.agree == self.instances and self.certificate_failures == 0)

    def percentile_ms(self, q: float) -> float:
        if not self.times:
            return 0.0
        if len(self.times) == 1:
            return 1000 * self.times[0]
        cuts = statistics.quantiles(self.times, n=100, method="inclusive")
        return 1000 * cuts[min(98, max(0, round(q) - 1))]


@dataclass
class FuzzReport:
    seed: int
    rows: list[FuzzRow] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.rows)

    def to_tsv(self) -> str:
        lines = ["target\tbackend\tinstances\tyes\tagree\tfalse_positives\tfalse_negatives\t"
                 "certificate_failures\tworst_error_log10\tp50_ms\tp90_ms\tseconds"]
        for r in self.rows:
            bound = "-" if r.worst_error_log10 == float("-inf") else f"{r.worst_error_log10:.1f}"
            lines.append(f"{r.name}\t{r.backend.value}\t{r.instances}\t{r.yes}\t{r.agree}\t"
                         f"{r.false_positives}\t{r.false_negatives}\t{r.certificate_failures}\t"
                         f"{bound}\t{r.percentile_ms(50):.2f}\t{r.percentile_ms(90):.2f}\t"
                         f"{r.elapsed:.2f}")
        return "\n".join(lines) + "\n"


def _one(target: FuzzTarget, rng: random.Random, config: FuzzConfig, cfg: RandomizedConfig):
    """(oracle answer, solver verdict, certificate ok or None, instance text)."""
    if target.kind == "control":
        inst = gen.random_control(rng, target.rule, target.action, target.exact,
                                  config.max_candidates, config.max_voters)
        truth = oracle_control(inst).answer.positive
        verdict = solve_control(inst, target.backend, cfg)
        cert_ok = replay(inst, verdict) if verdict.answer is Answer.YES else None
        return truth, verdict, cert_ok, format_instance(inst)
    if target.kind == "cycles":
        inst = gen.random_digraph(rng, max_vertices=min(5, config.max_vertices), max_arcs=8)
        truth = vertex_disjoint_cycles_oracle(inst) is not None
        verdict = solve_exact_cycle_sum(inst, target.backend, cfg)
        cert_ok = None
        if verdict.answer is Answer.YES:
            cert_ok = verdict.certificate is not None and bool(
                verify_cycle_certificate(inst, verdict.certificate))
        return truth, verdict, cert_ok, format_graph(inst)
    inst = gen.random_b_matching(rng, max_vertices=config.max_vertices, max_edges=9)
    truth = find_exact_b_matching(inst) is not None
    verdict = solve_matching(inst, backend=target.backend, cfg=cfg)
    cert_ok = None
    if verdict.answer is Answer.YES:
        cert_ok = verdict.certificate is not None and bool(verify_certificate(inst, verdict.certificate))
    return truth, verdict, cert_ok, format_graph(inst)


def run_fuzz(config: FuzzConfig | None = None, dump_dir: Path | None = None,
             progress: Callable[[FuzzRow], None] | None = None) -> FuzzReport:
    """Each instance draws from its own generator seeded by (seed, target, index)."""
    config = config or FuzzConfig()
    seed = config.seed
    report = FuzzReport(seed)
    for target in config.targets:
        row = FuzzRow(target.name, target.backend)
        start = time.perf_counter()
        for i in range(config.count):
            rng = random.Random(f"{seed}:{target.name}:{i}")
            cfg = config.randomized.with_seed(seed * 1_000_003 + i)
            truth, verdict, cert_ok, text = _one(target, rng, config, cfg)
            answer = verdict.answer
            row.times.append(verdict.elapsed)
            if verdict.error_log10 is not None:
                row.worst_error_log10 = max(row.worst_error_log10, verdict.error_log10)
            row.instances += 1
            row.yes += truth
            said_yes = answer is Answer.YES
            if said_yes == truth:
                row.agree += 1
            elif said_yes:
                row.false_positives += 1
            else:
                row.false_negatives += 1
            if cert_ok is False:
                row.certificate_failures += 1
            if said_yes != truth or cert_ok is False:
                row.failures.append(i)
                if dump_dir is not None:
                    dump_dir.mkdir(parents=True, exist_ok=True)
                    (dump_dir / f"{target.name}-{seed}-{i}.txt").write_text(text)
        row.elapsed = time.perf_counter() - start
        report.rows.append(row)
        if progress is not None:
            progress(row)
    return report
