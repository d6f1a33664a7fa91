"""Timing runs on random instances larger than any oracle can handle."""

from __future__ import annotations

import random
import statistics
from dataclasses import dataclass

from ..election import Action, Rule
from ..matching import RandomizedConfig
from ..solvers import Answer, Backend, replay, solve_control
from .generators import random_control_sized


@dataclass(frozen=True)
class BenchCase:
    name: str
    rule: Rule
    action: Action
    exact: bool
    backend: Backend
    candidates: int
    voters: int
    limit: float = 10.0

    @property
    def budget(self) -> int:
        return max(1, self.voters // 10)


@dataclass
class BenchResult:
    case: BenchCase
    seconds: list[float]
    answers: list[Answer]
    certificate_ok: bool

    @property
    def median(self) -> float:
        return statistics.median(self.seconds)

    @property
    def worst(self) -> float:
        return max(self.seconds)

    @property
    def within_limit(self) -> bool:
        return self.worst < self.case.limit


DEFAULT_CASES = (
    BenchCase("2approval-replace-poly-10x40", Rule.TWO_APPROVAL, Action.REPLACE, False,
              Backend.POLY, 10, 40),
    BenchCase("2approval-replace-poly-25x100", Rule.TWO_APPROVAL, Action.REPLACE, False,
              Backend.POLY, 25, 100),
    BenchCase("2approval-replace-poly-50x200", Rule.TWO_APPROVAL, Action.REPLACE, False,
              Backend.POLY, 50, 200),
    BenchCase("firstlast-replace-exact-randomized-8x12", Rule.FIRST_LAST, Action.REPLACE, True,
              Backend.RANDOMIZED, 8, 12),
)


def run_bench(cases: tuple[BenchCase, ...] = DEFAULT_CASES, seed: int = 0, repeats: int = 3,
              cfg: RandomizedConfig | None = None) -> list[BenchResult]:
    """Half the voters are registered, half unregistered; the budget is a tenth.

    Each repeat draws a fresh instance; every Yes certificate is replayed.
    """
    cfg = cfg or RandomizedConfig(seed=seed)
    results = []
    for case in cases:
        seconds, answers, cert_ok = [], [], True
        for rep in range(repeats):
            rng = random.Random(f"{seed}:{case.name}:{rep}")
            half = case.voters // 2
            inst = random_control_sized(rng, case.rule, case.action, case.exact, case.candidates,
                                        half, case.voters - half, case.budget)
            verdict = solve_control(inst, case.backend, cfg.with_seed(seed + rep))
            seconds.append(verdict.elapsed)
            answers.append(verdict.answer)
            if verdict.answer is Answer.YES:
                cert_ok = cert_ok and replay(inst, verdict)
        results.append(BenchResult(case, seconds, answers, cert_ok))
    return results


def bench_tsv(results: list[BenchResult]) -> str:
    lines = ["case\tcandidates\tvoters\tbackend\trepeats\tyes\tcertificates_ok\t"
             "median_s\tmax_s\tlimit_s"]
    for r in results:
        c = r.case
        yes = sum(a is Answer.YES for a in r.answers)
        lines.append(f"{c.name}\t{c.candidates}\t{c.voters}\t{c.backend.value}\t{len(r.seconds)}\t"
                     f"{yes}\t{r.certificate_ok}\t{r.median:.3f}\t{r.worst:.3f}\t{c.limit}")
    return "\n".join(lines) + "\n"
