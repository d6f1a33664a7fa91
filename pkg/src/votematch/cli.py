"""Command-line front end.

    votematch solve FILE [--backend B] [--seed S] [--trials T] [--prime Q] [--out PATH]
    votematch oracle FILE
    votematch reduce FILE --rule NAME [--verify] [--out PATH] [--trace PATH]
    votematch fuzz [--target NAME ...] [--reductions] [--count N] [--seed S] [--out PATH] [--dump DIR]
    votematch bench [--case NAME ...] [--repeats R] [--seed S] [--out PATH]

``solve`` and ``oracle`` exit 0 on Yes, 1 on No or ProbablyNo and 2 on any
error.  ``reduce --verify``, ``fuzz`` and ``bench`` exit 1 when a check fails.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .election import ControlCertificate, ControlInstance, format_instance, parse_instance
from .errors import ParseError, VotematchError
from .graph import (BMatchingInstance, CycleSumInstance, GraphDocument, Mode, format_graph,
                    parse_graph)
from .matching.algebraic import MERSENNE_61, RandomizedConfig
from .reductions import REGISTRY, Decided, Normalized, ReductionOutput
from .solvers import Answer, Backend, Verdict, solve_control, solve_exact_cycle_sum, solve_matching

EXIT_YES, EXIT_NO, EXIT_ERROR = 0, 1, 2

# reductions whose input must be preprocessed first
_NEEDS_PREPROCESS = {"fl_ccav_exact_to_epbbm", "fl_ccav_exact_to_fl_ccrv"}


def load(path: str) -> ControlInstance | GraphDocument:
    """Parse an election file or a graph file; the two are told apart by their keys."""
    text = Path(path).read_text() if path != "-" else sys.stdin.read()
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith(("vertices:", "directed")):
            return parse_graph(text)
        return parse_instance(text)
    raise ParseError("empty instance file")


def _config(args) -> RandomizedConfig:
    return RandomizedConfig(args.prime, args.trials, args.seed)


def _describe_certificate(instance, cert) -> list[str]:
    if cert is None:
        return []
    if isinstance(cert, ControlCertificate):
        lines = []
        for i in cert.removed:
            lines.append(f"remove R{i + 1}: {instance.registered[i]}")
        for j in cert.added:
            lines.append(f"add U{j + 1}: {instance.unregistered[j]}")
        return lines or ["no change"]
    graph = instance.digraph if isinstance(instance, CycleSumInstance) else instance.graph
    arrow = "->" if graph.directed else "--"
    out = []
    for i in cert.edges:
        e = graph.edges[i]
        tag = f" {e.color.value}" if e.color.value != "none" else ""
        out.append(f"edge {i}: {e.u} {arrow} {e.v}{tag}")
    return out or ["empty edge set"]


def render_verdict(instance, verdict: Verdict, problem: str) -> str:
    lines = [verdict.answer.value, f"problem: {problem}", f"backend: {verdict.backend.value}"]
    if verdict.trials is not None:
        lines.append(f"trials: {verdict.trials}  seed: {verdict.seed}")
    if verdict.error_log10 is not None:
        lines.append(f"error bound: 10^{verdict.error_log10:.1f}")
    if verdict.note:
        lines.append(f"note: {verdict.note}")
    lines.append(f"time: {verdict.elapsed:.3f} s")
    cert = _describe_certificate(instance, verdict.certificate)
    if cert:
        lines.append("certificate:")
        lines += [f"  {c}" for c in cert]
    return "\n".join(lines) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    sys.stdout.write(text)


def _solve(loaded, backend: Backend | None, cfg: RandomizedConfig) -> tuple[object, Verdict, str]:
    if isinstance(loaded, ControlInstance):
        return loaded, solve_control(loaded, backend, cfg), loaded.problem_name()
    inst = loaded.instance
    if isinstance(inst, CycleSumInstance):
        verdict = solve_exact_cycle_sum(inst, backend or Backend.ORACLE, cfg)
        return inst, verdict, "exact cycle sum"
    default = Backend.RANDOMIZED if loaded.mode is Mode.PERFECT_EXACT else Backend.POLY
    verdict = solve_matching(inst, loaded.mode, backend or default, loaded.threshold, cfg)
    return inst, verdict, f"b-matching ({loaded.mode.value})"


def cmd_solve(args) -> int:
    loaded = load(args.file)
    backend = Backend(args.backend) if args.backend else None
    instance, verdict, problem = _solve(loaded, backend, _config(args))
    _emit(render_verdict(instance, verdict, problem), args.out)
    return EXIT_YES if verdict.answer is Answer.YES else EXIT_NO


def cmd_oracle(args) -> int:
    args.backend = Backend.ORACLE.value
    return cmd_solve(args)


def _render_target(name: str, target) -> str:
    if isinstance(target, ControlInstance):
        return format_instance(target)
    if isinstance(target, tuple):
        return "---\n".join(_render_target(name, t) for t in target)
    if isinstance(target, Normalized):
        return format_instance(target.instance)
    return format_graph(target)


def _render_reduction(name: str, out) -> tuple[str, list[str]]:
    if isinstance(out, Decided):
        return f"# decided: {_word(out.answer)}\n", [f"decided without a target: {out.reason}"]
    if isinstance(out, Normalized):
        trace = [f"committed unregistered voters: {[j + 1 for j in out.committed]}"]
        return format_instance(out.instance), trace
    assert isinstance(out, ReductionOutput)
    target = out.target
    if isinstance(target, BMatchingInstance) and out.threshold is not None:
        mode = Mode.MAX_WEIGHT if "maxweight" in name else Mode.MAX_CARDINALITY
        return format_graph(target, mode, out.threshold), list(out.trace)
    return _render_target(name, target), list(out.trace)


def _word(answer: bool) -> str:
    return "Yes" if answer else "No"


def cmd_reduce(args) -> int:
    from .harness.campaign import CHECKS

    name = args.rule
    if name not in REGISTRY:
        raise VotematchError(f"unknown reduction {name!r}; choose from {', '.join(REGISTRY)}")
    entry = REGISTRY[name]
    loaded = load(args.file)
    if entry.source == "control":
        if not isinstance(loaded, ControlInstance):
            raise VotematchError(f"{name} expects an election file")
        src = loaded
    else:
        if not isinstance(loaded, GraphDocument):
            raise VotematchError(f"{name} expects a graph file")
        src = loaded.instance
        wants_digraph = entry.source == "digraph"
        if wants_digraph != isinstance(src, CycleSumInstance):
            kind = "a directed" if wants_digraph else "an undirected"
            raise VotematchError(f"{name} expects {kind} graph file")

    trace: list[str] = []
    arg = src
    if name in _NEEDS_PREPROCESS:
        arg = REGISTRY["fl_ccav_exact_preprocess"].func(src)
        if isinstance(arg, Normalized):
            trace.append(f"preprocessed: committed {len(arg.committed)} voters")
    out = arg if isinstance(arg, Decided) else entry.func(arg)
    text, more = _render_reduction(name, out)
    trace += more
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    trace_text = "".join(f"# {t}\n" for t in trace)
    if args.trace:
        Path(args.trace).write_text(trace_text)
    else:
        sys.stderr.write(trace_text)

    if args.verify:
        result = CHECKS[name](src, _config(args))
        agree = result.source == result.target and result.lift_ok is not False
        sys.stderr.write(f"# verify: source {_word(result.source)}, target {_word(result.target)}"
                         f", witness {'n/a' if result.lift_ok is None else result.lift_ok}"
                         f" -> {'agree' if agree else 'DISAGREE'}\n")
        return 0 if agree else 1
    return 0


def cmd_fuzz(args) -> int:
    from .harness.campaign import run_campaign
    from .harness.fuzz import TARGETS, TARGETS_BY_NAME, FuzzConfig, run_fuzz

    dump = Path(args.dump) if args.dump else None
    if args.reductions:
        names = args.target or list(REGISTRY)
        unknown = [n for n in names if n not in REGISTRY]
        if unknown:
            raise VotematchError(f"unknown reduction {unknown[0]!r}")
        report = run_campaign(names, args.count, args.seed, _config(args), dump)
    else:
        try:
            targets = tuple(TARGETS_BY_NAME[n] for n in args.target) if args.target else TARGETS
        except KeyError as exc:
            raise VotematchError(f"unknown fuzz target {exc.args[0]!r}; choose from "
                                 f"{', '.join(TARGETS_BY_NAME)}") from None
        config = FuzzConfig(targets, args.count, args.seed, randomized=_config(args))
        report = run_fuzz(config, dump)
    _emit(report.to_tsv(), args.out)
    return 0 if report.ok else 1


def cmd_bench(args) -> int:
    from .harness.bench import DEFAULT_CASES, bench_tsv, run_bench

    cases = DEFAULT_CASES
    if args.case is not None:
        by_name = {c.name: c for c in DEFAULT_CASES}
        unknown = [n for n in args.case if n not in by_name]
        if unknown:
            raise VotematchError(f"unknown bench case {unknown[0]!r}; choose from "
                                 f"{', '.join(by_name)}")
        cases = tuple(by_name[n] for n in args.case)
    results = run_bench(cases, args.seed, args.repeats, _config(args))
    _emit(bench_tsv(results), args.out)
    return 0 if all(r.within_limit and r.certificate_ok for r in results) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="votematch", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def randomness(p):
        p.add_argument("--seed", type=int, default=0, help="seed for all randomness")
        p.add_argument("--trials", type=int, default=20, help="independent randomized trials")
        p.add_argument("--prime", type=int, default=MERSENNE_61, help="field size for the algebra")

    p = sub.add_parser("solve", help="decide an election, graph or digraph instance")
    p.add_argument("file")
    p.add_argument("--backend", choices=[b.value for b in Backend])
    p.add_argument("--out", help="also write the verdict to this file")
    randomness(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("oracle", help="decide an instance by exhaustive search")
    p.add_argument("file")
    p.add_argument("--out")
    randomness(p)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("reduce", help="apply one reduction and print the target instance")
    p.add_argument("file")
    p.add_argument("--rule", required=True, choices=list(REGISTRY), metavar="NAME")
    p.add_argument("--verify", action="store_true", help="decide both sides and compare")
    p.add_argument("--out", help="write the target here instead of stdout")
    p.add_argument("--trace", help="write the trace here instead of stderr")
    randomness(p)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("fuzz", help="compare solvers or reductions against oracles")
    p.add_argument("--target", action="append", help="fuzz target or reduction name (repeatable)")
    p.add_argument("--reductions", action="store_true", help="run the reduction campaign")
    p.add_argument("--count", type=int, default=200)
    p.add_argument("--out", help="also write the TSV report here")
    p.add_argument("--dump", help="directory for instances that disagree")
    randomness(p)
    p.set_defaults(func=cmd_fuzz)

    p = sub.add_parser("bench", help="time the large-instance pipelines")
    p.add_argument("--case", action="append", help="bench case name (repeatable)")
    p.add_argument("--repeats", type=int, default=3)
    p.add_argument("--out", help="also write the TSV report here")
    randomness(p)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (VotematchError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
