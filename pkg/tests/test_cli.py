from __future__ import annotations

import subprocess
import sys
from pathlib import Path

import pytest

from votematch.cli import load, main
from votematch.election import ControlInstance, format_instance
from votematch.graph import GraphDocument, format_graph, parse_graph
from votematch.harness.fixtures import bowtie_digraph, shortcut_election

DATA = Path(__file__).resolve().parent.parent / "data"


@pytest.fixture
def election_file(tmp_path):
    path = tmp_path / "election.txt"
    path.write_text(format_instance(shortcut_election()))
    return path


def test_data_files_match_fixtures():
    assert load(str(DATA / "shortcut_election.txt")) == shortcut_election()
    assert load(str(DATA / "bowtie_k6.txt")).instance == bowtie_digraph(6)


def test_load_tells_files_apart(election_file, tmp_path):
    assert isinstance(load(str(election_file)), ControlInstance)
    graph = tmp_path / "g.txt"
    graph.write_text("# comment\n" + format_graph(bowtie_digraph()))
    assert isinstance(load(str(graph)), GraphDocument)


def test_solve_yes(election_file, capsys):
    assert main(["solve", str(election_file)]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0] == "Yes"
    assert "certificate:" in out and "add U" in out


def test_oracle_reports_reference_witness(election_file, capsys):
    assert main(["oracle", str(election_file)]) == 0
    out = capsys.readouterr().out
    assert "add U1: b>p>c>a" in out and "add U2: c>p>b>a" in out


def test_solve_no_exit_code(tmp_path, capsys):
    path = tmp_path / "b0.txt"
    path.write_text(format_instance(shortcut_election(0)))
    assert main(["solve", str(path)]) == 1
    assert capsys.readouterr().out.startswith("No")


def test_probably_no_prints_bound(tmp_path, capsys):
    path = tmp_path / "b1.txt"
    path.write_text(format_instance(shortcut_election(1)))
    assert main(["solve", str(path), "--trials", "5", "--seed", "4"]) == 1
    out = capsys.readouterr().out
    assert out.startswith("ProbablyNo")
    assert "error bound: 10^" in out and "trials: 5  seed: 4" in out


def test_solve_digraph(capsys):
    assert main(["solve", str(DATA / "bowtie_k6.txt")]) == 1
    assert main(["solve", str(DATA / "bowtie_k3.txt"), "--backend", "randomized"]) == 0
    assert "edge 3: a -> d" in capsys.readouterr().out


def test_solve_writes_out(election_file, tmp_path):
    out = tmp_path / "verdict.txt"
    main(["solve", str(election_file), "--out", str(out)])
    assert out.read_text().startswith("Yes")


@pytest.mark.parametrize("text", ["candidates: p,a\nrule: bogus\n", "", "vertices: a\na b\n"])
def test_malformed_input_exits_2(tmp_path, capsys, text):
    path = tmp_path / "bad.txt"
    path.write_text(text)
    assert main(["solve", str(path)]) == 2
    assert capsys.readouterr().err.startswith("error:")


def test_missing_file_exits_2(capsys):
    assert main(["solve", "/no/such/file"]) == 2


def test_bad_prime_exits_2(election_file):
    assert main(["solve", str(election_file), "--prime", "100"]) == 2


def test_reduce_and_verify(election_file, tmp_path, capsys):
    out = tmp_path / "target.txt"
    trace = tmp_path / "trace.txt"
    code = main(["reduce", str(election_file), "--rule", "fl_ccav_exact_to_epbbm", "--verify",
                 "--out", str(out), "--trace", str(trace)])
    assert code == 0
    doc = parse_graph(out.read_text())
    assert doc.instance.red_target == 2
    assert "preprocessed" in trace.read_text()
    assert "-> agree" in capsys.readouterr().err


def test_reduce_sweep_joins_targets(election_file, capsys):
    path = election_file
    path.write_text(format_instance(shortcut_election().with_changes(exact=False)))
    assert main(["reduce", str(path), "--rule", "ccav_to_ccav_exact_sweep"]) == 0
    assert capsys.readouterr().out.count("---") == 2


def test_reduce_threshold_graph(tmp_path, capsys):
    path = tmp_path / "two.txt"
    path.write_text("candidates: p,a,b\nrule: 2approval\npreferred: p\nbudget: 1\n"
                    "action: replace\nexact: false\nR: a>b>p\nR: a>p>b\nU: p>b>a\n")
    assert main(["reduce", str(path), "--rule", "twoapp_ccrv_to_maxweight_b_matching",
                 "--verify"]) == 0
    out = capsys.readouterr().out
    assert "mode: maxweight" in out or out.startswith("# decided")


def test_reduce_rejects_wrong_file_kind(election_file):
    assert main(["reduce", str(election_file), "--rule", "ecs_to_edge_disjoint"]) == 2
    assert main(["reduce", str(DATA / "bowtie_k6.txt"), "--rule", "red_blue_to_red"]) == 2


def test_fuzz_zero_count(capsys):
    assert main(["fuzz", "--count", "0"]) == 0
    assert len(capsys.readouterr().out.splitlines()) == 12


def test_fuzz_reductions(tmp_path, capsys):
    assert main(["fuzz", "--reductions", "--target", "red_blue_to_red", "--count", "5",
                 "--dump", str(tmp_path)]) == 0
    assert capsys.readouterr().out.startswith("reduction\t")


def test_fuzz_unknown_target():
    assert main(["fuzz", "--target", "nope"]) == 2


def test_bench_one_case(capsys):
    assert main(["bench", "--case", "2approval-replace-poly-10x40", "--repeats", "1"]) == 0
    assert "2approval-replace-poly-10x40" in capsys.readouterr().out
    assert main(["bench", "--case", "nope"]) == 2


def test_module_entry_point(election_file):
    result = subprocess.run([sys.executable, "-m", "votematch", "solve", str(election_file)],
                            capture_output=True, text=True)
    assert result.returncode == 0
    assert result.stdout.startswith("Yes")
