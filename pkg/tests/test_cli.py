import io
import os

import pytest

from acmatch.cli import main
from acmatch.parsing import parse_problem

FIG45 = os.path.join(os.path.dirname(__file__), "data", "fig45.problem")


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_match_many_prints_two_lines():
    code, out, _ = run("match-many", FIG45, "--subject", "f(gc(a, h(a), h(a)))")
    assert code == 0
    assert out.splitlines() == ["P1 {x -> h(a)}", "P2 {x -> a}"]
    code, out, _ = run("match-many", FIG45, "--subject", "S2", "--expect-match")
    assert code == 1 and out == ""


def test_match_and_match_many_agree():
    _, many, _ = run("match-many", FIG45, "--subject", "S1")
    lines = []
    for pid in ("P1", "P2", "P3"):
        _, one, _ = run("match", FIG45, "--pattern", pid, "--subject", "S1")
        lines += [f"{pid} {line}" for line in one.splitlines()]
    assert sorted(lines) == sorted(many.splitlines())


def test_match_expect_match_exit_codes():
    assert run("match", FIG45, "--pattern", "P1", "--subject", "S1", "--expect-match")[0] == 0
    assert run("match", FIG45, "--pattern", "P3", "--subject", "S1", "--expect-match")[0] == 1
    assert run("match", FIG45, "--pattern", "P3", "--subject", "S1")[0] == 0


@pytest.mark.parametrize(
    "argv",
    [
        ("match", "missing.problem", "--pattern", "P1", "--subject", "a"),
        ("match", FIG45, "--pattern", "P9", "--subject", "a"),
        ("match", FIG45, "--pattern", "P1", "--subject", "f(x_)"),
        ("match", FIG45, "--pattern", "P1", "--subject", "f(a"),
        ("net", FIG45, "--kind", "adn"),
        ("net", FIG45, "--kind", "vsdn"),
        ("bench", FIG45, "--sizes", "0"),
        ("frobnicate",),
    ],
)
def test_input_errors_exit_2(argv):
    code, _, err = run(*argv)
    assert code == 2
    assert err


def test_net_dot_output(tmp_path):
    path = tmp_path / "out.dot"
    code, out, _ = run("net", FIG45, "--kind", "mldn", "--dot", str(path))
    assert code == 0
    assert out.startswith("states ") and "transitions" in out
    text = path.read_text()
    assert text.startswith("digraph") and "cluster_" in text
    code, out, _ = run("net", FIG45, "--kind", "mldn")
    assert out == text


def test_net_adn_and_vsdn_on_syntactic_problem(tmp_path):
    problem = tmp_path / "p.problem"
    problem.write_text("symbol f: variadic\npattern A: f(a, x_)\npattern B: f(a)\npattern C: f(y_, b)\n")
    for kind in ("adn", "vsdn"):
        code, out, _ = run("net", str(problem), "--kind", kind, "--dot", str(tmp_path / f"{kind}.dot"))
        assert code == 0
        states = int(out.split()[1])
        assert states > 1
    assert "ω" in (tmp_path / "vsdn.dot").read_text()


def test_gen_linalg_reproducible(tmp_path):
    a, b = tmp_path / "a.problem", tmp_path / "b.problem"
    assert run("gen-linalg", "--count", "20", "--seed", "4", "--out", str(a))[0] == 0
    assert run("gen-linalg", "--count", "20", "--seed", "4", "--out", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    problem = parse_problem(a.read_text())
    assert len(problem.subjects) == 20
    assert run("gen-linalg", "--count", "0")[0] == 2


def test_bench_csv(tmp_path):
    src = tmp_path / "p.problem"
    run("gen-linalg", "--count", "5", "--seed", "2", "--out", str(src))
    out_csv = tmp_path / "bench.csv"
    code, _, _ = run("bench", str(src), "--sizes", "10:30:10", "--repetitions", "1", "--csv", str(out_csv))
    assert code == 0
    lines = out_csv.read_text().splitlines()
    assert lines[0] == "size,setup_ms_m1,match_ms_11,match_ms_m1,speedup,break_even,states"
    assert [line.split(",")[0] for line in lines[1:]] == ["10", "20", "30"]
