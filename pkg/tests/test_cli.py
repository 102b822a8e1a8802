import json

import pytest
from click.testing import CliRunner

from symshift.cli import RunConfig, main


@pytest.fixture
def run():
    runner = CliRunner()

    def _run(*args):
        return runner.invoke(main, list(args))

    return _run


@pytest.mark.parametrize("args,out", [
    (["expand", "--base", "root:-1,-1,1:1:2", "--M", "1", "--digits", "6"], "101010"),
    (["expand", "--base", "2/1", "--M", "1", "--digits", "4"], "1111"),
    (["expand", "--base", "alpha:(110100)", "--M", "1", "--digits", "12"], "110100110100"),
    (["specnum", "--alpha", "(10)", "--M", "1", "--n", "2", "--cap", "10"], "none<=10"),
    (["lang", "count", "--alpha", "(1)", "--M", "1", "--n", "5"], "32"),
])
def test_simple_commands(run, args, out):
    res = run(*args)
    assert res.exit_code == 0, res.output
    assert res.output.strip() == out


def test_classify_human(run):
    res = run("classify", "--alpha", "(11010)", "--M", "1")
    assert res.exit_code == 0
    assert "strong_weak=Strong(Type2)" in res.output
    res = run("classify", "--alpha", "(1110)", "--M", "1")
    lines = set(res.output.split("\n"))
    assert {"transitive=Yes", "mixing=Yes"} <= lines
    assert any(ln.startswith("spec=Certificate") for ln in lines)


def test_classify_error(run):
    res = run("--format", "json", "classify", "--alpha", "(0)", "--M", "1")
    assert res.exit_code == 2
    rec = json.loads(res.output)
    assert rec["error"] == "NotInVhat"
    res = run("classify", "--alpha", "(1x)", "--M", "1")
    assert res.exit_code == 2


def test_classify_json_matches_human(run):
    human = run("classify", "--alpha", "(1110)", "--M", "1").output
    one = run("--format", "json", "classify", "--alpha", "(1110)", "--M", "1").output
    two = run("--format", "json", "classify", "--alpha", "(1110)", "--M", "1").output
    assert one == two
    rep = json.loads(one)
    assert rep["schema"] == "symshift.report/1"
    for key, value in rep["summary"].items():
        if f"{key}=" in human:
            assert f"{key}={value}" in human


def test_constants(run):
    res = run("constants", "--M", "1")
    assert res.exit_code == 0
    assert "1.618033988" in res.output and "alpha(q_T)=1(10)" in res.output
    assert "11010011" in res.output
    data = json.loads(run("--format", "json", "constants", "--M", "2", "--digits", "8").output)
    assert data["q_KL"]["alpha_prefix"] == "21020121"


def test_other_commands(run):
    assert run("lang", "list", "--alpha", "(10)", "--M", "1", "--n", "3").output.split() == ["101", "010"]
    assert "0.6093778" in run("entropy", "--alpha", "(1110)", "--M", "1").output
    assert run("syncword", "--alpha", "(1110)", "--M", "1").exit_code == 0
    res = run("approx", "below", "--alpha", "(11010)", "--M", "1")
    assert "7\t(1101010)" in res.output
    res = run("approx", "above", "--alpha", "(1110)", "--M", "1", "--count", "3")
    assert [ln.split("\t")[0] for ln in res.output.split()[::2]] == ["4", "8", "12"]
    assert "->" in run("automaton", "--alpha", "(10)", "--M", "1").output


def test_construct(run):
    res = run("construct", "weak", "--seed", "(1110)", "--M", "1", "--schedule", "2,2")
    assert res.exit_code == 0
    assert "parameter=13" in res.output and "parameter=40" in res.output
    res = run("--format", "json", "construct", "strong", "--seed", "(1110)", "--M", "1", "--steps", "2")
    trace = json.loads(res.output)
    assert trace["target_class"] == "StrongIrreducible" and len(trace["steps"]) == 3
    res = run("construct", "dense", "--seed", "(1100)", "--M", "1", "--schedule", "2")
    assert res.exit_code == 2


def test_corpus(run, tmp_path):
    p = tmp_path / "corpus.tsv"
    p.write_text("# header\n1\t(1110)\n1\t(0)\n2\t(221)\n1\t110100\n")
    res = run("corpus", str(p))
    assert res.exit_code == 0
    recs = [json.loads(ln) for ln in res.output.splitlines()]
    assert len(recs) == 4
    assert recs[1]["error"] == "NotInVhat"
    assert recs[0]["summary"]["strong_weak"] == "Strong(Type1)"
    assert recs[2]["M"] == 2
    assert run("corpus", str(p), "--workers", "2").output == res.output


def test_run_config():
    assert RunConfig(M=1).cap == 64
    with pytest.raises(Exception):
        RunConfig(M=0)
    with pytest.raises(Exception):
        RunConfig(M=1, horizon=0)
