import json
import subprocess
import sys

import pytest

from polyverify import catalog
from polyverify.cli import emit_json, main
from polyverify.contracts import CheckReport
from polyverify.machines import Trace
from polyverify.wiring import dump_diagram


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_trace_fib(capsys):
    code, out, _ = run(capsys, "trace", "fib", "--count", "6")
    assert code == 0 and out.split() == ["0", "1", "1", "2", "3", "5"]


def test_trace_json_parses_back(capsys):
    code, out, _ = run(capsys, "--json", "trace", "fib", "--count", "3")
    t = Trace.from_json(json.loads(out))
    assert [y.n for y in t.outputs] == [0, 1, 1]
    assert emit_json(t.to_json()).decode() == out


def test_global_flags_before_or_after_subcommand(capsys):
    _, a, _ = run(capsys, "--json", "--seed", "4", "check", "appendSpec", "--mode", "sampled")
    _, b, _ = run(capsys, "check", "appendSpec", "--mode", "sampled", "--json", "--seed", "4")
    assert a == b and json.loads(a)["coverage"]["seed"] == 4


def test_check_pass_and_fail(capsys):
    code, out, _ = run(capsys, "check", "appendSpec", "--mode", "exhaustive", "--max-len", "3")
    assert code == 0 and "verdict: pass" in out
    code, out, _ = run(capsys, "--json", "check", "appendSpec", "--mutation", "drop-cons")
    report = json.loads(out)
    assert code == 1 and report["verdict"] == "fail"
    assert report["violations"] and all(v["path"] for v in report["violations"])
    assert CheckReport.from_json(report).verdict == "fail"


def test_text_and_json_verdicts_agree(capsys):
    for args in (["check", "noninterference"], ["check", "noninterference", "--mutation", "leak"]):
        code_t, text, _ = run(capsys, *args)
        code_j, js, _ = run(capsys, "--json", *args)
        assert code_t == code_j
        assert f"verdict: {json.loads(js)['verdict']}" in text


def test_monitored_trace(capsys):
    code, out, _ = run(capsys, "--json", "trace", "fib", "--count", "50", "--monitored")
    steps = json.loads(out)["steps"]
    assert code == 0 and [s["evidence"]["v"] for s in steps] == [str(k) for k in range(50)]
    code, out, _ = run(capsys, "trace", "fib", "--count", "50", "--monitored", "--mutation", "off-by-one")
    assert code == 1
    assert out.splitlines()[-1].startswith("3: () -> VIOLATION")


def test_laws(capsys):
    code, out, _ = run(capsys, "laws", "monoidal", "--seed", "7", "--depth", "5")
    assert code == 0 and out.strip().endswith("verdict: pass")
    code, out, _ = run(capsys, "--json", "laws", "mealy", "--seed", "7", "--depth", "5")
    data = json.loads(out)
    assert data["verdict"] == "pass" and {r["law"] for r in data["laws"]} == {"mealy/identity", "mealy/functoriality"}


def test_run_values(capsys):
    assert run(capsys, "run", "append", "pair:[[1,2],[0]]")[1].strip() == "[0, 1, 2]"
    assert run(capsys, "run", "concat", "pair:[null,[[1],[0,1]]]")[1].strip() == "[1, 0, 1]"
    code, out, _ = run(capsys, "--json", "run", "appendSpec", "pair:[[1],[2]]")
    assert code == 0 and json.loads(out) == {"result": {"t": "list", "items": [{"t": "nat", "v": "2"}, {"t": "nat", "v": "1"}]}}
    code, out, _ = run(capsys, "run", "evenState", "tag:put:nat:3")
    assert code == 1
    code, out, _ = run(capsys, "--json", "--depth", "1", "run", "fold", "pair:[[0],[1]]")
    assert code == 0 and "call" in json.loads(out)["program"]


@pytest.mark.parametrize("argv", [
    ["run", "nope", "unit"],
    ["run", "fib", "bogus"],
    ["run", "fibDep", "unit"],
    ["trace", "appendSpec", "--count", "2"],
    ["check", "fib"],
    ["check", "fib", "--alphabet", "2"],
    ["laws", "everything"],
    ["frobnicate"],
    ["--seed", "-1", "list"],
    [],
])
def test_usage_errors_exit_2(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2
    assert out == ""
    assert err


def test_compose(capsys, tmp_path):
    f = tmp_path / "concat.json"
    f.write_text(dump_diagram(catalog.CONCAT_DIAGRAM), encoding="utf-8")
    code, out, _ = run(capsys, "--json", "compose", "--file", str(f), "--registry", "default",
                       "--run", "pair:[null,[[1,2],[],[0]]]", "--compare", "concat")
    data = json.loads(out)
    assert code == 0
    assert data["run"]["result"]["items"] == [{"t": "nat", "v": v} for v in ("1", "2", "0")]
    assert data["compare"]["verdict"] == "pass" and data["compare"]["inputs"] > 0


def test_compose_rejects_bad_files(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"box": "fold", "children": {"base": {"box": "appendStep"}, "step": {"box": "appendStep"}}}', encoding="utf-8")
    code, _, err = run(capsys, "compose", "--file", str(bad))
    assert code == 2 and "interface-mismatch" in err
    code, _, err = run(capsys, "compose", "--file", str(tmp_path / "missing.json"))
    assert code == 2
    (tmp_path / "syntax.json").write_text("{", encoding="utf-8")
    code, _, err = run(capsys, "compose", "--file", str(tmp_path / "syntax.json"))
    assert code == 2 and "line 1" in err


def test_json_is_byte_identical_across_processes():
    argv = [sys.executable, "-m", "polyverify", "--json", "--seed", "9", "check", "parallelSpec", "--mode", "sampled", "--samples", "5"]
    a = subprocess.run(argv, capture_output=True, check=False)
    b = subprocess.run(argv, capture_output=True, check=False, env={"PYTHONHASHSEED": "123", "PATH": ""})
    assert a.returncode == b.returncode == 0
    assert a.stdout == b.stdout and a.stdout


def test_list(capsys):
    code, out, _ = run(capsys, "--json", "list")
    names = [e["name"] for e in json.loads(out)["entries"]]
    assert code == 0 and names == list(catalog.CATALOG)
