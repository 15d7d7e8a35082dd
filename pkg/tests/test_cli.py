import json
import subprocess
import sys

import pytest

from shapealg.cli import main, run_to_string
from shapealg.weyl import weyl_dim


def sa(*argv):
    return run_to_string(list(argv))


def sa_subprocess(*argv):
    return subprocess.run([sys.executable, "-m", "shapealg.cli", *argv],
                          capture_output=True, text=True, check=False)


def test_nf():
    status, out = sa("nf", "sl3_shape_quantum", "--expr", "q2*p2")
    assert status == 0
    assert out == "-(1 - q^-2)*p1*q1 + q^-1*p2*q2\n"


def test_nf_equivalent_inputs_agree():
    a = sa("nf", "sl3_shape_quantum", "--expr", "q2*p2")[1]
    b = sa("nf", "sl3_shape_quantum", "--expr", "-p1*q1 - p3*q3")[1]
    assert a == b


def test_hilbert_csv_matches_weyl_dimensions():
    status, out = sa("hilbert", "sl3_shape_classical", "--max-deg", "4",
                     "--by", "multidegree", "--format", "csv")
    assert status == 0
    lines = out.strip().splitlines()
    assert lines[0] == "n1,n2,count"
    for line in lines[1:]:
        a, b, c = map(int, line.split(","))
        assert c == weyl_dim(a, b)


def test_hilbert_with_oracle():
    status, out = sa("hilbert", "g1_shape_classical", "--by", "length", "--oracle", "--json")
    assert status == 0
    data = json.loads(out)
    assert data["findings"] == []
    assert [r["count"] for r in data["tables"][0]["rows"]] == [1, 7, 26, 70, 155]


def test_hilbert_after_collapse_is_a_finding():
    status, out = sa("hilbert", "g1_shape_quantum_literal", "--json")
    assert status == 1
    assert json.loads(out)["findings"][0]["rule"] == "1 -> 0"


def test_json_schema():
    status, out = sa("complete", "sl3_shape_quantum", "--max-deg", "3", "--json")
    data = json.loads(out)
    assert status == 0
    assert list(data) == ["command", "config", "findings", "tables", "witnesses"]
    assert data["config"]["max_deg"] == 3
    assert all({"name", "selector", "rows"} <= set(t) for t in data["tables"])


def test_complete_literal_collapse():
    status, out = sa("complete", "g1_shape_quantum_literal", "--max-deg", "3", "--json")
    data = json.loads(out)
    assert status == 1
    chain = data["witnesses"][0]["chain"]
    assert any(s.get("word") == "t*q3*t" for s in chain)


def test_flatness():
    assert sa("flatness", "sl3_shape_classical", "sl3_shape_quantum_modules",
              "--max-deg", "4")[0] == 0
    status, out = sa("flatness", "sl3_shape_classical", "sl3_shape_quantum", "--max-deg", "3")
    assert status == 1 and "not flat" in out
    status, out = sa("flatness", "g1_shape_classical", "g1_shape_quantum_literal")
    assert status == 1 and "refused" in out


def test_orthocells():
    status, out = sa("orthocells", "--json")
    data = json.loads(out)
    assert status == 0
    assert len(data["tables"][0]["rows"]) == 14
    status, out = sa("orthocells", "--ij", "1,2")
    assert "8 distinct vectors" in out


@pytest.mark.parametrize("check,status", [
    ("relations", 0), ("span", 0), ("r12", 0), ("golden", 1), ("supplements", 1)])
def test_modules(check, status):
    assert sa("modules", "--check", check)[0] == status


def test_modules_at_a_rational_point():
    status, out = sa("modules", "--check", "span", "--q-value", "3/2")
    assert status == 0 and "3/2:" not in out


def test_lemma1():
    status, out = sa("lemma1", "--json")
    data = json.loads(out)
    assert status == 1
    assert data["witnesses"][0]["generator"] == "Y2"
    assert data["witnesses"][0]["factor"] == "K2inv"
    rows = {r["algebra"]: r["pass"] for r in data["tables"][0]["rows"]}
    assert rows == {"uq_g1": True, "uq_g0": False}


def test_lemma1_matrix_check():
    status, out = sa("lemma1", "--matrix-check", "--q-value", "2", "--json")
    rows = json.loads(out)["tables"][1]["rows"]
    assert {(r["algebra"], r["target"]): r["member"] for r in rows} == {
        ("uq_g1", "K2"): True, ("uq_g1", "K2inv"): True,
        ("uq_g0", "K2"): False, ("uq_g0", "K2inv"): False}


def test_present_and_file(tmp_path):
    status, out = sa("present", "sl3_shape_quantum", "--json")
    assert status == 0 and len(json.loads(out)["tables"][1]["rows"]) == 16
    path = tmp_path / "toy.txt"
    path.write_text("generators: x(1,0) y(0,1)\nx*y - q*y*x\n", encoding="utf-8")
    status, out = sa("nf", "--file", str(path), "--expr", "x*y")
    # x < y, so y*x is the lead and x*y is already reduced
    assert (status, out) == (0, "x*y\n")
    assert sa("nf", "--file", str(path), "--expr", "y*x")[1] == "q^-1*x*y\n"


def test_q_value_specializes():
    status, out = sa("present", "sl3_shape_quantum", "--q-value", "1")
    assert status == 0
    assert "  [ 0] p1*p2 - p2*p1    #" in out


@pytest.mark.parametrize("argv", [
    ["hilbert", "nosuch"],
    ["hilbert", "sl3_shape_quantum", "--q-value", "0"],
    ["hilbert", "sl3_shape_quantum", "--max-deg", "0"],
    ["nf", "sl3_shape_quantum", "--expr", "p1*+"],
    ["nf", "sl3_shape_quantum"],
    ["orthocells", "--ij", "3,1"],
    ["present"],
    ["present", "sl3_shape_quantum", "--file", "x.txt"],
    ["hilbert", "--file", "/nonexistent/file.txt"],
    [],
])
def test_usage_errors_exit_2(argv, capsys):
    assert main(argv) == 2


def test_console_script_and_byte_identity():
    argv = ["hilbert", "sl3_shape_quantum", "--max-deg", "3", "--json"]
    a, b = sa_subprocess(*argv), sa_subprocess(*argv)
    assert a.returncode == b.returncode == 0
    assert a.stdout == b.stdout and a.stdout.startswith("{")


def test_report_subset():
    status, out = sa("report", "--only", "1", "--only", "6")
    assert status == 0
    assert out.splitlines()[0].startswith("criterion  1 PASS")
    assert out.splitlines()[-1] == "2/2 criteria pass"
