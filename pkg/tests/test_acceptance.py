"""Acceptance criteria 1-10.

Each test runs one criterion through :mod:`shapealg.report`, prints its
PASS/FAIL line and asserts it.  Criteria 3, 4 and 8 do not hold for the
relations as printed; they are run in full, print FAIL and are marked as
strict expected failures, so a change that makes them pass is reported.
The ``*_finding`` tests pin down exactly why they fail.
"""

import subprocess
import sys

import pytest

from shapealg.report import run_criterion

KNOWN_FAILURES = {
    3: "the printed quantum relations are not a flat deformation (multidegree (1,2): 12 vs 15)",
    4: "printed supplements of V^11, V^12, V^21 are not invariant in the convention of the "
       "printed vectors; one printed vector carries the label C_8 but is the C_7 vector",
    8: "the amended G1 relations derive p3 -> 0",
}

_cache = {}


def criterion(n):
    if n not in _cache:
        _cache[n] = run_criterion(n)
    return _cache[n]


def _check(n, capsys):
    c = criterion(n)
    with capsys.disabled():
        print("\n" + c.line())
        for note in c.info:
            print(f"    note: {note}")
    if c.budget is not None:
        assert c.seconds < c.budget, f"criterion {n} took {c.seconds:.1f}s"
    assert c.passed, c.summary


def _mark(n):
    if n in KNOWN_FAILURES:
        return pytest.param(n, marks=pytest.mark.xfail(strict=True, reason=KNOWN_FAILURES[n]))
    return n


@pytest.mark.parametrize("n", [_mark(n) for n in range(1, 11)])
def test_criterion(n, capsys):
    _check(n, capsys)


# -- the failing criteria, pinned ------------------------------------------


def test_criterion_3_finding():
    c = criterion(3)
    diffs = {(f["n1"], f["n2"]): (f["a"], f["b"]) for f in c.findings}
    assert diffs[(1, 2)] == (12, 15) and diffs[(2, 1)] == (12, 15)
    assert all(n1 >= 1 and n2 >= 1 and n1 + n2 >= 3 for n1, n2 in diffs)
    assert "length-2 count 20" in c.summary
    assert "flat, all multidegrees match" in c.info[0]


def test_criterion_4_finding():
    c = criterion(4)
    kinds = [(f["kind"], f.get("ij") or f.get("key")) for f in c.findings]
    assert kinds == [
        ("printed label", "11-C_8"),
        ("supplement not invariant", "11"),
        ("supplement not invariant", "12"),
        ("supplement not invariant", "21"),
    ]
    assert all(f["invariant_under_plain_coproduct"] for f in c.findings[1:])
    rows = {r["ij"]: r for r in c.tables[0]["rows"]}
    assert all(r["derived_direct"] and r["derived_invariant"] for r in rows.values())
    assert rows["22"]["printed_invariant"]


def test_criterion_8_finding():
    c = criterion(8)
    assert c.summary.startswith("literal preset collapses via t*q3*t")
    assert {"kind": "amended collapse", "rule": "p3 -> 0"} in c.findings
    assert "flat, counts match" in c.info[0]


def test_cli_invocations_are_byte_identical():
    argv = [sys.executable, "-m", "shapealg.cli", "report", "--json"]
    a = subprocess.run(argv, capture_output=True, check=False)
    b = subprocess.run(argv, capture_output=True, check=False)
    assert a.returncode == b.returncode == 1
    assert a.stdout == b.stdout
