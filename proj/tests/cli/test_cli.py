import csv
import io
import json
import os
import subprocess
from fractions import Fraction

import jsonschema
import pytest

BIN = os.environ["WFUSION_BIN"]
with open(os.environ["WFUSION_SCHEMA"]) as fh:
    SCHEMA = json.load(fh)


def run(*args, check=True):
    proc = subprocess.run([BIN, *args], capture_output=True, text=True)
    if check:
        assert proc.returncode == 0, proc.stderr
    return proc


def run_json(*args):
    doc = json.loads(run(*args, "--json").stdout)
    jsonschema.validate(doc, SCHEMA)
    return doc


def run_csv(*args):
    return list(csv.DictReader(io.StringIO(run(*args, "--csv").stdout)))


@pytest.mark.parametrize(
    "n,m,gate,expected",
    [(2, 2, "fgf", "3/4"), (3, 3, "fg", "4/9"), (2, 2, "fg", "1/2"), (3, 3, "fgf", "5/9"), (4, 5, "fg", "7/20")],
)
def test_fuse_success_probability(n, m, gate, expected):
    res = run_json("fuse", "--n", str(n), "--m", str(m), "--gate", gate)["results"]
    assert res["p_success_exact"] == expected
    assert abs(res["p_success"] - float(Fraction(expected))) < 1e-12
    assert res["success_fidelity"] >= 1 - 1e-9


def test_fuse_branches_sum_to_one():
    res = run_json("fuse", "--n", "3", "--m", "4", "--gate", "fgf", "--branches")["results"]
    assert len(res["branches"]) == 12
    assert sum(Fraction(b["probability_exact"]) for b in res["branches"]) == 1
    assert abs(sum(b["probability"] for b in res["branches"]) - 1) < 1e-12


def test_fuse_rejects_small_sizes():
    proc = run("fuse", "--n", "1", "--m", "3", check=False)
    assert proc.returncode != 0
    assert "minimum size 2" in proc.stderr
    assert proc.stdout == ""


def test_unknown_gate_rejected():
    proc = run("fuse", "--n", "2", "--m", "2", "--gate", "xyz", check=False)
    assert proc.returncode != 0
    assert proc.stdout == ""


def test_table_rows():
    rows = run_csv("table", "--n", "3", "--m", "3", "--gate", "fg")
    got = {r["pattern"]: (r["probability_exact"], r["class"]) for r in rows}
    assert got == {
        "HH": ("4/9", "Recycle"),
        "HV": ("2/9", "Success"),
        "VH": ("2/9", "Success"),
        "VV": ("1/9", "Failure"),
    }
    run_json("table", "--n", "3", "--m", "3")


def test_sweep_file_csv(tmp_path):
    out = tmp_path / "sweep.csv"
    run("sweep", "--gate", "fgf", "--n", "2:4", "--m", "2:4", "--out", str(out))
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 9
    assert all(float(r["abs_diff"]) < 1e-12 for r in rows)
    first = next(r for r in rows if r["n"] == "2" and r["m"] == "2")
    assert float(first["p_success_closed"]) == 0.75
    assert not (tmp_path / "sweep.csv.tmp").exists()


def test_sweep_file_json(tmp_path):
    out = tmp_path / "sweep.json"
    run("sweep", "--gate", "fg", "--n", "3", "--m", "3", "--out", str(out), "--format", "json")
    doc = json.loads(out.read_text())
    jsonschema.validate(doc, SCHEMA)
    assert doc["results"]["rows"][0]["p_success_exact"] == "4/9"


def test_sweep_closed_form_large():
    doc = json.loads(run("sweep", "--n", "100:101", "--m", "2", "--closed-form", "--format", "json").stdout)
    jsonschema.validate(doc, SCHEMA)
    assert doc["results"]["rows"][0]["p_success_sim"] is None


def test_sweep_unwritable_path(tmp_path):
    proc = run("sweep", "--n", "2", "--m", "2", "--out", str(tmp_path / "missing" / "x.csv"), check=False)
    assert proc.returncode != 0
    assert proc.stdout == ""


def test_cost_bell_fusion():
    res = run_json("cost", "--target", "3", "--gate", "fgf")["results"]["cost"]
    assert abs(res["expected_bell_pairs"] - 8 / 3) < 1e-12
    assert abs(res["expected_attempts"] - 4 / 3) < 1e-12


def test_cost_fredkin_cheaper():
    for strategy in ("balanced-tree", "incremental"):
        fgf = run_json("cost", "--target", "6", "--gate", "fgf", "--strategy", strategy)
        fg = run_json("cost", "--target", "6", "--gate", "fg", "--strategy", strategy)
        assert fgf["results"]["cost"]["expected_cost_units"] < fg["results"]["cost"]["expected_cost_units"]


def test_cost_monte_carlo_deterministic():
    args = ("cost", "--target", "5", "--mc", "5000", "--seed", "11")
    a = run(*args, "--json").stdout
    b = run(*args, "--json", "--threads", "1").stdout
    assert a == b
    jsonschema.validate(json.loads(a), SCHEMA)


def test_cost_bad_arguments():
    assert run("cost", "--target", "2", check=False).returncode != 0
    assert run("cost", "--target", "5", "--policy", "keep", check=False).returncode != 0


@pytest.mark.parametrize(
    "args",
    [
        ("fuse", "--n", "3", "--m", "4", "--branches"),
        ("table", "--n", "4", "--m", "2"),
        ("sweep", "--n", "2:3", "--m", "2:3", "--format", "json"),
        ("cost", "--target", "6", "--policy", "reuse", "--mc", "2000"),
    ],
)
def test_json_reserializes_idempotently(args):
    fmt = () if args[0] == "sweep" else ("--json",)
    text = run(*args, *fmt).stdout
    doc = json.loads(text)
    jsonschema.validate(doc, SCHEMA)
    assert json.loads(json.dumps(doc)) == doc


def numbers_match(row, csv_row):
    for key, value in row.items():
        if isinstance(value, bool) or value is None or isinstance(value, str):
            continue
        if isinstance(value, (int, float)):
            assert float(csv_row[key]) == float(value), key


def test_csv_matches_json_fuse():
    args = ("fuse", "--n", "3", "--m", "5", "--gate", "fgf", "--branches")
    branches = run_json(*args)["results"]["branches"]
    rows = run_csv(*args)
    assert len(rows) == len(branches)
    for b, r in zip(branches, rows):
        numbers_match(b, r)


def test_csv_matches_json_cost():
    args = ("cost", "--target", "5", "--mc", "3000", "--seed", "4")
    res = run_json(*args)["results"]
    row = run_csv(*args)[0]
    numbers_match(res["cost"], row)
    numbers_match({"mc_" + k: v for k, v in res["monte_carlo"].items()}, row)


def test_csv_matches_json_sweep():
    args = ("sweep", "--n", "2:5", "--m", "3")
    rows_json = json.loads(run(*args, "--format", "json").stdout)["results"]["rows"]
    rows_csv = list(csv.DictReader(io.StringIO(run(*args).stdout)))
    for a, b in zip(rows_json, rows_csv):
        numbers_match(a, b)


def test_version():
    out = run("--version").stdout
    assert out.startswith("schema_version 1.0.0\nbuild ")
