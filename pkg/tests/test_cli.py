"""The command line front end, called in-process and once as a subprocess."""

import csv
import io
import json
import subprocess
import sys

import pytest

from decompkit.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _err = run(capsys, *argv, "--format", "json")
    return code, json.loads(out)


def test_gallery_list(capsys):
    code, data = run_json(capsys, "gallery", "list")
    assert code == 0 and data["schema"] == "decomp-kit/1"
    assert len(data["rows"]) == 23


def test_check_with_expected_failure(capsys):
    code, data = run_json(capsys, "check", "schmitt-graphs", "--max-vertices", "3",
                          "--axioms", "segal,decomposition", "--expect", "segal=fail")
    assert code == 0
    assert [(r["axiom"], r["status"]) for r in data["rows"]] == [("segal", "FAIL"), ("decomposition", "PASS")]
    assert data["rows"][0]["witness"]
    assert data["params"]["materialize"] == 3


def test_check_failure_sets_exit_code(capsys):
    code, data = run_json(capsys, "check", "--space", "shuffles", "--axioms", "segal")
    assert code == 1 and not data["ok"]


def test_monoidal_axioms(capsys):
    code, data = run_json(capsys, "check", "ordered-surjections", "--axioms", "monoidal-culf,bialgebra")
    assert code == 0 and [r["status"] for r in data["rows"]] == ["PASS", "PASS"]
    code, data = run_json(capsys, "check", "nat-plus", "--max-degree", "3", "--axioms", "monoidal-culf,bialgebra",
                          "--expect", "monoidal-culf=fail", "--expect", "bialgebra=fail")
    assert code == 0 and [r["status"] for r in data["rows"]] == ["FAIL", "FAIL"]
    code, _out, err = run(capsys, "check", "hanger", "--axioms", "monoidal-culf")
    assert code == 2 and "no monoidal product" in err


def test_mobius_condition_failure(capsys):
    code, out, _ = run(capsys, "check", "leinster", "--axioms", "mobius-condition")
    assert code == 1
    assert "not locally finite length up to bound 10" in out


def test_delta_aggregated_and_terms(capsys):
    _, data = run_json(capsys, "delta", "b-species", "--element", "3")
    assert [r["num"] for r in data["rows"]] == [1, 3, 3, 1]
    _, data = run_json(capsys, "delta", "bck-forests", "--element", "(()())", "--terms")
    assert len(data["rows"]) == 5
    _, data = run_json(capsys, "delta", "bck-forests", "--element", "(()())")
    assert sum(r["num"] for r in data["rows"]) == 5 and len(data["rows"]) == 4


def test_mobius_csv_with_jobs(capsys):
    code, out, _ = run(capsys, "mobius", "divisibility", "--max-n", "12", "--format", "csv", "--jobs", "2")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0
    assert [int(r["num"]) for r in rows] == [1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0]


def test_mobius_on_flags(capsys):
    _, data = run_json(capsys, "mobius", "vect-waldhausen", "--q", "2", "--max-dim", "3")
    assert [r["num"] for r in data["rows"]] == [1, -1, 2, -8]


def test_zetapoly(capsys):
    code, data = run_json(capsys, "zetapoly", "b-species", "--element", "2")
    assert code == 0
    values = {r["r"]: r["num"] for r in data["rows"]}
    assert values == {-1: 1, 0: 0, 1: 1, 2: 4, 3: 9, 4: 16, 5: 25}


def test_series_inverse(capsys):
    code, data = run_json(capsys, "series", "b-species", "--bound", "4", "--invert")
    assert code == 0 and data["matches_incidence"]
    assert [r["num"] for r in data["rows"]] == [1, -1, 1, -1, 1]
    code, out, _ = run(capsys, "series", "vect-waldhausen", "--bound", "3", "--invert")
    assert "q^3" in out


def test_verify_all_subset(capsys):
    code, data = run_json(capsys, "verify-all", "--criteria", "13,14")
    assert code == 0
    assert [r["status"] for r in data["rows"]] == ["PASS", "PASS"]
    code, _data = run_json(capsys, "verify-all", "--criteria", "14", "--expect", "14=fail")
    assert code == 1


def test_usage_errors(capsys):
    code, _out, err = run(capsys, "check", "nat-plus", "--max-n", "3")
    assert code == 2 and "--max-degree" in err
    code, _out, err = run(capsys, "delta", "nat-plus", "--element", "x")
    assert code == 2
    code, _out, err = run(capsys, "check", "nat-plus", "--axioms", "segal", "--expect", "complete=fail")
    assert code == 2


def test_out_file(tmp_path, capsys):
    target = tmp_path / "report.json"
    assert main(["mobius", "nat-plus", "--max-degree", "3", "--format", "json", "--out", str(target)]) == 0
    assert json.loads(target.read_text())["rows"][1] == {"key": "1", "num": -1, "den": 1}


def test_output_is_deterministic(capsys):
    first = run(capsys, "delta", "schmitt-graphs", "--element", "V=3;E=0-1", "--format", "json")[1]
    second = run(capsys, "delta", "schmitt-graphs", "--element", "V=3;E=0-1", "--format", "json")[1]
    assert first == second


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "decompkit", "check", "nat-plus", "--axioms", "segal,complete"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "segal: PASS" in proc.stdout
