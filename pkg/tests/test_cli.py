import json
import subprocess
import sys

import pytest

from hardylab import catalog
from hardylab.cli import main, payload_bytes, run_report
from hardylab.germs import Family


def _write(tmp_path, name, desc):
    p = tmp_path / name
    p.write_text(json.dumps(desc))
    return str(p)


def test_schema_error_exit_code(tmp_path, capsys):
    spec = _write(tmp_path, "bad.json", {"analysis": "avg", "grid": [100, 10]})
    assert main(["avg", "--spec", spec]) == 2
    assert "grid" in capsys.readouterr().err


def test_analysis_mismatch_is_schema_error(tmp_path, capsys):
    spec = _write(tmp_path, "c.json", {"analysis": "avg"})
    assert main(["condition", "--spec", spec]) == 2


def test_avg_json_and_csv(tmp_path, capsys):
    desc = {"analysis": "avg", "grid": [100, 1000], "weight": "t",
            "params": {"sequence": {"kind": "one"}}}
    spec = _write(tmp_path, "avg.json", desc)
    assert main(["avg", "--spec", spec]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["payload"]["report"]["averages"] == [1.0, 1.0]
    out = tmp_path / "avg.csv"
    assert main(["avg", "--spec", spec, "--format", "csv", "--out", str(out)]) == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0].startswith("N,weighted_average,weight_total")
    assert lines[1].startswith("100,1.0")


def test_condition_reports_example2_witness(tmp_path, capsys):
    desc = {"analysis": "condition", "family": {"builtin": "example2"}, "weight": "t"}
    spec = _write(tmp_path, "cond.json", desc)
    assert main(["condition", "--spec", spec]) == 0
    rep = json.loads(capsys.readouterr().out)
    inf = rep["payload"]["integer_distance"]
    assert inf["verdict"] == "fails"
    assert inf["witness"]["q"] == "t^3 + t^2"
    assert inf["witness"]["residual"] == "1/2"


def test_pattern_cli_example1(tmp_path, capsys):
    desc = {
        "analysis": "pattern",
        "family": {"builtin": "example1"},
        "rounding": "floor",
        "set": {"type": "odds"},
        "params": {"n_min": 2, "n_max": 500, "a_max": 10 ** 6},
    }
    spec = _write(tmp_path, "pat.json", desc)
    assert main(["pattern", "--spec", spec]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["payload"]["result"]["found"] is False
    assert rep["payload"]["result"]["searched"]["n_max"] == 500


def test_probe_cli_example5(tmp_path, capsys):
    desc = {
        "analysis": "probe",
        "family": {"builtin": "example5"},
        "rounding": "nearest",
        "set": {"type": "bohr", "builtin": "example5", "eps": 0.01},
        "params": {"ell": 2, "n_max": 50, "a_max": 500,
                   "combination": "example5", "t": 10 ** 4},
    }
    spec = _write(tmp_path, "probe.json", desc)
    assert main(["probe", "--spec", spec]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["payload"]["search"]["found"] is False
    assert abs(rep["payload"]["combination"]["value"] - 0.9906) < 1e-3


def test_unknown_verdict_exit_code(tmp_path, capsys):
    # a family whose checks both come back unknown: undeclared product table
    # makes the irrational cancelling direction unsearchable
    fam = {
        "constants": [
            {"name": "a", "value": "0.6180339887498948482045868343656381177203091798057628621354486227",
             "independent": True}
        ],
        "functions": [
            {"name": "f1", "terms": [{"coeff": {"a": "1"}, "t_exp": "3/2"}]},
            {"name": "f2", "terms": [{"coeff": {"1": "1"}, "t_exp": "3/2"},
                                      {"coeff": {"1": "1"}, "t_exp": "1"}]},
        ],
    }
    desc = {"analysis": "condition", "family": fam, "weight": "t"}
    spec = _write(tmp_path, "unk.json", desc)
    code = main(["condition", "--spec", spec])
    rep = json.loads(capsys.readouterr().out)
    assert code == 5
    assert rep["payload"]["integer_distance"]["verdict"] == "unknown"
    assert rep["payload"]["intersective_span"]["verdict"] == "unknown"


def test_golden_families_round_trip():
    for name in ("example1", "example2", "example4", "example5", "example8"):
        fam = catalog.build_family(name)
        blob = fam.to_json()
        fam2 = Family.from_json(blob)
        assert fam2.to_json() == blob, name


def test_payload_reproducibility_across_threads():
    desc = {
        "analysis": "multicorr",
        "family": {"builtin": "corollaryB3"},
        "system": {"builtin": "torus_sqrt2m1"},
        "box": [[0.0, 0.3]],
        "weight": "t",
        "rounding": "nearest",
        "grid": [1000, 5000],
    }
    blobs = []
    for threads in (1, 2, 8):
        d = dict(desc)
        d["threads"] = threads
        report, code = run_report(d)
        assert code == 0
        blobs.append(payload_bytes(report))
    assert blobs[0] == blobs[1] == blobs[2]


def test_equi_cli_weyl_and_joint(tmp_path, capsys):
    fam = {
        "constants": [{"name": "sqrt2", "value": {"sqrt": "2"}, "independent": True}],
        "products": {"sqrt2*sqrt2": "2"},
        "functions": [
            {"name": "f1", "terms": [{"coeff": {"sqrt2": "1"}, "t_exp": "1"}]}
        ],
    }
    desc = {"analysis": "equi", "family": fam, "grid": [10 ** 4], "weight": "t",
            "params": {"kind": "weyl", "function": "f1", "h_max": 5}}
    spec = _write(tmp_path, "equi.json", desc)
    assert main(["equi", "--spec", spec]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["payload"]["report"]["worst"] < 0.02

    desc2 = {
        "analysis": "equi",
        "family": {"builtin": "corollaryB3"},
        "system": {"builtin": "torus_sqrt2m1"},
        "grid": [5000],
        "weight": "t",
        "params": {"kind": "joint", "max_level": 3},
    }
    spec2 = _write(tmp_path, "equi2.json", desc2)
    assert main(["equi", "--spec", spec2]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["payload"]["report"]["worst"] < 0.1


def test_pattern_cli_example2_bohr(tmp_path, capsys):
    desc = {
        "analysis": "pattern",
        "family": {"builtin": "example2"},
        "rounding": "nearest",
        "set": {"type": "bohr", "builtin": "example2"},
        "params": {"n_max": 200, "a_max": 2000},
    }
    spec = _write(tmp_path, "pat2.json", desc)
    assert main(["pattern", "--spec", spec]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["payload"]["result"]["found"] is False


def test_return_set_cli_example8(tmp_path, capsys):
    desc = {
        "analysis": "return-set",
        "family": {"builtin": "example8"},
        "system": {"builtin": "two_point"},
        "subset": [0],
        "rounding": "nearest",
        "params": {"N": 2000, "window_lengths": [500]},
    }
    spec = _write(tmp_path, "rs.json", desc)
    assert main(["return-set", "--spec", spec]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["payload"]["count"] == 0
    assert rep["payload"]["banach_probe"]["500"] == 0.0


def test_builtins_catalog(capsys):
    assert main(["builtins", "--filter", "example8"]) == 0
    rep = json.loads(capsys.readouterr().out)
    fam = rep["payload"]["families"]["example8"]
    assert "alpha" in fam["slots"] and "C" in fam["slots"]
    assert main(["builtins", "--filter", "corollaryA2"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert "exponents" in rep["payload"]["families"]["corollaryA2"]["slots"]
    assert main(["builtins"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert len(rep["payload"]["families"]) >= 7


def test_console_script_entry_point(tmp_path):
    desc = {"analysis": "avg", "grid": [100], "params": {"sequence": {"kind": "one"}}}
    spec = _write(tmp_path, "a.json", desc)
    proc = subprocess.run(
        [sys.executable, "-m", "hardylab.cli", "avg", "--spec", spec],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["payload"]["report"]["averages"] == [1.0]
