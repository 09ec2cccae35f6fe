import csv
import io
import json

import pytest

from hyperoct.cli import RunConfig, main


def write_weights(tmp_path, data, name="w.json"):
    p = tmp_path / name
    p.write_text(json.dumps(data))
    return str(p)


@pytest.fixture
def w2_file(tmp_path):
    return write_weights(tmp_path, {
        "n": 2,
        "sign_flips": [{"set": [1], "weight": 1.0}, {"set": [2], "weight": 1.0}],
        "transpositions": [{"i": 1, "j": 2, "weight": 1.0}],
    }, "w2.json")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    return code, json.loads(out) if out.strip() else None, err


@pytest.mark.parametrize("rep, expected", [("dn", 2.0), ("regular", 2.0), ("jn", 4.0), ("pn", 2.0)])
def test_gap_w2(capsys, w2_file, rep, expected):
    code, report, _ = run_json(capsys, "gap", "--n", "2", "--weights", w2_file, "--rep", rep)
    assert code == 0
    assert report["trials"][0]["gap"] == pytest.approx(expected, abs=1e-10)
    assert set(report) == {"command", "config", "trials", "summary"}


def test_gap_n1(capsys, tmp_path):
    f = write_weights(tmp_path, {"n": 1, "sign_flips": [{"set": [1], "weight": 1.0}]})
    code, report, _ = run_json(capsys, "gap", "--n", "1", "--weights", f, "--rep", "pn")
    assert code == 0
    rec = report["trials"][0]
    assert rec["gap"] == pytest.approx(2.0, abs=1e-14)
    assert rec["trivial_multiplicity"] == 1


def test_gap_sign_rep_n1(capsys, tmp_path):
    f = write_weights(tmp_path, {"n": 1, "sign_flips": [{"set": [1], "weight": 1.0}]})
    _, report, _ = run_json(capsys, "gap", "--weights", f, "--rep", "jn")
    assert report["trials"][0]["gap"] == pytest.approx(2.0)


def test_gap_n_disagrees_with_file(capsys, w2_file):
    code, _, err = run(capsys, "gap", "--n", "3", "--weights", w2_file)
    assert code == 2 and "disagrees" in err


def test_verify_main_n2(capsys):
    code, report, _ = run_json(capsys, "verify-main", "--n", "2", "--trials", "20", "--seed", "7")
    assert code == 0
    assert report["summary"]["trials"] == 20 and report["summary"]["failed"] == 0
    assert report["summary"]["max_deviation"] < 1e-8


def test_verify_main_density_zero(capsys):
    code, report, _ = run_json(capsys, "verify-main", "--n", "3", "--trials", "3", "--density", "0")
    assert code == 0
    for t in report["trials"]:
        assert abs(t["gaps"]["cayley"]) < 1e-12 and abs(t["gaps"]["pn"]) < 1e-12


def test_verify_main_reports_failure_exit_code(capsys, tmp_path):
    # a full sign flip with a path of transpositions: the two gaps differ
    f = write_weights(tmp_path, {
        "n": 3,
        "sign_flips": [{"set": [1, 2, 3], "weight": 1.0}],
        "transpositions": [{"i": 1, "j": 2, "weight": 1.0}, {"i": 2, "j": 3, "weight": 1.0}],
    })
    code, report, _ = run_json(capsys, "verify-main", "--weights", f)
    assert code == 1 and report["summary"]["failed"] == 1


def test_verify_main_rejects_n1(capsys):
    code, _, err = run(capsys, "verify-main", "--n", "1")
    assert code == 2 and "n >= 2" in err


@pytest.mark.parametrize("n, trials", [(3, 30), (4, 5)])
def test_verify_aldous(capsys, n, trials):
    code, report, _ = run_json(capsys, "verify-aldous", "--n", str(n), "--trials", str(trials))
    assert code == 0 and report["summary"]["passed"] == trials


def test_verify_aldous_single_transposition(capsys, tmp_path):
    f = write_weights(tmp_path, {"n": 3, "transpositions": [{"i": 1, "j": 2, "weight": 1.0}]})
    code, report, _ = run_json(capsys, "verify-aldous", "--weights", f)
    gaps = report["trials"][0]["gaps"]
    assert code == 0 and abs(gaps["cayley_sn"]) < 1e-12 and abs(gaps["d0"]) < 1e-12


def test_octopus(capsys):
    code, report, _ = run_json(capsys, "octopus", "--n", "3", "--trials", "10")
    assert code == 0
    for t in report["trials"]:
        assert t["psd"] and t["rank_one_ok"] and t["lambda_min_scaled"] >= -1e-9


def test_octopus_transpositions_only(capsys):
    code, report, _ = run_json(capsys, "octopus", "--n", "4", "--trials", "3", "--transpositions-only")
    assert code == 0 and report["summary"]["passed"] == 3


@pytest.mark.parametrize("family", ["a", "b", "c"])
def test_counterexample(capsys, family):
    code, report, _ = run_json(capsys, "counterexample", "--family", family)
    assert code == 0
    rec = report["trials"][0]
    assert rec["passed"] and rec["n"] == 2 and report["config"]["n"] == 2
    g = rec["gaps"]
    if family == "a":
        assert g["d0n"] < g["dn"]
    elif family == "b":
        assert g["dn"] < g["d0n"]
    else:
        assert g["cayley"] == pytest.approx(4e-3, abs=1e-10) and g["pn"] > 1


def test_counterexample_bad_epsilon(capsys):
    code, _, err = run(capsys, "counterexample", "--epsilon", "0")
    assert code == 2 and "epsilon" in err


@pytest.mark.parametrize("n, count", [(2, 8), (3, 48), (4, 7)])
def test_decompose(capsys, n, count):
    code, report, _ = run_json(capsys, "decompose", "--n", str(n), "--trials", "7")
    rec = report["trials"][0]
    assert code == 0 and rec["elements"] == count
    assert rec["max_off_block"] < 1e-12 and rec["deviation"] < 1e-12


def test_csv_output(capsys):
    code, out, _ = run(capsys, "verify-main", "--n", "2", "--trials", "3", "--output", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 3
    assert {"gaps.cayley", "gaps.pn", "passed", "trial", "weights_digest"} <= set(rows[0])
    assert [r["trial"] for r in rows] == ["0", "1", "2"]


@pytest.mark.parametrize("content, needle", [
    ('{"n": 2,\n "sign_flips": [}', "line 2"),
    ('{"n": 2, "sign_flips": [{"set": [2, 1], "weight": 1}]}', "sign_flips[0].set"),
    ('{"n": 2, "transpositions": [{"i": 1, "j": 2, "weight": -1}]}', "transpositions[0].weight"),
])
def test_malformed_weights(capsys, tmp_path, content, needle):
    p = tmp_path / "bad.json"
    p.write_text(content)
    code, out, err = run(capsys, "gap", "--weights", str(p))
    assert code == 2 and out == "" and needle in err


def test_missing_weights_file(capsys, tmp_path):
    code, _, err = run(capsys, "gap", "--weights", str(tmp_path / "nope.json"))
    assert code == 2 and "error" in err


def test_missing_n(capsys):
    code, _, err = run(capsys, "gap")
    assert code == 2 and "--n" in err


@pytest.mark.parametrize("argv", [["--trials", "0"], ["--density", "1.5"], ["--tol", "0"], ["--n", "0"]])
def test_config_validation(capsys, argv):
    code, _, _ = run(capsys, "verify-main", "--n", "2", *argv)
    assert code == 2


def test_rank_guard(capsys, monkeypatch):
    monkeypatch.delenv("HYPEROCT_MAX_N", raising=False)
    code, _, err = run(capsys, "verify-main", "--n", "6")
    assert code == 2 and "n <= 5" in err and "--allow-large" in err
    monkeypatch.setenv("HYPEROCT_MAX_N", "2")
    code, _, err = run(capsys, "verify-main", "--n", "3")
    assert code == 2 and "n <= 2" in err


def test_allow_large_lifts_guard(capsys, monkeypatch):
    monkeypatch.setenv("HYPEROCT_MAX_N", "2")
    code, _, _ = run(capsys, "verify-main", "--n", "3", "--trials", "2", "--density", "0")
    assert code == 2
    code, report, _ = run_json(capsys, "verify-main", "--n", "3", "--trials", "2", "--density", "0", "--allow-large")
    assert code == 0 and report["config"]["allow_large"] is True


def strip_wall(report):
    report["summary"].pop("wall_time")
    for t in report["trials"]:
        t.pop("wall_time")
    return json.dumps(report, sort_keys=True)


def test_reports_are_reproducible(capsys):
    argv = ["verify-main", "--n", "3", "--trials", "5", "--seed", "11"]
    _, a, _ = run_json(capsys, *argv)
    _, b, _ = run_json(capsys, *argv)
    assert strip_wall(a) == strip_wall(b)


def test_workers_do_not_change_report(capsys):
    argv = ["octopus", "--n", "3", "--trials", "8", "--seed", "3"]
    _, serial, _ = run_json(capsys, *argv)
    _, parallel, _ = run_json(capsys, *argv, "--workers", "4")
    assert [t["trial"] for t in parallel["trials"]] == list(range(8))
    parallel["config"]["workers"] = 1
    assert strip_wall(serial) == strip_wall(parallel)


def test_summary_matches_trials(capsys):
    _, report, _ = run_json(capsys, "verify-main", "--n", "2", "--trials", "6")
    s, trials = report["summary"], report["trials"]
    assert s["trials"] == len(trials) == s["passed"] + s["failed"]
    assert s["max_deviation"] == max(t["deviation"] for t in trials)


def test_run_config_defaults():
    cfg = RunConfig("gap", n=2)
    cfg.validate()
    assert cfg.rep == "pn" and cfg.output == "json" and cfg.epsilon == 1e-3
