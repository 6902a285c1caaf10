import json

import pytest

from fewdist.cli import _status, main
from fewdist.exact import PointSet


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_gen_and_stats(tmp_path, capsys):
    path = tmp_path / "g.json"
    assert main(["gen", "grid", "--a", "3", "--b", "3", "-o", str(path)]) == 0
    P = PointSet.loads(path.read_text())
    assert len(P) == 9
    code, out, _ = run(capsys, "stats", str(path), "--metric", "euclidean", "--metric", "rect")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "metric,n,distinct_count,max_multiplicity"
    assert lines[1].startswith("euclidean,9,5,")
    assert json.loads(lines[-1])["richness"] == 3


def test_gen_line_deterministic(capsys):
    args = ["gen", "line", "--line", "1,-1,0", "--m", "5", "--n", "20", "--seed", "7"]
    _, a, _ = run(capsys, *args)
    _, b, _ = run(capsys, *args)
    assert a == b and len(json.loads(a)) == 20


def test_gen_infeasible_is_usage_error(capsys):
    code, _, err = run(capsys, "gen", "random", "--n", "50", "--coord-bound", "2")
    assert code == 2 and "error" in err


@pytest.mark.parametrize("metric", ["euclidean", "rect"])
def test_census_and_family(tmp_path, capsys, metric):
    path = tmp_path / "p.json"
    main(["gen", "line", "--line", "2,-1,0", "--m", "5", "--n", "18", "--seed", "3", "-o", str(path)])
    code, out, _ = run(capsys, "census", str(path), "--metric", metric, "--verify-candidates",
                       "--out-dir", str(tmp_path))
    rep = json.loads(out)
    assert code == 0 and rep["cs_holds"] and rep["q1_by_candidates"] == rep["q1"]
    assert (tmp_path / "census.json").exists()
    code, out, _ = run(capsys, "family", str(path), "--metric", metric)
    fam = json.loads(out)
    assert code == 0 and fam["incidences_equal_q2"]
    assert fam["incidences"] == rep["q2"]


@pytest.mark.parametrize("check", ["li", "holder", "lr", "rich", "dyadic"])
def test_energy_verbs(capsys, check):
    code, out, _ = run(capsys, "energy", check, "--A", "0,1,2", "--B", "0,1,2", "--C", "0,1")
    assert code == 0
    assert json.loads(out)["verdict"] in ("HOLDS", "MEASURED")


def test_energy_quad_function(capsys):
    code, out, _ = run(capsys, "energy", "rich", "--A", "0,1,2", "--B", "0,1", "--C", "0", "--f", "quad:1/2,3")
    assert code == 0 and json.loads(out)["verdict"] == "HOLDS"


def test_undecided_warns_but_exits_zero(capsys, caplog):
    code, out, _ = run(capsys, "energy", "li", "--A", "0,1,2,5", "--B", "0,1,3",
                         "--precision-bits", "2", "--precision-cap", "2")
    assert json.loads(out)["verdict"] == "UNDECIDED"
    assert code == 0 and "UNDECIDED" in caplog.text


def test_status_codes():
    assert _status(["HOLDS", "MEASURED"]) == 0
    assert _status(["HOLDS", "UNDECIDED"]) == 0
    assert _status(["HOLDS", "VIOLATED"]) == 1


def test_balance(capsys):
    code, out, _ = run(capsys, "balance")
    d = json.loads(out)
    assert code == 0 and d["exponent"] == "43/52"
    code, out, _ = run(capsys, "balance", "--term", "0,3")
    assert json.loads(out)["exponent"] == "1"
    code, _, err = run(capsys, "balance", "--term", "2,5")
    assert code == 2


def test_sweep(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"sizes": [9, 16, 25]}))
    code, out, _ = run(capsys, "sweep", str(cfg), "--out-dir", str(tmp_path / "a"), "--seed", "4")
    assert code == 0 and json.loads(out)["violations"] == 0
    first = (tmp_path / "a" / "report.csv").read_bytes()
    main(["sweep", str(cfg), "--out-dir", str(tmp_path / "b"), "--seed", "4"])
    assert (tmp_path / "b" / "report.csv").read_bytes() == first


def test_bad_config(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"metric": "rect", "kappa": "0"}))
    code, _, err = run(capsys, "sweep", str(cfg))
    assert code == 2 and "kappa" in err
