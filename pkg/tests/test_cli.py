import csv
import io
import json
import subprocess
import sys

import pytest

from polarmaass.cli import discriminants_up_to, main, parse_complex, parse_form


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_reduce(capsys):
    code, out, _ = run(capsys, "reduce", "--form", "2,2,1")
    doc = json.loads(out)
    assert code == 0
    assert doc["reduced"] == [1, 0, 1]


def test_reduce_rejects_indefinite(capsys):
    code, out, err = run(capsys, "reduce", "--form", "1,3,1")
    assert code == 2 and out == "" and "error" in err


def test_eval_fQ_and_point_encoding(capsys):
    code, out, _ = run(capsys, "eval", "--family", "fQ", "--k", "2", "--form", "1,1,1", "--z", "0,2", "--bound", "2000")
    doc = json.loads(out)
    assert code == 0
    assert doc["z"] == {"x": 0.0, "y": 2.0}
    assert doc["value"][0] == pytest.approx(-0.026386845334616157, abs=2 * doc["tail_bound"] + 1e-12)


def test_eval_negative_coordinates(capsys):
    code, out, _ = run(capsys, "eval", "--family", "green", "--k", "2", "--z", "-0.3,1.5", "--zz", "-0.5,0.9")
    assert code == 0
    assert json.loads(out)["z"]["x"] == -0.3


def test_eval_strip_summation(capsys):
    code, out, _ = run(capsys, "eval", "--family", "fQ", "--k", "2", "--form", "1,1,1", "--z", "0,8", "--summation", "strip")
    doc = json.loads(out)
    assert code == 0 and doc["converged"]
    assert abs(complex(*doc["value"])) < 1e-15


def test_eval_singular_point_exit_code(capsys):
    code, _, err = run(capsys, "eval", "--family", "GQ", "--k", "2", "--form", "1,1,1", "--z", "-0.5,0.8660254037844386")
    assert code == 3 and "error" in err


def test_eval_missing_argument(capsys):
    code, _, _ = run(capsys, "eval", "--family", "fQ", "--k", "2", "--z", "0,2")
    assert code == 2


def test_eval_bad_point(capsys):
    code, _, _ = run(capsys, "eval", "--family", "fQ", "--k", "2", "--form", "1,1,1", "--z", "0,-1")
    assert code == 2


def test_inner_greens_and_wnotz_agree(capsys):
    _, out1, _ = run(capsys, "inner", "--method", "greens", "--k", "2", "--form1", "1,1,1", "--form2", "1,0,1")
    _, out2, _ = run(capsys, "inner", "--method", "wnotz", "--k", "2", "--form1", "1,1,1", "--form2", "1,0,1")
    a, b = json.loads(out1), json.loads(out2)
    assert a["value"][0] == pytest.approx(-2.3866441590400354, rel=1e-12)
    assert b["value"][0] == pytest.approx(a["value"][0], rel=1e-9)
    assert a["method"] == "greens" and a["config"]["bound"] == 500


def test_inner_diagonal_is_domain_error(capsys):
    code, _, _ = run(capsys, "inner", "--method", "greens", "--k", "2", "--form1", "1,1,1", "--form2", "1,1,1")
    assert code == 2


def test_verify_pass_and_fail(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "modularity", "--k", "2", "--D-list", "3")
    doc = json.loads(out)
    assert code == 0 and doc["fail_count"] == 0 and doc["suite"] == "modularity"
    code, out, _ = run(capsys, "verify", "--suite", "modularity", "--k", "2", "--D-list", "3", "--tolerance", "1e-30")
    assert code == 1 and json.loads(out)["fail_count"] > 0


def test_table_green_cm(capsys, tmp_path):
    path = tmp_path / "t.csv"
    code, out, _ = run(capsys, "table", "--task", "green-cm", "--k", "2", "--D-max", "8", "--out", str(path))
    doc = json.loads(out)
    assert code == 0 and doc["rows"] == 12 and not doc["partial"]
    rows = list(csv.DictReader(io.StringIO(path.read_text())))
    assert len(rows) == 12
    vals = {(r["Q1"], r["Q2"]): float(r["value"]) for r in rows}
    for (a, b), v in vals.items():
        assert v == pytest.approx(vals[(b, a)], rel=1e-10)
    # deterministic output
    path2 = tmp_path / "t2.csv"
    run(capsys, "table", "--task", "green-cm", "--k", "2", "--D-max", "8", "--out", str(path2))
    assert path.read_text() == path2.read_text()


def test_table_to_stdout(capsys):
    code, out, err = run(capsys, "table", "--task", "inner-cm", "--k", "2", "--D-max", "4")
    assert code == 0
    assert out.splitlines()[0] == "D1,Q1,D2,Q2,value,tail_bound"
    assert len(out.splitlines()) == 3
    assert json.loads(err)["rows"] == 2


def test_config_file(capsys, tmp_path):
    cfg = tmp_path / "cfg.txt"
    cfg.write_text("# small bound\nbound = 50\n")
    _, out, _ = run(capsys, "inner", "--method", "greens", "--k", "2", "--form1", "1,1,1", "--form2", "1,0,1", "--config", str(cfg))
    assert json.loads(out)["config"]["bound"] == 50
    _, out, _ = run(capsys, "inner", "--method", "greens", "--k", "2", "--form1", "1,1,1", "--form2", "1,0,1", "--config", str(cfg), "--bound", "60")
    assert json.loads(out)["config"]["bound"] == 60
    cfg.write_text("nonsense = 1\n")
    code, _, err = run(capsys, "inner", "--method", "greens", "--k", "2", "--form1", "1,1,1", "--form2", "1,0,1", "--config", str(cfg))
    assert code == 2 and "unknown key" in err


def test_helpers():
    assert parse_complex("-0.5,0.25") == complex(-0.5, 0.25)
    assert parse_form("1,-1,2").a == 1
    assert discriminants_up_to(12) == [3, 4, 7, 8, 11, 12]


def test_console_script():
    proc = subprocess.run([sys.executable, "-m", "polarmaass.cli", "reduce", "--form", "3,5,3"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["reduced"] == [1, 1, 3]
