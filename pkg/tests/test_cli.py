"""Command line behaviour: records, exit codes, env overrides, formats."""

import csv
import io
import json

import pytest

from torus_ends import serialize as ser
from torus_ends.cli import main
from torus_ends.farey import parse_slope


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def record(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


def test_trace_slope(capsys):
    r = record(capsys, "trace", "--char", "3,3,3", "--slope", "2/5")
    assert r["value"] == {"re": 87.0, "im": 0.0}
    assert r["slope"] == "2/5"


def test_trace_word(capsys):
    r = record(capsys, "trace", "--char", "3,3,3", "--word", "XY")
    assert r["value"]["re"] == pytest.approx(3.0)


def test_kappa(capsys):
    r = record(capsys, "kappa", "--char", "0,1,1i")
    assert r["kappa"]["re"] == pytest.approx(-2.0)
    assert r["command"] == "kappa"


def test_act_preserves_kappa(capsys):
    r = record(capsys, "act", "--char", "1,2,3", "--gens", "c s xy c")
    assert r["drift"] < 1e-9
    assert r["result_kappa"]["re"] == pytest.approx(r["kappa"]["re"])


def test_bq_markoff(capsys):
    r = record(capsys, "bq", "--char", "3,3,3")
    assert r["verdict"] == "satisfied"


def test_classify_kinds(capsys):
    assert record(capsys, "classify", "--char", "3,3,3")["classification"] == "Empty"
    assert record(capsys, "classify", "--char", "0,3,3")["classification"] == "SingletonCurve"
    assert record(capsys, "classify", "--char", "1,1,1")["classification"] == "FullPL"


def test_tau_trace_states(capsys):
    r = record(capsys, "tau", "--char", "0,1,1i", "--trace")
    assert r["steps"] == len(r["states"])


def test_tau_rejects_non_imaginary(capsys):
    code, _, err = run(capsys, "tau", "--char", "3,3,3")
    assert code == 2 and "error" in err


def test_parse_error_shows_caret(capsys):
    code, _, err = run(capsys, "kappa", "--char", "1,2,zz")
    assert code == 2
    assert "^" in err


@pytest.mark.parametrize("argv", [
    ["trace", "--char", "1,1,1", "--slope", "0/0"],
    ["act", "--char", "1,1,1", "--gens", "q"],
    ["render", "--char", "1,1,1", "--depth", "17"],
    ["bq", "--char", "1,1,1", "--max-vertices", "0"],
    ["nosuch", "--char", "1,1,1"],
])
def test_bad_input_exit_2(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_strict_exhaustion_exit_3(capsys):
    assert run(capsys, "ends", "--char", "0,1,1i", "--max-vertices", "3")[0] == 0
    code, out, _ = run(capsys, "ends", "--char", "0,1,1i", "--max-vertices", "3", "--strict")
    assert code == 3
    assert json.loads(out)["cover"]["partial"] is True


def test_env_overrides_and_flag_wins(capsys, monkeypatch):
    monkeypatch.setenv("TORUS_ENDS_DEPTH", "5")
    monkeypatch.setenv("TORUS_ENDS_TOL", "1e-7")
    r = record(capsys, "ends", "--char", "0,1,1i")
    assert r["cover"]["depth"] == 5 and r["config"]["tol"] == 1e-7
    r = record(capsys, "ends", "--char", "0,1,1i", "--depth", "6")
    assert r["cover"]["depth"] == 6


def test_bad_env_exit_2(capsys, monkeypatch):
    monkeypatch.setenv("TORUS_ENDS_MAX_VERTICES", "lots")
    assert run(capsys, "bq", "--char", "3,3,3")[0] == 2


def test_records_are_reproducible(capsys):
    argv = ["classify", "--char", "0,1,1i", "--depth", "8"]
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    assert a == b
    assert "timing" not in json.loads(a)
    assert "timing" in record(capsys, *argv, "--timing")


@pytest.mark.parametrize("argv", [
    ["trace", "--char", "0,1,1i", "--slope=-3/7"],
    ["kappa", "--char", "2,2i,-2i"],
    ["bq", "--char", "1,1,1i"],
    ["ends", "--char", "1,1,1", "--depth", "4"],
    ["classify", "--char", "0,1,1i", "--depth", "6"],
    ["classify", "--char", "2,3,1.5"],
    ["tau", "--char", "0,1,1i"],
])
def test_json_round_trip(capsys, argv):
    code, out, _ = run(capsys, *argv)
    assert code in (0, 3)
    r = ser.loads(out)
    assert ser.loads(ser.dumps(r)) == r
    assert ser.dumps(r) + "\n" == out


def test_cover_csv_circular_order(capsys):
    code, out, _ = run(capsys, "ends", "--char", "0,1,1i", "--depth", "8", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert rows and {r["kind"] for r in rows} <= {"arc", "point"}
    keys = [parse_slope(r["lo"]).circle_key() for r in rows]
    assert keys == sorted(keys)


def test_flat_csv(capsys):
    code, out, _ = run(capsys, "kappa", "--char", "3,3,3", "--format", "csv")
    rows = dict(csv.reader(io.StringIO(out)))
    assert rows["command"] == "kappa"
    assert float(rows["kappa.re"]) == pytest.approx(-2.0)


def test_out_file(capsys, tmp_path):
    p = tmp_path / "r.json"
    code, out, _ = run(capsys, "bq", "--char", "3,3,3", "--out", str(p))
    assert code == 0 and out == ""
    assert json.loads(p.read_text())["verdict"] == "satisfied"


def test_render_to_file(capsys, tmp_path):
    p = tmp_path / "r.svg"
    code, out, _ = run(capsys, "render", "--char", "0,3,3", "--depth", "4", "--out", str(p))
    assert code == 0
    assert p.read_text().startswith("<?xml")
    assert json.loads(out)["depth"] == 4


def test_unwritable_out(capsys, tmp_path):
    code, _, _ = run(capsys, "kappa", "--char", "3,3,3", "--out", str(tmp_path / "no" / "x.json"))
    assert code == 2
