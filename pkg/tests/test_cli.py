import csv
import io
import json
import subprocess
import sys

import pytest

from scatpoly.cli import main


@pytest.fixture
def medium(tmp_path):
    def write(obj, name="m.json"):
        path = tmp_path / name
        path.write_text(json.dumps(obj))
        return str(path)
    return write


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_poly_coeffs(capsys):
    code, out, _ = run(capsys, "poly", "--p", "2", "--q", "1", "--coeffs")
    assert code == 0
    assert json.loads(out) == {"p": 2, "q": 1, "terms": [
        {"a": 1, "b": 0, "num": "2", "den": "1"},
        {"a": 2, "b": 1, "num": "-2", "den": "1"},
    ]}


def test_poly_zero_case(capsys):
    code, out, _ = run(capsys, "poly", "--p", "0", "--q", "3", "--coeffs")
    assert code == 0 and json.loads(out)["terms"] == []


def test_poly_eval_and_radial(capsys):
    code, out, _ = run(capsys, "poly", "--p", "1", "--q", "1", "--eval", "1.0+0i")
    assert code == 0 and json.loads(out)["value"] == ["0", "0"]
    code, out, _ = run(capsys, "poly", "--p", "2", "--q", "1", "--eval", "0.5")
    assert json.loads(out)["value"] == ["0.75", "0"]
    code, out, _ = run(capsys, "poly", "--p", "1", "--q", "2", "--radial", "--float")
    obj = json.loads(out)
    assert obj["radial"] == ["0", "-1", "0", "1"] and obj["radial_float"][1] == "-1"


def test_poly_bad_point():
    with pytest.raises(SystemExit) as info:
        main(["poly", "--p", "1", "--q", "1", "--eval", "abc"])
    assert info.value.code == 2


def test_medium_conversion(capsys, medium):
    path = medium({"C0": "2", "jumps": [{"x": "1", "C": "-1/2"}, {"x": "3", "C": "-1/2"}]})
    code, out, _ = run(capsys, "medium", path)
    assert code == 0 and json.loads(out) == {"tau": ["2", "4"], "r": ["1/7", "1/5"]}
    back = medium(json.loads(out), "p.json")
    code, out, _ = run(capsys, "medium", back, "--to", "profile")
    assert json.loads(out) == {"C0": "2", "jumps": [{"x": "1", "C": "-1/2"}, {"x": "3", "C": "-1/2"}]}


def test_medium_errors(capsys, medium, tmp_path):
    code, _, err = run(capsys, "medium", medium({"C0": "2", "jumps": [{"x": "1", "C": "-1/2"}]}))
    assert code == 2 and "expected 1" in err
    code, _, _ = run(capsys, "medium", str(tmp_path / "missing.json"))
    assert code == 2


EXAMPLE = {"tau": ["2", "4"], "r": ["1/2", "1/3"]}


def test_greens_compare_and_energy(capsys, medium):
    path = medium(EXAMPLE)
    code, out, _ = run(capsys, "greens", path, "--T", "9", "--compare")
    assert code == 0 and out == "MATCH, 2 arrivals\n"
    code, out, _ = run(capsys, "greens", path, "--T", "9", "--compare", "--format", "json")
    assert json.loads(out)["diffs"] == []
    code, out, _ = run(capsys, "greens", path, "--T", "9", "--energy")
    assert code == 0 and out == "5/16\n"
    code, out, _ = run(capsys, "greens", path, "--T", "9", "--energy", "--float")
    assert out == "5/16,0.3125\n"


def test_greens_csv_json(capsys, medium):
    path = medium(EXAMPLE)
    code, out, _ = run(capsys, "greens", path, "--T", "11", "--float")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["amplitude"] for r in rows] == ["1/2", "1/4", "-1/24"]
    assert rows[2]["amplitude_float"] == "-0.041666666666666664"
    assert rows[2]["contributors"] == "1 2"
    code, out, _ = run(capsys, "greens", path, "--T", "11", "--format", "json", "--oracle")
    obj = json.loads(out)
    assert obj["complete"] and [a["time"] for a in obj["arrivals"]] == ["2", "6", "10"]


def test_greens_budget(capsys, medium, monkeypatch):
    path = medium({"tau": ["1", "1", "1"], "r": ["1/2", "1/2", "1/2"]})
    code, out, err = run(capsys, "greens", path, "--T", "40", "--max-points", "5")
    assert code == 3 and "partial" in err
    assert out.startswith("time,amplitude,contributors")
    code, out, err = run(capsys, "greens", path, "--T", "40", "--oracle", "--max-segments", "50",
                         "--format", "json")
    assert code == 3 and json.loads(out)["complete"] is False
    monkeypatch.setenv("SCATTER_BUDGET", "5")
    assert run(capsys, "greens", path, "--T", "40")[0] == 3
    assert run(capsys, "greens", path, "--T", "40", "--compare")[0] == 3
    assert run(capsys, "greens", path, "--T", "40", "--max-points", "100000")[0] == 0
    monkeypatch.setenv("SCATTER_BUDGET", "junk")
    assert run(capsys, "greens", path, "--T", "4")[0] == 2


def spectrum_rows(capsys, path, T, steps=64, lo="0", hi="6"):
    code, out, _ = run(capsys, "spectrum", path, "--T", T, "--sigma-min", lo, "--sigma-max", hi,
                       "--steps", str(steps))
    assert code == 0
    return list(csv.DictReader(io.StringIO(out)))


def test_spectrum(capsys, medium):
    one = medium({"tau": ["3/2"], "r": ["-2/5"]}, "one.json")
    rows = spectrum_rows(capsys, one, "2")
    assert list(rows[0]) == ["sigma", "re", "im", "abs", "backward_re", "backward_im",
                             "backward_abs", "error"]
    assert all(float(r["error"]) <= 1e-15 for r in rows)
    assert rows[0]["sigma"] == "0" and rows[0]["im"] == "0" and rows[0]["backward_im"] == "0"
    two = medium({"tau": ["2", "3"], "r": ["1/2", "-1/3"]}, "two.json")
    errs = [max(float(r["error"]) for r in spectrum_rows(capsys, two, T)) for T in ("6", "12", "24")]
    assert errs[0] > errs[1] > errs[2]


def test_spectrum_bad_range(capsys, medium):
    path = medium(EXAMPLE)
    assert run(capsys, "spectrum", path, "--T", "5", "--sigma-min", "2", "--sigma-max", "1")[0] == 2


def test_verify_suites(capsys):
    code, out, _ = run(capsys, "verify", "eigen", "--pmax", "8")
    assert code == 0 and out.strip().endswith("eigen: all pass")
    code, out, _ = run(capsys, "verify", "identity", "--n", "2", "--trials", "2", "--json")
    obj = json.loads(out)
    assert code == 0 and obj["passed"] and obj["failures"] == 0
    assert run(capsys, "verify", "eigen", "--seed", "1")[0] == 2


def test_verify_failure_exit_code(capsys):
    # a grid too coarse for the tolerance must fail, not pass quietly
    code, out, _ = run(capsys, "verify", "identity", "--n", "2", "--trials", "1", "--grid", "8")
    assert code == 1 and "FAIL" in out


def test_deterministic_output(tmp_path):
    path = tmp_path / "m.json"
    path.write_text(json.dumps({"tau": ["1", "3/2", "1"], "r": ["1/2", "-1/3", "2/5"]}))
    commands = [
        ["verify", "oracle", "--trials", "3", "--seed", "11"],
        ["verify", "pde", "--trials", "3", "--seed", "4"],
        ["greens", str(path), "--T", "12", "--float"],
        ["spectrum", str(path), "--T", "12", "--sigma-max", "5", "--steps", "33"],
    ]
    for argv in commands:
        outs = [subprocess.run([sys.executable, "-m", "scatpoly", *argv], capture_output=True,
                               check=True).stdout for _ in range(2)]
        assert outs[0] == outs[1] and outs[0]
