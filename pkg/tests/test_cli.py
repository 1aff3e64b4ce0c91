import csv
import io
import json

import pytest

from subreg.cli import main, run_suite, summary_csv

SQUARE = '{"type": "Quadratic", "A": [[2]], "b": [0]}'
QUARTIC = '{"type": "PowerEven", "p": 4}'
ABS = '{"type": "Abs"}'
HALF = '{"type": "Quadratic", "A": [[1]], "b": [0]}'


def read_json(path):
    return json.loads(path.read_text(encoding="utf-8"))


def test_analyze_square(tmp_path):
    code = main(["analyze", "--function", SQUARE, "--xbar", "0", "--ystar", "0", "--out", str(tmp_path)])
    assert code == 0
    doc = read_json(tmp_path / "analysis.json")
    assert doc["schema"] == "1"
    g = doc["subregularity_growth"]
    assert g["kappa"] == pytest.approx(0.5, abs=1e-9)
    assert g["c"] == pytest.approx(1.0, abs=1e-9)
    assert g["forward_ok"] and g["backward_ok"]
    header = (tmp_path / "subregularity_ledger.csv").read_text().splitlines()[0]
    assert header == "x,numerator,denominator,ratio"


def test_analyze_quartic_reports_negative_verdicts(tmp_path):
    code = main(["analyze", "--function", QUARTIC, "--xbar", "0", "--ystar", "0", "--out", str(tmp_path)])
    assert code == 0
    v = read_json(tmp_path / "analysis.json")["verdict"]
    assert v["subregularity"] == "not subregular"
    assert v["growth"] == "no growth"


def test_analyze_invalid_base_pair(tmp_path, capsys):
    code = main(["analyze", "--function", SQUARE, "--xbar", "0", "--ystar", "1", "--out", str(tmp_path)])
    assert code == 2
    assert "base pair invalid" in capsys.readouterr().err
    assert not (tmp_path / "analysis.json").exists()


def test_function_from_file(tmp_path):
    path = tmp_path / "f.json"
    path.write_text(ABS)
    assert main(["analyze", "--function", str(path), "--xbar", "0", "--ystar", "0", "--out", str(tmp_path)]) == 0


@pytest.mark.parametrize(
    "argv",
    [
        ["analyze", "--function", "missing.json"],
        ["analyze", "--function", SQUARE, "--xbar", "0,0"],
        ["analyze", "--function", SQUARE, "--radius", "-1"],
        ["analyze", "--function", "{not json"],
        ["prox", "--function", SQUARE, "--schedule", '{"type": "Constant", "lambda": -1}'],
        ["solution-map", "--function", HALF, "--xbar", "0", "--ystar", "1"],
    ],
)
def test_config_errors_exit_2(tmp_path, argv):
    assert main(argv + ["--out", str(tmp_path)]) == 2


@pytest.mark.parametrize(
    "schedule, x0, func, expected",
    [
        ('{"type": "Constant", "lambda": 2}', "1", SQUARE, "linear(0.5)"),
        ('{"type": "Harmonic", "lambda0": 2}', "1", SQUARE, "superlinear"),
        ('{"type": "Constant", "lambda": 1}', "1", QUARTIC, "sublinear"),
        ('{"type": "Constant", "lambda": 1}', "10", ABS, "finite"),
        ('{"type": "Generalized", "steps": [{"type": "Saturated", "lambda": 2, "cap": 0.1}], "repeat": 80}', "1", SQUARE, "linear(0.5)"),
    ],
)
def test_prox_rates(tmp_path, schedule, x0, func, expected):
    code = main(["prox", "--function", func, "--x0", x0, "--schedule", schedule, "--out", str(tmp_path)])
    assert code == 0
    doc = read_json(tmp_path / "rate.json")
    assert doc["rate"]["label"] == expected
    assert (tmp_path / "run.csv").read_text().startswith("n,x,f,step,residual,error,ratio\n")
    assert (tmp_path / "errors.csv").read_text().startswith("n,error\n")


def test_duality_outputs(tmp_path):
    code = main(["duality", "--function", HALF, "--xbar", "0", "--ystar", "0", "--out", str(tmp_path)])
    assert code == 0
    doc = read_json(tmp_path / "duality.json")
    assert doc["biconjugation"]["ok"]
    assert doc["conjugate_growth"]["calm_ok"] and doc["conjugate_growth"]["isolated_ok"]


def test_duality_unsupported_conjugate_falls_back(tmp_path):
    code = main(["duality", "--function", QUARTIC, "--xbar", "0", "--ystar", "0", "--out", str(tmp_path)])
    assert code == 0
    assert "unsupported" in read_json(tmp_path / "duality.json")["conjugate"]


def test_solution_map_quartic(tmp_path):
    code = main(["solution-map", "--function", QUARTIC, "--xbar", "0", "--ystar", "0", "--out", str(tmp_path)])
    assert code == 0
    doc = read_json(tmp_path / "solution_map.json")
    assert doc["calm"] is False and doc["calm_ok"] is True


def test_outputs_are_deterministic(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for d in (a, b):
        main(["analyze", "--function", ABS, "--xbar", "0", "--ystar", "0.5", "--seed", "3", "--out", str(d)])
    names = sorted(p.name for p in a.iterdir())
    assert names == sorted(p.name for p in b.iterdir())
    for n in names:
        assert (a / n).read_bytes() == (b / n).read_bytes()


def test_suite_filter_and_seed(tmp_path):
    rows = run_suite(0, "prox")
    assert rows and all("prox" in r[1] for r in rows)
    assert all(r[4] for r in rows)
    # the seed only moves random samples; pass/fail is unchanged
    assert [r[4] for r in run_suite(1, "regularity")] == [r[4] for r in run_suite(0, "regularity")]


def test_suite_writes_summary(tmp_path):
    assert main(["suite", "--filter", "solution_map", "--out", str(tmp_path)]) == 0
    rows = list(csv.reader(io.StringIO((tmp_path / "summary.csv").read_text())))
    assert rows[0] == ["instance", "check", "expected", "measured", "pass"]
    assert all(r[4] == "true" for r in rows[1:])


def test_summary_csv_marks_failures():
    text = summary_csv([("x", "check", 1, 2, False)])
    assert text.splitlines()[1] == "x,check,1,2,false"


def test_suite_lambda_sweep_matches_quadratic_rate():
    # square has c = 1, so the exact proximal rate is lam / (lam + 2)
    row = next(r for r in run_suite(0, "lambda_sweep") if r[0] == "square")
    assert row[4]
    for item in row[3].split():
        lam, label = item.split(":")
        q = float(label[len("linear("):-1])
        assert q == pytest.approx(float(lam) / (float(lam) + 2), abs=1e-5)
