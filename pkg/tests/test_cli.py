import json
import subprocess
import sys

import pytest

from meinardus.cli import main, parse_grid


@pytest.fixture(autouse=True)
def _no_cache(monkeypatch):
    monkeypatch.delenv("MEINARDUS_CACHE", raising=False)


def run(capsys, *argv):
    """(exit code, stdout, stderr) of an in-process CLI call."""
    try:
        code = main(list(argv))
    except SystemExit as e:
        code = e.code
    out = capsys.readouterr()
    return code, out.out, out.err


def test_count_csv(capsys):
    code, out, _ = run(capsys, "count", "ones", "10")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "n,p_f_n"
    assert lines[-1] == "10,42"


def test_count_flag_form_and_json(capsys):
    code, out, _ = run(capsys, "count", "--preset", "plane", "--n", "3", "--output", "json")
    assert code == 0
    assert json.loads(out)["p_f_n"] == ["1", "1", "3", "6"]


def test_compare_csv_layout(capsys):
    code, out, _ = run(capsys, "compare", "ones", "--n-grid", "100,400")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "n,p_f_n,p_hat,ratio,log_error"
    slope_row = lines[-1].split(",")
    assert slope_row[0] == "slope"
    assert float(slope_row[1]) == pytest.approx(-0.5, abs=0.05)
    assert float(slope_row[3]) == -0.5


def test_constants_json(capsys):
    code, out, _ = run(capsys, "constants", "so5")
    d = json.loads(out)
    assert code == 0
    assert d["exponents_exact"] == ["1/3", "2/9", "1/9", "0"]
    assert d["b_exact"] == "7/12"
    assert "L0prime" in d["numeric"]


@pytest.mark.parametrize(
    "argv,value",
    [
        (["zeta", "pk", "1.3", "--k", "4"], 1.3054778090727808),
        (["zeta", "mt2", "1", "1", "1"], 2 * 1.2020569031595942),
        (["zeta", "so5", "0", "--method", "mb"], 0.375),
    ],
)
def test_zeta_values(capsys, argv, value):
    code, out, _ = run(capsys, *argv, "--output", "json")
    assert code == 0
    assert json.loads(out)["value"][0] == pytest.approx(value, abs=1e-9)


def test_saddle_and_cauchy(capsys):
    code, out, _ = run(capsys, "saddle", "plane", "1000")
    assert code == 0 and json.loads(out)["residual"] < 1e-6
    code, out, _ = run(capsys, "cauchy", "su3", "50")
    assert code == 0 and json.loads(out)["nearest"] == 18997


def test_explicit_preset(capsys, tmp_path):
    p = tmp_path / "w.txt"
    p.write_text("1 1\n2 1\n")
    code, out, _ = run(capsys, "count", f"explicit:{p}", "6")
    assert code == 0
    # partitions into parts 1 and 2: floor(n/2) + 1
    assert out.strip().splitlines()[-1] == "6,4"
    code, _, err = run(capsys, "constants", f"explicit:{p}")
    assert code == 2


@pytest.mark.parametrize(
    "argv",
    [
        ["count", "ones", "10", "--tol", "1e-3"],
        ["count", "ones", "200000"],
        ["count", "plane", "30000"],
        ["count", "nonsense", "5"],
        ["compare", "ones", "--n-grid", "5,1"],
        ["constants", "so5", "--output", "csv"],
        ["frobnicate"],
        ["zeta", "so5", "0.5", "--eps", "1.5"],
    ],
)
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert json.loads(err.strip().splitlines()[-1])["exit_code"] == 2


@pytest.mark.parametrize(
    "argv",
    [
        ["zeta", "so5", "0.5"],
        ["zeta", "so5", "0.5", "--method", "direct"],
        ["zeta", "pk", "0.4", "--k", "3"],
        ["zeta", "so5", "-1.5", "--method", "mb"],
    ],
)
def test_numeric_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 3
    d = json.loads(err)
    assert d["exit_code"] == 3 and d["message"]


def test_parse_grid():
    assert parse_grid("10,20,5") == [10, 15, 20]
    assert parse_grid("10,22,5") == [10, 15, 20, 22]
    g = parse_grid("1000,100000")
    assert g[0] == 1000 and g[-1] == 100000 and len(g) == 8


def test_threads_do_not_change_output():
    base = [sys.executable, "-m", "meinardus.cli", "zeta", "so5", "0.2,1.5", "--output", "json"]
    a = subprocess.run(base + ["--threads", "1"], capture_output=True, check=True).stdout
    b = subprocess.run(base + ["--threads", "8"], capture_output=True, check=True).stdout
    assert a == b


def test_console_script_installed():
    res = subprocess.run(["meinardus", "count", "so5", "5"], capture_output=True, text=True)
    assert res.returncode == 0
    assert res.stdout.strip().splitlines()[-1] == "5,3"


def test_compare_ratio_monotone(capsys):
    code, out, _ = run(capsys, "compare", "ones", "1000,10000")
    assert code == 0
    ratios = [float(line.split(",")[3]) for line in out.strip().splitlines()[1:-1]]
    assert len(ratios) == 8
    assert all(a < b < 1 for a, b in zip(ratios, ratios[1:]))
