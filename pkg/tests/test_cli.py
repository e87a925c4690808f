import csv
import io
import json
import subprocess
import sys
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from btmelnikov.arcgen import monomials
from btmelnikov.cli import Config, coeffs_from_json, coeffs_to_json, parse_grid, run, UsageError
from btmelnikov.core import Curve
from btmelnikov.melnikov import CurveCoeffs, melnikov_eval

AREA = {"variant": "curve", "n": 1, "m": 1, "b_plus": {"0,1": "1"}, "b_minus": {"0,1": "1"}}


@pytest.fixture
def area_file(tmp_path):
    path = tmp_path / "area.json"
    path.write_text(json.dumps(AREA))
    return str(path)


def test_eval_csv(area_file, capsys):
    assert run(["eval", "--coeffs", area_file, "--grid", "0.01:0.16:7"]) == 0
    rows = list(csv.reader(io.StringIO(capsys.readouterr().out)))
    assert rows[0] == ["h", "M", "est_error"]
    assert len(rows) == 8
    h, m, err = map(float, rows[3])
    c, _ = coeffs_from_json(AREA)
    assert m == melnikov_eval(h, c, Curve(1)).value
    assert float(err) >= 0
    # 17 significant digits round-trip doubles exactly
    assert rows[1][0] == format(0.01, ".17g")


def test_eval_to_file_with_report(area_file, tmp_path):
    out, rep = tmp_path / "m.csv", tmp_path / "r.json"
    assert run(["eval", "--coeffs", area_file, "--grid", "0.01:0.1:3", "--out", str(out),
                "--report", str(rep)]) == 0
    assert out.read_text().count("\n") == 4
    report = json.loads(rep.read_text())
    assert report["schema_version"] == 1 and report["exit_status"] == 0
    assert report["inputs"]["config"]["grid"] == "0.01:0.1:3"


@pytest.mark.parametrize("argv", [
    ["frobnicate"],
    ["eval", "--coeffs", "missing.json", "--grid", "0.01:0.1:3"],
    ["bound-check", "--n", "5", "--trials", "1"],
    ["jacobian", "--source", "quoted", "--columns", "design"],
    ["design-11", "--targets", "0.01,0.02"],
])
def test_usage_errors(argv):
    assert run(argv) == 2


def test_count_zeros_grid_minimum(area_file):
    assert run(["count-zeros", "--coeffs", area_file, "--grid-points", "8"]) == 2


def test_bad_grid(area_file):
    for grid in ("0.1:0.01:5", "0:0.1:5", "0.01:0.2:5", "0.01:0.1:1", "a:b:c"):
        assert run(["eval", "--coeffs", area_file, "--grid", grid]) == 2


def test_bad_variant(tmp_path):
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"variant": "lines"}))
    assert run(["reduce", "--coeffs", str(path)]) == 2


def test_jacobian_outputs(capsys):
    assert run(["jacobian"]) == 0
    assert capsys.readouterr().out.strip() == (
        "-27450313605683048479400805553832/22438529766048083033029306462875 * pi^2")
    assert run(["jacobian", "--source", "derived", "--columns", "design"]) == 0
    assert capsys.readouterr().out.strip() == (
        "9010452244322886457568/376896443538222609104380725 * pi^2")


def test_reduce(tmp_path, capsys):
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"variant": "curve", "n": 2, "a_plus": {"2,0": "1"}}))
    assert run(["reduce", "--coeffs", str(path)]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["phi"] == ["0", "0", "0", "0", "0", "2"]
    assert data["degree_violations"] == ["phi: degree 5 > 3"]


def test_count_zeros(area_file, capsys):
    assert run(["count-zeros", "--coeffs", area_file, "--grid-points", "64"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["count"] == 0 and data["identically_zero"] is False


def test_bound_check(capsys):
    assert run(["bound-check", "--n", "1", "--trials", "3", "--grid-points", "64"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["passed"] and data["bound"] == 102


def test_verify_pass_and_fail(capsys):
    assert run(["verify-green"]) == 0
    assert capsys.readouterr().out.startswith("PASS")
    assert run(["verify-series"]) == 1
    assert "FAIL phi" in capsys.readouterr().out


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "btmelnikov", "--help"], capture_output=True, text=True)
    assert out.returncode == 0 and "count-zeros" in out.stdout


def test_parse_grid():
    assert parse_grid("0.01:0.1:5") == (0.01, 0.1, 5)
    with pytest.raises(UsageError):
        parse_grid("0.01:0.1")


configs = st.builds(
    Config,
    switching=st.sampled_from(["curve:1", "curve:3", "quadrants"]),
    coefficients=st.one_of(st.none(), st.just("c.json"), st.just(AREA)),
    grid=st.one_of(st.none(), st.just("0.001:0.1:50")),
    abs_tol=st.floats(1e-15, 1e-6),
    rel_tol=st.floats(1e-15, 1e-6),
    precision=st.one_of(st.none(), st.integers(20, 60)),
    outputs=st.dictionaries(st.sampled_from(["out", "report"]), st.text(max_size=8)),
    seed=st.integers(0, 2 ** 31),
)


@given(configs)
def test_config_round_trip(cfg):
    assert Config.loads(cfg.dumps()) == cfg


fracs = st.fractions(min_value=-5, max_value=5, max_denominator=9)


@given(st.integers(1, 3).flatmap(lambda n: st.tuples(
    st.just(n), *[st.dictionaries(st.sampled_from(monomials(n)), fracs, max_size=3)] * 4)))
def test_coefficient_json_round_trip(data):
    n, *maps = data
    c = CurveCoeffs(n, *maps)
    back, switching = coeffs_from_json(json.loads(json.dumps(coeffs_to_json(c, Curve(2)))))
    assert back == c and switching == Curve(2)


def test_config_rejects_bad_values():
    with pytest.raises(ValueError):
        Config(switching="curve:0")
    with pytest.raises(UsageError):
        Config(grid="0.2:0.3:4")
    assert Fraction(1, 3) == Fraction(coeffs_to_json(CurveCoeffs(1, b_plus={(0, 1): Fraction(1, 3)}),
                                                     Curve(1))["b_plus"]["0,1"])
