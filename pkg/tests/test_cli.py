import json
from fractions import Fraction as F

import pytest

from superosc.cli import main
from superosc.coefficients import coeffs_closed_form, coeffs_from_dict
from superosc.grids import grid_from_dict, grid_power_numerator
from superosc.supershift import exp_generator


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


def test_coeffs_example(capsys):
    doc = run_json(capsys, "coeffs", "--grid", "uniform", "--n", "2", "--a", "2", "--format", "json")
    assert doc["values"] == ["3", "-3", "1"]
    assert doc["l1_norm"] == "7" and doc["superoscillatory"] is True
    assert coeffs_from_dict(doc) == coeffs_closed_form(grid_from_dict(doc["grid"]), 2)


def test_taylor_check_example(capsys):
    doc = run_json(capsys, "taylor-check", "--grid", "uniform", "--n", "8", "--a", "5/2")
    assert doc["exact"] is True and doc["max_abs"] == "0"


def test_grid_example(capsys):
    doc = run_json(capsys, "grid", "--family", "power-num", "--n", "2", "--p", "2")
    assert doc["band_limited"] is False and doc["nodes"] == ["1", "0", "-3"]
    assert grid_from_dict(doc) == grid_power_numerator(2, 2)


def test_decimal_inputs_are_exact(capsys):
    doc = run_json(capsys, "coeffs", "--grid", "custom", "--nodes", "1,-1", "--a", "2.5")
    assert doc["a"] == "5/2" and doc["values"] == ["7/4", "-3/4"]


def test_vandermonde_and_binomial_methods(capsys):
    vs = run_json(capsys, "coeffs", "--n", "4", "--a", "3", "--method", "vandermonde-solve")
    cf = run_json(capsys, "coeffs", "--n", "4", "--a", "3")
    assert vs["values"] == cf["values"]
    bi = run_json(capsys, "coeffs", "--n", "1", "--a", "2", "--method", "binomial")
    assert bi["values"] == ["3/2", "-1/2"]


def test_classic_taylor_residual_nonzero(capsys):
    doc = run_json(capsys, "taylor-check", "--n", "4", "--a", "2", "--kind", "classic-fn")
    assert doc["exact"] is False and F(doc["max_abs"]) > 0


def test_eval_points(capsys):
    doc = run_json(capsys, "eval", "--n", "1", "--a", "2", "--x", "0,1/10", "--bits", "128")
    first, second = doc["points"]
    assert first["value"] == {"re": "1", "im": "0"} and first["abs_err"] == "0" and first["local_freq"] == "2"
    assert second["value"]["re"].startswith("0.99500416527802576609556198780")
    assert second["value"]["im"].startswith("0.19966683329365630461362839682")


def test_eval_derivative(capsys):
    doc = run_json(capsys, "eval", "--n", "3", "--a", "2", "--x", "0", "--deriv", "2")
    assert doc["points"][0]["value"] == {"re": "-4", "im": "0"}


def test_classic_product_vs_sum(capsys):
    doc = run_json(capsys, "classic", "--n", "6", "--a", "3", "--x", "1/3,-2")
    for p in doc["points"]:
        assert abs(float(p["abs_diff"])) < 1e-30


def test_supershift(capsys, tmp_path):
    doc = run_json(capsys, "supershift", "--nodes", "1,-1", "--family", "custom", "--a", "2", "--x", "1/4")
    assert doc["coefficients"]["values"] == ["3/2", "-1/2"] and doc["taylor"]["exact"] is True
    gen_path = tmp_path / "gen.json"
    gen_path.write_text(json.dumps(exp_generator().to_dict()))
    again = run_json(capsys, "supershift", "--nodes", "1,-1", "--family", "custom", "--a", "2", "--x", "1/4",
                     "--generator", str(gen_path))
    assert again["points"] == doc["points"]


def test_supershift_certify_warning(capsys, tmp_path):
    gen_path = tmp_path / "gen.json"
    gen_path.write_text(json.dumps({"series": ["1", "1", "0", "1"]}))
    doc = run_json(capsys, "supershift", "--n", "2", "--a", "2", "--generator", str(gen_path), "--certify")
    assert doc["coefficients"]["values"] == ["3", "-3", "1"] and doc["warnings"]


def test_bits(capsys):
    doc = run_json(capsys, "bits", "--family", "custom", "--nodes", "1,0,-1", "--a", "2", "--digits", "10")
    assert doc["bits"] == 69


def test_sweep(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"n_values": [1, 2], "a": "2", "x_samples": ["0", "1/2"]}))
    doc = run_json(capsys, "sweep", "--config", str(cfg))
    assert [(r["n"], r["method"]) for r in doc["rows"]] == [(1, "new"), (1, "classic-fn"), (2, "new"), (2, "classic-fn")]
    assert doc["rows"][1]["coeff_diff"] == "0"
    code, out, _ = run(capsys, "sweep", "--config", str(cfg), "--points", "--format", "csv")
    assert code == 0 and out.splitlines()[0] == "n,x,re,im,abs_err,local_freq" and len(out.splitlines()) == 5


def test_out_file(capsys, tmp_path):
    dest = tmp_path / "coeffs.json"
    code, out, _ = run(capsys, "coeffs", "--n", "2", "--a", "2", "--out", str(dest))
    assert code == 0 and out == ""
    assert json.loads(dest.read_text())["values"] == ["3", "-3", "1"]


def test_csv_format(capsys):
    code, out, _ = run(capsys, "coeffs", "--n", "2", "--a", "2", "--format", "csv")
    assert out.splitlines() == ["j,node,value", "0,1,3", "1,0,-3", "2,-1,1"]


def test_byte_identical_runs(capsys):
    argv = ("eval", "--n", "12", "--a", "5/2", "--x", "1/3,0.7", "--bits", "96")
    assert run(capsys, *argv)[1] == run(capsys, *argv)[1]


@pytest.mark.parametrize(
    "argv, code, err_code",
    [
        (("grid", "--family", "custom", "--nodes", "1,0,1"), 1, "DuplicateNodes"),
        (("coeffs", "--n", "2"), 2, "UsageError"),
        (("coeffs", "--n", "2", "--a", "two"), 2, "UsageError"),
        (("frobnicate",), 2, "UsageError"),
        (("taylor-check", "--family", "power-den", "--n", "2", "--p", "2", "--a", "2", "--kind", "classic-fn"),
         1, "InvalidSignal"),
        (("supershift", "--n", "3", "--a", "2", "--x", "100"), 1, "TailBoundUnavailable"),
    ],
)
def test_errors(capsys, argv, code, err_code):
    rc, out, err = run(capsys, *argv)
    assert rc == code and out == ""
    doc = json.loads(err)
    assert doc["error"]["code"] == err_code and doc["error"]["message"]


def test_env_bits(capsys, monkeypatch):
    monkeypatch.setenv("SUPEROSC_BITS", "64")
    doc = run_json(capsys, "eval", "--n", "2", "--a", "2", "--x", "1/2")
    assert doc["bits"] == 64
    monkeypatch.setenv("SUPEROSC_BITS", "lots")
    rc, _, err = run(capsys, "eval", "--n", "2", "--a", "2", "--x", "1/2")
    assert rc != 0 and "error" in json.loads(err)
