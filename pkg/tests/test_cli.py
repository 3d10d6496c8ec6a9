import csv
import io
import json

import pytest

from hypdmod.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_sum_json(capsys):
    code, out, _ = run(capsys, "sum", "--p", "7", "--chi", "0,0")
    assert code == 0
    data = json.loads(out)
    assert [v["t"] for v in data["values"]] == list(range(1, 7))
    assert data["normalization"] == "raw"
    # Kloosterman sums are real
    assert all(abs(v["complex"][1]) < 1e-9 for v in data["values"])


def test_sum_methods_agree(capsys):
    _, direct, _ = run(capsys, "sum", "--p", "5", "--chi", "1,2", "--rho", "3")
    _, conv, _ = run(capsys, "sum", "--p", "5", "--chi", "1,2", "--rho", "3", "--method", "convolved")
    assert json.loads(direct)["values"] == json.loads(conv)["values"]


def test_sum_alpha_input_and_csv(capsys, tmp_path):
    target = tmp_path / "out.csv"
    code, out, _ = run(
        capsys, "sum", "--p", "5", "--alpha", "1/4", "--t", "1,2", "--format", "csv", "--out", str(target)
    )
    assert code == 0 and out == ""
    rows = list(csv.DictReader(io.StringIO(target.read_text())))
    assert [r["t_encoding"] for r in rows] == ["1", "2"]
    assert set(rows[0]) == {"t_encoding", "coeffs_json", "complex_re", "complex_im"}


def test_sum_pretty(capsys):
    code, out, _ = run(capsys, "sum", "--p", "3", "--s", "2", "--chi", "1", "--pretty", "--norm", "sheaf")
    assert code == 0
    assert out.startswith("Hyp over GF(9)")


@pytest.mark.parametrize(
    "argv",
    [
        ["sum", "--p", "5", "--chi", "1", "--rho", "1"],
        ["sum", "--p", "5", "--chi", "1", "--alpha", "1/4"],
        ["sum", "--p", "5", "--alpha", "1/3"],
        ["sum", "--p", "5", "--chi", "1", "--t", "0"],
        ["sum", "--p", "6", "--chi", "1"],
        ["padic", "--p", "2"],
        ["verify-ops", "--m", "0", "--n", "0"],
    ],
)
def test_spec_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert err.startswith("error:")


def test_budget_exit_3(capsys):
    code, _, err = run(capsys, "sum", "--p", "13", "--chi", "0,0,0,0", "--budget", "100")
    assert code == 3
    assert "required" in err


def test_precision_exit_4(capsys):
    code, _, _ = run(capsys, "padic", "--p", "3", "--precision", "3")
    assert code == 4


def test_spectrum(capsys):
    code, out, _ = run(capsys, "spectrum", "--p", "7", "--chi", "0,0", "--t", "1,3")
    assert code == 0
    data = json.loads(out)
    for rep in data["reports"]:
        assert rep["moduli"] == pytest.approx([7**0.5] * 2)
    code, out, _ = run(capsys, "spectrum", "--p", "5", "--chi", "1,2", "--rho", "3", "--format", "csv", "--jobs", "2")
    assert code == 0
    assert out.splitlines()[0] == "t,rank_found,min_weight,max_weight,purity_pass"
    assert len(out.splitlines()) == 5


def test_spectrum_budget(capsys):
    code, _, _ = run(capsys, "spectrum", "--p", "13", "--chi", "0,0,0", "--budget", "1000")
    assert code == 3


def test_verify_ops_single_case(capsys):
    code, out, _ = run(capsys, "verify-ops", "--m", "1", "--n", "0", "--parity", "odd")
    assert code == 0
    data = json.loads(out)
    inv = [r for r in data["records"] if r["name"] == "inversion"][0]
    assert inv["witness"] == "(pi)*x^-1"
    assert all(not r["ok"] for r in data["alternative_forms"])


def test_verify_ops_suite_pretty(capsys):
    code, out, _ = run(capsys, "verify-ops", "--max-total", "2", "--pretty")
    assert code == 0
    assert "identities hold" in out


def test_padic(capsys):
    code, out, _ = run(capsys, "padic", "--p", "3", "--precision", "12")
    assert code == 0
    data = json.loads(out)
    assert all(data["checks"].values())
    assert data["theta_digit_table"] == [0, 1, 2]
    assert data["teichmuller"]["1"] == 1


def test_padic_csv_grid(capsys):
    code, out, _ = run(capsys, "padic", "--p", "3", "--precision", "8", "--format", "csv")
    assert code == 0
    assert out.splitlines()[0] == "l,N,alpha,v,lower,upper,pass"


def test_all_pretty(capsys):
    code, out, _ = run(
        capsys, "all", "--p", "3", "--chi", "0,0", "--precision", "8", "--max-total", "2", "--pretty"
    )
    assert code == 0
    assert [line.split(":")[0] for line in out.strip().splitlines()] == ["sum", "spectrum", "verify_ops", "padic"]
