import json

import numpy as np
import pytest

from corona_disc import ComplexField, Report
from corona_disc.cli import main

BASE = {
    "f1": {"kind": "polynomial", "coeffs": [[-0.5, 0.0], [1.0, 0.0]]},
    "f2": {"kind": "polynomial", "coeffs": [[0.5, 0.0], [1.0, 0.0]]},
    "n": 64,
}


def _case(tmp_path, name="case.json", **kw):
    cfg = dict(BASE)
    cfg.update(kw)
    path = tmp_path / name
    path.write_text(json.dumps(cfg))
    return str(path)


def test_validate_baseline(tmp_path, capsys):
    assert main(["validate", _case(tmp_path, n=128)]) == 0
    out = capsys.readouterr().out
    assert "delta = 1.0001" in out


def test_validate_common_zero(tmp_path, capsys):
    z = {"kind": "polynomial", "coeffs": [[0, 0], [1, 0]]}
    assert main(["validate", _case(tmp_path, f1=z, f2=z, delta_min=0.05)]) == 2
    assert "DeltaTooSmall" in capsys.readouterr().out


def test_missing_and_malformed_inputs(tmp_path):
    assert main(["validate", str(tmp_path / "nope.json")]) == 1
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["solve", str(bad), str(tmp_path / "o")]) == 1
    assert main(["validate", _case(tmp_path, f1={"kind": "spline"})]) == 1
    assert main(["validate", _case(tmp_path, n=3)]) == 1
    assert main(["frobnicate"]) == 1
    assert main([]) == 1


def test_solve_baseline(tmp_path):
    out = tmp_path / "out"
    assert main(["solve", _case(tmp_path, n=128), str(out)]) == 0
    names = {p.name for p in out.iterdir()}
    assert names == {"report.json", "g1.csv", "g2.csv", "v12.csv", "phi1.csv", "lambda.csv"}
    rep = Report.from_json((out / "report.json").read_text())
    assert rep.passed and rep.n == 128
    g1 = ComplexField.from_csv(out / "g1.csv")
    assert g1.grid.n == 128


def test_solve_unseparated_pair(tmp_path):
    f2 = {"kind": "polynomial", "coeffs": [[-0.5 - 1e-9, 0.0], [1.0, 0.0]]}
    assert main(["solve", _case(tmp_path, f2=f2, eta_min=1e-3), str(tmp_path / "o")]) == 2


def test_solve_impossible_gates(tmp_path):
    assert main(["solve", _case(tmp_path, tolerances={"residual": 0.0}), str(tmp_path / "o")]) == 3


def test_solve_with_spec_files(tmp_path):
    (tmp_path / "a.json").write_text(json.dumps(BASE["f1"]))
    (tmp_path / "b.json").write_text(json.dumps(BASE["f2"]))
    assert main(["solve", _case(tmp_path, f1="a.json", f2="b.json"), str(tmp_path / "o")]) == 0
    assert main(["solve", _case(tmp_path, f1="missing.json"), str(tmp_path / "o")]) == 1


def test_dbar_one(tmp_path, capsys):
    assert main(["dbar", "one", "--n", "128", "--backend", "fft", "--out", str(tmp_path)]) == 0
    rep = json.loads((tmp_path / "dbar_report.json").read_text())
    assert rep["zbar_error_sup"] <= 5e-2
    assert "zbar_error_sup" in capsys.readouterr().out
    v = ComplexField.from_csv(tmp_path / "v.csv")
    assert np.max(np.abs(v.values - np.conj(v.grid.centers))) == pytest.approx(rep["zbar_error_sup"])


def test_dbar_zero(tmp_path):
    assert main(["dbar", "zero", "--n", "32", "--out", str(tmp_path)]) == 0
    v = ComplexField.from_csv(tmp_path / "v.csv")
    assert np.all(v.values == 0)


def test_dbar_csv_round_trip(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["dbar", "one", "--n", "48", "--margin", "0.1", "--out", str(a)]) == 0
    assert main(["dbar", str(a / "lambda.csv"), "--margin", "0.1", "--out", str(b)]) == 0
    assert (a / "dbar_report.json").read_text() == (b / "dbar_report.json").read_text()
    assert (a / "v.csv").read_text() == (b / "v.csv").read_text()


def test_dbar_bad_inputs(tmp_path):
    assert main(["dbar", str(tmp_path / "none.csv"), "--out", str(tmp_path)]) == 1
    assert main(["dbar", "one", "--n", "300", "--backend", "direct", "--out", str(tmp_path)]) == 1
    assert main(["dbar", "one", "--backend", "magic"]) == 1


def test_zoo_k4(tmp_path):
    assert main(["zoo", "--levels", "4", str(tmp_path)]) == 0
    meta = json.loads((tmp_path / "meta.json").read_text())
    assert (meta["count_f1"], meta["count_f2"]) == (3, 4)
    assert meta["eta"] >= 0.2
    for name in ("f1.json", "f2.json", "config.json"):
        assert (tmp_path / name).exists()
    assert main(["validate", str(tmp_path / "config.json")]) == 0


def test_zoo_k1(tmp_path):
    assert main(["zoo", "--levels", "1", str(tmp_path)]) == 1


def test_convergence(tmp_path, capsys):
    out = tmp_path / "table.json"
    assert main(["convergence", _case(tmp_path), "--sizes", "32,64", "--out", str(out)]) == 0
    table = json.loads(out.read_text())
    assert table["sizes"] == [32, 64]
    assert table["quantity"] == "holomorphy"
    assert "observed order" in capsys.readouterr().out
    assert main(["convergence", _case(tmp_path), "--sizes", "64,32"]) == 1
    assert main(["convergence", _case(tmp_path), "--sizes", "a,b"]) == 1
    assert main(["convergence", _case(tmp_path), "--sizes", "32,64", "--quantity", "nothing"]) == 1
