import json
import math
from pathlib import Path

import numpy as np
import pytest

from corona_disc import ComplexField, Report, SolveConfig, convergence_study, verify_solution
from corona_disc.koszul import CoronaSolution
from corona_disc.verify import observed_order

from conftest import baseline_problem

BASELINE = json.loads((Path(__file__).parent / "baselines" / "baseline_reports.json").read_text())


def _replace(sol, **kw):
    d = {f: getattr(sol, f) for f in ("g1", "g2", "v12", "partition", "lam", "report", "backend")}
    d.update(kw)
    return CoronaSolution(**d)


def test_baseline_gates_at_128(baseline_solutions):
    rep = baseline_solutions[128].report
    assert rep.passed
    assert rep.residual_sup <= 5e-2
    assert max(rep.dbar_g_sup) <= 0.1 * rep.dbar_g_reference
    assert set(rep.gates) == {"residual", "holomorphy", "bounded", "lambda_bound"}


@pytest.mark.parametrize("n", [64, 128, 256])
def test_regression_baseline(baseline_solutions, n):
    rep = baseline_solutions[n].report
    ref = BASELINE[str(n)]
    assert rep.residual_sup <= 1e-14
    for key in ("dbar_g_reference", "lambda_sup", "v_sup", "delta", "dbar_phi2_sup"):
        assert getattr(rep, key) == pytest.approx(ref[key], rel=1e-9), key
    assert rep.holomorphy_ratio == pytest.approx(ref["holomorphy"], rel=1e-9)
    assert list(rep.g_sup) == pytest.approx(ref["g_sup"], rel=1e-9)


def test_corrupted_cell_located(baseline_solutions):
    p = baseline_problem(64)
    sol = _replace(baseline_solutions[64])
    g1 = sol.g1.values.copy()
    k = 1234
    g1[k] += 0.1
    rep = verify_solution(p, _replace(sol, g1=ComplexField(p.grid, g1)))
    assert not rep.gates["residual"].passed
    assert "residual" in rep.failed_gates
    assert complex(*rep.residual_worst) == p.grid.centers[k]
    assert rep.residual_sup == pytest.approx(0.1 * abs(p.f1(p.grid.centers[k])))


def test_hand_built_exact_solution():
    # constant data with g = (phi1/2, phi2): exact by construction, no solver involved
    from corona_disc import Scalar, build_grid, build_partition, validate_corona

    p = validate_corona(Scalar(2.0), Scalar(1.0), build_grid(32))
    pp = build_partition(p)
    z0 = p.grid.zeros()
    sol = CoronaSolution(pp.phi1 * 0.5, pp.phi2, z0, pp, z0, None)
    rep = verify_solution(p, sol)
    assert rep.residual_sup <= 1e-12
    assert rep.passed


def test_impossible_tolerance_fails(baseline_solutions):
    p = baseline_problem(64)
    rep = verify_solution(p, baseline_solutions[64], {"residual": 0.0, "holomorphy": 1e-9})
    assert set(rep.failed_gates) == {"residual", "holomorphy"}


def test_wrong_grid_rejected(baseline_solutions):
    with pytest.raises(ValueError):
        verify_solution(baseline_problem(128), baseline_solutions[64])


def test_report_json_round_trip(baseline_solutions):
    rep = baseline_solutions[64].report
    back = Report.from_json(rep.to_json())
    assert back == rep
    assert back.to_json() == rep.to_json()


def test_report_infinite_eta_round_trip():
    from corona_disc import Scalar, build_grid, solve_corona, validate_corona

    rep = solve_corona(validate_corona(Scalar(2.0), Scalar(1.0), build_grid(16))).report
    assert math.isinf(rep.eta)
    assert json.loads(rep.to_json())["eta"] is None
    assert Report.from_json(rep.to_json()) == rep


def test_observed_order():
    hs = [0.1, 0.05, 0.025]
    assert observed_order(hs, [3 * h**2 for h in hs]) == pytest.approx(2.0)
    assert observed_order([0.1], [1.0]) is None


def test_convergence_single_size():
    t = convergence_study(baseline_problem(64), [64])
    assert len(t.rows) == 1
    assert t.order is None and t.pairwise == []


def test_convergence_sizes_must_increase():
    with pytest.raises(ValueError):
        convergence_study(baseline_problem(64), [128, 64])


def test_convergence_baseline():
    t = convergence_study(baseline_problem(64), [64, 128, 256], quantity="holomorphy")
    holo = t.column("holomorphy")
    assert holo[0] > holo[1] > holo[2]
    assert t.order > 1.0
    # the algebraic residual sits at rounding level on every grid
    assert max(t.column("residual_sup")) <= 1e-14
    # dbar residual of v12: decreasing within 20% slack
    r = t.column("dbar_residual_sup")
    assert r[1] <= 1.2 * r[0] and r[2] <= 1.2 * r[1]
    g = t.column("g1_sup")
    assert 0.8 <= g[2] / g[1] <= 1.25
    assert "observed order of holomorphy" in t.format()
    json.dumps(t.to_dict())


def test_holomorphy_boundary_layers(baseline_solutions):
    p = baseline_problem(64)
    full = verify_solution(p, baseline_solutions[64])
    inner = verify_solution(p, baseline_solutions[64], {"boundary_layers": 2})
    assert inner.holomorphy_ratio <= full.holomorphy_ratio
    assert inner.boundary_layers == 2


def test_config_round_trip():
    cfg = SolveConfig(n=64, backend="fft", tolerances={"residual": 1e-3})
    back = SolveConfig.from_dict(json.loads(cfg.to_json()))
    assert back == cfg
    assert back.tolerances["holomorphy"] == 0.1
    with pytest.raises(ValueError):
        SolveConfig(tolerances={"bogus": 1})
    with pytest.raises(ValueError):
        SolveConfig(backend="gpu")
