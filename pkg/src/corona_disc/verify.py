"""Solver-independent verification of corona solutions and convergence studies."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from .config import DEFAULT_TOLERANCES, SolveConfig
from .functions import CoronaProblem
from .grid import ComplexField, build_grid, interior_cells, l2_norm, sup_norm, wirtinger_dbar

__all__ = [
    "Gate",
    "Report",
    "verify_solution",
    "observed_order",
    "ConvergenceTable",
    "convergence_study",
    "dbar_oracle_study",
]


@dataclass(frozen=True)
class Gate:
    value: float
    threshold: float
    passed: bool

    def to_dict(self) -> dict:
        return {"value": self.value, "threshold": self.threshold, "pass": self.passed}


@dataclass(frozen=True)
class Report:
    residual_sup: float
    residual_l2: float
    dbar_g_sup: tuple[float, float]
    dbar_g_reference: float
    g_sup: tuple[float, float]
    lambda_sup: float
    v_sup: float
    delta: float
    eta: float
    n: int
    h: float
    gates: dict = field(default_factory=dict)
    dbar_phi2_sup: float = 0.0
    dbar_residual_sup: float = 0.0
    residual_worst: tuple[float, float] = (0.0, 0.0)
    dbar_g_interior_sup: tuple[float, float] = (0.0, 0.0)
    boundary_layers: int = 0

    @property
    def passed(self) -> bool:
        return all(g.passed for g in self.gates.values())

    @property
    def failed_gates(self) -> list[str]:
        return [k for k, g in self.gates.items() if not g.passed]

    @property
    def holomorphy_ratio(self) -> float:
        return self.gates["holomorphy"].value

    def to_dict(self) -> dict:
        d = asdict(self)
        d["dbar_g_sup"] = list(self.dbar_g_sup)
        d["g_sup"] = list(self.g_sup)
        d["residual_worst"] = list(self.residual_worst)
        d["dbar_g_interior_sup"] = list(self.dbar_g_interior_sup)
        d["eta"] = None if math.isinf(self.eta) else self.eta
        d["gates"] = {k: g.to_dict() for k, g in self.gates.items()}
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, d: dict) -> "Report":
        d = dict(d)
        d["dbar_g_sup"] = tuple(d["dbar_g_sup"])
        d["g_sup"] = tuple(d["g_sup"])
        d["residual_worst"] = tuple(d.get("residual_worst", (0.0, 0.0)))
        d["dbar_g_interior_sup"] = tuple(d.get("dbar_g_interior_sup", (0.0, 0.0)))
        d["eta"] = math.inf if d["eta"] is None else d["eta"]
        d["gates"] = {
            k: Gate(value=g["value"], threshold=g["threshold"], passed=g["pass"])
            for k, g in d["gates"].items()
        }
        return cls(**d)

    @classmethod
    def from_json(cls, text: str) -> "Report":
        return cls.from_dict(json.loads(text))


def _gate(value: float, threshold: float) -> Gate:
    return Gate(float(value), float(threshold), bool(value <= threshold))


def verify_solution(problem: CoronaProblem, solution, tolerances: dict | None = None) -> Report:
    """Recompute every reported quantity from the solution's raw fields.

    Only ``g1, g2, v12, lam`` and the partition fields are read; the data
    f1, f2 are resampled from their specs.
    """
    tol = dict(DEFAULT_TOLERANCES)
    tol.update(tolerances or {})
    grid = problem.grid
    fields_ = (solution.g1, solution.g2, solution.v12, solution.lam,
               solution.partition.phi1, solution.partition.phi2)
    for f in fields_:
        if not grid.same_as(f.grid):
            raise ValueError("solution fields live on a different grid than the problem")
    z = grid.centers
    f1, f2 = problem.f1(z), problem.f2(z)
    g1, g2 = solution.g1, solution.g2

    resid = ComplexField(grid, f1 * g1.values + f2 * g2.values - 1.0)
    dbar_g = [np.abs(wirtinger_dbar(g).values) for g in (g1, g2)]
    dg = tuple(float(np.max(a, initial=0.0)) for a in dbar_g)
    layers = int(tol["boundary_layers"])
    inner = interior_cells(grid, max(layers, 2))
    dg_inner = tuple(float(np.max(a[inner], initial=0.0)) for a in dbar_g)
    gated = interior_cells(grid, layers)
    dg_gated = max(float(np.max(a[gated], initial=0.0)) for a in dbar_g)
    phi1 = solution.partition.phi1.real
    q = np.zeros(grid.size, dtype=complex)
    nz = phi1 != 0
    q[nz] = phi1[nz] / f1[nz]
    ref = sup_norm(wirtinger_dbar(ComplexField(grid, q)))
    dphi2 = sup_norm(wirtinger_dbar(solution.partition.phi2))
    if solution.partition.mode == "analytic":
        dphi2 = max(dphi2, sup_norm(solution.partition.dbar_phi2))
    lam_sup = sup_norm(solution.lam)
    g_sup = (sup_norm(g1), sup_norm(g2))
    worst = int(np.argmax(np.abs(resid.values)))

    lo = problem.delta / (2 * problem.k)
    lam_bound = sup_norm(solution.partition.dbar_phi2) / (lo * lo)
    holo = dg_gated / max(ref, tol["holomorphy_floor"])
    gates = {
        "residual": _gate(sup_norm(resid), tol["residual"]),
        "holomorphy": _gate(holo, tol["holomorphy"]),
        "bounded": _gate(max(g_sup), tol["g_sup_max"]),
        "lambda_bound": _gate(lam_sup, lam_bound * (1.0 + tol["lambda_bound_slack"])),
    }
    return Report(
        residual_sup=sup_norm(resid),
        residual_l2=l2_norm(resid),
        dbar_g_sup=dg,
        dbar_g_reference=ref,
        g_sup=g_sup,
        lambda_sup=lam_sup,
        v_sup=sup_norm(solution.v12),
        delta=problem.delta,
        eta=problem.eta,
        n=grid.n,
        h=grid.h,
        gates=gates,
        dbar_phi2_sup=dphi2,
        dbar_residual_sup=sup_norm(wirtinger_dbar(solution.v12) - solution.lam),
        residual_worst=(float(z[worst].real), float(z[worst].imag)),
        dbar_g_interior_sup=dg_inner,
        boundary_layers=layers,
    )


def observed_order(hs: Sequence[float], errs: Sequence[float]) -> float | None:
    """Least-squares slope of log(err) against log(h); None for fewer than two sizes."""
    hs = np.asarray(hs, dtype=float)
    errs = np.asarray(errs, dtype=float)
    if hs.size < 2:
        return None
    if np.any(errs <= 0):
        return math.nan
    slope, _ = np.polyfit(np.log(hs), np.log(errs), 1)
    return float(slope)


def pairwise_orders(hs: Sequence[float], errs: Sequence[float]) -> list[float]:
    return [
        math.log(errs[i] / errs[i + 1]) / math.log(hs[i] / hs[i + 1])
        for i in range(len(hs) - 1)
    ]


@dataclass
class ConvergenceTable:
    sizes: list[int]
    rows: list[dict]
    quantity: str
    order: float | None
    pairwise: list[float]

    def column(self, key: str) -> list[float]:
        return [r[key] for r in self.rows]

    def format(self) -> str:
        keys = [k for k in self.rows[0] if k != "n"] if self.rows else []
        lines = ["n".rjust(6) + "".join(k.rjust(18) for k in keys)]
        for r in self.rows:
            lines.append(str(r["n"]).rjust(6) + "".join(f"{r[k]:18.6e}" for k in keys))
        if self.order is not None:
            lines.append(f"observed order of {self.quantity}: {self.order:.3f}")
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return asdict(self)


QUANTITIES = (
    "residual_sup", "residual_l2", "holomorphy", "dbar_residual_sup", "g1_sup", "g2_sup", "delta",
)


def convergence_study(
    problem: CoronaProblem,
    sizes: Sequence[int],
    config: SolveConfig | None = None,
    quantity: str = "residual_sup",
) -> ConvergenceTable:
    """Re-solve ``problem`` on each grid size and tabulate the reports.

    Each row holds the report entries most affected by resolution; the order
    is the least-squares slope of ``quantity`` against h.
    """
    from .koszul import solve_corona

    if quantity not in QUANTITIES:
        raise ValueError(f"unknown quantity {quantity!r}; expected one of {QUANTITIES}")
    sizes = [int(s) for s in sizes]
    if any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise ValueError("sizes must be strictly increasing")
    config = config or SolveConfig()
    rows = []
    for n in sizes:
        grid = build_grid(n, problem.grid.margin)
        p = problem.with_grid(grid, config.delta_min, config.eta_min)
        rep = solve_corona(p, config.replace(n=n)).report
        rows.append(
            {
                "n": n,
                "h": rep.h,
                "residual_sup": rep.residual_sup,
                "residual_l2": rep.residual_l2,
                "holomorphy": rep.holomorphy_ratio,
                "dbar_residual_sup": rep.dbar_residual_sup,
                "g1_sup": rep.g_sup[0],
                "g2_sup": rep.g_sup[1],
                "delta": rep.delta,
            }
        )
    hs = [r["h"] for r in rows]
    q = [r[quantity] for r in rows]
    order = observed_order(hs, q)
    return ConvergenceTable(sizes, rows, quantity, order, pairwise_orders(hs, q) if len(q) > 1 else [])


def dbar_oracle_study(sizes: Sequence[int], backend: str = "auto") -> ConvergenceTable:
    """Solve dbar v = 1 and compare with the closed form v = conj(z)."""
    from .dbar import solve_dbar

    rows = []
    for n in sizes:
        grid = build_grid(int(n))
        sol = solve_dbar(grid.constant(1.0), backend)
        err = sup_norm(sol.v - grid.sample(np.conj))
        rows.append({"n": int(n), "h": grid.h, "error_sup": err, "residual_sup": sol.residual_sup})
    hs = [r["h"] for r in rows]
    e = [r["error_sup"] for r in rows]
    return ConvergenceTable(
        [int(s) for s in sizes], rows, "error_sup", observed_order(hs, e),
        pairwise_orders(hs, e) if len(e) > 1 else [],
    )
