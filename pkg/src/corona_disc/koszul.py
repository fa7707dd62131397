"""Koszul assembly for two pieces of corona data.

With g_j = phi_j / f_j + sum_i v_ji f_i and v antisymmetric, the identity
sum_j f_j g_j = 1 holds for any v.  Holomorphy of g_1, g_2 reduces to the
single equation dbar v12 = dbar(phi2) / (f1 f2), whose right-hand side
vanishes wherever one of |f_j| is at most delta/4.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .config import SolveConfig
from .dbar import solve_dbar
from .functions import CoronaProblem
from .grid import ComplexField, DiscGrid, sup_norm
from .partition import PartitionPair, build_partition, dbar_support_check, support_tolerance

__all__ = [
    "SupportViolation",
    "DivisionGuardError",
    "CoronaSolution",
    "build_lambda",
    "assemble_g",
    "guarded_quotient",
    "koszul_residual",
    "solve_corona",
]


class SupportViolation(RuntimeError):
    """dbar(phi2) is nonzero where one of the data is small; lambda would blow up."""


class DivisionGuardError(RuntimeError):
    pass


@dataclass(frozen=True)
class CoronaSolution:
    g1: ComplexField
    g2: ComplexField
    v12: ComplexField
    partition: PartitionPair
    lam: ComplexField
    report: "Report"  # noqa: F821 - defined in .verify
    backend: str = "direct"


def build_lambda(problem: CoronaProblem, pp: PartitionPair, tol: float | None = None) -> ComplexField:
    """lambda = dbar(phi2) / (f1 f2) on the support of dbar(phi2), exactly 0 elsewhere.

    Values of dbar(phi2) at or below ``tol`` count as zero (the default is the
    partition's support tolerance).  Raises :class:`SupportViolation` if
    dbar(phi2) exceeds ``tol`` at a cell where min(|f1|, |f2|) <= delta/4.
    """
    grid = problem.grid
    if tol is None:
        tol = support_tolerance(pp)
    z = grid.centers
    f1, f2 = problem.f1(z), problem.f2(z)
    d = pp.dbar_phi2.values
    small = np.minimum(np.abs(f1), np.abs(f2)) <= pp.threshold_lo
    live = np.abs(d) > tol
    bad = small & live
    if np.any(bad):
        k = int(np.argmax(np.where(bad, np.abs(d), -1.0)))
        raise SupportViolation(
            f"dbar(phi2) = {abs(d[k]):.3e} at z={z[k]:.4f} where |f1|={abs(f1[k]):.3e}, "
            f"|f2|={abs(f2[k]):.3e} <= {pp.threshold_lo:.3e}"
        )
    lam = np.zeros(grid.size, dtype=complex)
    sel = live & ~small
    lam[sel] = d[sel] / (f1[sel] * f2[sel])
    return ComplexField(grid, lam)


def lambda_bound(problem: CoronaProblem, pp: PartitionPair) -> float:
    """sup|dbar phi2| * (4/delta)^2, from |f_j| > delta/4 on the support."""
    return sup_norm(pp.dbar_phi2) / (pp.threshold_lo * pp.threshold_lo)


def guarded_quotient(phi: np.ndarray, f: np.ndarray, guard: float = 0.0) -> np.ndarray:
    """phi / f where phi != 0, zero elsewhere.

    Raises :class:`DivisionGuardError` if phi is nonzero at a cell with |f| <= guard.
    """
    phi = np.asarray(phi)
    f = np.asarray(f, dtype=complex)
    nz = phi != 0
    if np.any(nz & (np.abs(f) <= guard)):
        raise DivisionGuardError(f"phi is nonzero where |f| <= {guard:.3e}")
    out = np.zeros(f.shape, dtype=complex)
    out[nz] = phi[nz] / f[nz]
    return out


def assemble_g(problem: CoronaProblem, pp: PartitionPair, v12: ComplexField):
    """g1 = phi1/f1 + v12 f2 and g2 = phi2/f2 - v12 f1."""
    grid = problem.grid
    if not grid.same_as(v12.grid):
        raise ValueError("v12 lives on a different grid")
    z = grid.centers
    f1, f2 = problem.f1(z), problem.f2(z)
    guard = problem.delta / 8.0
    v = v12.values
    g1 = guarded_quotient(pp.phi1.real, f1, guard) + v * f2
    g2 = guarded_quotient(pp.phi2.real, f2, guard) - v * f1
    return ComplexField(grid, g1), ComplexField(grid, g2)


def _field_values(x, grid: DiscGrid | None) -> np.ndarray:
    if isinstance(x, ComplexField):
        return x.values
    if callable(x):
        if grid is None:
            raise ValueError("need a grid to sample function specs")
        return np.asarray(x(grid.centers), dtype=complex)
    return np.asarray(x, dtype=complex)


def koszul_residual(fs: Sequence, phis: Sequence, v) -> ComplexField:
    """sum_j f_j g_j - 1 with g_j = phi_j/f_j + sum_i v[j][i] f_i.

    ``fs`` holds function specs or sampled fields, ``phis`` real fields summing
    to one, and ``v`` a k-by-k antisymmetric array of fields (nested sequence
    or an array of shape (k, k, cells)).
    """
    k = len(fs)
    if len(phis) != k:
        raise ValueError(f"{k} functions but {len(phis)} partition pieces")
    grid = next((p.grid for p in phis if isinstance(p, ComplexField)), None)
    if grid is None:
        raise ValueError("partition pieces must be ComplexFields")
    F = np.stack([_field_values(f, grid) for f in fs])
    P = np.stack([np.real(_field_values(p, grid)) for p in phis])
    if isinstance(v, np.ndarray) and v.ndim == 3:
        V = v.astype(complex)
    else:
        V = np.array([[_field_values(v[j][i], grid) for i in range(k)] for j in range(k)])
    if V.shape[:2] != (k, k):
        raise ValueError(f"v must be {k}x{k}, got {V.shape[:2]}")
    if not np.array_equal(V, -np.swapaxes(V, 0, 1)):
        raise ValueError("v must be antisymmetric with zero diagonal")
    G = np.stack([guarded_quotient(P[j], F[j]) for j in range(k)])
    G = G + np.einsum("jic,ic->jc", V, F)
    res = np.sum(F * G, axis=0) - 1.0
    return ComplexField(grid, res)


def solve_corona(problem: CoronaProblem, config: SolveConfig | None = None) -> CoronaSolution:
    """Partition, lambda, dbar solve, assembly and verification in sequence."""
    from .verify import verify_solution

    config = config or SolveConfig(n=problem.grid.n, margin=problem.grid.margin)
    pp = build_partition(problem, config.dbar_phi_mode)
    support = dbar_support_check(pp, problem)
    if not support:
        raise SupportViolation(
            f"dbar(phi2) = {support.worst_value:.3e} > {support.tol:.3e} at z={support.worst_point}"
        )
    lam = build_lambda(problem, pp)
    sol = solve_dbar(lam, config.backend)
    g1, g2 = assemble_g(problem, pp, sol.v)
    draft = CoronaSolution(g1=g1, g2=g2, v12=sol.v, partition=pp, lam=lam, report=None, backend=sol.backend)
    report = verify_solution(problem, draft, config.tolerances)
    return CoronaSolution(g1=g1, g2=g2, v12=sol.v, partition=pp, lam=lam, report=report, backend=sol.backend)
