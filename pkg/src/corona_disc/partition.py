"""Smooth two-piece partition of unity subordinate to the cover {|f_j| > delta/4}."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .functions import CoronaProblem
from .grid import ComplexField, sup_norm, wirtinger_dbar

__all__ = [
    "PartitionPair",
    "PartitionError",
    "SupportReport",
    "smooth_step",
    "smooth_step_derivative",
    "build_partition",
    "dbar_support_check",
]

MODES = ("analytic", "finite_difference")


class PartitionError(RuntimeError):
    pass


def _glue(s: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """exp(-1/s) / (exp(-1/s) + exp(-1/(1-s))) and its s-derivative on 0 < s < 1.

    Written as 1 / (1 + exp(q)) with q = 1/s - 1/(1-s) to stay finite near
    the ends.
    """
    q = 1.0 / s - 1.0 / (1.0 - s)
    with np.errstate(over="ignore"):
        e = np.exp(-np.abs(q))
    # logistic of -q, evaluated on the stable branch
    sig = np.where(q > 0, e / (1.0 + e), 1.0 / (1.0 + e))
    dq = -1.0 / (s * s) - 1.0 / ((1.0 - s) * (1.0 - s))
    dsig = -sig * (1.0 - sig) * dq
    return sig, dsig


def smooth_step(t, a: float, b: float):
    """C-infinity step: 0 for t <= a, 1 for t >= b, strictly increasing between."""
    if not a < b:
        raise ValueError(f"smooth_step needs a < b, got a={a}, b={b}")
    t = np.asarray(t, dtype=float)
    s = (t - a) / (b - a)
    out = np.where(s >= 1.0, 1.0, 0.0)
    mid = (s > 0.0) & (s < 1.0)
    if np.any(mid):
        out = out.astype(float)
        out[mid] = _glue(s[mid])[0]
    return out if out.ndim else float(out)


def smooth_step_derivative(t, a: float, b: float):
    if not a < b:
        raise ValueError(f"smooth_step needs a < b, got a={a}, b={b}")
    t = np.asarray(t, dtype=float)
    s = (t - a) / (b - a)
    out = np.zeros(s.shape)
    mid = (s > 0.0) & (s < 1.0)
    if np.any(mid):
        out[mid] = _glue(s[mid])[1] / (b - a)
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class PartitionPair:
    """phi1 + phi2 = 1 with phi_j supported in {|f_j| > threshold_lo}."""

    phi1: ComplexField
    phi2: ComplexField
    dbar_phi2: ComplexField
    threshold_lo: float
    threshold_hi: float
    mode: str

    @property
    def dbar_phi1(self) -> ComplexField:
        return -self.dbar_phi2


def build_partition(problem: CoronaProblem, mode: str = "analytic") -> PartitionPair:
    """Normalised cutoffs phi_j = chi_j / (chi_1 + chi_2).

    ``chi_j = smooth_step(|f_j|, delta/4, delta/2)``.  Since |f1| + |f2| > delta
    forces one of the moduli above delta/2, the denominator is at least 1.
    ``mode`` selects how dbar(phi2) is obtained: by the chain rule through
    |f| (``"analytic"``) or by the grid stencil (``"finite_difference"``).
    """
    if mode not in MODES:
        raise ValueError(f"unknown partition mode {mode!r}; expected one of {MODES}")
    grid = problem.grid
    lo, hi = problem.thresholds
    z = grid.centers
    f1, f2 = problem.f1(z), problem.f2(z)
    m1, m2 = np.abs(f1), np.abs(f2)
    chi1, chi2 = smooth_step(m1, lo, hi), smooth_step(m2, lo, hi)
    denom = chi1 + chi2
    if np.min(denom) < 1.0 - 1e-9:
        k = int(np.argmin(denom))
        raise PartitionError(
            f"partition denominator {denom[k]:.3e} < 1 at z={z[k]:.4f}: delta overestimated"
        )
    phi2 = chi2 / denom
    phi1 = chi1 / denom

    if mode == "finite_difference":
        dbar2 = wirtinger_dbar(ComplexField(grid, phi2)).values
    else:
        dbar2 = np.zeros(grid.size, dtype=complex)
        ramp1 = (m1 > lo) & (m1 < hi)
        ramp2 = (m2 > lo) & (m2 < hi)
        dchi1 = np.zeros(grid.size, dtype=complex)
        dchi2 = np.zeros(grid.size, dtype=complex)
        # dbar|f| = f conj(f') / (2|f|), only evaluated where |f| > lo > 0
        if np.any(ramp1):
            fp = problem.f1.derivative()(z[ramp1])
            dchi1[ramp1] = smooth_step_derivative(m1[ramp1], lo, hi) * (
                f1[ramp1] * np.conj(fp) / (2.0 * m1[ramp1])
            )
        if np.any(ramp2):
            fp = problem.f2.derivative()(z[ramp2])
            dchi2[ramp2] = smooth_step_derivative(m2[ramp2], lo, hi) * (
                f2[ramp2] * np.conj(fp) / (2.0 * m2[ramp2])
            )
        dbar2 = (chi1 * dchi2 - chi2 * dchi1) / (denom * denom)

    return PartitionPair(
        phi1=ComplexField(grid, phi1),
        phi2=ComplexField(grid, phi2),
        dbar_phi2=ComplexField(grid, dbar2),
        threshold_lo=lo,
        threshold_hi=hi,
        mode=mode,
    )


@dataclass(frozen=True)
class SupportReport:
    ok: bool
    tol: float
    worst_value: float
    worst_point: complex | None
    covered: bool

    def __bool__(self) -> bool:
        return self.ok


def support_tolerance(pp: PartitionPair) -> float:
    if pp.mode == "analytic":
        return 1e-10
    return 4.0 * pp.dbar_phi2.grid.h * sup_norm(pp.dbar_phi2)


def dbar_support_check(
    pp: PartitionPair, problem: CoronaProblem, tol: float | None = None
) -> SupportReport:
    """Check dbar(phi2) vanishes wherever min(|f1|, |f2|) <= delta/4.

    Also records whether every cell lies in the cover U1 u U2.
    """
    if tol is None:
        tol = support_tolerance(pp)
    z = problem.grid.centers
    m1, m2 = np.abs(problem.f1(z)), np.abs(problem.f2(z))
    lo = pp.threshold_lo
    outside = np.minimum(m1, m2) <= lo
    d = np.abs(pp.dbar_phi2.values)
    bad = outside & (d > tol)
    covered = bool(np.all((m1 > lo) | (m2 > lo)))
    if not np.any(bad):
        return SupportReport(True, tol, float(np.max(d[outside], initial=0.0)), None, covered)
    k = int(np.argmax(np.where(bad, d, -1.0)))
    return SupportReport(False, tol, float(d[k]), complex(z[k]), covered)
