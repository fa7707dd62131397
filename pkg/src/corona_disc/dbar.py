"""Solving dbar v = lam on the disc with the Cauchy-Pompeiu transform

    v(z) = (1/pi) \\iint lam(w) / (z - w) dA(w),

discretised by the midpoint rule on the interior cells, each source cell
weighted by h**2 times the fraction of it inside the disc.  The target's own
cell is skipped: 1/(z - w) integrates to zero over a square centred at z.

Two backends realise the same quadrature: ``direct`` sums over source cells
for every target, ``fft`` convolves the zero-padded lattice with the sampled
kernel.  They agree to rounding.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .grid import ComplexField, interior_cells, sup_norm, wirtinger_dbar

__all__ = [
    "DbarSolution",
    "GridTooLarge",
    "cauchy_pompeiu_direct",
    "cauchy_pompeiu_fft",
    "solve_dbar",
    "DIRECT_MAX_N",
    "AUTO_FFT_ABOVE",
]

DIRECT_MAX_N = 256
AUTO_FFT_ABOVE = 128
_CHUNK_ENTRIES = 1 << 21  # kernel entries per target block


class GridTooLarge(ValueError):
    pass


def thread_count() -> int:
    """Worker count from ``CORONA_THREADS`` (0 or unset: one per CPU)."""
    raw = os.environ.get("CORONA_THREADS", "0").strip() or "0"
    try:
        k = int(raw)
    except ValueError:
        raise ValueError(f"CORONA_THREADS must be an integer, got {raw!r}") from None
    if k < 0:
        raise ValueError("CORONA_THREADS must be >= 0")
    return k or (os.cpu_count() or 1)


def cauchy_pompeiu_direct(lam: ComplexField, max_n: int = DIRECT_MAX_N) -> ComplexField:
    """Brute-force O(N^2) quadrature of the Cauchy-Pompeiu transform.

    Each target's sum runs over all source cells in canonical order, so the
    result does not depend on how targets are split across threads.
    """
    grid = lam.grid
    if grid.n > max_n:
        raise GridTooLarge(f"direct backend is limited to n <= {max_n}, got n={grid.n}")
    z = grid.centers
    vals = lam.values * grid.area_fraction
    N = z.size
    out = np.zeros(N, dtype=complex)
    if N == 0 or not np.any(vals):
        return ComplexField(grid, out)
    # kernel in lattice units: h^2 / (pi h (p + iq)) = h / (pi (p + iq))
    pts = grid.cols.astype(float) + 1j * grid.rows.astype(float)
    scale = grid.h / math.pi
    block = max(1, _CHUNK_ENTRIES // N)

    def work(start: int) -> None:
        stop = min(start + block, N)
        diff = pts[start:stop, None] - pts[None, :]
        idx = np.arange(start, stop)
        diff[idx - start, idx] = 1.0
        kern = 1.0 / diff
        kern[idx - start, idx] = 0.0
        out[start:stop] = scale * np.sum(kern * vals[None, :], axis=1)

    starts = range(0, N, block)
    workers = min(thread_count(), len(starts))
    if workers <= 1:
        for s in starts:
            work(s)
    else:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            list(ex.map(work, starts))
    return ComplexField(grid, out)


def _kernel_lattice(n: int, h: float) -> np.ndarray:
    """h / (pi (p + iq)) on a (2n)^2 periodic lattice of offsets, zero at the origin."""
    m = 2 * n
    off = np.arange(m)
    off = np.where(off < n, off, off - m)  # offsets -n .. n-1 in FFT order
    p = off[None, :].astype(float)
    q = off[:, None].astype(float)
    w = p + 1j * q
    w[0, 0] = 1.0
    k = (h / math.pi) / w
    k[0, 0] = 0.0
    return k


def cauchy_pompeiu_fft(lam: ComplexField) -> ComplexField:
    """Same quadrature as :func:`cauchy_pompeiu_direct` via a padded FFT convolution."""
    grid = lam.grid
    n = grid.n
    m = 2 * n
    src = np.zeros((m, m), dtype=complex)
    src[grid.rows, grid.cols] = lam.values * grid.area_fraction
    if not np.any(src):
        return grid.zeros()
    # offsets between interior cells span -(n-1)..n-1, so period 2n never aliases
    conv = np.fft.ifft2(np.fft.fft2(src) * np.fft.fft2(_kernel_lattice(n, grid.h)))
    return ComplexField(grid, conv[grid.rows, grid.cols])


@dataclass(frozen=True)
class DbarSolution:
    """Solution with residuals recomputed from ``v`` by the grid stencil.

    ``residual_interior_sup`` skips the two outermost cell layers, where the
    staircase boundary keeps the stencil residual O(1) times |lam|.
    """

    v: ComplexField
    residual_sup: float
    v_sup: float
    backend: str
    residual_interior_sup: float = 0.0


BACKENDS = ("direct", "fft", "auto")


def solve_dbar(lam: ComplexField, backend: str = "auto") -> DbarSolution:
    """Cauchy-Pompeiu solution of dbar v = lam with a recomputed residual.

    ``auto`` uses the direct sum up to n = 128 and the FFT above.
    """
    if backend not in BACKENDS:
        raise ValueError(f"unknown backend {backend!r}; expected one of {BACKENDS}")
    if backend == "auto":
        backend = "fft" if lam.grid.n > AUTO_FFT_ABOVE else "direct"
    if backend == "direct":
        v = cauchy_pompeiu_direct(lam)
    else:
        v = cauchy_pompeiu_fft(lam)
    r = np.abs((wirtinger_dbar(v) - lam).values)
    inner = interior_cells(lam.grid, 2)
    return DbarSolution(
        v=v,
        residual_sup=float(np.max(r, initial=0.0)),
        v_sup=sup_norm(v),
        backend=backend,
        residual_interior_sup=float(np.max(r[inner], initial=0.0)),
    )
