"""Uniform cell-centred discretisation of the unit disc.

The lattice covers the square [-1, 1]^2 with ``n`` cells per axis; a cell is
"interior" when its centre lies strictly inside the disc of radius
``1 - margin``.  Sampled functions live on the interior cells only, stored in
canonical row-major order (y outer, x inner, both increasing).
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np

__all__ = [
    "DiscGrid",
    "ComplexField",
    "build_grid",
    "wirtinger_dbar",
    "wirtinger_d",
    "sup_norm",
    "l2_norm",
    "central_cells",
    "interior_cells",
]


def _frozen(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class DiscGrid:
    """Cell-centred lattice on [-1, 1]^2 restricted to the disc ``|z| < 1 - margin``.

    Attributes
    ----------
    n : int
        Cells per axis.
    margin : float
        Boundary standoff.
    h : float
        Cell width, ``2 / n``.
    mask : ndarray of bool, shape (n, n)
        ``mask[row, col]`` is true for interior cells; row indexes y.
    index : ndarray of int, shape (n, n)
        Position of each lattice cell in the field vector, -1 outside.
    rows, cols : ndarray of int
        Lattice coordinates of the interior cells in canonical order.
    centers : ndarray of complex
        Interior cell centres in canonical order.
    area_fraction : ndarray of float
        Fraction of each interior cell covered by the disc ``|z| < 1 - margin``;
        1 except along the boundary.
    """

    n: int
    margin: float
    h: float
    mask: np.ndarray
    index: np.ndarray
    rows: np.ndarray
    cols: np.ndarray
    centers: np.ndarray
    area_fraction: np.ndarray

    @property
    def size(self) -> int:
        return int(self.centers.size)

    @property
    def weight(self) -> float:
        """Nominal quadrature weight h**2 of an interior cell."""
        return self.h * self.h

    @property
    def weights(self) -> np.ndarray:
        """Per-cell quadrature weights: h**2 times the covered area fraction."""
        return self.weight * self.area_fraction

    @property
    def area(self) -> float:
        """Sum of nominal weights (area of the staircase of interior cells)."""
        return self.size * self.weight

    @property
    def radius(self) -> float:
        return 1.0 - self.margin

    def lattice_coords(self) -> np.ndarray:
        """Centres of the full n-by-n lattice (inside and outside the mask)."""
        t = -1.0 + self.h * (np.arange(self.n) + 0.5)
        return t[None, :] + 1j * t[:, None]

    def sample(self, fn: Callable[[np.ndarray], np.ndarray]) -> "ComplexField":
        """Evaluate a vectorised function at the interior centres."""
        return ComplexField(self, fn(self.centers))

    def zeros(self) -> "ComplexField":
        return ComplexField(self, np.zeros(self.size, dtype=complex))

    def constant(self, c: complex) -> "ComplexField":
        return ComplexField(self, np.full(self.size, c, dtype=complex))

    def to_lattice(self, values: np.ndarray, fill: complex = 0.0) -> np.ndarray:
        """Scatter a field vector onto the full n-by-n lattice."""
        out = np.full((self.n, self.n), fill, dtype=complex)
        out[self.rows, self.cols] = values
        return out

    def same_as(self, other: "DiscGrid") -> bool:
        return self is other or (self.n == other.n and self.margin == other.margin)


def build_grid(n: int, margin: float = 0.0) -> DiscGrid:
    """Build the disc grid with ``n`` cells per axis.

    >>> build_grid(4).size
    12
    """
    if int(n) != n or n < 4:
        raise ValueError(f"grid needs n >= 4 cells per axis, got {n!r}")
    if not (0.0 <= margin < 1.0):
        raise ValueError(f"margin must lie in [0, 1), got {margin!r}")
    n = int(n)
    h = 2.0 / n
    t = -1.0 + h * (np.arange(n) + 0.5)
    lattice = t[None, :] + 1j * t[:, None]
    mask = np.abs(lattice) < 1.0 - margin
    rows, cols = np.nonzero(mask)  # row-major: y outer, x inner
    index = np.full((n, n), -1, dtype=np.intp)
    index[rows, cols] = np.arange(rows.size)
    return DiscGrid(
        n=n,
        margin=float(margin),
        h=h,
        mask=_frozen(mask),
        index=_frozen(index),
        rows=_frozen(rows),
        cols=_frozen(cols),
        centers=_frozen(lattice[rows, cols]),
        area_fraction=_frozen(_area_fraction(lattice[rows, cols], h, 1.0 - margin)),
    )


def _area_fraction(centers: np.ndarray, h: float, radius: float, samples: int = 512) -> np.ndarray:
    """Covered fraction of each square cell by the disc of the given radius.

    Exact y-extent per column, midpoint rule across x for cells cut by the circle.
    """
    frac = np.ones(centers.size)
    far = np.abs(centers.real) + h / 2, np.abs(centers.imag) + h / 2
    cut = np.hypot(*far) > radius
    if not np.any(cut):
        return frac
    c = centers[cut]
    t = (np.arange(samples) + 0.5) / samples - 0.5
    x = c.real[:, None] + h * t[None, :]
    s = np.sqrt(np.clip(radius * radius - x * x, 0.0, None))
    y0 = c.imag[:, None] - h / 2
    y1 = c.imag[:, None] + h / 2
    seg = np.clip(np.minimum(y1, s) - np.maximum(y0, -s), 0.0, None)
    frac[cut] = seg.mean(axis=1) / h
    return frac


class ComplexField:
    """Complex samples at the interior cells of a :class:`DiscGrid`.

    Values are copied on construction and stored read-only.
    """

    __slots__ = ("grid", "values")

    def __init__(self, grid: DiscGrid, values) -> None:
        vals = np.array(values, dtype=complex)
        if vals.shape != (grid.size,):
            raise ValueError(
                f"field has shape {vals.shape}, grid has {grid.size} interior cells"
            )
        if not np.all(np.isfinite(vals)):
            raise ValueError("field values must be finite")
        vals.flags.writeable = False
        self.grid = grid
        self.values = vals

    def __repr__(self) -> str:
        return f"ComplexField(n={self.grid.n}, cells={self.grid.size})"

    def __len__(self) -> int:
        return self.values.size

    def _other(self, other):
        if isinstance(other, ComplexField):
            if not self.grid.same_as(other.grid):
                raise ValueError("fields live on different grids")
            return other.values
        return other

    def __add__(self, other):
        return ComplexField(self.grid, self.values + self._other(other))

    __radd__ = __add__

    def __sub__(self, other):
        return ComplexField(self.grid, self.values - self._other(other))

    def __rsub__(self, other):
        return ComplexField(self.grid, self._other(other) - self.values)

    def __mul__(self, other):
        return ComplexField(self.grid, self.values * self._other(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return ComplexField(self.grid, self.values / self._other(other))

    def __neg__(self):
        return ComplexField(self.grid, -self.values)

    def conj(self) -> "ComplexField":
        return ComplexField(self.grid, np.conj(self.values))

    @property
    def real(self) -> np.ndarray:
        return self.values.real

    def abs(self) -> np.ndarray:
        return np.abs(self.values)

    def to_csv(self, path) -> None:
        """Write ``x,y,re,im`` rows in canonical order."""
        z = self.grid.centers
        cols = np.column_stack([z.real, z.imag, self.values.real, self.values.imag])
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["x", "y", "re", "im"])
            # repr of a Python float round-trips exactly
            w.writerows([repr(float(a)) for a in row] for row in cols.tolist())

    @classmethod
    def from_csv(cls, path, grid: DiscGrid | None = None, margin: float = 0.0):
        """Read a field dump.  Without ``grid`` the lattice size is inferred."""
        with open(Path(path), newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header != ["x", "y", "re", "im"]:
                raise ValueError(f"{path}: expected header x,y,re,im, got {header}")
            rows = [tuple(map(float, r)) for r in reader if r]
        data = np.array(rows, dtype=float).reshape(-1, 4)
        if grid is None:
            if data.shape[0] == 0:
                raise ValueError(f"{path}: empty field")
            xs = np.unique(np.round(data[:, 0], 12))
            if xs.size < 2:
                raise ValueError(f"{path}: cannot infer lattice spacing")
            grid = build_grid(int(round(2.0 / np.min(np.diff(xs)))), margin)
        if data.shape[0] != grid.size:
            raise ValueError(f"{path}: {data.shape[0]} rows, grid has {grid.size} cells")
        z = data[:, 0] + 1j * data[:, 1]
        if np.max(np.abs(z - grid.centers), initial=0.0) > 1e-9:
            raise ValueError(f"{path}: cell centres do not match the grid")
        return cls(grid, data[:, 2] + 1j * data[:, 3])


def _axis_derivative(grid: DiscGrid, lat: np.ndarray, axis: int) -> np.ndarray:
    """Derivative along one lattice axis at the interior cells.

    Central differences where both neighbours are interior, second-order
    one-sided where two consecutive neighbours exist on one side, first-order
    one-sided otherwise, and zero for a cell isolated along this axis.
    """
    n, h, m = grid.n, grid.h, grid.mask
    r, c = grid.rows, grid.cols
    step = (1, 0) if axis == 0 else (0, 1)

    def inside(k: int) -> np.ndarray:
        rr, cc = r + k * step[0], c + k * step[1]
        ok = (rr >= 0) & (rr < n) & (cc >= 0) & (cc < n)
        out = np.zeros(r.size, dtype=bool)
        out[ok] = m[rr[ok], cc[ok]]
        return out

    def val(k: int, sel: np.ndarray) -> np.ndarray:
        return lat[r[sel] + k * step[0], c[sel] + k * step[1]]

    p1, m1 = inside(1), inside(-1)
    p2, m2 = inside(2), inside(-2)
    d = np.zeros(r.size, dtype=complex)

    central = p1 & m1
    d[central] = (val(1, central) - val(-1, central)) / (2.0 * h)

    fwd2 = ~m1 & p1 & p2
    d[fwd2] = (-3.0 * val(0, fwd2) + 4.0 * val(1, fwd2) - val(2, fwd2)) / (2.0 * h)
    fwd1 = ~m1 & p1 & ~p2
    d[fwd1] = (val(1, fwd1) - val(0, fwd1)) / h

    bwd2 = ~p1 & m1 & m2
    d[bwd2] = (3.0 * val(0, bwd2) - 4.0 * val(-1, bwd2) + val(-2, bwd2)) / (2.0 * h)
    bwd1 = ~p1 & m1 & ~m2
    d[bwd1] = (val(0, bwd1) - val(-1, bwd1)) / h
    return d


def _partials(u: ComplexField) -> tuple[np.ndarray, np.ndarray]:
    g = u.grid
    lat = g.to_lattice(u.values)
    return _axis_derivative(g, lat, axis=1), _axis_derivative(g, lat, axis=0)


def central_cells(grid: DiscGrid) -> np.ndarray:
    """Boolean selector of cells whose four lattice neighbours are interior."""
    n, m = grid.n, grid.mask
    padded = np.zeros((n + 2, n + 2), dtype=bool)
    padded[1:-1, 1:-1] = m
    r, c = grid.rows + 1, grid.cols + 1
    return padded[r + 1, c] & padded[r - 1, c] & padded[r, c + 1] & padded[r, c - 1]


def interior_cells(grid: DiscGrid, layers: int) -> np.ndarray:
    """Selector of cells at least ``layers`` lattice steps (Chebyshev) from any
    non-interior cell.  ``layers=0`` selects every interior cell."""
    if layers <= 0:
        return np.ones(grid.size, dtype=bool)
    n, L = grid.n, int(layers)
    padded = np.zeros((n + 2 * L, n + 2 * L), dtype=bool)
    padded[L:-L, L:-L] = grid.mask
    r, c = grid.rows + L, grid.cols + L
    keep = np.ones(grid.size, dtype=bool)
    for dr in range(-L, L + 1):
        for dc in range(-L, L + 1):
            keep &= padded[r + dr, c + dc]
    return keep


def wirtinger_dbar(u: ComplexField) -> ComplexField:
    """Discrete d/dz-bar = (d/dx + i d/dy) / 2."""
    ux, uy = _partials(u)
    return ComplexField(u.grid, 0.5 * (ux + 1j * uy))


def wirtinger_d(u: ComplexField) -> ComplexField:
    """Discrete d/dz = (d/dx - i d/dy) / 2."""
    ux, uy = _partials(u)
    return ComplexField(u.grid, 0.5 * (ux - 1j * uy))


def sup_norm(u: ComplexField) -> float:
    return float(np.max(np.abs(u.values), initial=0.0))


def l2_norm(u: ComplexField) -> float:
    """Quadrature L2 norm with the grid's per-cell weights (exactly rounded sum)."""
    a = np.abs(u.values)
    return math.sqrt(math.fsum(a * a * u.grid.weights))
