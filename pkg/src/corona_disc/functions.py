"""Closed-form holomorphic functions on the disc and corona-data validation.

Every function carries its zero list as constructor metadata; nothing here
root-finds.  Blaschke factors use the normalisation

    b_a(z) = (|a| / a) (a - z) / (1 - conj(a) z),    b_0(z) = z,

which is positive at the origin for ``a != 0``.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Sequence, Union

import numpy as np

from .grid import DiscGrid

__all__ = [
    "Polynomial",
    "Blaschke",
    "Scalar",
    "Product",
    "FunctionSpec",
    "eval_function",
    "derivative",
    "spec_from_json",
    "spec_to_json",
    "CoronaProblem",
    "CoronaDataError",
    "DeltaTooSmall",
    "EtaTooSmall",
    "corona_delta",
    "zero_separation",
    "validate_corona",
]

ZERO_TOL = 1e-12


def _as_complex_tuple(xs) -> tuple[complex, ...]:
    return tuple(complex(x) for x in xs)


class _Spec:
    """Shared evaluation surface of the closed-form function kinds."""

    zeros: tuple[complex, ...]

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        return self._eval(z)

    def derivative(self) -> Callable[[np.ndarray], np.ndarray]:
        def fprime(z):
            return self._deriv(np.asarray(z, dtype=complex))

        return fprime

    def _eval(self, z: np.ndarray) -> np.ndarray:  # pragma: no cover - abstract
        raise NotImplementedError

    def _deriv(self, z: np.ndarray) -> np.ndarray:  # pragma: no cover - abstract
        raise NotImplementedError


@dataclass(frozen=True)
class Scalar(_Spec):
    """Nonzero constant function."""

    c: complex

    def __post_init__(self):
        object.__setattr__(self, "c", complex(self.c))
        if self.c == 0:
            raise ValueError("the zero function has no discrete zero set")

    @property
    def zeros(self) -> tuple[complex, ...]:
        return ()

    def _eval(self, z):
        return np.full(z.shape, self.c, dtype=complex)

    def _deriv(self, z):
        return np.zeros(z.shape, dtype=complex)


@dataclass(frozen=True)
class Polynomial(_Spec):
    """Polynomial with ascending coefficients ``coeffs[k] * z**k``.

    Zeros of constants, linear polynomials and monomials ``c z**m`` are known
    in closed form.  Anything else must be built with :meth:`from_roots` or be
    given its zero list explicitly; the list is checked against the
    coefficients.
    """

    coeffs: tuple[complex, ...]
    zero_list: tuple[complex, ...] | None = None

    def __post_init__(self):
        c = list(_as_complex_tuple(self.coeffs))
        while len(c) > 1 and c[-1] == 0:
            c.pop()
        if not c or c[-1] == 0:
            raise ValueError("polynomial must not be identically zero")
        object.__setattr__(self, "coeffs", tuple(c))
        deg = len(c) - 1
        if self.zero_list is None:
            object.__setattr__(self, "zero_list", self._closed_form_zeros())
        else:
            zs = _as_complex_tuple(self.zero_list)
            if len(zs) != deg:
                raise ValueError(f"degree {deg} polynomial needs {deg} zeros, got {len(zs)}")
            scale = sum(abs(a) for a in c) * max(1.0, max((abs(w) for w in zs), default=1.0)) ** deg
            resid = np.abs(np.polyval(c[::-1], np.array(zs, dtype=complex))) if zs else np.zeros(0)
            if resid.size and resid.max() > 1e-9 * scale:
                raise ValueError("listed zeros do not annihilate the polynomial")
            object.__setattr__(self, "zero_list", zs)

    def _closed_form_zeros(self) -> tuple[complex, ...]:
        c = self.coeffs
        deg = len(c) - 1
        if deg == 0:
            return ()
        if deg == 1:
            return (-c[0] / c[1],)
        if all(a == 0 for a in c[:-1]):
            return (0j,) * deg
        raise ValueError(
            "zeros of a polynomial of degree >= 2 must be supplied (use Polynomial.from_roots)"
        )

    @classmethod
    def from_roots(cls, roots: Sequence[complex], lead: complex = 1.0) -> "Polynomial":
        roots = _as_complex_tuple(roots)
        c = np.array([complex(lead)])
        for r in roots:
            c = np.convolve(c, np.array([-r, 1.0]))  # ascending
        return cls(tuple(c), roots)

    @property
    def zeros(self) -> tuple[complex, ...]:
        return self.zero_list

    def _eval(self, z):
        out = np.zeros(z.shape, dtype=complex)
        for a in reversed(self.coeffs):
            out = out * z + a
        return out

    def _deriv(self, z):
        out = np.zeros(z.shape, dtype=complex)
        for k in range(len(self.coeffs) - 1, 0, -1):
            out = out * z + k * self.coeffs[k]
        return out


def _unit(a: complex) -> complex:
    # |a|/a from the argument, so it stays unimodular for subnormal a
    return cmath.exp(-1j * cmath.phase(a))


def _factor(a: complex, z: np.ndarray) -> np.ndarray:
    if a == 0:
        return z.copy()
    return _unit(a) * (a - z) / (1.0 - np.conj(a) * z)


def _factor_deriv(a: complex, z: np.ndarray) -> np.ndarray:
    if a == 0:
        return np.ones(z.shape, dtype=complex)
    w = 1.0 - np.conj(a) * z
    return _unit(a) * (abs(a) ** 2 - 1.0) / (w * w)


def _product_rule(values: list[np.ndarray], derivs: list[np.ndarray], shape) -> np.ndarray:
    # sum_k d_k prod_{j != k} v_j, without dividing by v_k (which may vanish)
    m = len(values)
    if m == 0:
        return np.zeros(shape, dtype=complex)
    prefix = [np.ones(shape, dtype=complex)]
    for v in values[:-1]:
        prefix.append(prefix[-1] * v)
    out = np.zeros(shape, dtype=complex)
    suffix = np.ones(shape, dtype=complex)
    for k in range(m - 1, -1, -1):
        out += derivs[k] * prefix[k] * suffix
        suffix = suffix * values[k]
    return out


@dataclass(frozen=True)
class Blaschke(_Spec):
    """Finite Blaschke product; the empty product is the constant 1."""

    zero_list: tuple[complex, ...] = ()

    def __post_init__(self):
        zs = _as_complex_tuple(self.zero_list)
        bad = [a for a in zs if not abs(a) < 1.0]
        if bad:
            raise ValueError(f"Blaschke zeros must lie in the open disc, got {bad}")
        object.__setattr__(self, "zero_list", zs)

    @property
    def zeros(self) -> tuple[complex, ...]:
        return self.zero_list

    def _eval(self, z):
        out = np.ones(z.shape, dtype=complex)
        for a in self.zero_list:
            out = out * _factor(a, z)
        return out

    def _deriv(self, z):
        vals = [_factor(a, z) for a in self.zero_list]
        ders = [_factor_deriv(a, z) for a in self.zero_list]
        return _product_rule(vals, ders, z.shape)


@dataclass(frozen=True)
class Product(_Spec):
    factors: tuple["FunctionSpec", ...]

    def __post_init__(self):
        fs = tuple(self.factors)
        if not fs:
            raise ValueError("product needs at least one factor")
        for f in fs:
            if not isinstance(f, _Spec):
                raise TypeError(f"not a function spec: {f!r}")
        object.__setattr__(self, "factors", fs)

    @property
    def zeros(self) -> tuple[complex, ...]:
        return tuple(w for f in self.factors for w in f.zeros)

    def _eval(self, z):
        out = np.ones(z.shape, dtype=complex)
        for f in self.factors:
            out = out * f._eval(z)
        return out

    def _deriv(self, z):
        vals = [f._eval(z) for f in self.factors]
        ders = [f._deriv(z) for f in self.factors]
        return _product_rule(vals, ders, z.shape)


FunctionSpec = Union[Polynomial, Blaschke, Scalar, Product]


def eval_function(f: FunctionSpec, pts) -> np.ndarray:
    if not isinstance(f, _Spec):
        raise TypeError(f"malformed function spec: {f!r}")
    return f(pts)


def derivative(f: FunctionSpec) -> Callable[[np.ndarray], np.ndarray]:
    """Evaluator of the complex derivative f'."""
    if not isinstance(f, _Spec):
        raise TypeError(f"malformed function spec: {f!r}")
    return f.derivative()


# -- JSON encoding -------------------------------------------------------------


def _enc(c: complex) -> list[float]:
    return [float(c.real), float(c.imag)]


def _dec(x) -> complex:
    if isinstance(x, (int, float)):
        return complex(x)
    if not (isinstance(x, (list, tuple)) and len(x) == 2):
        raise ValueError(f"complex numbers are encoded as [re, im], got {x!r}")
    return complex(float(x[0]), float(x[1]))


def spec_to_json(f: FunctionSpec) -> dict:
    if isinstance(f, Scalar):
        return {"kind": "scalar", "c": _enc(f.c)}
    if isinstance(f, Polynomial):
        out = {"kind": "polynomial", "coeffs": [_enc(a) for a in f.coeffs]}
        if len(f.coeffs) > 2:
            out["zeros"] = [_enc(a) for a in f.zeros]
        return out
    if isinstance(f, Blaschke):
        return {"kind": "blaschke", "zeros": [_enc(a) for a in f.zeros]}
    if isinstance(f, Product):
        return {"kind": "product", "factors": [spec_to_json(g) for g in f.factors]}
    raise TypeError(f"malformed function spec: {f!r}")


def spec_from_json(obj: dict) -> FunctionSpec:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ValueError(f"function spec must be an object with a 'kind', got {obj!r}")
    kind = obj["kind"]
    if kind == "scalar":
        return Scalar(_dec(obj["c"]))
    if kind == "polynomial":
        zeros = obj.get("zeros")
        return Polynomial(
            tuple(_dec(a) for a in obj["coeffs"]),
            None if zeros is None else tuple(_dec(a) for a in zeros),
        )
    if kind == "blaschke":
        return Blaschke(tuple(_dec(a) for a in obj["zeros"]))
    if kind == "product":
        return Product(tuple(spec_from_json(g) for g in obj["factors"]))
    raise ValueError(f"unknown function kind {kind!r}")


# -- corona data ---------------------------------------------------------------


class CoronaDataError(ValueError):
    """The pair (f1, f2) violates the corona or separation hypothesis."""


class DeltaTooSmall(CoronaDataError):
    pass


class EtaTooSmall(CoronaDataError):
    pass


@dataclass(frozen=True)
class CoronaProblem:
    """Validated corona data on a grid.

    ``delta`` is the grid minimum of |f1| + |f2|; ``eta`` the exact distance
    between the zero lists (``inf`` if either is empty).
    """

    f1: FunctionSpec
    f2: FunctionSpec
    grid: DiscGrid
    delta: float
    eta: float
    k: int = field(default=2, init=False)

    @property
    def thresholds(self) -> tuple[float, float]:
        """Ramp edges (delta/(2k), delta/k) of the partition cutoffs."""
        return self.delta / (2 * self.k), self.delta / self.k

    def with_grid(self, grid: DiscGrid, delta_min: float = 1e-6, eta_min: float = 0.0):
        return validate_corona(self.f1, self.f2, grid, delta_min, eta_min)


def _min_sum_modulus(f1, f2, grid: DiscGrid) -> float:
    z = grid.centers
    return float(np.min(np.abs(f1(z)) + np.abs(f2(z))))


def corona_delta(f1: FunctionSpec, f2: FunctionSpec, grid: DiscGrid, delta_min: float = 1e-6) -> float:
    """Grid estimate of inf (|f1| + |f2|) over the disc.

    This is a plain minimum over interior cell centres, so it overestimates
    the true infimum by at most h times a Lipschitz constant of |f1| + |f2|.
    Raises :class:`DeltaTooSmall` when the estimate does not exceed
    ``delta_min``.
    """
    d = _min_sum_modulus(f1, f2, grid)
    if not d > delta_min:
        raise DeltaTooSmall(
            f"DeltaTooSmall: min |f1|+|f2| = {d:.3e} <= {delta_min:.1e} at n={grid.n}"
        )
    return d


def zero_separation(f1: FunctionSpec, f2: FunctionSpec) -> float:
    """Minimum distance between the zero lists; ``math.inf`` if one is empty."""
    a = np.asarray(f1.zeros, dtype=complex)
    b = np.asarray(f2.zeros, dtype=complex)
    if a.size == 0 or b.size == 0:
        return math.inf
    return float(np.min(np.abs(a[:, None] - b[None, :])))


def validate_corona(
    f1: FunctionSpec,
    f2: FunctionSpec,
    grid: DiscGrid,
    delta_min: float = 1e-6,
    eta_min: float = 0.0,
) -> CoronaProblem:
    """Check both hypotheses and package the pair as a :class:`CoronaProblem`."""
    for f in (f1, f2):
        if not isinstance(f, _Spec):
            raise TypeError(f"malformed function spec: {f!r}")
    eta = zero_separation(f1, f2)
    delta = corona_delta(f1, f2, grid, delta_min)
    if not eta > eta_min:
        raise EtaTooSmall(f"EtaTooSmall: zero separation {eta:.3e} <= {eta_min:.1e}")
    if eta < 1e-3:
        warnings.warn(f"zero sets are only {eta:.2e} apart", RuntimeWarning, stacklevel=2)
    return CoronaProblem(f1=f1, f2=f2, grid=grid, delta=delta, eta=eta)
