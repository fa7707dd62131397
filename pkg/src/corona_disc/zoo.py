"""Layered zero sets accumulating at the whole circle, and separated test pairs."""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .functions import Blaschke

__all__ = ["layered_zeros", "blaschke_from_zeros", "separated_pair", "BAND_HALF_WIDTH"]

BAND_HALF_WIDTH = 0.1


def layered_zeros(K: int, offsets: Sequence[float] | None = None) -> np.ndarray:
    """Level k = 2..K contributes k evenly spaced points of modulus 1 - 2**-k.

    ``offsets[k - 2]`` rotates level k (radians); all levels start at angle 0
    by default.

    >>> layered_zeros(2)
    array([ 0.75+0.j, -0.75+0.j])
    """
    if int(K) != K or K < 2:
        raise ValueError(f"need K >= 2 levels, got {K!r}")
    K = int(K)
    if offsets is not None and len(offsets) != K - 1:
        raise ValueError(f"expected {K - 1} level offsets, got {len(offsets)}")
    pts = []
    for k in range(2, K + 1):
        r = 1.0 - 2.0 ** -k
        off = 0.0 if offsets is None else float(offsets[k - 2])
        m = np.arange(k)
        ang = 2.0 * math.pi * m / k + off
        # snap cos/sin of exact multiples of pi/2 so symmetric points stay symmetric
        pts.append(r * (np.round(np.cos(ang), 15) + 1j * np.round(np.sin(ang), 15)))
    return np.concatenate(pts)


def blaschke_from_zeros(zeros) -> Blaschke:
    return Blaschke(tuple(complex(a) for a in np.ravel(np.asarray(zeros, dtype=complex))))


def separated_pair(K: int, rotation: float = 0.0, half_width: float = BAND_HALF_WIDTH):
    """Split the layered zeros by a band of half-width ``half_width``.

    f1 takes the zeros with Re(z e^{-i rotation}) > half_width, f2 those below
    -half_width; zeros inside the band are dropped.  Returns ``(f1, f2, eta)``
    with eta the exact minimum distance between the two zero lists.
    """
    zs = layered_zeros(K)
    u = np.real(zs * np.exp(-1j * rotation))
    right = zs[u > half_width]
    left = zs[u < -half_width]
    if right.size == 0 or left.size == 0:
        raise ValueError(
            f"separated_pair(K={K}, rotation={rotation}): "
            f"{right.size} zeros right of the band, {left.size} left of it"
        )
    eta = float(np.min(np.abs(right[:, None] - left[None, :])))
    return blaschke_from_zeros(right), blaschke_from_zeros(left), eta
