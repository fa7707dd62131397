"""Solver configuration (JSON-backed)."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields

__all__ = ["SolveConfig", "DEFAULT_TOLERANCES"]

DEFAULT_TOLERANCES = {
    # sup |f1 g1 + f2 g2 - 1|
    "residual": 5e-2,
    # max_j sup|dbar g_j| / sup|dbar(phi1/f1)|
    "holomorphy": 0.1,
    # reference scale below which the holomorphy ratio uses this floor instead
    "holomorphy_floor": 1e-10,
    # max_j sup|g_j|
    "g_sup_max": 1e6,
    # relative slack on sup|lambda| <= sup|dbar phi2| (4/delta)^2
    "lambda_bound_slack": 1e-9,
    # outer cell layers left out of the holomorphy gate (0: every cell)
    "boundary_layers": 0,
}


@dataclass(frozen=True)
class SolveConfig:
    n: int = 128
    margin: float = 0.0
    backend: str = "auto"
    dbar_phi_mode: str = "analytic"
    delta_min: float = 1e-6
    eta_min: float = 0.0
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))

    def __post_init__(self):
        tol = dict(DEFAULT_TOLERANCES)
        unknown = set(self.tolerances) - set(tol)
        if unknown:
            raise ValueError(f"unknown tolerance keys: {sorted(unknown)}")
        tol.update({k: float(v) for k, v in self.tolerances.items()})
        object.__setattr__(self, "tolerances", tol)
        if self.backend not in ("direct", "fft", "auto"):
            raise ValueError(f"backend must be direct, fft or auto, got {self.backend!r}")
        if self.dbar_phi_mode not in ("analytic", "finite_difference"):
            raise ValueError(f"dbar_phi_mode must be analytic or finite_difference, got {self.dbar_phi_mode!r}")

    @classmethod
    def from_dict(cls, d: dict) -> "SolveConfig":
        """Build from a mapping, ignoring keys that are not config fields."""
        names = {f.name for f in fields(cls)}
        kw = {k: v for k, v in d.items() if k in names}
        if "n" in kw:
            if int(kw["n"]) != kw["n"]:
                raise ValueError(f"n must be an integer, got {kw['n']!r}")
            kw["n"] = int(kw["n"])
        return cls(**kw)

    def to_dict(self) -> dict:
        return asdict(self)

    def replace(self, **kw) -> "SolveConfig":
        d = self.to_dict()
        d.update(kw)
        return SolveConfig(**d)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)
