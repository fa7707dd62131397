"""
Zeros piling up at the circle
=============================

Level k holds k points of modulus 1 - 2**-k.  Splitting them by a vertical
band gives two Blaschke products with separated zero sets.
"""

import numpy as np

from corona_disc import SolveConfig, build_grid, layered_zeros, separated_pair, solve_corona, validate_corona

print(layered_zeros(2))
print("points per K:", [layered_zeros(K).size for K in range(2, 8)])

f1, f2, eta = separated_pair(6)
print(f"{len(f1.zeros)} + {len(f2.zeros)} zeros, eta = {eta:.4f}")

# the outer levels sit a few cells from the circle; stand off the boundary
cfg = SolveConfig(n=256, margin=0.05, eta_min=1e-3, tolerances={"boundary_layers": 2})
problem = validate_corona(f1, f2, build_grid(cfg.n, cfg.margin), cfg.delta_min, cfg.eta_min)
rep = solve_corona(problem, cfg).report
print(f"delta = {problem.delta:.4f}, holomorphy ratio = {rep.holomorphy_ratio:.4f}, passed = {rep.passed}")
print("max |B| on the grid:", np.max(np.abs(f1(problem.grid.centers))))
