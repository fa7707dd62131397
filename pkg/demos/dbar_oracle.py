"""
Solving dbar v = 1 on the disc
==============================

The Cauchy-Pompeiu transform of the disc indicator is conj(z) inside the
disc, which gives a closed form to test the solver against.
"""

import numpy as np

from corona_disc import build_grid, dbar_oracle_study, solve_dbar, sup_norm

# one solve, checked against conj(z)
grid = build_grid(128)
sol = solve_dbar(grid.constant(1.0), backend="fft")
print("sup |v - conj(z)| =", sup_norm(sol.v - grid.sample(np.conj)))

# the stencil residual is O(1) on the staircase boundary but small inside
print("residual over all cells:", sol.residual_sup)
print("residual two layers in: ", sol.residual_interior_sup)

# refinement study: first order in h
table = dbar_oracle_study([64, 128, 256], backend="fft")
print(table.format())
