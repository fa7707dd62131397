"""
Partition of unity from the data
=================================

phi_j = chi_j / (chi1 + chi2) with chi_j a smooth ramp of |f_j| between
delta/4 and delta/2.  Where f2 is small, phi1 is identically one.
"""

import numpy as np

from corona_disc import Polynomial, build_grid, build_partition, dbar_support_check, validate_corona

problem = validate_corona(Polynomial((-0.5, 1.0)), Polynomial((0.5, 1.0)), build_grid(96))
z = problem.grid.centers

for mode in ("analytic", "finite_difference"):
    pp = build_partition(problem, mode)
    near_f2_zero = np.abs(problem.f2(z)) <= pp.threshold_lo
    print(mode)
    print("  max |phi1 + phi2 - 1|     :", np.max(np.abs(pp.phi1.real + pp.phi2.real - 1)))
    print("  phi1 == 1 near the f2 zero:", bool(np.all(pp.phi1.real[near_f2_zero] == 1)))
    print("  dbar phi2 support check   :", bool(dbar_support_check(pp, problem)))
