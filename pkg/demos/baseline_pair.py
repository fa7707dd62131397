"""
A two-function corona solution
==============================

f1 = z - 1/2 and f2 = z + 1/2 have |f1| + |f2| >= 1 on the disc, with
equality on the segment between their zeros.
"""

from corona_disc import Polynomial, SolveConfig, build_grid, solve_corona, validate_corona

f1 = Polynomial((-0.5, 1.0))
f2 = Polynomial((0.5, 1.0))
problem = validate_corona(f1, f2, build_grid(128))
print(f"delta = {problem.delta:.6f}, eta = {problem.eta}")

sol = solve_corona(problem, SolveConfig(n=128))
rep = sol.report

# f1 g1 + f2 g2 = 1 holds by construction, whatever v12 is
print("sup |f1 g1 + f2 g2 - 1| =", rep.residual_sup)

# holomorphy comes from v12 solving the dbar problem
print("sup |dbar g| / sup |dbar(phi1/f1)| =", rep.holomorphy_ratio)
print("sup |g1|, sup |g2| =", rep.g_sup)

for name, gate in rep.gates.items():
    print(f"  {name:13s} {'pass' if gate.passed else 'FAIL'}")
