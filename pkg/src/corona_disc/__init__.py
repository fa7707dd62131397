"""Numerical two-function corona problem on the unit disc.

Given bounded holomorphic f1, f2 with |f1| + |f2| >= delta > 0 and separated
zero sets, build g1, g2 with f1 g1 + f2 g2 = 1 from a smooth partition of
unity, the Koszul correction v12 and a Cauchy-Pompeiu solve of dbar v12 = lambda,
then verify the result on the grid.
"""

from .config import SolveConfig
from .dbar import DbarSolution, cauchy_pompeiu_direct, cauchy_pompeiu_fft, solve_dbar
from .functions import (
    Blaschke,
    CoronaProblem,
    DeltaTooSmall,
    EtaTooSmall,
    Polynomial,
    Product,
    Scalar,
    corona_delta,
    derivative,
    eval_function,
    spec_from_json,
    spec_to_json,
    validate_corona,
    zero_separation,
)
from .grid import (
    ComplexField,
    DiscGrid,
    build_grid,
    l2_norm,
    sup_norm,
    wirtinger_d,
    wirtinger_dbar,
)
from .koszul import (
    CoronaSolution,
    SupportViolation,
    assemble_g,
    build_lambda,
    koszul_residual,
    solve_corona,
)
from .partition import PartitionPair, build_partition, dbar_support_check, smooth_step
from .verify import Report, convergence_study, dbar_oracle_study, verify_solution
from .zoo import blaschke_from_zeros, layered_zeros, separated_pair

__version__ = "0.1.0"
