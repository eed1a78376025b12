"""Eigenvalues of the weighted fractional p-Laplacian on uniform grids."""

from fplap._core import (
    Domain,
    FractionalKernel,
    WeightField,
    SolverConfig,
    EigenPair,
    PathResult,
    SimplicityReport,
    build_interval,
    build_rectangle,
    build_disk,
    assemble_kernel,
    weight_constant,
    weight_step,
    weight_singular,
    weight_from_values,
    gagliardo_energy,
    gagliardo_gradient,
    weighted_lp_energy,
    weighted_lp_gradient,
    residual_norm,
    normalize_to_sphere,
    solve_lambda1,
    solve_lambda2_path,
    lambda2_upper_from_nodal,
    p2_oracle_spectrum,
    check_simplicity,
    compute_monotonicity_constant,
    convexity_gap,
    lagrange_gap,
    picone_gap,
    scd5_gap,
    hidden_convexity_gap,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
