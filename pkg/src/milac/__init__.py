"""Desk-scale simulator for linear analog computing on microwave networks.

Submodules:

* :mod:`milac.numerics` -- metered dense complex linear algebra
* :mod:`milac.network` -- component grid, admittance/system matrices, port solve
* :mod:`milac.primitives` -- block inverses and the three network read-outs
* :mod:`milac.estimation` -- LMMSE estimator and covariance, digital and analog
* :mod:`milac.kalman` -- Kalman filtering over both compute routes
* :mod:`milac.lossless` -- purely-susceptive doubled-network realization
* :mod:`milac.costmodel` -- operation-count formulas and speedup tables
* :mod:`milac.fileio` / :mod:`milac.cli` -- text file formats and the CLI
"""

from .costmodel import inversion_costs, kalman_costs, lmmse_costs, reconcile, speedup_table
from .estimation import (
    CovResult,
    LinearObservationModel,
    LmmseResult,
    build_p_cov,
    build_p_lmmse,
    cov_analog,
    cov_digital,
    invert_analog,
    lmmse_analog,
    lmmse_digital,
)
from .kalman import (
    DynamicalModel,
    FilterState,
    generate_trajectory,
    kalman_run,
    kalman_step_analog,
    kalman_step_digital,
)
from .lossless import (
    LiftedSignals,
    SusceptanceMatrix,
    build_susceptance,
    simulate_lossless,
    verify_lifting,
)
from .network import (
    ComponentGrid,
    MilacNetwork,
    PortSolution,
    Y0_DEFAULT,
    admittance_from_grid,
    admittance_from_system_matrix,
    grid_from_admittance,
    grid_from_system_matrix,
    reciprocity_defect,
    simulate,
    system_matrix_from_admittance,
)
from .numerics import (
    ComplexMatrix,
    ComplexVector,
    CostMeter,
    DimensionError,
    SingularMatrixError,
    gauss_invert,
    mat_mul,
    mat_vec,
    scalar_product,
    solve_linear,
)
from .primitives import (
    BlockPartition,
    block_inverse_via_a,
    block_inverse_via_d,
    output_on_all_ports,
    output_on_driven_ports,
    output_on_matched_ports,
)

__version__ = "0.1.0"

__all__ = [
    "BlockPartition",
    "ComplexMatrix",
    "ComplexVector",
    "ComponentGrid",
    "CostMeter",
    "CovResult",
    "DimensionError",
    "DynamicalModel",
    "FilterState",
    "LiftedSignals",
    "LinearObservationModel",
    "LmmseResult",
    "MilacNetwork",
    "PortSolution",
    "SingularMatrixError",
    "SusceptanceMatrix",
    "Y0_DEFAULT",
    "admittance_from_grid",
    "admittance_from_system_matrix",
    "block_inverse_via_a",
    "block_inverse_via_d",
    "build_p_cov",
    "build_p_lmmse",
    "build_susceptance",
    "cov_analog",
    "cov_digital",
    "gauss_invert",
    "generate_trajectory",
    "grid_from_admittance",
    "grid_from_system_matrix",
    "invert_analog",
    "inversion_costs",
    "kalman_costs",
    "kalman_run",
    "kalman_step_analog",
    "kalman_step_digital",
    "lmmse_analog",
    "lmmse_costs",
    "lmmse_digital",
    "mat_mul",
    "mat_vec",
    "output_on_all_ports",
    "output_on_driven_ports",
    "output_on_matched_ports",
    "reciprocity_defect",
    "reconcile",
    "scalar_product",
    "simulate",
    "simulate_lossless",
    "solve_linear",
    "speedup_table",
    "system_matrix_from_admittance",
    "verify_lifting",
]
