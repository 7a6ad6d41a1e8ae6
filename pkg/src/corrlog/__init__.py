"""
corrlog
=======
Parametrize a non-singular correlation matrix C by the off-diagonal elements
of log C, an unrestricted real vector, and invert that map by fixed-point
iteration.
"""
from .asymptotics import (
    acorr,
    omega_gamma,
    omega_monte_carlo,
    omega_normal_iid,
    omega_phi,
    omega_rho,
)
from .errors import (
    ConvergenceError,
    DimensionError,
    InvalidCorrelationError,
    MatrixSizeError,
    NotPositiveDefiniteError,
)
from .jacobians import drho_dgamma, jacobian_A, jacobian_H, jacobian_J, xi_matrix
from .structures import (
    BlockPartition,
    check_bisymmetry,
    check_block_preservation,
    equi_gamma,
    equi_rho,
    make_block,
    make_equicorrelation,
    make_toeplitz,
)
from .symmat import (
    CorrelationMatrix,
    EigenDecomposition,
    sym_eig,
    sym_exp,
    sym_log,
    unvecl,
    validate_correlation,
    vecl,
)
from .transform import (
    ConvergenceReport,
    CovarianceVector,
    corr_of_gamma,
    corr_of_gamma_target_diag,
    cov_compress,
    cov_expand,
    fisher,
    fisher_inv,
    g_step,
    gamma_of_corr,
    matrix_power,
)

__version__ = "0.1.0"
