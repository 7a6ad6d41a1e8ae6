"""
From a correlation matrix to an unrestricted vector and back
============================================================

Any non-singular correlation matrix maps to the strict lower triangle of its
matrix logarithm, and every real vector of the right length comes back as a
valid correlation matrix.
"""
import numpy as np

from corrlog import corr_of_gamma, gamma_of_corr

C = np.array([
    [1.0, 0.7, -0.2],
    [0.7, 1.0, 0.1],
    [-0.2, 0.1, 1.0],
])
gamma = gamma_of_corr(C)
print("gamma:", np.round(gamma, 4))

# for two variables the single element is the Fisher transform of rho
print("n=2:", gamma_of_corr([[1, 0.5], [0.5, 1]]), "vs", np.arctanh(0.5))

# the inverse runs a fixed-point iteration on the diagonal of log C
C_back, report = corr_of_gamma(gamma)
print("iterations:", report.iterations, "max error:", np.abs(C_back - C).max())

# any vector works, including ones that are far from zero
rng = np.random.default_rng(1)
wild = rng.normal(scale=2.0, size=10)
C_wild, report = corr_of_gamma(wild)
print("5x5 from a random vector: lambda_min =", round(report.lambda_min, 5))
print(np.round(C_wild, 3))

# the residual trace shrinks geometrically
print("step norms:", np.array2string(report.residuals[:8], precision=2))
