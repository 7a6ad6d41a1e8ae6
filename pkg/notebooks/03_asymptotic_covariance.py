"""
Asymptotic covariance of three estimators
=========================================

Under Gaussian sampling the empirical correlations are strongly dependent when
the true correlations are large. Their Fisher transforms are still correlated,
while the elements of gamma are close to uncorrelated.
"""
import numpy as np

from corrlog import (
    acorr,
    make_toeplitz,
    omega_gamma,
    omega_monte_carlo,
    omega_normal_iid,
    omega_phi,
    omega_rho,
)

np.set_printoptions(precision=3, suppress=True)

C = make_toeplitz(0.9, 3)
Omega = omega_normal_iid(C)
print("avar(rho hat):\n", omega_rho(Omega))
print("avar(phi hat):\n", omega_phi(Omega, C))
print("acorr(gamma hat):\n", acorr(omega_gamma(Omega, C)))

# a simulation check of the closed form (a few seconds)
mc = omega_monte_carlo(C, T=20_000, reps=100, seed=0)
print("Monte Carlo vs closed form, max gap:", np.abs(mc - Omega).max())
