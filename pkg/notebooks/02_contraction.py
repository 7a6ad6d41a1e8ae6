"""
How fast the inversion converges
================================

The Jacobian of the fixed-point map has its eigenvalues in [0, 1). The largest
one sets the convergence rate, and it approaches one as the correlation
matrix approaches singularity.
"""
import numpy as np

from corrlog import corr_of_gamma, gamma_of_corr, jacobian_J, make_toeplitz

for rho in (0.0, 0.5, 0.9, 0.99):
    g = gamma_of_corr(make_toeplitz(rho, 6))
    _, rep = corr_of_gamma(g)
    diag = jacobian_J(g, rep.x_star)
    print(f"rho={rho:<5} iterations={rep.iterations:3d} "
          f"nu_max={diag.nu_max:.4f} c_L={diag.lipschitz_c:7.2f}")

# J and its symmetric twin share the spectrum; the ones vector is in the kernel
g = gamma_of_corr(make_toeplitz(0.8, 4))
_, rep = corr_of_gamma(g)
diag = jacobian_J(g, rep.x_star)
print("eig(J~):", np.round(diag.eigenvalues, 5))
print("eig(J): ", np.round(np.sort(np.linalg.eigvals(diag.J).real), 5))
print("J @ 1:  ", np.abs(diag.J @ np.ones(4)).max())
