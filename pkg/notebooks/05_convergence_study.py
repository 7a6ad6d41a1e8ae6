"""
A small convergence study
=========================

Iteration counts from random half-normal starts for Toeplitz matrices grow
slowly with n and much faster as rho approaches one. The full study is
available from the command line, for example
``corrlog fig1 --seed 0 out.csv``.
"""
import numpy as np

from corrlog import experiments

rows = experiments.fig1(n_values=(3, 10, 30, 60), rhos=(0.5, 0.9, 0.99), trials=20, seed=0)
print(f"{'n':>4} {'rho':>5} {'mean':>7} {'sd':>6}")
for r in rows:
    print(f"{r.n:4d} {r.rho:5.2f} {r.mean_iters:7.2f} {r.sd_iters:6.2f}")

# random gamma: iterations against the implied Lipschitz constant
rows = experiments.fig2(n_values=(10,), count=300, seed=0)
it = np.array([r.iterations for r in rows])
cl = np.array([r.c_L for r in rows])
print("corr(iterations, c_L) =", round(np.corrcoef(it, cl)[0, 1], 3))
