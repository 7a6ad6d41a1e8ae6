"""
Structured correlation matrices
===============================

Equicorrelation has a closed-form gamma, block structure survives the matrix
logarithm, and the log of a Toeplitz correlation matrix is symmetric about
both diagonals.
"""
import numpy as np

from corrlog import (
    BlockPartition,
    check_bisymmetry,
    check_block_preservation,
    equi_gamma,
    equi_rho,
    make_block,
    make_equicorrelation,
    make_toeplitz,
    sym_log,
)

rho, n = 0.3, 8
g = equi_gamma(rho, n)
print("closed form:", g, " matrix log:", sym_log(make_equicorrelation(rho, n).values)[1, 0])
print("and back:", equi_rho(g, n))

# gamma can go to minus infinity, rho stays above -1/(n-1)
print([round(equi_rho(x, n), 6) for x in (-0.5, -2.0, -10.0)], -1 / (n - 1))

part = BlockPartition(sizes=(3, 2, 2), within=(0.5, 0.2, 0.7), between=[
    [0.0, 0.1, 0.2],
    [0.1, 0.0, 0.3],
    [0.2, 0.3, 0.0],
])
report = check_block_preservation(make_block(part), part)
print("block structure kept:", report.passed, f"(max deviation {report.max_deviation:.1e})")
for key, value in report.values.items():
    print(f"  {key}: {value:.4f}")

G = sym_log(make_toeplitz(0.6, 5).values)
print("Toeplitz log is bisymmetric:", check_bisymmetry(G).passed)
print(np.round(G, 3))
