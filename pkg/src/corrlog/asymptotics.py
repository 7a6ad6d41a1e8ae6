"""
Asymptotic covariance of transformed sample correlations
~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
Given ``Omega = avar(vec(C_hat))`` (an n^2 x n^2 matrix, column-major vec),
compute the asymptotic covariance of the empirical correlations, of their
element-wise Fisher transforms and of ``gamma(C_hat)``.
"""
import numpy as np

from .jacobians import elimination_indices, jacobian_A
from .symmat import sym_log, validate_correlation, vecl


def omega_normal_iid(C):
    """``avar(vec(C_hat))`` for i.i.d. Gaussian observations with correlation C.

    Entry ((i,j), (k,l)) is the classical fourth-moment expression

        1/2 r_ij r_kl (r_ik^2 + r_il^2 + r_jk^2 + r_jl^2)
        + r_ik r_jl + r_il r_jk
        - r_ij (r_jk r_jl + r_ik r_il) - r_kl (r_ik r_jk + r_il r_jl)

    which vanishes whenever (i,j) or (k,l) is a diagonal position.
    """
    r = np.asarray(validate_correlation(C).values)
    n = r.shape[0]
    # axes: i, j, k, l
    r_ij = r[:, :, None, None]
    r_kl = r[None, None, :, :]
    r_ik = r[:, None, :, None]
    r_il = r[:, None, None, :]
    r_jk = r[None, :, :, None]
    r_jl = r[None, :, None, :]
    F = (
        0.5 * r_ij * r_kl * (r_ik**2 + r_il**2 + r_jk**2 + r_jl**2)
        + r_ik * r_jl
        + r_il * r_jk
        - r_ij * (r_jk * r_jl + r_ik * r_il)
        - r_kl * (r_ik * r_jk + r_il * r_jl)
    )
    # vec(i, j) = j * n + i
    Omega = F.transpose(1, 0, 3, 2).reshape(n * n, n * n)
    Omega = 0.5 * (Omega + Omega.T)
    # exact zeros where the expression cancels analytically
    dg = np.arange(n) * (n + 1)
    Omega[dg, :] = 0.0
    Omega[:, dg] = 0.0
    return Omega


def _n_from_omega(Omega):
    m = Omega.shape[0]
    n = int(round(np.sqrt(m)))
    if n * n != m or Omega.shape != (m, m):
        raise ValueError(f"Omega of shape {Omega.shape} is not n^2 x n^2")
    return n


def omega_rho(Omega):
    """Asymptotic covariance of ``vecl(C_hat)``."""
    Omega = np.asarray(Omega, dtype=float)
    lo, _, _ = elimination_indices(_n_from_omega(Omega))
    return Omega[np.ix_(lo, lo)]


def fisher_jacobian_diag(C):
    """Diagonal of the Jacobian of the element-wise Fisher transform, ``1/(1-c^2)``."""
    c = vecl(validate_correlation(C).values)
    return 1.0 / (1.0 - c**2)


def omega_phi(Omega, C):
    """Asymptotic covariance of the element-wise Fisher transformed correlations."""
    dc = fisher_jacobian_diag(C)
    return omega_rho(Omega) * np.outer(dc, dc)


def omega_gamma(Omega, C):
    """Asymptotic covariance of ``gamma(C_hat)``.

    Uses ``A^{-1}`` built in the eigenbasis of ``log C``, where A is the
    Jacobian of ``vec(exp(G))`` at ``G = log C``.
    """
    C = validate_correlation(C)
    Omega = np.asarray(Omega, dtype=float)
    Ainv = jacobian_A(sym_log(C.values)).dense_inverse()
    lo, _, _ = elimination_indices(C.n)
    W = Ainv[lo, :]
    out = W @ Omega @ W.T
    return 0.5 * (out + out.T)


def acorr(M):
    """Rescale a covariance matrix to a correlation matrix."""
    M = np.asarray(M, dtype=float)
    d = np.diag(M)
    if np.any(d <= 0):
        raise ValueError("acorr needs a strictly positive diagonal")
    s = 1.0 / np.sqrt(d)
    return M * np.outer(s, s)


def replication_rng(seed, index):
    """Counter-based generator for one replication, keyed by (seed, index)."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, index])))


def omega_monte_carlo(C, T=50_000, reps=200, seed=0, method="control_variate"):
    """Simulated ``avar(vec(C_hat))`` under i.i.d. Gaussian sampling.

    Each replication draws T observations from N(0, C) and records
    ``sqrt(T) * vec(C_hat - C)``; the result is the covariance of these
    records across replications.

    Parameters
    ----------
    method : {"control_variate", "plain"}
        ``"plain"`` is the raw sample covariance over replications. Its
        relative standard error is about ``sqrt(2 / reps)``. The default
        regresses the records on ``sqrt(T) * vech(X'X/T - C)``, whose covariance
        ``C_ik C_jl + C_il C_jk`` is known exactly, and corrects the sample
        covariance accordingly (a control variate).
    """
    if T < 1000:
        raise ValueError("T must be at least 1000")
    if reps < 2:
        raise ValueError("need at least two replications")
    if method not in ("control_variate", "plain"):
        raise ValueError(f"unknown method {method!r}")
    C = np.asarray(validate_correlation(C).values)
    n = C.shape[0]
    L = np.linalg.cholesky(C)
    hi, hj = np.tril_indices(n)
    Y = np.empty((reps, n * n))
    Z = np.empty((reps, hi.size))
    rootT = np.sqrt(T)
    for r in range(reps):
        X = replication_rng(seed, r).standard_normal((T, n)) @ L.T
        C_hat = np.corrcoef(X, rowvar=False)
        Y[r] = rootT * (C_hat - C).reshape(-1, order="F")
        S = X.T @ X / T
        Z[r] = rootT * (S - C)[hi, hj]
    cov_y = np.cov(Y, rowvar=False)
    if method == "plain":
        return 0.5 * (cov_y + cov_y.T)
    m = Y.shape[1]
    joint = np.cov(np.hstack([Y, Z]), rowvar=False)
    cov_yz = joint[:m, m:]
    cov_z = joint[m:, m:]
    cov_z_exact = C[hi][:, hi] * C[hj][:, hj] + C[hi][:, hj] * C[hj][:, hi]
    B = np.linalg.solve(cov_z, cov_yz.T).T
    out = cov_y - B @ (cov_z - cov_z_exact) @ B.T
    return 0.5 * (out + out.T)
