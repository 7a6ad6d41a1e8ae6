"""
The log-correlation parametrization and its inverse
~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
``gamma_of_corr`` maps a non-singular correlation matrix C to the
off-diagonal elements of log C. Every real vector of length n(n-1)/2 is the
image of exactly one such matrix; ``corr_of_gamma`` recovers it by iterating
the contraction

    x <- x - log diag(exp(G[x]))

on the unknown diagonal x of log C, where ``G[x]`` is the symmetric matrix with
off-diagonal ``gamma`` and diagonal ``x``.
"""
from dataclasses import dataclass, field

import numpy as np

from .errors import ConvergenceError, DimensionError, NotPositiveDefiniteError
from .symmat import (
    dim_from_vecl_length,
    from_eig,
    pd_threshold,
    sym_eig,
    sym_exp,
    sym_log,
    unvecl,
    validate_correlation,
    vecl,
)

DEFAULT_MAX_ITER = 200
# corr_of_gamma guarantees |diag - 1| <= 10 * delta, which exceeds 1e-8 for the
# default delta once n > 1; accept its output without re-normalizing.
GAMMA_DIAG_TOL = 1e-6


@dataclass
class ConvergenceReport:
    """Trace of a fixed-point solve.

    ``residuals[k]`` is the norm of the step taken in iteration ``k + 1``.
    """

    iterations: int
    residuals: np.ndarray
    converged: bool
    x_star: np.ndarray
    delta: float
    diag_error: float = field(default=np.nan)
    lambda_min: float = field(default=np.nan)

    @property
    def final_residual(self):
        return float(self.residuals[-1]) if len(self.residuals) else 0.0


def default_delta(n):
    """Step threshold ``1e-8 * sqrt(n)`` used for the 2-norm."""
    return 1e-8 * np.sqrt(n)


def fisher(rho):
    """Fisher z-transformation ``0.5 * log((1 + rho) / (1 - rho))``."""
    rho = np.asarray(rho, dtype=float)
    if np.any(np.abs(rho) >= 1.0):
        raise ValueError("Fisher transformation requires |rho| < 1")
    out = np.arctanh(rho)
    return float(out) if out.ndim == 0 else out


def fisher_inv(z):
    """Inverse Fisher transformation, ``tanh(z)``."""
    out = np.tanh(np.asarray(z, dtype=float))
    return float(out) if out.ndim == 0 else out


def gamma_of_corr(C, tol=GAMMA_DIAG_TOL):
    """The off-diagonal elements of ``log C`` in vecl order.

    ``tol`` bounds ``|diag(C) - 1|``; the default admits matrices produced by
    :func:`corr_of_gamma` at its default threshold.
    """
    C = validate_correlation(C, tol=tol)
    return vecl(sym_log(C.values))


def _as_gamma(gamma):
    gamma = np.asarray(gamma, dtype=float).ravel()
    if not np.all(np.isfinite(gamma)):
        raise ValueError("gamma has non-finite entries")
    return gamma, dim_from_vecl_length(gamma.size)


def _exp_diag(decomp):
    lam, Q = decomp
    return (Q * Q) @ np.exp(lam)


def g_step(gamma, x):
    """One application of ``x - log diag(exp(G[x]))``."""
    gamma, n = _as_gamma(gamma)
    x = np.asarray(x, dtype=float).ravel()
    if x.size != n:
        raise DimensionError(f"x has length {x.size}, expected {n}")
    return x - np.log(_exp_diag(sym_eig(unvecl(gamma, x))))


def _fixed_point(gamma, n, log_target, delta, max_iter, x0, ord):
    if delta is None:
        delta = default_delta(n)
    if not delta > 0:
        raise ValueError("delta must be positive")
    if max_iter < 1:
        raise ValueError("max_iter must be at least 1")
    if x0 is None:
        x = np.zeros(n)
    else:
        x = np.array(x0, dtype=float).ravel()
        if x.size != n:
            raise DimensionError(f"x0 has length {x.size}, expected {n}")

    G = unvecl(gamma, x)
    diag = np.diag_indices(n)
    residuals = []
    converged = False
    for _ in range(max_iter):
        G[diag] = x
        step = log_target - np.log(_exp_diag(sym_eig(G)))
        x = x + step
        r = float(np.linalg.norm(step, ord=ord))
        residuals.append(r)
        if r <= delta:
            converged = True
            break
    G[diag] = x
    report = ConvergenceReport(
        iterations=len(residuals),
        residuals=np.array(residuals),
        converged=converged,
        x_star=x,
        delta=float(delta),
    )
    if not converged:
        raise ConvergenceError(
            f"no convergence after {max_iter} iterations "
            f"(last step {residuals[-1]:.3g} > delta {delta:.3g})",
            report,
        )
    return G, report


def _exp_checked(G, report):
    decomp = sym_eig(G)
    eig = np.exp(decomp.eigenvalues)
    report.lambda_min = float(eig[0])
    if eig[0] <= pd_threshold(eig):
        raise NotPositiveDefiniteError(
            f"solution is numerically singular (lambda_min = {eig[0]:.3g}); "
            "gamma is too large for double precision",
            eigenvalue=float(eig[0]),
            index=0,
        )
    return from_eig(decomp, np.exp)


def corr_of_gamma(gamma, delta=None, max_iter=DEFAULT_MAX_ITER, x0=None, ord=2):
    """Recover the correlation matrix whose log has off-diagonal ``gamma``.

    Parameters
    ----------
    gamma : array_like, length n(n-1)/2
        Off-diagonal elements of log C in vecl order. Any real vector.
    delta : float, optional
        Stop once the step norm falls to ``delta`` or below. Defaults to
        ``1e-8 * sqrt(n)``.
    max_iter : int
    x0 : array_like, length n, optional
        Starting diagonal; zeros by default. The solution does not depend on
        it.
    ord : int or float
        Norm used for the step, as in ``numpy.linalg.norm``.

    Returns
    -------
    C : ndarray, (n, n)
    report : ConvergenceReport

    Raises
    ------
    ConvergenceError
        If ``max_iter`` iterations do not reach the threshold. The report on
        the exception can be used to resume from ``report.x_star``.
    """
    gamma, n = _as_gamma(gamma)
    G, report = _fixed_point(gamma, n, 0.0, delta, max_iter, x0, ord)
    C = _exp_checked(G, report)
    report.diag_error = float(np.max(np.abs(np.diag(C) - 1.0)))
    if report.diag_error > 10 * report.delta:
        raise ConvergenceError(
            f"step converged but diagonal is off by {report.diag_error:.3g}", report
        )
    return C, report


def corr_of_gamma_target_diag(
    gamma, v, delta=None, max_iter=DEFAULT_MAX_ITER, x0=None, ord=2
):
    """Symmetric positive definite ``exp(G[x])`` with prescribed diagonal ``v``.

    Same iteration as :func:`corr_of_gamma` but driving
    ``log diag(exp(G[x]))`` to ``log v`` instead of zero. With ``v`` all ones
    the two coincide.
    """
    gamma, n = _as_gamma(gamma)
    v = np.asarray(v, dtype=float).ravel()
    if v.size != n:
        raise DimensionError(f"v has length {v.size}, expected {n}")
    if not np.all(v > 0):
        raise ValueError("target diagonal must be strictly positive")
    G, report = _fixed_point(gamma, n, np.log(v), delta, max_iter, x0, ord)
    S = _exp_checked(G, report)
    report.diag_error = float(np.max(np.abs(np.diag(S) - v)))
    if report.diag_error > 10 * report.delta * v.max():
        raise ConvergenceError(
            f"step converged but diagonal is off by {report.diag_error:.3g}", report
        )
    return S, report


@dataclass
class CovarianceVector:
    """Unrestricted coordinates of a covariance matrix: log standard deviations
    followed by the gamma vector of its correlation matrix."""

    log_sd: np.ndarray
    gamma: np.ndarray

    def __post_init__(self):
        self.log_sd = np.asarray(self.log_sd, dtype=float).ravel()
        self.gamma = np.asarray(self.gamma, dtype=float).ravel()
        n = self.log_sd.size
        if self.gamma.size != n * (n - 1) // 2:
            raise DimensionError(
                f"gamma of length {self.gamma.size} does not fit {n} log-sds"
            )

    def to_vector(self):
        return np.concatenate([self.log_sd, self.gamma])

    @classmethod
    def from_vector(cls, v):
        v = np.asarray(v, dtype=float).ravel()
        m = v.size
        n = int(round((np.sqrt(1 + 8 * m) - 1) / 2))
        if n * (n + 1) // 2 != m:
            raise DimensionError(f"length {m} is not of the form n(n+1)/2")
        return cls(v[:n], v[n:])


def cov_compress(Sigma):
    """Map a positive definite covariance matrix to a :class:`CovarianceVector`."""
    Sigma = np.asarray(Sigma, dtype=float)
    if Sigma.ndim != 2 or Sigma.shape[0] != Sigma.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {Sigma.shape}")
    var = np.diag(Sigma)
    if np.any(var <= 0):
        raise NotPositiveDefiniteError("covariance matrix has a non-positive variance")
    sd = np.sqrt(var)
    C = Sigma / np.outer(sd, sd)
    C[np.diag_indices_from(C)] = 1.0
    try:
        C = validate_correlation(C)
    except NotPositiveDefiniteError as exc:
        lam = np.linalg.eigvalsh(Sigma)
        raise NotPositiveDefiniteError(
            f"covariance matrix is not positive definite (lambda_min = {lam[0]:.6g})",
            eigenvalue=float(lam[0]),
            index=0,
        ) from exc
    return CovarianceVector(0.5 * np.log(var), gamma_of_corr(C))


def cov_expand(v, delta=None, max_iter=DEFAULT_MAX_ITER):
    """Inverse of :func:`cov_compress`. Accepts a CovarianceVector or flat vector."""
    if not isinstance(v, CovarianceVector):
        v = CovarianceVector.from_vector(v)
    C, _ = corr_of_gamma(v.gamma, delta=delta, max_iter=max_iter)
    sd = np.exp(v.log_sd)
    return C * np.outer(sd, sd)


def matrix_power(C, alpha):
    """``C ** alpha`` computed as ``exp(alpha * log C)``."""
    C = validate_correlation(C)
    decomp = sym_eig(C.values)
    G = sym_log(C.values, decomp)
    return sym_exp(alpha * G)
