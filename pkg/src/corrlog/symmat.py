"""
Dense symmetric matrix kernel
~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
Vectorization of the strict lower triangle, eigendecomposition, and the
matrix exponential and logarithm of symmetric matrices through their
spectral decomposition.

Throughout the package the strict lower triangle is stacked column-major:
``(2,1), (3,1), ..., (n,1), (3,2), ..., (n,n-1)`` (1-based).
"""
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .errors import (
    AsymmetryError,
    DefinitenessError,
    DiagonalError,
    DimensionError,
    NotPositiveDefiniteError,
    OffDiagonalRangeError,
)

PD_RTOL = 1e-12


class EigenDecomposition(NamedTuple):
    """``M = Q diag(eigenvalues) Q'`` with eigenvalues in ascending order."""

    eigenvalues: np.ndarray
    Q: np.ndarray


def dim_from_vecl_length(d):
    """Return n such that ``d == n(n-1)/2``; raise if d is not triangular."""
    d = int(d)
    n = int(round((1 + np.sqrt(1 + 8 * d)) / 2))
    if d < 0 or n * (n - 1) // 2 != d:
        raise DimensionError(f"length {d} is not of the form n(n-1)/2")
    return n


@lru_cache(maxsize=128)
def _vecl_indices(n):
    upper_r, upper_c = np.triu_indices(n, 1)
    rows, cols = upper_c, upper_r
    rows.setflags(write=False)
    cols.setflags(write=False)
    return rows, cols


def vecl_indices(n):
    """Row and column indices of the strict lower triangle in vecl order."""
    return _vecl_indices(int(n))


def vecl(M):
    """Stack the strict lower triangle of a square matrix column by column.

    >>> vecl(np.array([[1., 9., 9.], [2., 1., 9.], [3., 4., 1.]]))
    array([2., 3., 4.])
    """
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {M.shape}")
    rows, cols = vecl_indices(M.shape[0])
    return M[rows, cols].copy()


def unvecl(v, diag):
    """Symmetric matrix with off-diagonal ``v`` (vecl order) and diagonal ``diag``."""
    v = np.asarray(v, dtype=float).ravel()
    diag = np.asarray(diag, dtype=float).ravel()
    n = diag.size
    if v.size != n * (n - 1) // 2:
        raise DimensionError(
            f"vecl vector of length {v.size} does not match diagonal of length {n}"
        )
    M = np.diag(diag)
    rows, cols = vecl_indices(n)
    M[rows, cols] = v
    M[cols, rows] = v
    return M


def symmetrize(M):
    return 0.5 * (M + M.T)


def sym_eig(M):
    """Eigendecomposition of a real symmetric matrix.

    Only the lower triangle of ``M`` is referenced. Raises
    ``numpy.linalg.LinAlgError`` if the eigensolver fails to converge.
    """
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix has non-finite entries")
    lam, Q = np.linalg.eigh(M, UPLO="L")
    return EigenDecomposition(lam, Q)


def from_eig(decomp, fn):
    """Rebuild ``Q diag(fn(eigenvalues)) Q'`` and re-symmetrize."""
    lam, Q = decomp
    out = (Q * fn(lam)) @ Q.T
    return symmetrize(out)


def sym_exp(M, decomp=None):
    """Matrix exponential of a symmetric matrix."""
    if decomp is None:
        decomp = sym_eig(M)
    return from_eig(decomp, np.exp)


def pd_threshold(eigenvalues):
    return PD_RTOL * max(1.0, float(np.max(eigenvalues)))


def sym_log(M, decomp=None):
    """Matrix logarithm of a symmetric positive definite matrix.

    Raises
    ------
    NotPositiveDefiniteError
        If any eigenvalue is at or below ``1e-12 * max(1, lambda_max)``.
    """
    if decomp is None:
        decomp = sym_eig(M)
    lam = decomp.eigenvalues
    bad = np.flatnonzero(lam <= pd_threshold(lam))
    if bad.size:
        k = int(bad[0])
        raise NotPositiveDefiniteError(
            f"matrix is not positive definite: eigenvalue #{k} = {lam[k]:.6g}",
            eigenvalue=float(lam[k]),
            index=k,
        )
    return from_eig(decomp, np.log)


@dataclass(frozen=True, eq=False)
class CorrelationMatrix:
    """A validated non-singular correlation matrix.

    Behaves like an ndarray under ``np.asarray``.
    """

    values: np.ndarray
    lambda_min: float

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self.values
        return self.values.astype(dtype)

    @property
    def n(self):
        return self.values.shape[0]


def validate_correlation(M, tol=1e-8):
    """Check that ``M`` is a non-singular correlation matrix.

    Parameters
    ----------
    M : array_like, (n, n)
    tol : float
        Absolute tolerance on unit diagonal and on symmetry.

    Returns
    -------
    CorrelationMatrix

    Raises
    ------
    AsymmetryError, DiagonalError, DefinitenessError, OffDiagonalRangeError
        One distinct exception type per violated condition, checked in that
        order.
    """
    if isinstance(M, CorrelationMatrix):
        return M
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix has non-finite entries")
    asym = np.max(np.abs(M - M.T), initial=0.0)
    if asym > tol:
        raise AsymmetryError(f"matrix is not symmetric (max |M - M'| = {asym:.3g})")
    diag_dev = np.abs(np.diag(M) - 1.0)
    if np.any(diag_dev > tol):
        i = int(np.argmax(diag_dev))
        raise DiagonalError(
            f"diagonal entry ({i + 1},{i + 1}) = {M[i, i]!r} differs from 1 by more than {tol:g}"
        )
    lam = np.linalg.eigvalsh(M, UPLO="L")
    lam_min = float(lam[0])
    if lam_min <= pd_threshold(lam):
        raise DefinitenessError(
            f"matrix is not positive definite (lambda_min = {lam_min:.6g})",
            lambda_min=lam_min,
        )
    off = vecl(M)
    if np.any(np.abs(off) >= 1.0):
        rows, cols = vecl_indices(M.shape[0])
        k = int(np.argmax(np.abs(off)))
        raise OffDiagonalRangeError(
            f"entry ({rows[k] + 1},{cols[k] + 1}) = {off[k]!r} lies outside (-1, 1)"
        )
    return CorrelationMatrix(symmetrize(M), lam_min)
