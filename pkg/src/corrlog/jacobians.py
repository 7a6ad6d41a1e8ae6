"""
Derivatives of the symmetric matrix exponential
~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
For ``G = Q diag(lam) Q'`` the derivative of ``vec(exp(G))`` with respect to
``vec(G)`` is ``A = (Q kron Q) diag(vec Xi) (Q kron Q)'`` where ``Xi`` holds
the divided differences of ``exp`` at the eigenvalues. From ``A`` follow the
Jacobian ``H`` of the diagonal of ``exp(G[x])``, the Jacobian
``J = I - D^{-1} H`` of the fixed-point map, and the sensitivity of the
correlations to gamma.

vec is column-major throughout: entry (i, j) of an n x n matrix sits at
position ``j * n + i``.
"""
from dataclasses import dataclass

import numpy as np

from .errors import MatrixSizeError
from .symmat import (
    EigenDecomposition,
    sym_eig,
    sym_log,
    unvecl,
    validate_correlation,
    vecl_indices,
)

DENSE_MAX_N = 64
_SERIES_CUTOFF = 1e-4


def xi_matrix(eigenvalues):
    """Divided differences of ``exp`` at the eigenvalues.

    ``xi[k, l] = (exp(lam_k) - exp(lam_l)) / (lam_k - lam_l)`` and
    ``xi[k, k] = exp(lam_k)``, evaluated as
    ``exp((lam_k + lam_l) / 2) * sinh(t) / t`` with ``t = (lam_k - lam_l) / 2``
    so that nearly equal eigenvalues lose no precision.
    """
    lam = np.asarray(eigenvalues, dtype=float).ravel()
    mid = 0.5 * (lam[:, None] + lam[None, :])
    t = 0.5 * (lam[:, None] - lam[None, :])
    small = np.abs(t) < _SERIES_CUTOFF
    t2 = t * t
    with np.errstate(invalid="ignore", divide="ignore"):
        sinch = np.where(small, 1.0 + t2 / 6.0 + t2 * t2 / 120.0, np.sinh(t) / t)
    return np.exp(mid) * sinch


def _vec(M):
    return M.reshape(-1, order="F")


def _unvec(v, n):
    return v.reshape(n, n, order="F")


@dataclass(frozen=True, eq=False)
class ExpJacobian:
    """The linear map ``dvec(G) -> dvec(exp(G))`` at a fixed symmetric G."""

    decomp: EigenDecomposition
    xi: np.ndarray

    @property
    def n(self):
        return self.xi.shape[0]

    def apply(self, v):
        """Multiply a length-n^2 vector (vec of a perturbation) by A."""
        Q = self.decomp.Q
        E = _unvec(np.asarray(v, dtype=float), self.n)
        return _vec(Q @ (self.xi * (Q.T @ E @ Q)) @ Q.T)

    def apply_inverse(self, v):
        Q = self.decomp.Q
        E = _unvec(np.asarray(v, dtype=float), self.n)
        return _vec(Q @ ((Q.T @ E @ Q) / self.xi) @ Q.T)

    def _dense(self, weights):
        n = self.n
        if n > DENSE_MAX_N:
            raise MatrixSizeError(
                f"dense {n * n}x{n * n} Jacobian refused for n={n} > {DENSE_MAX_N}; use apply()"
            )
        QQ = np.kron(self.decomp.Q, self.decomp.Q)
        # kron(Q, Q) indexes the eigenpair (k, l) at k * n + l; xi is symmetric.
        return (QQ * weights.ravel()) @ QQ.T

    def dense(self):
        return self._dense(self.xi)

    def dense_inverse(self):
        """``A^{-1}`` from the eigenbasis, ``(Q kron Q) Xi^{-1} (Q kron Q)'``."""
        return self._dense(1.0 / self.xi)


def jacobian_A(decomp):
    """Jacobian of ``vec(exp(G))`` with respect to ``vec(G)``.

    Parameters
    ----------
    decomp : EigenDecomposition or array_like
        Eigendecomposition of G, or G itself.
    """
    if not isinstance(decomp, EigenDecomposition):
        decomp = sym_eig(decomp)
    return ExpJacobian(decomp, xi_matrix(decomp.eigenvalues))


def _products(Q):
    # P[i, k, l] = q_ik * q_il
    return Q[:, :, None] * Q[:, None, :]


def jacobian_H(decomp, xi=None):
    """Jacobian of ``diag(exp(G[x]))`` with respect to x.

    ``H[i, j] = sum_{k,l} q_ik q_jk q_il q_jl xi_kl``: the principal
    sub-matrix of A on the diagonal positions of vec.
    """
    if not isinstance(decomp, EigenDecomposition):
        decomp = sym_eig(decomp)
    if xi is None:
        xi = xi_matrix(decomp.eigenvalues)
    n = xi.shape[0]
    P = _products(decomp.Q).reshape(n, n * n)
    H = (P * xi.ravel()) @ P.T
    return 0.5 * (H + H.T)


def _jtilde_rank_one(decomp, xi, delta_diag):
    """``sum_{k<l} phi_kl w_kl w_kl'`` with ``w_kl = D^{-1/2} (q_k * q_l)`` and
    ``phi_kl = xi_kk + xi_ll - 2 xi_kl``."""
    n = xi.shape[0]
    d = np.diag(xi)
    phi = d[:, None] + d[None, :] - 2.0 * xi
    k, l = np.triu_indices(n, 1)
    Q = decomp.Q
    W = (Q[:, k] * Q[:, l]) / np.sqrt(delta_diag)[:, None]
    Jt = (W * phi[k, l]) @ W.T
    return 0.5 * (Jt + Jt.T)


@dataclass
class ContractionDiagnostics:
    """Jacobian of the fixed-point map at one point and its spectrum."""

    J: np.ndarray
    J_tilde: np.ndarray
    J_tilde_rank_one: np.ndarray
    eigenvalues: np.ndarray
    nu_max: float
    lipschitz_c: float
    lambda_min_C: float

    @property
    def construction_gap(self):
        """Max entrywise gap between the two constructions of J tilde."""
        return float(np.max(np.abs(self.J_tilde - self.J_tilde_rank_one)))


def jacobian_J(gamma, x, check_tol=1e-10):
    """Jacobian of ``x -> x - log diag(exp(G[x]))`` and its spectral diagnostics.

    ``J = I - D^{-1} H`` with ``D = diag(exp(G[x]))``. The symmetric matrix
    ``J_tilde = I - D^{-1/2} H D^{-1/2}`` is similar to J; it is formed both
    from that definition and as a positively weighted sum of rank-one terms,
    and the two must agree to ``check_tol`` (relative to ``max(1, |J_tilde|)``).

    Returns
    -------
    ContractionDiagnostics
        ``eigenvalues`` are those of ``J_tilde`` in ascending order;
        ``lipschitz_c = -1 / log(nu_max)`` (0 when ``nu_max`` is 0).
    """
    G = unvecl(gamma, x)
    decomp = sym_eig(G)
    xi = xi_matrix(decomp.eigenvalues)
    H = jacobian_H(decomp, xi)
    lam, Q = decomp
    delta_diag = (Q * Q) @ np.exp(lam)
    n = H.shape[0]
    J = np.eye(n) - H / delta_diag[:, None]
    s = 1.0 / np.sqrt(delta_diag)
    J_tilde = np.eye(n) - H * np.outer(s, s)
    J_tilde = 0.5 * (J_tilde + J_tilde.T)
    J_r1 = _jtilde_rank_one(decomp, xi, delta_diag)
    scale = max(1.0, float(np.max(np.abs(J_tilde), initial=0.0)))
    gap = float(np.max(np.abs(J_tilde - J_r1), initial=0.0))
    if gap > check_tol * scale:
        raise ArithmeticError(
            f"J tilde constructions disagree by {gap:.3g} (tolerance {check_tol:g})"
        )
    nu = np.linalg.eigvalsh(J_tilde)
    nu_max = float(np.max(np.abs(nu), initial=0.0))
    if nu_max == 0.0:
        lipschitz_c = 0.0
    elif nu_max < 1.0:
        lipschitz_c = -1.0 / np.log(nu_max)
    else:
        lipschitz_c = np.inf
    C_eigs = np.exp(lam)
    d = np.sqrt(delta_diag)
    # smallest eigenvalue of the unit-diagonal rescaling of exp(G[x])
    lam_min_C = float(np.linalg.eigvalsh((Q * C_eigs) @ Q.T / np.outer(d, d))[0])
    return ContractionDiagnostics(
        J=J,
        J_tilde=J_tilde,
        J_tilde_rank_one=J_r1,
        eigenvalues=nu,
        nu_max=nu_max,
        lipschitz_c=float(lipschitz_c),
        lambda_min_C=lam_min_C,
    )


def elimination_indices(n):
    """vec positions selected by the lower, upper and diagonal elimination
    matrices, each in vecl (resp. diagonal) order."""
    rows, cols = vecl_indices(n)
    lower = cols * n + rows
    upper = rows * n + cols
    diag = np.arange(n) * (n + 1)
    return lower, upper, diag


def drho_dgamma(C):
    """Jacobian of ``vecl(C)`` with respect to ``vecl(log C)``.

    Moving one element of gamma perturbs two symmetric entries of log C and,
    through the unit-diagonal constraint, the whole diagonal; the latter is
    eliminated with the implicit function theorem using the diagonal block H
    of A.
    """
    C = validate_correlation(C)
    n = C.n
    if n > DENSE_MAX_N:
        raise MatrixSizeError(
            f"dense Jacobian refused for n={n} > {DENSE_MAX_N}"
        )
    G = sym_log(C.values)
    A = jacobian_A(G).dense()
    lo, up, dg = elimination_indices(n)
    A_sym = A[:, lo] + A[:, up]  # A (E_l + E_u)'
    H = A[np.ix_(dg, dg)]
    correction = A[np.ix_(lo, dg)] @ np.linalg.solve(H, A_sym[dg, :])
    return A_sym[lo, :] - correction
