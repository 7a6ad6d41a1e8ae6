"""
Structured correlation matrices
~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
Equicorrelation matrices have a closed-form gamma. Block-equicorrelation
structure carries over to log C, and log C of a Toeplitz correlation matrix is
bisymmetric. Generators for these families plus numerical checks of the
structure claims.
"""
from dataclasses import dataclass, field

import numpy as np

from .symmat import CorrelationMatrix, sym_log, validate_correlation

STRUCTURE_TOL = 1e-9


def _equi_lower_bound(n):
    return -1.0 / (n - 1)


def equi_gamma(rho, n):
    """Common off-diagonal element of ``log C`` for an n x n equicorrelation
    matrix with correlation ``rho``: ``log(1 + n rho / (1 - rho)) / n``."""
    if n < 2:
        raise ValueError("equicorrelation needs n >= 2")
    lo = _equi_lower_bound(n)
    if not lo < rho < 1.0:
        raise ValueError(f"rho={rho} outside the admissible interval ({lo:.6g}, 1) for n={n}")
    return float(np.log1p(n * rho / (1.0 - rho)) / n)


def equi_rho(gamma_c, n):
    """Inverse of :func:`equi_gamma`; always lies in ``(-1/(n-1), 1)``."""
    if n < 2:
        raise ValueError("equicorrelation needs n >= 2")
    # rho = (1 - e) / (1 + (n-1) e), e = exp(-n gamma_c)
    if gamma_c >= 0:
        e = np.exp(-n * gamma_c)
        return float(-np.expm1(-n * gamma_c) / (1.0 + (n - 1) * e))
    # divide through by e to stay finite as gamma_c -> -inf
    u = np.exp(n * gamma_c)
    return float(np.expm1(n * gamma_c) / (u + (n - 1)))


def make_equicorrelation(rho, n):
    """``(1 - rho) I + rho 11'`` as a validated correlation matrix."""
    lo = _equi_lower_bound(n) if n > 1 else -np.inf
    if not lo < rho < 1.0:
        raise ValueError(f"rho={rho} outside the admissible interval ({lo:.6g}, 1) for n={n}")
    C = np.full((n, n), float(rho))
    np.fill_diagonal(C, 1.0)
    return validate_correlation(C)


def make_toeplitz(rho, n):
    """``C_ij = rho ** |i - j|``."""
    idx = np.arange(n)
    C = float(rho) ** np.abs(idx[:, None] - idx[None, :])
    return validate_correlation(C)


@dataclass
class BlockPartition:
    """Block-equicorrelation layout.

    Parameters
    ----------
    sizes : sequence of int
        Block sizes, in order.
    within : sequence of float
        Correlation inside each block (ignored for blocks of size one).
    between : float or (K, K) array
        Correlation between blocks; a scalar applies to every pair.
    """

    sizes: tuple
    within: tuple
    between: np.ndarray = field(default=0.0)

    def __post_init__(self):
        self.sizes = tuple(int(s) for s in self.sizes)
        self.within = tuple(float(w) for w in np.broadcast_to(self.within, len(self.sizes)))
        K = len(self.sizes)
        if K == 0 or min(self.sizes) < 1:
            raise ValueError("block sizes must be positive")
        B = np.asarray(self.between, dtype=float)
        if B.ndim == 0:
            B = np.full((K, K), float(B))
        if B.shape != (K, K) or not np.allclose(B, B.T):
            raise ValueError("between-block correlations must be a scalar or symmetric KxK")
        self.between = B

    @property
    def n(self):
        return sum(self.sizes)

    def labels(self):
        return np.repeat(np.arange(len(self.sizes)), self.sizes)

    @classmethod
    def from_dict(cls, spec):
        return cls(spec["sizes"], spec["within"], spec.get("between", 0.0))


def make_block(partition):
    lab = partition.labels()
    C = partition.between[lab[:, None], lab[None, :]].copy()
    same = lab[:, None] == lab[None, :]
    within = np.asarray(partition.within)[lab]
    C[same] = np.broadcast_to(within[:, None], C.shape)[same]
    np.fill_diagonal(C, 1.0)
    return validate_correlation(C)


@dataclass
class StructureReport:
    passed: bool
    max_deviation: float
    location: tuple = None
    values: dict = field(default_factory=dict)


def check_block_preservation(C, partition, tol=STRUCTURE_TOL):
    """Check that ``log C`` is constant on every region of the block layout.

    Regions are: the diagonal of each block, the off-diagonal part of each
    block, and each between-block rectangle. Every region's common value is
    estimated by its mean; the report carries the largest deviation from it
    and where it occurred (0-based row, column).
    """
    C = validate_correlation(C)
    if C.n != partition.n:
        raise ValueError(f"partition covers {partition.n} variables, matrix has {C.n}")
    G = sym_log(C.values)
    lab = partition.labels()
    n = C.n
    worst, where = 0.0, None
    values = {}
    diag = np.eye(n, dtype=bool)
    for a in range(len(partition.sizes)):
        for b in range(a, len(partition.sizes)):
            region = (lab[:, None] == a) & (lab[None, :] == b)
            parts = {("between", a, b): region} if a != b else {
                ("diagonal", a, a): region & diag,
                ("within", a, a): region & ~diag,
            }
            for key, mask in parts.items():
                if not mask.any():
                    continue
                vals = G[mask]
                centre = vals.mean()
                values[key] = float(centre)
                dev = np.abs(vals - centre)
                k = int(np.argmax(dev))
                if dev[k] > worst:
                    worst = float(dev[k])
                    rr, cc = np.nonzero(mask)
                    where = (int(rr[k]), int(cc[k]))
    return StructureReport(worst <= tol, worst, where, values)


def check_bisymmetry(M, tol=STRUCTURE_TOL):
    """Check ``M[i, j] == M[n-1-j, n-1-i]`` (symmetry about the anti-diagonal)."""
    M = np.asarray(M, dtype=float)
    dev = np.abs(M - M[::-1, ::-1].T)
    k = np.unravel_index(int(np.argmax(dev)), dev.shape) if dev.size else None
    worst = float(dev.max(initial=0.0))
    return StructureReport(worst <= tol, worst, tuple(int(i) for i in k) if k else None)


def random_correlation(n, rng, dof=None):
    """Correlation matrix of a Wishart draw with ``dof`` degrees of freedom
    (default ``n + 2``); a convenient test generator."""
    dof = n + 2 if dof is None else dof
    X = rng.standard_normal((dof, n))
    S = X.T @ X
    s = 1.0 / np.sqrt(np.diag(S))
    C = S * np.outer(s, s)
    np.fill_diagonal(C, 1.0)
    return CorrelationMatrix(0.5 * (C + C.T), float(np.linalg.eigvalsh(C)[0]))
