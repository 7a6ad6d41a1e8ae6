import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def expm_taylor(M, terms=30):
    """Scaling-and-squaring Taylor exponential; independent of any eigensolver."""
    M = np.asarray(M, dtype=float)
    norm = np.max(np.sum(np.abs(M), axis=1))
    s = max(0, int(np.ceil(np.log2(norm))) + 1) if norm > 0 else 0
    A = M / 2.0**s
    out = np.eye(M.shape[0])
    term = np.eye(M.shape[0])
    for k in range(1, terms):
        term = term @ A / k
        out = out + term
    for _ in range(s):
        out = out @ out
    return out


def random_symmetric(rng, n, scale=1.0):
    A = rng.uniform(-scale, scale, size=(n, n))
    return np.tril(A) + np.tril(A, -1).T


# reference 6x6 block example: blocks of 3, within 0.4 / 0.6, between 0.2;
# log C is given to three decimals off the diagonal and two on it
BLOCK_C = np.array(
    [
        [1.0, 0.4, 0.4, 0.2, 0.2, 0.2],
        [0.4, 1.0, 0.4, 0.2, 0.2, 0.2],
        [0.4, 0.4, 1.0, 0.2, 0.2, 0.2],
        [0.2, 0.2, 0.2, 1.0, 0.6, 0.6],
        [0.2, 0.2, 0.2, 0.6, 1.0, 0.6],
        [0.2, 0.2, 0.2, 0.6, 0.6, 1.0],
    ]
)
BLOCK_LOG = np.array(
    [
        [-0.16, 0.349, 0.349, 0.104, 0.104, 0.104],
        [0.349, -0.16, 0.349, 0.104, 0.104, 0.104],
        [0.349, 0.349, -0.16, 0.104, 0.104, 0.104],
        [0.104, 0.104, 0.104, -0.36, 0.553, 0.553],
        [0.104, 0.104, 0.104, 0.553, -0.36, 0.553],
        [0.104, 0.104, 0.104, 0.553, 0.553, -0.36],
    ]
)


def _lower(a, b, c, d, e, f):
    # fill a symmetric 3x3 from its lower triangle, row by row
    return np.array([[a, b, d], [b, c, e], [d, e, f]])


# reference asymptotic covariance table (three decimals) for Toeplitz C with rho in (0, .5, .9, .99);
# the "avar_phi" column is also acorr of the empirical correlations
TABLE1 = {
    0.0: {
        "avar_rho": np.eye(3),
        "avar_phi": np.eye(3),
        "avar_gamma": np.eye(3),
        "acorr_gamma": np.eye(3),
    },
    0.5: {
        "avar_rho": _lower(0.562, 0.316, 0.879, 0.070, 0.316, 0.562),
        "avar_phi": _lower(1.000, 0.450, 1.000, 0.125, 0.450, 1.000),
        "avar_gamma": _lower(0.966, 0.018, 0.962, 0.021, 0.018, 0.966),
        "acorr_gamma": _lower(1.000, 0.018, 1.000, 0.021, 0.018, 1.000),
    },
    0.9: {
        "avar_rho": _lower(0.036, 0.046, 0.118, 0.015, 0.046, 0.036),
        "avar_phi": _lower(1.000, 0.698, 1.000, 0.405, 0.698, 1.000),
        "avar_gamma": _lower(0.817, 0.081, 0.860, 0.093, 0.081, 0.817),
        "acorr_gamma": _lower(1.000, 0.097, 1.000, 0.114, 0.097, 1.000),
    },
    0.99: {
        "avar_rho": 0.1 * _lower(0.004, 0.006, 0.016, 0.002, 0.006, 0.004),
        "avar_phi": _lower(1.000, 0.745, 1.000, 0.490, 0.745, 1.000),
        "avar_gamma": _lower(0.756, 0.106, 0.793, 0.134, 0.106, 0.756),
        "acorr_gamma": _lower(1.000, 0.137, 1.000, 0.178, 0.137, 1.000),
    },
}


# one summary line per acceptance criterion, filled by test_acceptance.py
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
