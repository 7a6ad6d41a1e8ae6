"""
Numerical experiments: asymptotic covariance table and convergence studies
~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
Every stochastic quantity is drawn from a Philox generator keyed by
``(seed, n, trial)``, so results do not depend on execution order and may be
computed in parallel.
"""
import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import astuple, dataclass, fields

import numpy as np

from .asymptotics import acorr, omega_gamma, omega_normal_iid, omega_phi, omega_rho
from .errors import ConvergenceError
from .jacobians import jacobian_J
from .structures import make_toeplitz
from .transform import corr_of_gamma, gamma_of_corr

TABLE1_RHOS = (0.0, 0.5, 0.9, 0.99)
FIG1_RHOS = (0.5, 0.9, 0.99)
# default half-width of the uniform gamma draws; a calibration choice, not a
# derived value (override with ``b``)
DEFAULT_B = {5: 1.2, 10: 0.8, 25: 0.5}


def trial_rng(seed, *key):
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, *key])))


def half_normal_start(rng, n, scale=10.0):
    """Elements ``-|Z|`` with ``Z ~ N(0, scale^2)``."""
    return -np.abs(rng.normal(0.0, scale, size=n))


# -- asymptotic covariance table ------------------------------------------

TABLE1_QUANTITIES = ("avar_rho", "avar_phi", "avar_gamma", "acorr_gamma")


def table1(rhos=TABLE1_RHOS, n=3):
    """Asymptotic covariance blocks for Toeplitz correlation matrices.

    Returns a dict ``{rho: {quantity: (d, d) array}}``.
    """
    out = {}
    for rho in rhos:
        C = make_toeplitz(rho, n)
        Omega = omega_normal_iid(C)
        og = omega_gamma(Omega, C)
        out[rho] = {
            "avar_rho": omega_rho(Omega),
            "avar_phi": omega_phi(Omega, C),
            "avar_gamma": og,
            "acorr_gamma": acorr(og),
        }
    return out


def _display_scale(M):
    # print small blocks as scale * (3-decimal mantissa), e.g. 1/10 * (0.004, ...)
    peak = float(np.max(np.abs(M)))
    if peak == 0.0 or peak >= 0.01:
        return 0
    return int(math.floor(math.log10(peak))) + 2


def table1_csv(rhos=TABLE1_RHOS, n=3):
    """Long-format CSV: one line per lower-triangle entry (1-based row, col).

    ``value`` carries three decimals; the entry equals ``10**exponent * value``.
    """
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["rho", "quantity", "row", "col", "exponent", "value"])
    for rho, blocks in table1(rhos, n).items():
        for name in TABLE1_QUANTITIES:
            M = blocks[name]
            e = _display_scale(M)
            for i in range(M.shape[0]):
                for j in range(i + 1):
                    text = f"{M[i, j] / 10.0**e:.3f}"
                    if text == "-0.000":
                        text = "0.000"
                    w.writerow([repr(float(rho)), name, i + 1, j + 1, e, text])
    return buf.getvalue()


def parse_table1_csv(text):
    """Inverse of :func:`table1_csv`; returns ``{rho: {quantity: (d, d) array}}``."""
    entries = {}
    for rec in csv.DictReader(io.StringIO(text)):
        key = (float(rec["rho"]), rec["quantity"])
        i, j = int(rec["row"]) - 1, int(rec["col"]) - 1
        entries.setdefault(key, {})[(i, j)] = 10.0 ** int(rec["exponent"]) * float(rec["value"])
    out = {}
    for (rho, name), cells in entries.items():
        d = max(i for i, _ in cells) + 1
        M = np.zeros((d, d))
        for (i, j), v in cells.items():
            M[i, j] = M[j, i] = v
        out.setdefault(rho, {})[name] = M
    return out


# -- iterations from random starts, Toeplitz matrices ----------------------


@dataclass
class Fig1Row:
    n: int
    rho: float
    mean_iters: float
    sd_iters: float
    trials: int
    failed: int


def _fig1_one_n(args):
    n, rhos, trials, seed, scale, max_iter = args
    starts = [half_normal_start(trial_rng(seed, n, t), n, scale) for t in range(trials)]
    rows = []
    for rho in rhos:
        gamma = gamma_of_corr(make_toeplitz(rho, n))
        iters = []
        failed = 0
        for x0 in starts:
            try:
                _, rep = corr_of_gamma(gamma, max_iter=max_iter, x0=x0)
            except ConvergenceError:
                failed += 1
                continue
            iters.append(rep.iterations)
        iters = np.array(iters, dtype=float)
        mean = float(iters.mean()) if iters.size else math.nan
        sd = float(iters.std(ddof=1)) if iters.size > 1 else math.nan
        rows.append(Fig1Row(n, float(rho), mean, sd, trials, failed))
    return rows


def fig1(n_values=range(3, 101), rhos=FIG1_RHOS, trials=100, seed=0, scale=10.0,
         max_iter=500, jobs=1):
    """Iterations to convergence for Toeplitz matrices from random starts.

    For every n, ``trials`` starting vectors are drawn from the negative
    half-normal distribution with the given scale (the same starts are reused
    across ``rhos``), and the solver runs with the default threshold
    ``1e-8 * sqrt(n)``. Non-converged trials are excluded from the mean and
    counted in ``failed``.
    """
    if trials < 2:
        raise ValueError("fig1 needs at least two trials")
    tasks = [(int(n), tuple(rhos), trials, seed, scale, max_iter) for n in n_values]
    if jobs == 1:
        chunks = map(_fig1_one_n, tasks)
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(_fig1_one_n, tasks))
    rows = [r for chunk in chunks for r in chunk]
    rows.sort(key=lambda r: (r.n, r.rho))
    return rows


# -- iterations for random gamma --------------------------------------------


@dataclass
class Fig2Row:
    n: int
    index: int
    iterations: int
    converged: bool
    nu_max: float
    c_L: float
    lambda_min: float
    gamma_max: float


def _fig2_one(args):
    n, index, b, seed, max_iter = args
    d = n * (n - 1) // 2
    gamma = trial_rng(seed, n, index).uniform(-b, b, size=d)
    try:
        _, rep = corr_of_gamma(gamma, max_iter=max_iter)
        converged = True
    except ConvergenceError as exc:
        rep = exc.report
        converged = False
    diag = jacobian_J(gamma, rep.x_star)
    gmax = float(np.max(np.abs(gamma))) if d else 0.0
    return Fig2Row(n, index, rep.iterations, converged, diag.nu_max, diag.lipschitz_c,
                   diag.lambda_min_C, gmax)


def fig2(n_values=(5, 10, 25), count=2000, b=None, seed=0, max_iter=1000, jobs=1):
    """Iterations against spectral characteristics for random gamma.

    Each gamma has i.i.d. ``U[-b_n, b_n]`` elements; the solve starts at zero.
    ``b`` may be a float (all n) or a dict keyed by n; missing entries fall
    back to ``DEFAULT_B``.
    """
    if count < 1:
        raise ValueError("count must be positive")
    tasks = []
    for n in n_values:
        if isinstance(b, dict) and n in b:
            bn = b[n]
        elif b is not None and not isinstance(b, dict):
            bn = float(b)
        elif n in DEFAULT_B:
            bn = DEFAULT_B[n]
        else:
            raise ValueError(f"no default b for n={n}; pass b explicitly")
        tasks.extend((int(n), i, bn, seed, max_iter) for i in range(count))
    if jobs == 1:
        rows = list(map(_fig2_one, tasks))
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_fig2_one, tasks, chunksize=64))
    rows.sort(key=lambda r: (r.n, r.index))
    return rows


def rows_to_csv(rows, cls):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([f.name for f in fields(cls)])
    for r in rows:
        w.writerow([repr(v) if isinstance(v, float) else int(v) if isinstance(v, bool) else v
                    for v in astuple(r)])
    return buf.getvalue()


def ols_r2(x, y):
    """R^2 of the least-squares line of y on x."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    X = np.column_stack([np.ones_like(x), x])
    coef, *_ = np.linalg.lstsq(X, y, rcond=None)
    resid = y - X @ coef
    return 1.0 - resid @ resid / np.sum((y - y.mean()) ** 2)
