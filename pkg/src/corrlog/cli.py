"""``corrlog`` command line.

Exit codes: 0 success, 2 parse or validation error, 3 non-convergence,
4 dense-size guard. Every option can also be set through an environment
variable ``CORRLOG_<OPTION>`` (upper case, dashes as underscores).
"""
import functools
import json
import sys

import click
import numpy as np

from . import experiments
from .errors import ConvergenceError, MatrixSizeError
from .io import (
    ParseError,
    format_matrix,
    format_vector,
    read_matrix,
    read_vector,
    write_text,
)
from .jacobians import jacobian_J
from .structures import BlockPartition, make_block, make_equicorrelation, make_toeplitz
from .symmat import dim_from_vecl_length
from .transform import (
    CovarianceVector,
    corr_of_gamma,
    cov_compress,
    cov_expand,
    gamma_of_corr,
)

EXIT_INVALID = 2
EXIT_NO_CONVERGENCE = 3
EXIT_SIZE_GUARD = 4


def _env(name):
    return "CORRLOG_" + name.upper().replace("-", "_")


def option(*decls, **kw):
    long = next(d for d in decls if d.startswith("--"))[2:]
    kw.setdefault("envvar", _env(long))
    kw.setdefault("show_envvar", True)
    return click.option(*decls, **kw)


def _fail(code, message):
    click.echo(f"corrlog: {message}", err=True)
    sys.exit(code)


def handle_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except ConvergenceError as exc:
            _emit_report(kwargs.get("report"), _report_record(exc.report, None, None))
            _fail(EXIT_NO_CONVERGENCE, str(exc))
        except MatrixSizeError as exc:
            _fail(EXIT_SIZE_GUARD, str(exc))
        except (ValueError, OSError) as exc:
            _fail(EXIT_INVALID, str(exc))

    return wrapper


def _write(path, text):
    if path == "-":
        click.echo(text, nl=False)
    else:
        write_text(path, text)


def _report_record(rep, nu_max, lambda_min):
    return {
        "iterations": rep.iterations,
        "final_residual": rep.final_residual,
        "converged": rep.converged,
        "nu_max": nu_max,
        "lambda_min": lambda_min,
    }


def _emit_report(path, record):
    line = json.dumps(record, sort_keys=True)
    if path in (None, "-"):
        click.echo(line, err=True)
    else:
        with open(path, "a") as fh:
            fh.write(line + "\n")


def load_correlation_source(source, n=None):
    """A CSV path, or a generator ``equi:<rho>``, ``toeplitz:<rho>``,
    ``block:<json-file>`` (keys ``sizes``, ``within``, ``between``)."""
    kind, _, arg = source.partition(":")
    if kind in ("equi", "toeplitz") and arg:
        if n is None:
            raise click.UsageError(f"generator {kind!r} needs --n")
        make = make_equicorrelation if kind == "equi" else make_toeplitz
        try:
            rho = float(arg)
        except ValueError:
            raise ParseError(f"bad correlation parameter in {source!r}") from None
        return make(rho, n).values
    if kind == "block" and arg:
        with open(arg) as fh:
            layout = json.load(fh)
        return make_block(BlockPartition.from_dict(layout)).values
    return read_matrix(source)


@click.group()
@click.version_option(package_name="artifact")
def main():
    """Matrix-logarithm parametrization of correlation matrices."""


@main.command("gamma")
@click.argument("source")
@click.argument("output", default="-")
@option("--n", type=int, default=None, help="Dimension for equi:/toeplitz: generators.")
@handle_errors
def cmd_gamma(source, output, n):
    """Write gamma = vecl(log C) for the correlation matrix in SOURCE."""
    C = load_correlation_source(source, n)
    g = gamma_of_corr(C)
    click.echo(f"n={C.shape[0]} d={g.size}", err=output == "-")
    _write(output, format_vector(g))


def _parse_x0(policy, n, seed):
    if policy == "zero":
        return None
    kind, _, scale = policy.partition(":")
    if kind != "half-normal":
        raise click.BadParameter(f"unknown x0 policy {policy!r}", param_hint="--x0")
    if seed is None:
        raise click.UsageError("--x0 half-normal requires --seed")
    scale = float(scale) if scale else 10.0
    return experiments.half_normal_start(experiments.trial_rng(seed, n, 0), n, scale)


@main.command("corr")
@click.argument("gamma_file")
@click.argument("output", default="-")
@option("--delta", type=float, default=None, help="Step threshold (default 1e-8*sqrt(n)).")
@option("--max-iter", type=int, default=200, show_default=True)
@option("--x0", default="zero", show_default=True, help="zero | half-normal:<scale>")
@option("--seed", type=int, default=None)
@option("--report", default=None, help="JSON-lines report file (default: stderr).")
@handle_errors
def cmd_corr(gamma_file, output, delta, max_iter, x0, seed, report):
    """Recover the correlation matrix for the gamma vector in GAMMA_FILE."""
    if delta is not None and not delta > 0:
        raise click.BadParameter("must be positive", param_hint="--delta")
    g = read_vector(gamma_file)
    n = dim_from_vecl_length(g.size)
    C, rep = corr_of_gamma(g, delta=delta, max_iter=max_iter, x0=_parse_x0(x0, n, seed))
    diag = jacobian_J(g, rep.x_star)
    _emit_report(report, _report_record(rep, diag.nu_max, diag.lambda_min_C))
    _write(output, format_matrix(C))


@main.command("cov")
@click.argument("direction", type=click.Choice(["compress", "expand"]))
@click.argument("source")
@click.argument("output", default="-")
@option("--delta", type=float, default=None)
@option("--max-iter", type=int, default=200, show_default=True)
@handle_errors
def cmd_cov(direction, source, output, delta, max_iter):
    """Covariance matrix <-> (log standard deviations, gamma)."""
    if direction == "compress":
        v = cov_compress(read_matrix(source))
        _write(output, format_vector(v.to_vector()))
    else:
        v = CovarianceVector.from_vector(read_vector(source))
        _write(output, format_matrix(cov_expand(v, delta=delta, max_iter=max_iter)))


@main.command("table1")
@click.argument("output", default="-")
@handle_errors
def cmd_table1(output):
    """Asymptotic covariances of correlations, Fisher transforms and gamma."""
    _write(output, experiments.table1_csv())


def _float_list(text):
    return [float(t) for t in text.split(",") if t.strip()]


@main.command("fig1")
@click.argument("output", default="-")
@option("--n-min", type=int, default=3, show_default=True)
@option("--n-max", type=int, default=100, show_default=True)
@option("--rhos", default="0.5,0.9,0.99", show_default=True)
@option("--trials", type=int, default=100, show_default=True)
@option("--scale", type=float, default=10.0, show_default=True)
@option("--max-iter", type=int, default=500, show_default=True)
@option("--seed", type=int, required=True)
@option("--jobs", type=int, default=1, show_default=True)
@handle_errors
def cmd_fig1(output, n_min, n_max, rhos, trials, scale, max_iter, seed, jobs):
    """Iterations for Toeplitz matrices from random half-normal starts."""
    rows = experiments.fig1(range(n_min, n_max + 1), _float_list(rhos), trials, seed,
                            scale, max_iter, jobs)
    failed = sum(r.failed for r in rows)
    if failed:
        click.echo(f"corrlog: {failed} trial(s) did not converge and were excluded", err=True)
    _write(output, experiments.rows_to_csv(rows, experiments.Fig1Row))


@main.command("fig2")
@click.argument("output", default="-")
@option("--n", "n_values", type=int, multiple=True, default=(5, 10, 25), show_default=True)
@option("--count", type=int, default=2000, show_default=True)
@option("--b", default=None, help="Half-width of gamma draws: one value or n=b,n=b,...")
@option("--max-iter", type=int, default=1000, show_default=True)
@option("--seed", type=int, required=True)
@option("--jobs", type=int, default=1, show_default=True)
@handle_errors
def cmd_fig2(output, n_values, count, b, max_iter, seed, jobs):
    """Iterations against nu_max, lambda_min and max|gamma| for random gamma."""
    if b is not None:
        if "=" in b:
            b = {int(k): float(v) for k, v in (p.split("=") for p in b.split(","))}
        else:
            b = float(b)
    rows = experiments.fig2(n_values, count, b, seed, max_iter, jobs)
    _write(output, experiments.rows_to_csv(rows, experiments.Fig2Row))


if __name__ == "__main__":
    main()
