"""Plain-text CSV matrices and one-value-per-line vectors."""
import math

import numpy as np


class ParseError(ValueError):
    pass


def _float(token, where):
    try:
        value = float(token)
    except ValueError:
        raise ParseError(f"{where}: cannot parse {token.strip()!r} as a number") from None
    if not math.isfinite(value):
        raise ParseError(f"{where}: non-finite value {token.strip()!r}")
    return value


def parse_matrix(text, name="<input>"):
    rows = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        cells = line.split(",")
        rows.append(
            [_float(c, f"{name}: row {lineno}, column {j}") for j, c in enumerate(cells, start=1)]
        )
    if not rows:
        raise ParseError(f"{name}: empty matrix")
    n = len(rows)
    for i, row in enumerate(rows, start=1):
        if len(row) != n:
            raise ParseError(f"{name}: row {i} has {len(row)} columns, expected {n} (square)")
    return np.array(rows)


def parse_vector(text, name="<input>"):
    values = [
        _float(line, f"{name}: line {lineno}")
        for lineno, line in enumerate(text.splitlines(), start=1)
        if line.strip()
    ]
    return np.array(values, dtype=float)


def read_matrix(path):
    with open(path) as fh:
        return parse_matrix(fh.read(), name=str(path))


def read_vector(path):
    with open(path) as fh:
        return parse_vector(fh.read(), name=str(path))


def format_float(x):
    """Shortest repr that round-trips exactly."""
    return repr(float(x))


def format_matrix(M):
    return "".join(",".join(format_float(v) for v in row) + "\n" for row in np.asarray(M))


def format_vector(v):
    return "".join(format_float(x) + "\n" for x in np.ravel(v))


def write_text(path, text):
    with open(path, "w", newline="") as fh:
        fh.write(text)
