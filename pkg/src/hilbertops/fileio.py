"""Plain-text readers and writers for vectors, matrices and gridded kernels."""

import csv
import json
from pathlib import Path

import numpy as np

from .errors import DimensionError
from .l2core import as_vec, zero_vector
from .matrix_op import HSMatrix

__all__ = [
    "parse_vector",
    "read_vector",
    "write_vector",
    "read_matrix",
    "write_matrix",
    "read_kernel_grid",
    "write_probe_records",
]


def _floats(line, where):
    try:
        return [float(v) for v in line.split(",") if v.strip() != ""]
    except ValueError as exc:
        raise ValueError(f"{where}: {exc}") from None


def parse_vector(text, dim=None):
    """Comma-separated decimals, or the sentinel ``zero`` (needs ``dim``)."""
    text = text.strip()
    if text == "zero":
        if dim is None:
            raise ValueError("'zero' needs an explicit dimension")
        return zero_vector(dim)
    v = as_vec(_floats(text, "vector"))
    if dim is not None and v.size != dim:
        raise DimensionError(f"vector has {v.size} entries, expected {dim}")
    return v


def read_vector(path, dim=None):
    lines = [ln for ln in Path(path).read_text().splitlines() if ln.strip()]
    if len(lines) != 1:
        raise ValueError(f"{path}: expected one line of comma-separated values")
    return parse_vector(lines[0], dim)


def write_vector(path, x):
    Path(path).write_text(",".join(format(float(v), ".17g") for v in x) + "\n")


def _read_square(path, what):
    lines = [ln for ln in Path(path).read_text().splitlines() if ln.strip()]
    if not lines:
        raise ValueError(f"{path}: empty {what} file")
    try:
        n = int(lines[0].strip())
    except ValueError:
        raise ValueError(f"{path}: first line must be the size, got {lines[0]!r}") from None
    if n < 1 or len(lines) != n + 1:
        raise ValueError(f"{path}: expected {n} rows after the size line, got {len(lines) - 1}")
    rows = [_floats(ln, f"{path} row {i + 1}") for i, ln in enumerate(lines[1:])]
    if any(len(r) != n for r in rows):
        raise ValueError(f"{path}: every row must have {n} values")
    return np.array(rows)


def read_matrix(path):
    """Matrix file: first line ``N``, then N rows of N values (row i = input index i)."""
    return HSMatrix(_read_square(path, "matrix"))


def write_matrix(path, T):
    a = T.entries if isinstance(T, HSMatrix) else np.asarray(T)
    lines = [str(a.shape[0])] + [",".join(format(float(v), ".17g") for v in row) for row in a]
    Path(path).write_text("\n".join(lines) + "\n")


def read_kernel_grid(path):
    """Gridded kernel file: first line ``G``, then G rows of G samples on [0, 1]^2."""
    return _read_square(path, "kernel")


def write_probe_records(stream, records, fmt="csv"):
    """One record per path point: family, step, u, quotient."""
    if fmt == "json":
        for rec in records:
            stream.write(json.dumps(rec) + "\n")
        return
    if fmt != "csv":
        raise ValueError(f"unknown format {fmt!r}")
    wr = csv.writer(stream, lineterminator="\n")
    wr.writerow(["family", "step", "u", "quotient"])
    for rec in records:
        wr.writerow([rec["family"], rec["step"],
                     " ".join(format(v, ".17g") for v in rec["u"]),
                     format(rec["quotient"], ".17g")])
