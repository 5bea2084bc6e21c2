"""
Linear Hilbert-Schmidt operators given by a double sequence ``a_ij``.

Index convention: ``i`` is the input-basis index (row) and ``j`` the
output-basis index (column), so a coefficient row vector is mapped by
``y = x @ A``, i.e. ``y_j = sum_i a_ij x_i``. The adjoint acts through the
transpose, ``z_i = sum_j a_ij y_j``.
"""

import math

import numpy as np

from .errors import DimensionError, NonFiniteError
from .l2core import as_vec

__all__ = [
    "HSMatrix",
    "apply",
    "apply_adjoint",
    "hs_norm",
    "op_norm_estimate",
    "column_tail_norms",
    "from_generator",
    "builtin_matrix",
    "reciprocal_product",
]


class HSMatrix:
    """Immutable dense N x N truncation of a Hilbert-Schmidt double sequence.

    The squared HS norm is computed once, with compensated summation, and
    cached as ``hs_norm_sq``.
    """

    __slots__ = ("entries", "hs_norm_sq")

    def __init__(self, entries):
        a = np.array(entries, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
            raise DimensionError(f"expected a non-empty square matrix, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            bad = tuple(int(v) + 1 for v in np.argwhere(~np.isfinite(a))[0])
            raise NonFiniteError(f"non-finite matrix entry at (i, j) = {bad}")
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)
        object.__setattr__(self, "hs_norm_sq", math.fsum((a * a).ravel()))

    def __setattr__(self, name, value):
        raise AttributeError("HSMatrix is immutable")

    @property
    def dim(self):
        return self.entries.shape[0]

    def __repr__(self):
        return f"HSMatrix(dim={self.dim}, hs_norm={math.sqrt(self.hs_norm_sq):.6g})"


def _check(T, v, name):
    v = as_vec(v, name)
    if v.size != T.dim:
        raise DimensionError(f"{name} has dim {v.size}, operator has dim {T.dim}")
    return v


def apply(T, x):
    """Image ``Tx`` with ``(Tx)_j = sum_i a_ij x_i``."""
    x = _check(T, x, "x")
    y = x @ T.entries
    y.setflags(write=False)
    return y


def apply_adjoint(T, y):
    """Adjoint image ``T*y`` with ``(T*y)_i = sum_j a_ij y_j``."""
    y = _check(T, y, "y")
    z = T.entries @ y
    z.setflags(write=False)
    return z


def hs_norm(T):
    return math.sqrt(T.hs_norm_sq)


def op_norm_estimate(T, iterations=200, seed=0, tol=1e-10):
    """Largest singular value of ``T`` by power iteration on ``T* T``.

    Starts from a seeded random unit vector. The returned value is
    ``||T v_k||`` for the current unit iterate ``v_k``; for a positive
    semidefinite iteration matrix this sequence never decreases, so more
    iterations can only raise the estimate. Stops early once the relative
    change drops below ``tol``.
    """
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(T.dim)
    v /= np.linalg.norm(v)
    est = float(np.linalg.norm(apply(T, v)))
    if est == 0.0 and T.hs_norm_sq == 0.0:
        return 0.0
    for _ in range(iterations):
        w = apply_adjoint(T, apply(T, v))
        wn = np.linalg.norm(w)
        if wn == 0.0:
            break
        v = w / wn
        new = float(np.linalg.norm(apply(T, v)))
        done = abs(new - est) <= tol * max(new, 1e-300)
        est = max(est, new)
        if done:
            break
    return est


def column_tail_norms(T):
    """Norms ``||T* e_k|| = sqrt(sum_i a_ik^2)`` for k = 1..N."""
    return np.sqrt(np.einsum("ik,ik->k", T.entries, T.entries))


def from_generator(f, N):
    """Build the N x N truncation with entries ``a_ij = f(i, j)`` (1-based)."""
    if N < 1:
        raise DimensionError(f"N must be >= 1, got {N}")
    a = np.empty((N, N))
    for i in range(1, N + 1):
        for j in range(1, N + 1):
            v = float(f(i, j))
            if not math.isfinite(v):
                raise NonFiniteError(f"generator returned {v} at (i, j) = ({i}, {j})")
            a[i - 1, j - 1] = v
    return HSMatrix(a)


def reciprocal_product(i, j):
    return 1.0 / (i * j)


def builtin_matrix(name, dim=None):
    """Named matrices: ``zero``, ``identity``, ``diag:v1,v2,...``, ``reciprocal-product``."""
    if name.startswith("diag:"):
        vals = [float(v) for v in name[5:].split(",") if v.strip()]
        if not vals:
            raise ValueError("diag: needs at least one value")
        if dim is not None and dim != len(vals):
            raise DimensionError(f"diag has {len(vals)} entries but dim={dim}")
        return HSMatrix(np.diag(vals))
    if dim is None:
        raise ValueError(f"builtin matrix {name!r} needs a dimension")
    if name == "zero":
        return HSMatrix(np.zeros((dim, dim)))
    if name == "identity":
        return HSMatrix(np.eye(dim))
    if name == "reciprocal-product":
        return from_generator(reciprocal_product, dim)
    raise ValueError(f"unknown builtin matrix {name!r}")
