"""
Truncated model of a separable real Hilbert space.

An element x is represented by its first ``dim`` coefficients
``<x, e_i>`` against a fixed orthonormal basis, stored as a read-only
1-D float array. Every operation works at the caller's truncation; no
infinite sums are attempted.
"""

import math

import numpy as np

from .errors import DimensionError, NonFiniteError

__all__ = ["as_vec", "inner", "norm", "basis_vector", "zero_vector", "embed"]


def as_vec(x, name="x"):
    """Return ``x`` as a read-only float vector, validating shape and values."""
    v = np.array(x, dtype=float)
    if v.ndim != 1 or v.size < 1:
        raise DimensionError(f"{name} must be a non-empty 1-D sequence, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise NonFiniteError(f"{name} contains non-finite coefficients")
    v.setflags(write=False)
    return v


def _check_same_dim(x, y):
    if x.shape != y.shape:
        raise DimensionError(f"dimension mismatch: {x.size} vs {y.size}")


def inner(x, y):
    x = as_vec(x, "x")
    y = as_vec(y, "y")
    _check_same_dim(x, y)
    return float(np.dot(x, y))


def norm(x):
    x = as_vec(x)
    # hypot-style scaling keeps tiny/huge coefficients from under/overflowing
    scale = float(np.max(np.abs(x)))
    if scale == 0.0:
        return 0.0
    return scale * math.sqrt(float(np.dot(x / scale, x / scale)))


def basis_vector(k, dim):
    """Unit vector e_k (1-based index) of length ``dim``."""
    if dim < 1:
        raise DimensionError(f"dim must be >= 1, got {dim}")
    if not 1 <= k <= dim:
        raise DimensionError(f"basis index {k} out of range 1..{dim}")
    e = np.zeros(dim)
    e[k - 1] = 1.0
    e.setflags(write=False)
    return e


def zero_vector(dim):
    if dim < 1:
        raise DimensionError(f"dim must be >= 1, got {dim}")
    z = np.zeros(dim)
    z.setflags(write=False)
    return z


def embed(x, newdim):
    """Pad with zeros or drop trailing coefficients to reach ``newdim``.

    Truncation never increases the norm.
    """
    x = as_vec(x)
    if newdim < 1:
        raise DimensionError(f"newdim must be >= 1, got {newdim}")
    out = np.zeros(newdim)
    m = min(newdim, x.size)
    out[:m] = x[:m]
    out.setflags(write=False)
    return out
