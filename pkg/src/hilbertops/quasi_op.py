"""
The nonlinear quasi-Hilbert-Schmidt operator acting on the first two
coordinates:

    Tx = ((x1^2 - x2^2)/r) e1 + (2 x1 x2 / r) e2,   r = sqrt(x1^2 + x2^2) > 0,
    Tx = 0                                          when x1 = x2 = 0.

In polar form T doubles the angle of (x1, x2) and keeps its radius, so
``||Tx||^2 = x1^2 + x2^2``. T is Frechet differentiable exactly off the
singular set ``x1 = x2 = 0``; there the derivative is the 2 x 2 block
returned by :func:`frechet_jacobian`, padded with zeros.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, NotDifferentiable
from .l2core import as_vec, basis_vector, norm

__all__ = [
    "Jacobian2x2",
    "apply_quasi",
    "quasi_hs_norm",
    "frechet_jacobian",
    "apply_frechet",
    "apply_coderivative",
    "is_singular",
]


def _vec2(x, name="x"):
    x = as_vec(x, name)
    if x.size < 2:
        raise DimensionError(f"{name} needs dim >= 2, got {x.size}")
    return x


def is_singular(z):
    z = _vec2(z, "z")
    return z[0] == 0.0 and z[1] == 0.0


def apply_quasi(x):
    x = _vec2(x)
    out = np.zeros(x.size)
    r = math.hypot(x[0], x[1])
    if r > 0.0:
        c, s = x[0] / r, x[1] / r
        out[0] = r * (c - s) * (c + s)
        out[1] = 2.0 * r * c * s
    out.setflags(write=False)
    return out


def quasi_hs_norm(dim):
    """``sqrt(sum_k ||T e_k||^2)`` over the first ``dim`` basis vectors (sqrt 2 for dim >= 2)."""
    if dim < 2:
        raise DimensionError(f"dim must be >= 2, got {dim}")
    return math.sqrt(math.fsum(norm(apply_quasi(basis_vector(k, dim))) ** 2 for k in range(1, dim + 1)))


@dataclass(frozen=True)
class Jacobian2x2:
    """Active block of the derivative; rows index input, columns output.

    A coefficient row vector x maps to ``(x1 d11 + x2 d21, x1 d12 + x2 d22)``.
    """

    d11: float
    d12: float
    d21: float
    d22: float

    def as_array(self):
        return np.array([[self.d11, self.d12], [self.d21, self.d22]])


def frechet_jacobian(z):
    z = _vec2(z, "z")
    r = math.hypot(z[0], z[1])
    if r == 0.0:
        raise NotDifferentiable(
            "quasi-HS operator is not differentiable where z1 = z2 = 0; "
            "use probe_membership to examine the coderivative there"
        )
    # every entry is homogeneous of degree 0, so only the direction matters
    c, s = z[0] / r, z[1] / r
    return Jacobian2x2(
        d11=(c * c + 3.0 * s * s) * c,
        d12=2.0 * s ** 3,
        d21=-(3.0 * c * c + s * s) * s,
        d22=2.0 * c ** 3,
    )


def _pair(z, v, name):
    z = _vec2(z, "z")
    v = as_vec(v, name)
    if v.size != z.size:
        raise DimensionError(f"{name} has dim {v.size}, z has dim {z.size}")
    return z, v


def apply_frechet(z, x):
    """Derivative at z applied to x (row-vector convention ``sc(x) D(z)``)."""
    z, x = _pair(z, x, "x")
    J = frechet_jacobian(z)
    out = np.zeros(z.size)
    out[0] = x[0] * J.d11 + x[1] * J.d21
    out[1] = x[0] * J.d12 + x[1] * J.d22
    out.setflags(write=False)
    return out


def apply_coderivative(z, y):
    """Coderivative at z applied to y, i.e. the adjoint of the derivative: ``sc(y) D(z)^T``."""
    z, y = _pair(z, y, "y")
    J = frechet_jacobian(z)
    out = np.zeros(z.size)
    out[0] = y[0] * J.d11 + y[1] * J.d12
    out[1] = y[0] * J.d21 + y[1] * J.d22
    out.setflags(write=False)
    return out
