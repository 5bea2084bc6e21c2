"""
Hilbert-Schmidt integral operators on L2(0, 1).

A kernel ``k(s, t)`` defines ``(Tf)(s) = int_0^1 k(s, t) f(t) dt``. Two
discretisations are provided:

* direct (Nystrom) evaluation on the nodes of a quadrature rule, and
* spectral evaluation through the coefficient matrix
  ``c_ij = iint k(s, t) phi_i(s) phi_j(t) ds dt`` against an orthonormal
  basis, with ``(Tf)_i = sum_j c_ij f_j`` and ``(T*g)_j = sum_i c_ij g_i``.

The builtin basis is the sine family ``phi_i(s) = sqrt(2) sin(i pi s)``.
"""

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.interpolate import RegularGridInterpolator

from .errors import DimensionError, NonFiniteError
from .l2core import as_vec
from .matrix_op import HSMatrix

__all__ = [
    "QuadratureRule",
    "gauss_legendre",
    "OrthoBasis",
    "sine_basis",
    "Kernel",
    "builtin_kernel",
    "gridded_kernel",
    "CoeffMatrix",
    "compute_coeffs",
    "kernel_grid",
    "apply_direct",
    "apply_spectral",
    "apply_spectral_adjoint",
    "hs_norm_from_kernel",
    "apply_separable",
    "apply_separable_adjoint",
    "project",
    "synthesize",
    "row_tail_norms",
]


@dataclass(frozen=True)
class QuadratureRule:
    nodes: np.ndarray
    weights: np.ndarray
    order: int

    def __post_init__(self):
        nodes = np.array(self.nodes, dtype=float)
        weights = np.array(self.weights, dtype=float)
        if nodes.shape != weights.shape or nodes.ndim != 1 or nodes.size < 1:
            raise DimensionError("nodes and weights must be equal-length 1-D arrays")
        if np.any(nodes <= 0.0) or np.any(nodes >= 1.0) or np.any(np.diff(nodes) <= 0):
            raise ValueError("nodes must be strictly increasing inside (0, 1)")
        if np.any(weights <= 0.0):
            raise ValueError("weights must be positive")
        if abs(math.fsum(weights) - 1.0) > 1e-12:
            raise ValueError("weights must sum to 1")
        nodes.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    def integrate(self, values):
        return float(np.dot(self.weights, values))


def gauss_legendre(order=64):
    """Gauss-Legendre rule of the given order mapped to (0, 1)."""
    x, w = np.polynomial.legendre.leggauss(order)
    return QuadratureRule((x + 1.0) / 2.0, w / 2.0, order)


@dataclass(frozen=True)
class OrthoBasis:
    """Truncated orthonormal family ``phi_1 .. phi_count`` on (0, 1).

    ``eval(i, s)`` must accept an integer ``i >= 1`` and an array ``s``.
    """

    eval: Callable
    count: int
    label: str = "custom"

    def samples(self, quad):
        """Matrix ``P[i-1, n] = phi_i(s_n)`` on the quadrature nodes."""
        return np.array([self.eval(i, quad.nodes) for i in range(1, self.count + 1)], dtype=float)

    def gram_error(self, quad):
        P = self.samples(quad)
        G = (P * quad.weights) @ P.T
        return float(np.max(np.abs(G - np.eye(self.count))))

    def validate(self, quad, tol=1e-8):
        err = self.gram_error(quad)
        if not err <= tol:
            raise ValueError(
                f"basis {self.label!r} (M={self.count}) is not orthonormal under a "
                f"{quad.order}-point rule: max Gram deviation {err:.3e} > {tol:g}"
            )


def _sine(i, s):
    return math.sqrt(2.0) * np.sin(i * math.pi * np.asarray(s, dtype=float))


def sine_basis(count):
    if count < 1:
        raise DimensionError(f"basis size must be >= 1, got {count}")
    return OrthoBasis(_sine, count, "sine")


@dataclass(frozen=True)
class Kernel:
    """A kernel ``k(s, t)`` on (0, 1)^2, vectorised over array arguments.

    ``diagonal_kink`` marks kernels that are smooth on each side of the
    diagonal ``s = t`` but not across it; :func:`hs_norm_from_kernel`
    integrates those over the two triangles separately.
    """

    eval: Callable
    label: str = "custom"
    diagonal_kink: bool = False
    separable: tuple = field(default=None, compare=False)


def _sqrt2_sin_pi(s):
    return math.sqrt(2.0) * np.sin(math.pi * np.asarray(s, dtype=float))


def builtin_kernel(name):
    """Named kernels: ``zero``, ``min``, ``separable-sine``, ``constant:c``."""
    if name == "zero":
        return Kernel(lambda s, t: np.zeros(np.broadcast(s, t).shape), "zero")
    if name == "min":
        return Kernel(np.minimum, "min", diagonal_kink=True)
    if name == "separable-sine":
        return Kernel(
            lambda s, t: _sqrt2_sin_pi(s) * _sqrt2_sin_pi(t),
            "separable-sine",
            separable=(_sqrt2_sin_pi, _sqrt2_sin_pi),
        )
    if name.startswith("constant:"):
        c = float(name.split(":", 1)[1])
        if not math.isfinite(c):
            raise NonFiniteError(f"constant kernel value {c}")
        return Kernel(lambda s, t: np.full(np.broadcast(s, t).shape, c), name)
    raise ValueError(f"unknown builtin kernel {name!r}")


def gridded_kernel(samples, label="gridded"):
    """Kernel from samples on the uniform G x G grid over [0, 1]^2 (endpoints included).

    Values between grid points are bilinear interpolants, so the kernel
    carries an interpolation error of order ``h**2 * max|k''|`` with
    ``h = 1/(G-1)`` relative to the underlying smooth function.
    """
    k = np.array(samples, dtype=float)
    if k.ndim != 2 or k.shape[0] != k.shape[1] or k.shape[0] < 2:
        raise DimensionError(f"gridded kernel must be G x G with G >= 2, got {k.shape}")
    if not np.all(np.isfinite(k)):
        raise NonFiniteError("gridded kernel contains non-finite samples")
    grid = np.linspace(0.0, 1.0, k.shape[0])
    interp = RegularGridInterpolator((grid, grid), k, method="linear")

    def ev(s, t):
        s, t = np.broadcast_arrays(np.asarray(s, float), np.asarray(t, float))
        pts = np.stack([s.ravel(), t.ravel()], axis=-1)
        return interp(pts).reshape(s.shape)

    return Kernel(ev, label)


class CoeffMatrix:
    """M x M coefficient matrix ``c_ij`` of an integral kernel.

    ``matrix`` holds the entries as an :class:`HSMatrix` (``c_ij`` at row
    i, column j). Note that the spectral action ``g = C f`` is the
    *transpose* of the row-vector convention of :mod:`hilbertops.matrix_op`;
    :meth:`as_operator` returns the equivalent ``HSMatrix``.
    """

    __slots__ = ("matrix",)

    def __init__(self, entries):
        self.matrix = entries if isinstance(entries, HSMatrix) else HSMatrix(entries)

    @property
    def entries(self):
        return self.matrix.entries

    @property
    def dim(self):
        return self.matrix.dim

    def hs_norm(self):
        return math.sqrt(self.matrix.hs_norm_sq)

    def as_operator(self):
        return HSMatrix(self.entries.T)

    def __repr__(self):
        return f"CoeffMatrix(M={self.dim}, hs_norm={self.hs_norm():.6g})"


def _check_finite_grid(K, quad, what="kernel"):
    bad = ~np.isfinite(K)
    if np.any(bad):
        m, n = np.argwhere(bad)[0]
        raise NonFiniteError(
            f"{what} is non-finite at node (s, t) = ({quad.nodes[m]!r}, {quad.nodes[n]!r})"
        )


def kernel_grid(k, quad):
    """Kernel values ``K[m, n] = k(s_m, t_n)`` on the tensor grid of nodes."""
    S, T = np.meshgrid(quad.nodes, quad.nodes, indexing="ij")
    K = np.asarray(k.eval(S, T), dtype=float)
    _check_finite_grid(K, quad)
    return K


def compute_coeffs(k, basis, quad):
    """Coefficient matrix ``c_ij`` by tensor-product quadrature.

    The basis must be orthonormal under ``quad`` (checked, tolerance 1e-8).
    """
    basis.validate(quad)
    K = kernel_grid(k, quad)
    Pw = basis.samples(quad) * quad.weights
    return CoeffMatrix(Pw @ K @ Pw.T)


def _samples(f, quad, name):
    if callable(f):
        f = f(quad.nodes)
    v = np.asarray(f, dtype=float)
    if v.shape != quad.nodes.shape:
        raise DimensionError(f"{name} must have one value per node ({quad.nodes.size})")
    if not np.all(np.isfinite(v)):
        raise NonFiniteError(f"{name} has non-finite values at quadrature nodes")
    return v


def apply_direct(k, f, quad):
    """Nystrom evaluation ``(Tf)(s_m) = sum_n w_n k(s_m, t_n) f(t_n)``."""
    fv = _samples(f, quad, "f")
    return kernel_grid(k, quad) @ (quad.weights * fv)


def _check_coeffs(C, v, name):
    v = as_vec(v, name)
    if v.size != C.dim:
        raise DimensionError(f"{name} has dim {v.size}, coefficient matrix has M={C.dim}")
    return v


def apply_spectral(C, f_coeffs):
    """Spectral image ``g_i = sum_j c_ij f_j``."""
    f = _check_coeffs(C, f_coeffs, "f_coeffs")
    return C.entries @ f


def apply_spectral_adjoint(C, g_coeffs):
    """Spectral adjoint image ``h_j = sum_i c_ij g_i``."""
    g = _check_coeffs(C, g_coeffs, "g_coeffs")
    return g @ C.entries


def hs_norm_from_kernel(k, quad):
    """L2 norm of the kernel over (0, 1)^2, which equals the HS norm of T.

    Uses the tensor-product rule, except for kernels flagged with a
    diagonal kink, which are integrated over each triangle through the
    map ``t = s * tau`` so that the rule sees a smooth integrand.
    """
    w = np.outer(quad.weights, quad.weights)
    if not k.diagonal_kink:
        K = kernel_grid(k, quad)
        return math.sqrt(math.fsum((w * K * K).ravel()))
    S, TAU = np.meshgrid(quad.nodes, quad.nodes, indexing="ij")
    T = S * TAU
    lower = np.asarray(k.eval(S, T), dtype=float)
    upper = np.asarray(k.eval(T, S), dtype=float)
    _check_finite_grid(lower, quad)
    _check_finite_grid(upper, quad)
    return math.sqrt(math.fsum((w * S * (lower * lower + upper * upper)).ravel()))


def apply_separable(phi, psi, f, quad):
    """Rank-one operator with kernel ``phi(s) psi(t)``: returns ``<f, psi> phi`` on the nodes."""
    fv = _samples(f, quad, "f")
    psiv = _samples(psi, quad, "psi")
    phiv = _samples(phi, quad, "phi")
    return quad.integrate(fv * psiv) * phiv


def apply_separable_adjoint(phi, psi, g, quad):
    """Adjoint of the rank-one operator: returns ``<g, phi> psi`` on the nodes."""
    gv = _samples(g, quad, "g")
    phiv = _samples(phi, quad, "phi")
    psiv = _samples(psi, quad, "psi")
    return quad.integrate(gv * phiv) * psiv


def project(f, basis, quad):
    """Coefficients ``<f, phi_i>`` of a function given by samples (or a callable)."""
    fv = _samples(f, quad, "f")
    return (basis.samples(quad) * quad.weights) @ fv


def synthesize(coeffs, basis, quad):
    """Samples of ``sum_i coeffs_i phi_i`` at the quadrature nodes."""
    c = as_vec(coeffs, "coeffs")
    if c.size != basis.count:
        raise DimensionError(f"got {c.size} coefficients for a basis of size {basis.count}")
    return c @ basis.samples(quad)


def row_tail_norms(C):
    """Norms ``||T* phi_m|| = sqrt(sum_j c_mj^2)`` for m = 1..M."""
    return np.sqrt(np.einsum("mj,mj->m", C.entries, C.entries))
