"""
Covering constants and covering-property checks.

For a single-valued map g the covering constant at (xb, g(xb)) is

    sup_{eta > 0} inf { ||D*g(x)(w)|| : ||x - xb|| < eta, ||g(x) - g(xb)|| < eta, ||w|| = 1 }.

For a linear operator the coderivative does not depend on x, and the
constant reduces to the smallest singular value of the (truncated)
matrix. Restricting w to basis vectors gives the cheap upper bound
``min_k ||T* e_k||`` used in every zero-covering argument for compact
operators.
"""

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import least_squares, minimize

from .errors import DimensionError
from .gendiff import OperatorHandle, matrix_handle
from .l2core import as_vec, basis_vector
from .matrix_op import HSMatrix, column_tail_norms, from_generator

__all__ = [
    "CoveringEstimate",
    "jacobi_eigh",
    "covering_linear",
    "covering_basis_bound",
    "covering_sampled",
    "DecayRow",
    "decay_report",
    "decay_csv",
    "CoveringCheck",
    "empirical_covering_check",
    "DEFAULT_ETAS",
]

DEFAULT_ETAS = (1.0, 0.5, 0.25, 0.125, 0.0625)


@dataclass
class CoveringEstimate:
    value: float
    method: str
    eta_schedule: tuple = ()
    samples: int = 0
    witness: np.ndarray = None
    rejected_singular_points: int = 0
    per_eta: tuple = ()

    def to_dict(self):
        return {
            "value": self.value,
            "method": self.method,
            "eta": list(self.eta_schedule),
            "samples": self.samples,
            "witness": None if self.witness is None else [float(v) for v in self.witness],
            "rejected_singular_points": self.rejected_singular_points,
            "per_eta": [list(p) for p in self.per_eta],
        }


def jacobi_eigh(S, tol=1e-12, max_sweeps=100):
    """Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.

    Sweeps until the off-diagonal Frobenius norm is at most
    ``tol * max(1, ||S||_F)``. Returns ``(eigenvalues, eigenvectors)`` with
    eigenvalues ascending and eigenvectors as columns.
    """
    A = np.array(S, dtype=float)
    n = A.shape[0]
    if A.ndim != 2 or A.shape[1] != n:
        raise DimensionError(f"expected a square matrix, got shape {A.shape}")
    if not np.allclose(A, A.T, rtol=0.0, atol=1e-12 * max(1.0, np.abs(A).max(initial=0.0))):
        raise ValueError("matrix is not symmetric")
    A = 0.5 * (A + A.T)
    V = np.eye(n)
    thresh = tol * max(1.0, np.linalg.norm(A))

    def off(M):
        return float(np.linalg.norm(M - np.diag(np.diag(M))))

    for _ in range(max_sweeps):
        if off(A) <= thresh:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if apq == 0.0:
                    continue
                g = 100.0 * abs(apq)
                app, aqq = A[p, p], A[q, q]
                if abs(app) + g == abs(app) and abs(aqq) + g == abs(aqq):
                    # below rounding of both diagonal entries
                    A[p, q] = A[q, p] = 0.0
                    continue
                h = aqq - app
                if abs(h) + g == abs(h):
                    t = apq / h
                else:
                    tau = h / (2.0 * apq)
                    t = math.copysign(1.0, tau) / (abs(tau) + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                rp, rq = A[p, :].copy(), A[q, :].copy()
                A[p, :] = c * rp - s * rq
                A[q, :] = s * rp + c * rq
                cp, cq = A[:, p].copy(), A[:, q].copy()
                A[:, p] = c * cp - s * cq
                A[:, q] = s * cp + c * cq
                A[p, q] = A[q, p] = 0.0
                vp, vq = V[:, p].copy(), V[:, q].copy()
                V[:, p] = c * vp - s * vq
                V[:, q] = s * vp + c * vq
    else:
        if off(A) > thresh:
            raise RuntimeError(f"Jacobi iteration did not converge in {max_sweeps} sweeps")
    w = np.diag(A).copy()
    order = np.argsort(w, kind="stable")
    return w[order], V[:, order]


def _canonical_sign(v):
    k = int(np.argmax(np.abs(v)))
    return -v if v[k] < 0 else v


def covering_linear(T):
    """Smallest singular value of T with its right singular vector as witness.

    The coderivative of T is ``w -> T* w = A w``, so the infimum of
    ``||A w||`` over unit w is the square root of the smallest eigenvalue
    of ``A^T A``.
    """
    A = T.entries
    w, V = jacobi_eigh(A.T @ A)
    v = V[:, 0] / np.linalg.norm(V[:, 0])
    return CoveringEstimate(
        value=math.sqrt(max(w[0], 0.0)),
        method="singular-value",
        samples=0,
        witness=_canonical_sign(v),
    )


def covering_basis_bound(T):
    """Upper bound ``min_k ||T* e_k||`` from basis directions only."""
    tails = column_tail_norms(T)
    k = int(np.argmin(tails))
    return CoveringEstimate(
        value=float(tails[k]),
        method="basis-bound",
        samples=T.dim,
        witness=np.array(basis_vector(k + 1, T.dim)),
    )


def _ball_point(rng, center, radius):
    d = rng.standard_normal(center.size)
    d /= np.linalg.norm(d)
    return center + radius * rng.random() ** (1.0 / center.size) * d


def _refine_direction(op, x, w0):
    """Locally minimise ``||D*op(x) w|| / ||w||`` starting from w0."""

    def f(w):
        nw2 = float(np.dot(w, w))
        cw = op.coderivative(x, w)
        val = float(np.dot(cw, cw)) / nw2
        grad = 2.0 * (np.asarray(op.derivative(x, cw)) - val * w) / nw2
        return val, grad

    res = minimize(f, w0, jac=True, method="BFGS", options={"gtol": 1e-15, "maxiter": 500})
    w = res.x / np.linalg.norm(res.x)
    cw = op.coderivative(x, w)
    return float(np.linalg.norm(cw)), w


def covering_sampled(op, x_bar, eta_schedule=DEFAULT_ETAS, samples_per_eta=64,
                     seed=0, directions_per_point=4, refine=True):
    """Monte-Carlo estimate of the covering constant at ``(x_bar, op(x_bar))``.

    For each eta, points x are drawn from the ball around ``x_bar`` and
    kept when ``op(x)`` stays within eta of ``op(x_bar)``; ``x_bar`` itself
    is always tried first. Each kept point is paired with every basis
    direction and ``directions_per_point`` random unit directions, and the
    best direction per eta is polished by a local minimisation on the unit
    sphere. Points on the singular set of the quasi-HS operator are
    rejected and counted. For linear operators the eta loop collapses to
    a single pass.
    """
    if not isinstance(op, OperatorHandle):
        op = matrix_handle(op)
    x_bar = op._vec(x_bar, "x_bar")
    etas = tuple(float(e) for e in eta_schedule)
    if not etas or any(e <= 0 for e in etas):
        raise ValueError("eta schedule must be non-empty and positive")
    etas = tuple(sorted(etas, reverse=True))
    if op.linear:
        etas = etas[:1]
    rng = np.random.default_rng(seed)
    y_bar = op.apply(x_bar)
    basis = [np.array(basis_vector(k, op.dim)) for k in range(1, op.dim + 1)]
    rejected = 0
    total = 0
    per_eta = []
    best_overall = None
    for eta in etas:
        best = None
        candidates = [x_bar] + [_ball_point(rng, x_bar, eta) for _ in range(samples_per_eta)]
        for x in candidates:
            if not op.is_differentiable_at(x):
                rejected += 1
                continue
            if np.linalg.norm(op.apply(x) - y_bar) >= eta:
                continue
            ws = basis + [_unit(rng, op.dim) for _ in range(directions_per_point)]
            for w in ws:
                total += 1
                val = float(np.linalg.norm(op.coderivative(x, w)))
                if best is None or val < best[0]:
                    best = (val, w, x)
        if best is None:
            raise ValueError(f"no admissible sample for eta = {eta}")
        if refine and best[0] > 0.0:
            val, w = _refine_direction(op, best[2], best[1])
            if val < best[0]:
                best = (val, w, best[2])
        per_eta.append((eta, best[0]))
        if best_overall is None or best[0] > best_overall[0]:
            best_overall = best
    return CoveringEstimate(
        value=best_overall[0],
        method="sampled",
        eta_schedule=etas,
        samples=total,
        witness=np.asarray(best_overall[1], dtype=float),
        rejected_singular_points=rejected,
        per_eta=tuple(per_eta),
    )


def _unit(rng, dim):
    w = rng.standard_normal(dim)
    return w / np.linalg.norm(w)


@dataclass(frozen=True)
class DecayRow:
    N: int
    sigma_min: float
    basis_bound: float


def decay_report(generator, dims):
    """Covering estimates of the N x N truncations for each N in ``dims``."""
    dims = list(dims)
    if not dims or any(b <= a for a, b in zip(dims, dims[1:])):
        raise ValueError("dims must be a non-empty ascending sequence")
    rows = []
    for N in dims:
        T = from_generator(generator, N)
        rows.append(DecayRow(N, covering_linear(T).value, covering_basis_bound(T).value))
    return rows


def decay_csv(rows):
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(["N", "sigma_min", "basis_bound"])
    for r in rows:
        wr.writerow([r.N, format(r.sigma_min, ".17g"), format(r.basis_bound, ".17g")])
    return buf.getvalue()


@dataclass
class CoveringCheck:
    covered: bool
    counterexample: np.ndarray = None
    worst_residual: float = 0.0
    targets: int = 0


def _boundary_targets(rng, center, radius, count):
    dim = center.size
    out = []
    for k in range(dim):
        for sign in (1.0, -1.0):
            e = np.zeros(dim)
            e[k] = sign
            out.append(center + radius * e)
    while len(out) < count:
        out.append(center + radius * _unit(rng, dim))
    return out


def empirical_covering_check(op, x0, alpha, r, target_samples=200, preimage_samples=400,
                             seed=0, residual_tol=1e-6):
    """Brute-force test of ``B(op(x0), alpha r) subset op(B(x0, r))`` for dim <= 3.

    Targets are the points ``op(x0) +- alpha r e_k``, random points on the
    boundary sphere (half of the budget) and random interior points. For
    each target a preimage is sought among ``preimage_samples`` seeded
    points of the ball, then polished by least squares through a smooth
    map of R^d onto the open ball. A target is reached when the residual
    is at most ``residual_tol``. This is an oracle for tiny examples, not
    an estimator.
    """
    if not isinstance(op, OperatorHandle):
        op = matrix_handle(op)
    if op.dim > 3:
        raise DimensionError(f"empirical covering check is limited to dim <= 3, got {op.dim}")
    if alpha <= 0 or r <= 0:
        raise ValueError("alpha and r must be positive")
    x0 = op._vec(x0, "x0")
    rng = np.random.default_rng(seed)
    y0 = op.apply(x0)
    rad = alpha * r
    n_boundary = max(2 * op.dim, target_samples // 2)
    targets = _boundary_targets(rng, y0, rad, n_boundary)
    while len(targets) < target_samples:
        targets.append(_ball_point(rng, y0, rad))
    pool = np.array([x0] + [_ball_point(rng, x0, r) for _ in range(preimage_samples)])
    images = np.array([op.apply(x) for x in pool])

    def to_ball(v):
        return x0 + r * v / math.sqrt(1.0 + float(np.dot(v, v)))

    worst = 0.0
    for y in targets:
        k = int(np.argmin(np.linalg.norm(images - y, axis=1)))
        u = (pool[k] - x0) / r
        nu = np.linalg.norm(u)
        if nu >= 1.0 - 1e-9:
            u *= (1.0 - 1e-9) / nu
            nu = 1.0 - 1e-9
        v0 = u / math.sqrt(1.0 - nu * nu)
        res = least_squares(lambda v: op.apply(to_ball(v)) - y, v0,
                            xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=2000)
        resid = float(np.linalg.norm(op.apply(to_ball(res.x)) - y))
        worst = max(worst, resid)
        if resid > residual_tol:
            return CoveringCheck(False, np.asarray(y), worst, len(targets))
    return CoveringCheck(True, None, worst, len(targets))
