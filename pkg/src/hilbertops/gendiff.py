"""
Generalized differentiation over the three operator families.

For a map g that is Frechet differentiable at z, the Mordukhovich
coderivative is single-valued and equals the adjoint of the derivative.
Where that fails (the singular set of the quasi-HS operator) membership
``x in D*g(z)(y)`` is decided by the sign of

    limsup_{u -> z} (<x, u - z> - <y, g(u) - g(z)>) / (||u - z|| + ||g(u) - g(z)||),

which this module estimates along explicit approaching paths. A positive
value along any path excludes x. Staying near zero on the built-in paths
is only evidence, never proof, since the limsup runs over all sequences.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog

from . import integral_op, matrix_op, quasi_op
from .errors import DimensionError, NotDifferentiable
from .l2core import as_vec, inner, norm

__all__ = [
    "OperatorHandle",
    "matrix_handle",
    "spectral_handle",
    "quasi_handle",
    "PathFamily",
    "ProbeResult",
    "coderivative_via_adjoint",
    "central_difference",
    "frechet_fd_check",
    "limsup_quotient",
    "probe_membership",
    "default_families",
    "feasibility_check",
    "feasible_box",
]

KINDS = ("matrix", "integral-spectral", "quasi")


@dataclass(frozen=True)
class OperatorHandle:
    """Uniform front for a matrix, spectral-integral or quasi-HS operator."""

    kind: str
    operator: object
    dim: int

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown operator kind {self.kind!r}")

    @property
    def linear(self):
        return self.kind != "quasi"

    def _vec(self, v, name):
        v = as_vec(v, name)
        if v.size != self.dim:
            raise DimensionError(f"{name} has dim {v.size}, operator has dim {self.dim}")
        return v

    def apply(self, x):
        x = self._vec(x, "x")
        if self.kind == "matrix":
            return matrix_op.apply(self.operator, x)
        if self.kind == "integral-spectral":
            return integral_op.apply_spectral(self.operator, x)
        return quasi_op.apply_quasi(x)

    def derivative(self, z, x):
        """Frechet derivative at z applied to x."""
        z = self._vec(z, "z")
        if self.kind == "quasi":
            return quasi_op.apply_frechet(z, x)
        return self.apply(x)

    def coderivative(self, z, y):
        z = self._vec(z, "z")
        if self.kind == "matrix":
            return matrix_op.apply_adjoint(self.operator, self._vec(y, "y"))
        if self.kind == "integral-spectral":
            return integral_op.apply_spectral_adjoint(self.operator, self._vec(y, "y"))
        return quasi_op.apply_coderivative(z, y)

    def is_differentiable_at(self, z):
        return self.linear or not quasi_op.is_singular(z)


def matrix_handle(T):
    return OperatorHandle("matrix", T, T.dim)


def spectral_handle(C):
    return OperatorHandle("integral-spectral", C, C.dim)


def quasi_handle(dim):
    if dim < 2:
        raise DimensionError(f"quasi-HS operator needs dim >= 2, got {dim}")
    return OperatorHandle("quasi", None, dim)


def coderivative_via_adjoint(op, z, y):
    """Coderivative at a point of Frechet differentiability: ``(grad op(z))* y``.

    Raises NotDifferentiable on the singular set of the quasi-HS operator.
    """
    return op.coderivative(z, y)


def central_difference(op, z, v, h):
    z = as_vec(z, "z")
    v = as_vec(v, "v")
    return (op.apply(z + h * v) - op.apply(z - h * v)) / (2.0 * h)


def frechet_fd_check(op, z, directions=8, h=1e-5, seed=0):
    """Max relative deviation between central differences and the claimed derivative.

    Directions are seeded random unit vectors. For a direction whose
    claimed derivative vanishes, the absolute deviation is used.
    """
    z = op._vec(z, "z")
    if not op.is_differentiable_at(z):
        raise NotDifferentiable("operator is not Frechet differentiable at z (z1 = z2 = 0)")
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(directions):
        v = rng.standard_normal(op.dim)
        v /= np.linalg.norm(v)
        exact = op.derivative(z, v)
        diff = norm(central_difference(op, z, v, h) - exact)
        scale = norm(exact)
        worst = max(worst, diff / scale if scale > 0.0 else diff)
    return worst


def limsup_quotient(op, z, x_cand, y, u):
    """One evaluation of the coderivative membership quotient at the point u."""
    z = op._vec(z, "z")
    u = op._vec(u, "u")
    du = u - z
    if not np.any(du):
        raise ValueError("u must differ from z")
    dg = op.apply(u) - op.apply(z)
    num = inner(x_cand, du) - inner(y, dg)
    return num / (norm(du) + norm(dg))


@dataclass(frozen=True)
class PathFamily:
    """A sequence of points ``u_n -> z`` with ``u_n != z``.

    Steps follow the geometric schedule ``t_n = start * ratio**n``:

    * ``axis``: ``u = z + t_n e1``
    * ``diagonal``: ``u = z + t_n (e1 + e2)``
    * ``tail``: ``u = z + t_n x_tail`` with x_tail restricted to coordinates >= 3
    * ``custom``: the explicit ``points``
    """

    kind: str
    steps: int = 24
    start: float = 0.1
    ratio: float = 0.5
    tail: object = None
    points: tuple = None

    def generate(self, z):
        z = as_vec(z, "z")
        if self.kind == "custom":
            if self.points is None:
                raise ValueError("custom family needs explicit points")
            pts = [as_vec(p, "u") for p in self.points]
        else:
            if self.steps < 1 or not 0.0 < self.ratio < 1.0 or self.start <= 0.0:
                raise ValueError("need steps >= 1, start > 0 and 0 < ratio < 1")
            d = np.zeros(z.size)
            if self.kind == "axis":
                d[0] = 1.0
            elif self.kind == "diagonal":
                d[:2] = 1.0
            elif self.kind == "tail":
                if self.tail is None:
                    raise ValueError("tail family needs a tail vector")
                tv = as_vec(self.tail, "tail")
                if tv.size != z.size:
                    raise DimensionError(f"tail has dim {tv.size}, z has dim {z.size}")
                d[2:] = tv[2:]
            else:
                raise ValueError(f"unknown path family {self.kind!r}")
            pts = [z + self.start * self.ratio ** n * d for n in range(self.steps)]
        for p in pts:
            if p.size != z.size:
                raise DimensionError("path point dimension differs from z")
            if not np.any(p - z):
                raise ValueError(f"degenerate {self.kind} family: a point coincides with z")
        if len(pts) > 1 and all(np.array_equal(pts[0], p) for p in pts[1:]):
            raise ValueError(f"degenerate {self.kind} family: constant points")
        return pts


@dataclass
class ProbeResult:
    """Quotient evaluations along every family and the resulting verdict.

    ``verdict`` is ``"excluded"`` when some family's limiting window exceeds
    ``margin`` (x_cand is then not in the coderivative), ``"admitted"`` when
    every evaluation is at most ``tol`` (no counterexample among the probed
    paths, *not* a membership proof), and ``"inconclusive"`` otherwise.
    """

    values: list
    sup_estimate: float
    verdict: str
    margin: float
    tol: float
    records: list = field(default_factory=list)
    witness: dict = None

    def replay(self, op, z, x_cand, y):
        """Re-evaluate the stored witness point (only for excluded results)."""
        if self.witness is None:
            raise ValueError("no witness stored")
        return limsup_quotient(op, z, x_cand, y, self.witness["u"])


def default_families(dim, tail=None):
    fams = [PathFamily("axis"), PathFamily("diagonal")]
    if dim >= 3:
        if tail is None:
            tail = np.zeros(dim)
            tail[2] = 1.0
        fams.append(PathFamily("tail", tail=tail))
    return fams


def probe_membership(op, z, x_cand, y, families, margin=1e-3, tol=1e-9, window=None):
    """Probe ``x_cand in D*op(z)(y)`` along each path family.

    ``window`` is the number of final points per family treated as the
    limiting regime (default: the last quarter, at least 4).
    """
    families = list(families)
    if not families:
        raise ValueError("at least one path family is required")
    z = op._vec(z, "z")
    x_cand = op._vec(x_cand, "x_cand")
    y = op._vec(y, "y")
    values, records = [], []
    witness = None
    best_tail = -math.inf
    for fi, fam in enumerate(families):
        pts = fam.generate(z)
        if len(pts) < 8:
            raise ValueError(f"family {fam.kind!r} generates {len(pts)} points; need >= 8")
        vals = [limsup_quotient(op, z, x_cand, y, u) for u in pts]
        for n, (u, q) in enumerate(zip(pts, vals)):
            records.append({"family": fam.kind, "step": n, "u": u.tolist(), "quotient": q})
        values.extend(vals)
        w = window or max(4, len(vals) // 4)
        start = len(vals) - min(w, len(vals))
        for n in range(start, len(vals)):
            if vals[n] > best_tail:
                best_tail = vals[n]
                witness = {"family": fam.kind, "family_index": fi, "step": n,
                           "u": pts[n], "quotient": vals[n]}
    sup = max(values)
    if best_tail > margin:
        verdict = "excluded"
    elif sup <= tol:
        verdict = "admitted"
        witness = None
    else:
        verdict = "inconclusive"
        witness = None
    return ProbeResult(values, sup, verdict, margin, tol, records, witness)


INEQUALITY_LABELS = ("i", "ii", "iii", "iv", "v", "vi")


def _inequalities(y1, y2):
    """Rows (a1, a2, b) of ``a1 x1 + a2 x2 <= b`` for the six necessary conditions."""
    r2y2 = math.sqrt(2.0) * y2
    return [
        (1.0, 0.0, y1),
        (-1.0, 0.0, y1),
        (1.0, 1.0, r2y2),
        (-1.0, -1.0, r2y2),
        (-1.0, 1.0, -r2y2),
        (1.0, -1.0, -r2y2),
    ]


def feasibility_check(y1, y2, x1, x2, slack=1e-12):
    """Evaluate the six linear necessary conditions for ``(x1, x2)`` given ``(y1, y2)``.

    Returns a dict keyed by ``"i"`` .. ``"vi"`` plus ``"all"``.
    """
    out = {}
    for label, (a1, a2, b) in zip(INEQUALITY_LABELS, _inequalities(y1, y2)):
        out[label] = bool(a1 * x1 + a2 * x2 <= b + slack)
    out["all"] = all(out[k] for k in INEQUALITY_LABELS)
    return out


def feasible_box(y1, y2):
    """Bounding box of all ``(x1, x2)`` satisfying the six conditions, by linear programming.

    Returns ``None`` when the system is infeasible, else
    ``((x1_min, x1_max), (x2_min, x2_max))``. The conditions pin
    ``x1 + x2`` and ``x1 - x2`` between ``+-sqrt(2) y2`` with opposite
    orientations, so a solution exists only for ``y2 = 0`` and ``y1 >= 0``,
    and is then the origin.
    """
    rows = _inequalities(y1, y2)
    A = np.array([r[:2] for r in rows])
    b = np.array([r[2] for r in rows])
    bounds = [(None, None), (None, None)]
    box = []
    for k in range(2):
        lo_hi = []
        for sign in (1.0, -1.0):
            c = np.zeros(2)
            c[k] = sign
            res = linprog(c, A_ub=A, b_ub=b, bounds=bounds, method="highs")
            if res.status == 2:
                return None
            if res.status != 0:
                raise RuntimeError(f"linear program failed: {res.message}")
            lo_hi.append(sign * res.fun + 0.0)  # no signed zeros
        box.append((lo_hi[0], lo_hi[1]))
    return tuple(box)
