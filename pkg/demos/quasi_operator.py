"""
The quasi-HS operator and its derivative
========================================

T doubles the polar angle of (x1, x2) and ignores every other coordinate.
It is square-summable over the basis like an HS operator but nonlinear, and
it is Frechet differentiable everywhere except where x1 = x2 = 0.
"""

import numpy as np

from hilbertops import NotDifferentiable, gendiff, quasi_op
from hilbertops.l2core import basis_vector

dim = 6
for k in (1, 2, 3):
    print(f"T e{k} =", quasi_op.apply_quasi(basis_vector(k, dim)))
print("HS norm over the first", dim, "basis vectors:", quasi_op.quasi_hs_norm(dim))

z = np.array([0.6, 0.8, 0.0, 0.0, 0.0, 0.0])
print("Jacobian block at z:\n", quasi_op.frechet_jacobian(z).as_array())

op = gendiff.quasi_handle(dim)
for h in (1e-3, 1e-4, 1e-5):
    print(f"finite-difference check, h={h:g}: {gendiff.frechet_fd_check(op, z, h=h):.3e}")

# at a point with z1 = z2 = 0 there is nothing to check
try:
    gendiff.frechet_fd_check(op, basis_vector(3, dim))
except NotDifferentiable as exc:
    print("at e3:", exc)
