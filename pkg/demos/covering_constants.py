"""
Covering constants
==================

For a linear operator the covering constant is the smallest singular
value, which for compact operators drifts to zero as the truncation grows.
For the quasi-HS operator the direction w = e3 is annihilated by every
coderivative, so the sampled estimate is exactly zero.
"""

import numpy as np

from hilbertops import covering, gendiff, matrix_op

D = matrix_op.HSMatrix(np.diag([1.0, 0.5, 0.25]))
print("diag(1, 1/2, 1/4):", covering.covering_linear(D).value, "basis bound", covering.covering_basis_bound(D).value)

# decay with the truncation dimension, for a full-rank HS family
hilbert = lambda i, j: 1.0 / (i + j - 1)
print(covering.decay_csv(covering.decay_report(hilbert, [2, 4, 6, 8])), end="")

est = covering.covering_sampled(gendiff.quasi_handle(5), np.zeros(5))
print("quasi-HS sampled estimate:", est.value, "witness direction", est.witness)

# the covering radius really is sigma_min: a tiny exhaustive check in the plane
op = gendiff.matrix_handle(matrix_op.HSMatrix(np.diag([1.0, 0.5])))
for alpha in (0.4, 0.6):
    chk = covering.empirical_covering_check(op, np.zeros(2), alpha, 0.5)
    print(f"alpha={alpha}: covered={chk.covered}")
