"""
Hilbert-Schmidt operators from double sequences
===============================================

A truncated double sequence a_ij defines T x = sum_i x_i sum_j a_ij e_j.
The HS norm can be read off the entries or off the basis images, and it
always bounds the operator norm.
"""

import numpy as np

from hilbertops import matrix_op
from hilbertops.l2core import basis_vector, inner, norm

N = 32
T = matrix_op.from_generator(lambda i, j: 1.0 / (i + j - 1), N)  # Hilbert matrix

# two ways to the same number
by_entries = matrix_op.hs_norm(T)
by_columns = np.sqrt(sum(norm(matrix_op.apply(T, basis_vector(k, N))) ** 2 for k in range(1, N + 1)))
print(f"HS norm from entries {by_entries:.15f}, from basis images {by_columns:.15f}")

# the operator norm sits below it
print(f"operator norm estimate {matrix_op.op_norm_estimate(T):.12f}")

# adjoint identity on a random pair
rng = np.random.default_rng(0)
x, y = rng.standard_normal(N), rng.standard_normal(N)
print("<Tx, y> - <x, T*y> =", inner(matrix_op.apply(T, x), y) - inner(x, matrix_op.apply_adjoint(T, y)))

# how fast the tail columns die off for the reciprocal-product family
R = matrix_op.builtin_matrix("reciprocal-product", 8)
print("column tail norms:", np.round(matrix_op.column_tail_norms(R), 6))
