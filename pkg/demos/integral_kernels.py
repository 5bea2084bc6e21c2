"""
Integral operators through a sine basis
=======================================

A kernel k on [0,1]^2 is turned into a coefficient matrix c_ij by
Gauss-Legendre quadrature against sqrt(2) sin(i pi s). The coefficient
route and the direct quadrature route must agree, and the coefficient HS
norm approaches the L^2 norm of the kernel as the basis grows.
"""

import numpy as np

from hilbertops import integral_op

quad = integral_op.gauss_legendre(128)
k = integral_op.builtin_kernel("min")

for M in (4, 8, 16, 32):
    C = integral_op.compute_coeffs(k, integral_op.sine_basis(M), quad)
    print(f"M={M:2d}  coefficient HS norm {C.hs_norm():.8f}")
print(f"kernel L2 norm        {integral_op.hs_norm_from_kernel(k, quad):.8f}  (exact sqrt(1/6) = {np.sqrt(1 / 6):.8f})")

# the two application routes on a function inside the span of the basis
q64 = integral_op.gauss_legendre(64)
basis = integral_op.sine_basis(16)
C = integral_op.compute_coeffs(k, basis, q64)
fc = np.random.default_rng(1).standard_normal(16)
f = integral_op.synthesize(fc, basis, q64)
direct = integral_op.project(integral_op.apply_direct(k, f, q64), basis, q64)
spectral = integral_op.apply_spectral(C, fc)
print("spectral vs direct, max difference:", np.max(np.abs(direct - spectral)))

# the min kernel has a kink on the diagonal, so its coefficient rows decay slowly
C32 = integral_op.compute_coeffs(k, integral_op.sine_basis(32), quad)
print("row tails at m = 25..32:", np.round(integral_op.row_tail_norms(C32)[-8:], 5))
