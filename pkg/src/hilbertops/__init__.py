"""Hilbert-Schmidt operators, their Frechet and Mordukhovich derivatives,
and covering constants, computed on finite truncations of a separable
Hilbert space."""

from .errors import DimensionError, NonFiniteError, NotDifferentiable
from .l2core import as_vec, basis_vector, embed, inner, norm, zero_vector
from .matrix_op import (HSMatrix, apply, apply_adjoint, builtin_matrix, column_tail_norms,
                        from_generator, hs_norm, op_norm_estimate)
from .quasi_op import (Jacobian2x2, apply_coderivative, apply_frechet, apply_quasi,
                       frechet_jacobian, quasi_hs_norm)

__version__ = "0.1.0"
