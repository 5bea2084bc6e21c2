import math

import numpy as np
import pytest

from hilbertops import DimensionError, NonFiniteError
from hilbertops.l2core import basis_vector, inner, norm
from hilbertops.matrix_op import (HSMatrix, apply, apply_adjoint, builtin_matrix, column_tail_norms,
                                  from_generator, hs_norm, op_norm_estimate, reciprocal_product)

SHIFT = HSMatrix([[0.0, 1.0], [0.0, 0.0]])


def random_matrix(rng, n):
    return HSMatrix(rng.standard_normal((n, n)) / n)


def test_apply_examples():
    np.testing.assert_array_equal(apply(SHIFT, basis_vector(1, 2)), basis_vector(2, 2))
    np.testing.assert_array_equal(apply(HSMatrix(np.zeros((4, 4))), [1, 2, 3, 4]), np.zeros(4))
    np.testing.assert_array_equal(apply(HSMatrix(np.eye(3)), [1, 2, 3]), [1, 2, 3])


def test_apply_basis_vector_gives_row():
    rng = np.random.default_rng(3)
    T = random_matrix(rng, 5)
    for k in range(1, 6):
        np.testing.assert_array_equal(apply(T, basis_vector(k, 5)), T.entries[k - 1])


def test_apply_adjoint_examples():
    np.testing.assert_array_equal(apply_adjoint(SHIFT, basis_vector(2, 2)), basis_vector(1, 2))
    np.testing.assert_array_equal(apply_adjoint(HSMatrix(np.zeros((3, 3))), [1, 1, 1]), np.zeros(3))
    rng = np.random.default_rng(0)
    B = rng.standard_normal((6, 6))
    S = HSMatrix(B + B.T)
    y = rng.standard_normal(6)
    np.testing.assert_allclose(apply_adjoint(S, y), apply(S, y), rtol=0, atol=1e-12)


def test_dimension_mismatch():
    with pytest.raises(DimensionError):
        apply(SHIFT, [1, 2, 3])
    with pytest.raises(DimensionError):
        apply_adjoint(SHIFT, [1])


def test_hs_norm_examples():
    assert hs_norm(HSMatrix(np.diag([1.0, 0.5]))) == pytest.approx(math.sqrt(1.25), abs=1e-15)
    for n in (1, 4, 9):
        assert hs_norm(HSMatrix(np.eye(n))) == pytest.approx(math.sqrt(n), abs=1e-15)
    assert hs_norm(HSMatrix(np.zeros((3, 3)))) == 0.0


def test_hs_norm_matches_basis_images():
    rng = np.random.default_rng(1)
    for _ in range(20):
        T = random_matrix(rng, 12)
        via_images = math.fsum(norm(apply(T, basis_vector(k, 12))) ** 2 for k in range(1, 13))
        assert abs(via_images - T.hs_norm_sq) <= 1e-10 * T.hs_norm_sq


def test_op_norm_examples():
    assert op_norm_estimate(HSMatrix(np.diag([3.0, 1.0]))) == pytest.approx(3.0, abs=1e-8)
    assert op_norm_estimate(HSMatrix(np.zeros((4, 4)))) == 0.0
    I5 = HSMatrix(np.eye(5))
    est = op_norm_estimate(I5)
    assert est == pytest.approx(1.0, abs=1e-8)
    assert est <= hs_norm(I5)


def test_op_norm_bound_and_monotone():
    rng = np.random.default_rng(2)
    for _ in range(20):
        T = random_matrix(rng, 10)
        ests = [op_norm_estimate(T, iterations=k, seed=5) for k in (1, 2, 5, 20, 200)]
        assert all(b >= a for a, b in zip(ests, ests[1:]))
        assert ests[-1] <= hs_norm(T) + 1e-8
        assert ests[-1] == pytest.approx(np.linalg.svd(T.entries, compute_uv=False)[0], rel=1e-6)


def test_op_norm_deterministic_per_seed():
    T = random_matrix(np.random.default_rng(4), 8)
    assert op_norm_estimate(T, seed=11) == op_norm_estimate(T, seed=11)


def test_column_tail_norms():
    T = from_generator(reciprocal_product, 4)
    c = math.sqrt(1 + 1 / 4 + 1 / 9 + 1 / 16)
    np.testing.assert_allclose(column_tail_norms(T), [c / k for k in range(1, 5)], rtol=0, atol=1e-15)
    np.testing.assert_array_equal(column_tail_norms(HSMatrix(np.eye(3))), np.ones(3))
    np.testing.assert_array_equal(column_tail_norms(HSMatrix(np.zeros((3, 3)))), np.zeros(3))


def test_column_tails_are_adjoint_image_norms():
    T = random_matrix(np.random.default_rng(5), 6)
    tails = column_tail_norms(T)
    for k in range(1, 7):
        assert tails[k - 1] == pytest.approx(norm(apply_adjoint(T, basis_vector(k, 6))), rel=1e-14)


def test_from_generator():
    np.testing.assert_array_equal(from_generator(lambda i, j: float(i == j), 3).entries, np.eye(3))
    np.testing.assert_array_equal(from_generator(reciprocal_product, 2).entries,
                                  [[1, 0.5], [0.5, 0.25]])
    with pytest.raises(NonFiniteError):
        from_generator(lambda i, j: math.nan if (i, j) == (2, 1) else 0.0, 3)


def test_builtins():
    np.testing.assert_array_equal(builtin_matrix("diag:1,0.5,0.25").entries, np.diag([1, 0.5, 0.25]))
    np.testing.assert_array_equal(builtin_matrix("identity", 2).entries, np.eye(2))
    assert builtin_matrix("zero", 3).hs_norm_sq == 0.0
    assert builtin_matrix("reciprocal-product", 3).entries[2, 1] == pytest.approx(1 / 6)
    with pytest.raises(ValueError):
        builtin_matrix("nope", 3)


def test_immutable():
    T = HSMatrix(np.eye(2))
    with pytest.raises(AttributeError):
        T.hs_norm_sq = 0.0
    with pytest.raises(ValueError):
        T.entries[0, 0] = 5.0


def test_properties_random():
    rng = np.random.default_rng(6)
    for _ in range(200):
        n = int(rng.integers(1, 12))
        T = HSMatrix(rng.standard_normal((n, n)))
        x, y = rng.standard_normal(n), rng.standard_normal(n)
        a, b = rng.standard_normal(2)
        lhs = inner(apply(T, x), y)
        rhs = inner(x, apply_adjoint(T, y))
        assert abs(lhs - rhs) <= 1e-10 * norm(x) * norm(y) * (1 + hs_norm(T))
        assert norm(apply(T, x)) <= hs_norm(T) * norm(x) * (1 + 1e-12)
        np.testing.assert_allclose(apply(T, a * x + b * y), a * apply(T, x) + b * apply(T, y),
                                   rtol=0, atol=1e-12 * (1 + hs_norm(T)) * (norm(x) + norm(y)))
