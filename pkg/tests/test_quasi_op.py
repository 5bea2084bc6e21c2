import math

import numpy as np
import pytest

from hilbertops import DimensionError, NotDifferentiable
from hilbertops.l2core import basis_vector, inner, norm, zero_vector
from hilbertops.quasi_op import (apply_coderivative, apply_frechet, apply_quasi, frechet_jacobian,
                                 quasi_hs_norm)

from oracles import fd_jacobian, planar_map


def e(k, n=5):
    return basis_vector(k, n)


def test_basis_images():
    np.testing.assert_array_equal(apply_quasi(e(1)), e(1))
    np.testing.assert_array_equal(apply_quasi(e(2)), -e(1))
    for k in range(3, 6):
        np.testing.assert_array_equal(apply_quasi(e(k)), zero_vector(5))


def test_singular_set_maps_to_zero():
    np.testing.assert_array_equal(apply_quasi([0, 0, 3, -1, 2]), np.zeros(5))


def test_diagonal_point():
    np.testing.assert_allclose(apply_quasi([1, 1, 0, 0]), [0, math.sqrt(2), 0, 0], atol=1e-15)


def test_matches_planar_map():
    rng = np.random.default_rng(0)
    for _ in range(50):
        x = rng.standard_normal(4)
        np.testing.assert_allclose(apply_quasi(x)[:2], planar_map(x), rtol=1e-13, atol=1e-15)


def test_dim_check():
    with pytest.raises(DimensionError):
        apply_quasi([1.0])
    with pytest.raises(DimensionError):
        quasi_hs_norm(1)


def test_extreme_magnitudes():
    big = apply_quasi([3e200, 4e200, 0])
    assert np.all(np.isfinite(big))
    assert norm(big) == pytest.approx(5e200)
    tiny = apply_quasi([3e-320, 4e-320, 0])
    assert np.all(np.isfinite(tiny))


def test_hs_norm():
    assert quasi_hs_norm(2) == math.sqrt(2)
    assert quasi_hs_norm(50) == math.sqrt(2)
    assert math.fsum(norm(apply_quasi(basis_vector(k, 50))) ** 2 for k in range(3, 51)) == 0.0


def test_nonexpansive_and_range():
    rng = np.random.default_rng(1)
    for _ in range(1000):
        x = rng.standard_normal(6) * rng.uniform(0.01, 100)
        tx = apply_quasi(x)
        assert abs(norm(tx) ** 2 - (x[0] ** 2 + x[1] ** 2)) <= 1e-12 * max(1.0, x[0] ** 2 + x[1] ** 2)
        assert norm(tx) <= norm(x) * (1 + 1e-15)
        assert np.all(tx[2:] == 0.0)


@pytest.mark.parametrize("z", [(1.0, 0.0), (0.0, 1.0)])
def test_jacobian_against_finite_differences(z):
    oracle = fd_jacobian(planar_map, z)
    J = frechet_jacobian(list(z) + [0.0]).as_array()
    np.testing.assert_allclose(J, oracle, atol=1e-8)


def test_jacobian_frozen_values():
    np.testing.assert_allclose(frechet_jacobian([1, 0, 0]).as_array(), [[1, 0], [0, 2]], atol=1e-15)
    np.testing.assert_allclose(frechet_jacobian([0, 1, 0]).as_array(), [[0, 2], [-1, 0]], atol=1e-15)


def test_jacobian_homogeneous():
    a = frechet_jacobian([0.5, 0.5, 0]).as_array()
    b = frechet_jacobian([2.0, 2.0, 0]).as_array()
    np.testing.assert_allclose(a, b, rtol=0, atol=1e-12)
    rng = np.random.default_rng(2)
    for _ in range(100):
        z = rng.standard_normal(4)
        lam = rng.uniform(0.01, 100)
        np.testing.assert_allclose(frechet_jacobian(lam * z).as_array(),
                                   frechet_jacobian(z).as_array(), rtol=0, atol=1e-12)


def test_jacobian_random_points_fd():
    rng = np.random.default_rng(3)
    for _ in range(50):
        z = rng.standard_normal(2)
        np.testing.assert_allclose(frechet_jacobian(z).as_array(), fd_jacobian(planar_map, z),
                                   atol=1e-6 / min(1.0, np.linalg.norm(z)) ** 2)


def test_not_differentiable_on_singular_set():
    for f in (lambda: frechet_jacobian([0, 0, 1]),
              lambda: apply_frechet([0, 0, 1], [1, 0, 0]),
              lambda: apply_coderivative([0, 0, 0], [1, 0, 0])):
        with pytest.raises(NotDifferentiable):
            f()


def test_apply_frechet_examples():
    np.testing.assert_allclose(apply_frechet(e(1), e(2)), 2 * e(2), atol=1e-15)
    np.testing.assert_array_equal(apply_frechet([0.3, -0.4, 0, 0, 0], zero_vector(5)), np.zeros(5))
    np.testing.assert_array_equal(apply_frechet(e(1), e(3)), np.zeros(5))


def test_apply_coderivative_examples():
    np.testing.assert_allclose(apply_coderivative(e(1), e(2)), 2 * e(2), atol=1e-15)
    z = [0.3, -0.4, 0.2, 0, 0]
    np.testing.assert_array_equal(apply_coderivative(z, [0, 0, 1, 2, 3]), np.zeros(5))


def test_duality_and_direct_norm():
    z = np.array([0.3, -0.4, 0, 0, 0])
    J = frechet_jacobian(z)
    rng = np.random.default_rng(4)
    for _ in range(300):
        x, y = rng.standard_normal(5), rng.standard_normal(5)
        assert abs(inner(apply_frechet(z, x), y) - inner(x, apply_coderivative(z, y))) <= 1e-12
        direct = (y[0] * J.d11 + y[1] * J.d12) ** 2 + (y[0] * J.d21 + y[1] * J.d22) ** 2
        assert norm(apply_coderivative(z, y)) ** 2 == pytest.approx(direct, rel=1e-13)


def test_coderivative_norm_at_e1():
    rng = np.random.default_rng(5)
    for _ in range(20):
        y = rng.standard_normal(3)
        assert norm(apply_coderivative([1, 0, 0], y)) ** 2 == pytest.approx(y[0] ** 2 + 4 * y[1] ** 2)


def test_frechet_central_difference():
    rng = np.random.default_rng(6)
    h = 1e-5
    worst = 0.0
    for _ in range(100):
        z = rng.standard_normal(4)
        while z[0] ** 2 + z[1] ** 2 <= 0.01:
            z = rng.standard_normal(4)
        v = rng.standard_normal(4)
        v /= np.linalg.norm(v)
        fd = (apply_quasi(z + h * v) - apply_quasi(z - h * v)) / (2 * h)
        worst = max(worst, np.max(np.abs(fd - apply_frechet(z, v))))
    assert worst <= 1e-6
