"""Tests for the symmetric eigensolver and dense solve."""

import math

import numpy as np
import pytest

from smoothgd.linalg import (
    ConvergenceError,
    SingularMatrixError,
    dense_solve,
    eig_preconditioned_hessian,
    sign_normalize,
    sym_eigendecompose,
)


def test_2x2_analytic():
    pairs = sym_eigendecompose(np.array([[2.0, 6.0], [6.0, 4.0]]))
    root = math.sqrt(37.0)
    assert pairs[0].value == pytest.approx(3.0 + root, abs=1e-12)
    assert pairs[1].value == pytest.approx(3.0 - root, abs=1e-12)
    # eigenvector of the positive eigenvalue: (6, 1 + sqrt(37)) direction
    v = pairs[0].vector
    expect = np.array([6.0, 1.0 + root])
    expect /= np.linalg.norm(expect)
    np.testing.assert_allclose(np.abs(v), expect, atol=1e-12)


def test_descending_order_and_residuals(rng):
    for n in (2, 5, 16, 40):
        m = rng.standard_normal((n, n))
        m = 0.5 * (m + m.T)
        pairs = sym_eigendecompose(m)
        values = np.array([p.value for p in pairs])
        assert np.all(np.diff(values) <= 1e-12)
        scale = np.linalg.norm(m)
        np.testing.assert_allclose(values, np.sort(np.linalg.eigvalsh(m))[::-1],
                                   atol=1e-9 * scale)
        vectors = np.array([p.vector for p in pairs])
        np.testing.assert_allclose(vectors @ vectors.T, np.eye(n), atol=1e-9)
        for p in pairs:
            assert np.linalg.norm(m @ p.vector - p.value * p.vector) <= 1e-9 * max(scale, 1.0)


def test_zero_matrix():
    pairs = sym_eigendecompose(np.zeros((3, 3)))
    assert all(p.value == 0.0 for p in pairs)
    vectors = np.array([p.vector for p in pairs])
    np.testing.assert_allclose(vectors @ vectors.T, np.eye(3), atol=1e-14)


def test_degenerate_eigenvalues_orthonormal():
    pairs = sym_eigendecompose(np.diag([3.0, 3.0, 1.0]))
    values = [p.value for p in pairs]
    np.testing.assert_allclose(values, [3.0, 3.0, 1.0], atol=1e-13)
    vectors = np.array([p.vector for p in pairs])
    np.testing.assert_allclose(vectors @ vectors.T, np.eye(3), atol=1e-12)


def test_input_validation():
    with pytest.raises(ValueError):
        sym_eigendecompose(np.zeros((2, 3)))
    with pytest.raises(ValueError):
        sym_eigendecompose(np.array([[0.0, 1.0], [2.0, 0.0]]))
    with pytest.raises(ValueError):
        sym_eigendecompose(np.array([[np.inf, 0.0], [0.0, 1.0]]))


def test_convergence_error_carries_residual(rng):
    m = rng.standard_normal((8, 8))
    m = 0.5 * (m + m.T)
    # a starved sweep budget must fail loudly, not return garbage
    with pytest.raises(ConvergenceError) as info:
        sym_eigendecompose(m, max_sweeps=1)
    assert info.value.residual > 0.0


def test_sign_normalize():
    v = np.array([-0.8, 0.6])
    np.testing.assert_array_equal(sign_normalize(v), [0.8, -0.6])
    np.testing.assert_array_equal(sign_normalize(-v), [0.8, -0.6])
    # tiny leading entries are skipped when fixing the sign
    w = np.array([1e-14, -1.0])
    assert sign_normalize(w)[1] == 1.0
    z = np.zeros(2)
    np.testing.assert_array_equal(sign_normalize(z), z)


def test_preconditioned_n2_analytic():
    # diag(1, -1) preconditioned by the n = 2 smoother: eigenvalues
    # +-1 / sqrt(1 + 2 sigma)
    sigma = 3.0
    pairs = eig_preconditioned_hessian(np.diag([1.0, -1.0]), sigma)
    expect = 1.0 / math.sqrt(7.0)
    assert pairs[0].value == pytest.approx(expect, abs=1e-12)
    assert pairs[1].value == pytest.approx(-expect, abs=1e-12)


def test_preconditioned_matches_dense_route(rng):
    b = rng.standard_normal((5, 5))
    b = 0.5 * (b + b.T)
    sigma = 0.8
    pairs = eig_preconditioned_hessian(b, sigma)
    from smoothgd.smoothing import CirculantSmoother

    a = CirculantSmoother(5, sigma).dense()
    reference = np.sort(np.linalg.eigvals(np.linalg.solve(a, b)).real)[::-1]
    np.testing.assert_allclose([p.value for p in pairs], reference, atol=1e-9)
    # pairs satisfy the generalized equation B v = lambda A v
    for p in pairs:
        assert np.linalg.norm(b @ p.vector - p.value * (a @ p.vector)) <= 1e-9 * np.linalg.norm(b)


def test_dense_solve_matches_numpy(rng):
    m = rng.standard_normal((6, 6))
    m = m @ m.T + 6 * np.eye(6)
    y = rng.standard_normal(6)
    np.testing.assert_allclose(dense_solve(m, y), np.linalg.solve(m, y),
                               atol=1e-10 * np.linalg.norm(y))


def test_dense_solve_singular():
    m = np.array([[1.0, 2.0], [2.0, 4.0]])
    with pytest.raises(SingularMatrixError) as info:
        dense_solve(m, np.ones(2))
    assert info.value.pivot_index in (0, 1)


def test_dense_solve_shape_errors():
    with pytest.raises(ValueError):
        dense_solve(np.zeros((2, 3)), np.ones(2))
    with pytest.raises(ValueError):
        dense_solve(np.eye(2), np.ones(3))
