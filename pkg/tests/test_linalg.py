"""Tests for the dense linear algebra layer."""

import math

import numpy as np
import pytest

from giep import (
    IllConditioned,
    NonConvergence,
    SingularSystem,
    determinant,
    eig_all,
    eigen_triple,
    solve_linear,
)


def test_eig_rotation_block():
    # characteristic polynomial x^2 + 1
    ev = eig_all([[0.0, 1.0], [-1.0, 0.0]])
    assert np.allclose(sorted(ev, key=lambda z: z.imag), [-1j, 1j], atol=1e-14)


def test_eig_triangular_is_diagonal():
    ev = eig_all(np.diag([1.0, 2.0, 3.0]))
    assert np.allclose(ev, [1.0, 2.0, 3.0], atol=1e-14)
    assert np.all(ev.imag == 0.0)


def test_eig_companion_golden_ratio():
    # companion matrix of x^2 - x - 1; roots (1 +/- sqrt(5)) / 2
    ev = eig_all([[0.0, 1.0], [1.0, 1.0]])
    expected = sorted([(1 - math.sqrt(5)) / 2, (1 + math.sqrt(5)) / 2])
    assert np.allclose(sorted(ev.real), expected, atol=1e-14)
    assert np.all(ev.imag == 0.0)


def test_eig_conjugate_closure_bit_exact():
    rng = np.random.default_rng(11)
    for _ in range(200):
        n = int(rng.integers(2, 9))
        ev = eig_all(rng.standard_normal((n, n)) * 3)
        plus = sorted((z for z in ev if z.imag > 0), key=lambda z: (z.real, z.imag))
        minus = sorted((z for z in ev if z.imag < 0), key=lambda z: (z.real, -z.imag))
        assert len(plus) == len(minus)
        for a, b in zip(plus, minus):
            assert a.real == b.real and a.imag == -b.imag


def test_eig_trace_and_determinant_identities():
    rng = np.random.default_rng(5)
    for _ in range(100):
        n = int(rng.integers(1, 13))
        a = rng.standard_normal((n, n)) * rng.uniform(0.2, 5.0)
        ev = eig_all(a)
        tr = float(np.trace(a))
        assert abs(ev.sum().real - tr) <= 1e-9 * (1 + abs(tr))
        assert abs(ev.sum().imag) <= 1e-9 * (1 + abs(tr))
        det = determinant(a)
        assert abs(np.prod(ev).real - det) <= 1e-8 * (1 + abs(det))


def test_eig_rejects_nonfinite_and_nonsquare():
    with pytest.raises(ValueError):
        eig_all(np.array([[1.0, np.nan], [0.0, 1.0]]))
    with pytest.raises(ValueError):
        eig_all(np.ones((2, 3)))


def test_eigen_triple_rotation_pair():
    t = eigen_triple([[1.0, 2.0], [-2.0, 1.0]], 1 + 2j)
    assert abs(t.value - (1 + 2j)) < 1e-12
    r = 1 / math.sqrt(2)
    assert np.allclose(t.right, [r, r * 1j], atol=1e-10)
    assert np.allclose(t.left, np.conj(t.right), atol=1e-10)
    assert abs(t.pairing - 1.0) < 1e-10


def test_eigen_triple_diagonal_real_path():
    t = eigen_triple(np.diag([5.0, 7.0]), 7.0)
    assert abs(t.value - 7.0) < 1e-12
    assert not np.iscomplexobj(t.right) and not np.iscomplexobj(t.left)
    assert np.allclose(t.right, [0.0, 1.0], atol=1e-10)
    assert np.allclose(t.left, [0.0, 1.0], atol=1e-10)
    assert abs(t.pairing - 1.0) < 1e-10


def test_eigen_triple_cross_checks_eig_all():
    rng = np.random.default_rng(23)
    for _ in range(10):
        a = rng.standard_normal((5, 5))
        for v in eig_all(a):
            t = eigen_triple(a, complex(v))
            assert abs(t.value - v) <= 1e-10
            # residuals of both sides against the refined eigenvalue
            assert np.linalg.norm(a @ t.right - t.value * t.right) <= 1e-10 * np.linalg.norm(a)
            assert np.linalg.norm(a.T @ t.left - t.value * t.left) <= 1e-10 * np.linalg.norm(a)


def test_eigen_triple_real_eigenvalue_gives_real_vectors():
    rng = np.random.default_rng(2)
    a = rng.standard_normal((4, 4))
    a = a + a.T  # symmetric: all eigenvalues real
    for v in eig_all(a):
        t = eigen_triple(a, complex(v))
        assert t.value.imag == 0.0
        assert not np.iscomplexobj(t.right)


def test_eigen_triple_near_defective_raises():
    a = np.array([[1.0, 1.0], [0.0, 1.0 + 1e-12]])
    with pytest.raises(IllConditioned):
        eigen_triple(a, 1.0)


def test_eigen_triple_stalls_between_eigenvalues():
    # shift equidistant from both eigenvalues: inverse iteration cannot settle
    with pytest.raises(NonConvergence):
        eigen_triple(np.diag([1.0, 2.0]), 1.5)


def test_solve_identity():
    assert np.allclose(solve_linear(np.eye(3), [1.0, 2.0, 3.0]), [1.0, 2.0, 3.0])


def test_solve_diagonal():
    x = solve_linear([[2.0, 0.0], [0.0, 4.0]], [2.0, 8.0])
    assert np.allclose(x, [1.0, 2.0], atol=1e-14)


def test_solve_residual_random():
    rng = np.random.default_rng(3)
    for _ in range(50):
        a = rng.standard_normal((6, 6)) + 3 * np.eye(6)
        b = rng.standard_normal(6)
        x = solve_linear(a, b)
        assert np.linalg.norm(a @ x - b) <= 1e-12 * np.linalg.norm(b)


def test_solve_singular_raises():
    with pytest.raises(SingularSystem):
        solve_linear([[1.0, 2.0], [2.0, 4.0]], [1.0, 1.0])
    with pytest.raises(SingularSystem):
        solve_linear(np.zeros((2, 2)), [1.0, 1.0])


def test_determinant_matches_numpy_on_randoms():
    rng = np.random.default_rng(9)
    for _ in range(40):
        n = int(rng.integers(1, 8))
        a = rng.standard_normal((n, n))
        assert abs(determinant(a) - np.linalg.det(a)) <= 1e-10 * (1 + abs(np.linalg.det(a)))
    assert determinant([[1.0, 2.0], [2.0, 4.0]]) == 0.0
