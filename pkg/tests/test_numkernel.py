import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fraclmi.errors import NotHermitianError, SingularMatrixError
from fraclmi.numkernel import (herm_eig, is_hermitian, lambda_max, lin_solve, realify,
                               sigma_max)

from conftest import random_hermitian


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 8), st.integers(0, 2**32 - 1))
def test_herm_eig_matches_reference_and_reconstructs(n, seed):
    H = random_hermitian(np.random.default_rng(seed), n)
    w, Q = herm_eig(H)
    assert np.all(np.diff(w) >= 0)
    np.testing.assert_allclose(w, np.linalg.eigvalsh(H), atol=1e-12 * (1 + np.abs(w).max()))
    np.testing.assert_allclose(Q.conj().T @ Q, np.eye(n), atol=1e-12)
    np.testing.assert_allclose(Q @ np.diag(w) @ Q.conj().T, H, atol=1e-12 * n)


def test_herm_eig_rejects_non_hermitian():
    with pytest.raises(NotHermitianError):
        herm_eig(np.array([[1.0, 2.0], [0.0, 1.0]]))


def test_herm_eig_empty():
    w, Q = herm_eig(np.zeros((0, 0)))
    assert w.shape == (0,) and Q.shape == (0, 0)


def test_lambda_max_of_identity_shift():
    assert lambda_max(np.eye(3) * -2.5) == pytest.approx(-2.5)


def test_sigma_max_against_2norm():
    rng = np.random.default_rng(1)
    M = rng.standard_normal((4, 3)) + 1j * rng.standard_normal((4, 3))
    assert sigma_max(M) == pytest.approx(np.linalg.norm(M, 2), rel=1e-13)
    assert sigma_max(np.zeros((0, 2))) == 0.0


def test_lin_solve_solves_and_flags_singular():
    rng = np.random.default_rng(2)
    A = rng.standard_normal((4, 4)) + 4 * np.eye(4)
    b = rng.standard_normal((4, 2))
    np.testing.assert_allclose(A @ lin_solve(A, b), b, atol=1e-12)
    with pytest.raises(SingularMatrixError):
        lin_solve(np.array([[1.0, 2.0], [2.0, 4.0]]), np.ones(2))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_realify_is_real_symmetric_with_doubled_spectrum(n, seed):
    H = random_hermitian(np.random.default_rng(seed), n)
    R = realify(H)
    assert R.dtype.kind == "f" and R.shape == (2 * n, 2 * n)
    np.testing.assert_array_equal(R, R.T)
    doubled = np.sort(np.repeat(np.linalg.eigvalsh(H), 2))
    np.testing.assert_allclose(np.linalg.eigvalsh(R), doubled, atol=1e-12 * (1 + n))


def test_realify_quadratic_form():
    # x* H x == v^T realify(H) v with v = [Re x; -Im x] for this block layout
    rng = np.random.default_rng(3)
    H = random_hermitian(rng, 5)
    x = rng.standard_normal(5) + 1j * rng.standard_normal(5)
    xr = np.concatenate([x.real, -x.imag])
    assert (x.conj() @ H @ x).real == pytest.approx(xr @ realify(H) @ xr, rel=1e-12)


def test_is_hermitian_tolerance():
    H = np.array([[1.0, 1 + 1j], [1 - 1j, 2.0]])
    assert is_hermitian(H)
    assert not is_hermitian(H + np.array([[0, 1e-6], [0, 0]]))
