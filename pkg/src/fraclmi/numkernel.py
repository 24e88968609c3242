"""Dense complex linear algebra used throughout the package.

Thin, validated wrappers around LAPACK. ``herm_eig`` uses the ``?heev``
driver (Householder tridiagonalization followed by implicit-shift QR),
``lin_solve`` uses partially pivoted LU.
"""

import warnings

import numpy as np
import scipy.linalg as sla

from .errors import (ConvergenceError, DimensionError, NotHermitianError,
                     SingularMatrixError)

__all__ = ["as_matrix", "hermitian_defect", "is_hermitian", "herm",
           "herm_eig", "eigvalsh", "lambda_max", "sigma_max", "lin_solve", "realify"]

HERMITIAN_RTOL = 1e-12
SINGULAR_PIVOT_RTOL = 1e-13


def as_matrix(M, dtype=complex):
    """Coerce scalars, vectors and nested lists to a 2-D array."""
    M = np.asarray(M, dtype=dtype)
    if M.ndim == 0:
        return M.reshape(1, 1)
    if M.ndim == 1:
        return M.reshape(-1, 1)
    if M.ndim != 2:
        raise DimensionError(f"expected a matrix, got an array with ndim={M.ndim}")
    return M


def hermitian_defect(H):
    """Largest entry of ``|H - H*|``."""
    H = as_matrix(H, dtype=None)
    if H.size == 0:
        return 0.0
    return float(np.max(np.abs(H - H.conj().T)))


def is_hermitian(H, rtol=HERMITIAN_RTOL):
    H = as_matrix(H, dtype=None)
    if H.shape[0] != H.shape[1]:
        return False
    scale = 1.0 + (float(np.max(np.abs(H))) if H.size else 0.0)
    return hermitian_defect(H) <= rtol * scale


def herm(H):
    """Hermitian part ``(H + H*) / 2``."""
    H = as_matrix(H, dtype=None)
    return 0.5 * (H + H.conj().T)


def _check_hermitian(H):
    H = as_matrix(H, dtype=None)
    if not np.issubdtype(H.dtype, np.inexact):
        H = H.astype(float)
    if H.shape[0] != H.shape[1]:
        raise DimensionError(f"Hermitian matrix must be square, got {H.shape}")
    if not is_hermitian(H):
        raise NotHermitianError(
            f"matrix is not Hermitian (defect {hermitian_defect(H):.3e})")
    return H


def herm_eig(H):
    """Eigendecomposition of a Hermitian matrix.

    Parameters
    ----------
    H : array_like, shape (n, n)
        Hermitian to within ``1e-12 * (1 + max|H|)`` elementwise.

    Returns
    -------
    eigenvalues : ndarray, shape (n,)
        Real, ascending.
    eigenvectors : ndarray, shape (n, n)
        Unitary; column ``k`` belongs to ``eigenvalues[k]``.

    Raises
    ------
    NotHermitianError
        If ``H`` is not Hermitian within tolerance.
    ConvergenceError
        If the QR iteration does not converge.
    """
    H = _check_hermitian(H)
    n = H.shape[0]
    if n == 0:
        return np.zeros(0), np.zeros((0, 0), dtype=complex)
    if not np.all(np.isfinite(H)):
        raise ConvergenceError("non-finite entries in Hermitian matrix")
    try:
        w, Q = sla.eigh(herm(H), driver="ev", check_finite=False)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"Hermitian eigensolver did not converge: {exc}") from exc
    return w, Q


def eigvalsh(H):
    """Ascending eigenvalues of a Hermitian matrix (no eigenvectors)."""
    H = _check_hermitian(H)
    if H.shape[0] == 0:
        return np.zeros(0)
    if not np.all(np.isfinite(H)):
        raise ConvergenceError("non-finite entries in Hermitian matrix")
    try:
        return sla.eigh(herm(H), eigvals_only=True, driver="ev", check_finite=False)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"Hermitian eigensolver did not converge: {exc}") from exc


def lambda_max(H):
    w = eigvalsh(H)
    return float(w[-1]) if w.size else -np.inf


def sigma_max(M):
    """Largest singular value; 0 for empty or zero matrices."""
    M = as_matrix(M)
    if M.size == 0:
        return 0.0
    return float(sla.svd(M, compute_uv=False, check_finite=False)[0])


def lin_solve(A, B):
    """Solve ``A X = B`` by partially pivoted LU.

    Raises
    ------
    SingularMatrixError
        If a pivot falls below ``1e-13 * max|A|``.
    """
    A = as_matrix(A)
    B = as_matrix(B)
    n = A.shape[0]
    if A.shape[1] != n:
        raise DimensionError(f"coefficient matrix must be square, got {A.shape}")
    if B.shape[0] != n:
        raise DimensionError(f"right-hand side has {B.shape[0]} rows, expected {n}")
    if n == 0:
        return np.zeros((0, B.shape[1]), dtype=np.result_type(A, B))
    scale = float(np.max(np.abs(A)))
    if scale == 0.0 or not np.isfinite(scale):
        raise SingularMatrixError("coefficient matrix is zero or non-finite")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", sla.LinAlgWarning)
        lu, piv = sla.lu_factor(A, check_finite=False)
    if float(np.min(np.abs(np.diag(lu)))) < SINGULAR_PIVOT_RTOL * scale:
        raise SingularMatrixError("coefficient matrix is singular to working tolerance")
    return sla.lu_solve((lu, piv), B, check_finite=False)


def realify(H):
    """``[[Re H, Im H], [Im H^T, Re H]]``; same spectrum as ``H``, each eigenvalue doubled."""
    H = as_matrix(H)
    if H.shape[0] != H.shape[1] or not is_hermitian(H):
        raise NotHermitianError("realify requires a square Hermitian matrix")
    R, I = H.real, H.imag
    return np.block([[R, I], [I.T, R]])
