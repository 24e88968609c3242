"""LMI builders for finite-frequency L-infinity and H-infinity bounds.

Two equivalent views are kept side by side:

* the generic form ``N* (Delta (x) U + Sigma (x) V) N + Pi`` with the system
  pencil ``N = [[A, B], [I, 0]]`` and ``Pi`` built from ``C, D`` and
  ``delta**2``;
* the specialized 3x3-block forms, linear in ``delta``, obtained after a
  Schur complement on ``[C D]``. These are the canonical LMIs handed to the
  feasibility engine.

The specialized form at ``(U, V, delta)`` is negative definite iff the
2x2 pre-Schur form at ``(delta*U, delta*V, delta)`` is.
"""

from dataclasses import dataclass

import numpy as np

from .curves import FrequencyRange, j_power
from .errors import DimensionError, InvalidInput
from .numkernel import as_matrix, realify
from .sdp import HermitianAffineMap

__all__ = ["SystemPencil", "LmiProblem", "system_pencil", "build_pi",
           "assemble_generic", "generic_matrix", "linf_matrix", "linf_pre_schur",
           "build_linf_lmi", "hinf_region", "hinf_kernel", "hinf_matrix",
           "hinf_pre_schur", "hinf_generic", "build_hinf_lmi", "realify"]


def _sym(X):
    return X + X.conj().T


@dataclass(frozen=True)
class SystemPencil:
    N: np.ndarray
    n: int
    m: int


def system_pencil(sys):
    n, m = sys.n, sys.m
    N = np.block([[sys.A, sys.B], [np.eye(n), np.zeros((n, m))]])
    return SystemPencil(N, n, m)


def build_pi(C, D, delta):
    """``[[C'C, C'D], [D'C, D'D - delta^2 I]]``."""
    if not delta > 0:
        raise InvalidInput(f"performance bound must be positive, got {delta}")
    C = as_matrix(C, dtype=float)
    D = as_matrix(D, dtype=float)
    if C.shape[0] != D.shape[0]:
        raise DimensionError(f"C has {C.shape[0]} rows but D has {D.shape[0]}")
    m = D.shape[1]
    return np.block([[C.T @ C, C.T @ D],
                     [D.T @ C, D.T @ D - delta ** 2 * np.eye(m)]]).astype(complex)


def generic_matrix(sys, pair, Pi, U, V=None):
    """``N* (Delta (x) U + Sigma (x) V) N + Pi``."""
    N = system_pencil(sys).N
    if Pi.shape != (N.shape[1], N.shape[1]):
        raise DimensionError(f"Pi must be {N.shape[1]}x{N.shape[1]}, got {Pi.shape}")
    M = np.kron(pair.Delta, U)
    if V is not None:
        M = M + np.kron(pair.Sigma, V)
    return N.conj().T @ M @ N + Pi


@dataclass(frozen=True)
class LmiProblem:
    """An LMI ``map(x) < 0`` plus the role of each unknown.

    ``theorem`` names the condition (``linf-low``, ``linf-middle``,
    ``linf-high``, ``linf-entire``, ``generic``, ``hinf-le1``, ``hinf-gt1``).
    """

    map: HermitianAffineMap
    theorem: str
    delta: float
    nu: float
    frange: FrequencyRange = None

    @property
    def variables(self):
        return {b.name: ("positive" if b.positive else "free") for b in self.map.blocks}

    def matrix(self, **mats):
        return self.map(self.map.pack(**mats))


def assemble_generic(sys, pair, Pi):
    """Affine map ``(U, V) -> N* (Delta (x) U + Sigma (x) V) N + Pi`` with ``V > 0``.

    For a vanishing ``Sigma`` the ``V`` unknown is dropped.
    """
    n = sys.n
    if np.allclose(pair.Sigma, 0.0):
        fn = lambda U: generic_matrix(sys, pair, Pi, U)
        variables = [("U", n, False)]
    else:
        fn = lambda U, V: generic_matrix(sys, pair, Pi, U, V)
        variables = [("U", n, False), ("V", n, True)]
    return LmiProblem(HermitianAffineMap.from_function(fn, variables), "generic",
                      float("nan"), pair.nu, pair.frange)


def _linf_blocks(sys, frange, U, V):
    """``(M11, Y, M22)`` of the 2x2 core shared by the pre- and post-Schur forms."""
    A, B, nu = sys.A, sys.B, sys.nu
    e = np.exp(1j * sys.phi)
    kind = frange.kind
    if kind == "low":
        X = e * A.T @ U
        Y = -B.T @ V @ A + e * B.T @ U
        M11 = _sym(X) - A.T @ V @ A + frange.omega_l ** (2 * nu) * V
        M22 = -B.T @ V @ B
    elif kind == "high":
        X = e * A.T @ U
        Y = B.T @ V @ A + e * B.T @ U
        M11 = _sym(X) + A.T @ V @ A - frange.omega_h ** (2 * nu) * V
        M22 = B.T @ V @ B
    elif kind == "middle":
        w1, w2 = frange.omega_1 ** nu, frange.omega_2 ** nu
        wc = j_power(nu) * (w1 + w2) / 2.0
        P = e * U + wc * V
        X = A.T @ P
        Y = -B.T @ V @ A + B.T @ P
        M11 = _sym(X) - A.T @ V @ A - w1 * w2 * V
        M22 = -B.T @ V @ B
    elif kind == "entire":
        X = e * A.T @ U
        Y = e * B.T @ U
        M11 = _sym(X)
        M22 = np.zeros((sys.m, sys.m))
    else:
        raise InvalidInput(f"unknown frequency range kind {kind!r}")
    return M11, Y, M22


def linf_matrix(sys, frange, delta, U, V=None):
    """Specialized L-infinity LMI matrix (3x3 blocks, linear in ``delta``)."""
    if V is None:
        V = np.zeros_like(U)
    M11, Y, M22 = _linf_blocks(sys, frange, U, V)
    m, p = sys.m, sys.p
    return np.block([
        [M11, Y.conj().T, sys.C.T],
        [Y, -delta * np.eye(m) + M22, sys.D.T],
        [sys.C, sys.D, -delta * np.eye(p)],
    ])


def linf_pre_schur(sys, frange, delta, U, V=None):
    """The 2x2 form with ``delta**2`` before the Schur complement on ``[C D]``."""
    if V is None:
        V = np.zeros_like(U)
    M11, Y, M22 = _linf_blocks(sys, frange, U, V)
    CD = np.hstack([sys.C, sys.D])
    core = np.block([[M11, Y.conj().T], [Y, -delta ** 2 * np.eye(sys.m) + M22]])
    return core + CD.T @ CD


def build_linf_lmi(sys, frange, delta):
    """L-infinity bound ``delta`` over a frequency range, as an LMI in ``(U, V)``.

    ``U`` is free Hermitian and ``V`` Hermitian positive definite; the
    entire-range condition has no ``V``.
    """
    if not delta > 0:
        raise InvalidInput(f"performance bound must be positive, got {delta}")
    if not isinstance(frange, FrequencyRange):
        frange = FrequencyRange.from_dict(frange)
    n = sys.n
    if n < 1:
        raise DimensionError("LMI analysis needs at least one state")
    if frange.kind == "entire":
        fn = lambda U: linf_matrix(sys, frange, delta, U)
        variables = [("U", n, False)]
    else:
        fn = lambda U, V: linf_matrix(sys, frange, delta, U, V)
        variables = [("U", n, False), ("V", n, True)]
    return LmiProblem(HermitianAffineMap.from_function(fn, variables),
                      f"linf-{frange.kind}", float(delta), sys.nu, frange)


def hinf_region(nu):
    """Line pair ``(Delta, Sigma)`` bounding the image of the closed right half-plane.

    For ``nu <= 1`` the region is the sector ``|arg theta| <= nu*pi/2``; for
    ``nu > 1`` it is its lower half, ``-nu*pi/2 <= arg theta <= 0``. A point
    belongs to the region when both ``rho(theta, Delta)`` and
    ``rho(theta, Sigma)`` are nonnegative.
    """
    if not 0.0 < nu < 2.0:
        raise InvalidInput(f"fractional order must lie in (0, 2), got {nu}")
    s, c = np.sin(0.5 * np.pi * nu), np.cos(0.5 * np.pi * nu)
    a = s + 1j * c
    b = s - 1j * c if nu <= 1.0 else 1j * c
    Delta = np.array([[0.0, a], [np.conj(a), 0.0]])
    Sigma = np.array([[0.0, b], [np.conj(b), 0.0]])
    return Delta, Sigma


def hinf_kernel(nu):
    """2x2 multiplier of ``U`` in the generic H-infinity condition.

    ``Delta + Sigma`` for ``nu <= 1``; ``T0* (Delta + Sigma^T) T0`` with
    ``T0 = diag(exp(j pi/4), exp(-j pi/4))`` for ``nu > 1``.
    """
    Delta, Sigma = hinf_region(nu)
    if nu <= 1.0:
        return Delta + Sigma
    T0 = np.diag([np.exp(0.25j * np.pi), np.exp(-0.25j * np.pi)])
    return T0.conj().T @ (Delta + Sigma.T) @ T0


def _hinf_blocks(sys, U):
    A, B, nu = sys.A, sys.B, sys.nu
    s = np.sin(0.5 * np.pi * nu)
    if nu <= 1.0:
        return _sym(A.T @ U) * s, U @ B * s
    return _sym(1j * U @ A) * s, 1j * U @ B * s


def hinf_matrix(sys, delta, U):
    """Specialized H-infinity LMI matrix (3x3 blocks, linear in ``delta``)."""
    M11, M12 = _hinf_blocks(sys, U)
    m, p = sys.m, sys.p
    return np.block([
        [M11, M12, sys.C.T],
        [M12.conj().T, -delta * np.eye(m), sys.D.T],
        [sys.C, sys.D, -delta * np.eye(p)],
    ])


def hinf_pre_schur(sys, delta, U):
    M11, M12 = _hinf_blocks(sys, U)
    CD = np.hstack([sys.C, sys.D])
    core = np.block([[M11, M12], [M12.conj().T, -delta ** 2 * np.eye(sys.m)]])
    return core + CD.T @ CD


def hinf_generic(sys, delta, U):
    """``N* (K (x) U) N + Pi`` with ``K`` from :func:`hinf_kernel`."""
    N = system_pencil(sys).N
    return N.conj().T @ np.kron(hinf_kernel(sys.nu), U) @ N + build_pi(sys.C, sys.D, delta)


def build_hinf_lmi(sys, delta):
    """H-infinity bound ``delta`` as an LMI in Hermitian ``U > 0``."""
    if not delta > 0:
        raise InvalidInput(f"performance bound must be positive, got {delta}")
    if not 0.0 < sys.nu < 2.0:
        raise InvalidInput(f"fractional order must lie in (0, 2), got {sys.nu}")
    if sys.n < 1:
        raise DimensionError("LMI analysis needs at least one state")
    fn = lambda U: hinf_matrix(sys, delta, U)
    tag = "hinf-le1" if sys.nu <= 1.0 else "hinf-gt1"
    return LmiProblem(HermitianAffineMap.from_function(fn, [("U", sys.n, True)]),
                      tag, float(delta), sys.nu, FrequencyRange.entire())
