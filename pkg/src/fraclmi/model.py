"""Fractional-order state-space model and its frequency response."""

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, InvalidInput, ResonanceError, SingularMatrixError
from .numkernel import lin_solve

__all__ = ["FosModel", "StabilityReport", "principal_power", "eval_transfer",
           "is_stable", "transfer_at", "STABILITY_MARGIN"]

STABILITY_MARGIN = 1e-9


def _real_matrix(M, name):
    try:
        M = np.asarray(M, dtype=float)
    except (TypeError, ValueError) as exc:
        raise InvalidInput(f"{name} must be a real numeric array") from exc
    if M.ndim == 0:
        M = M.reshape(1, 1)
    elif M.ndim == 1:
        M = M.reshape(-1, 1) if name == "B" else M.reshape(1, -1)
    if M.ndim != 2:
        raise DimensionError(f"{name} must be two-dimensional")
    if not np.all(np.isfinite(M)):
        raise InvalidInput(f"{name} has non-finite entries")
    return M


@dataclass(frozen=True)
class FosModel:
    """State-space data ``D^nu x = A x + B u``, ``y = C x + D u``.

    One-dimensional ``B`` is read as a column, one-dimensional ``C`` as a row.
    """

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray
    nu: float

    def __post_init__(self):
        A = _real_matrix(self.A, "A")
        B = _real_matrix(self.B, "B")
        C = _real_matrix(self.C, "C")
        D = _real_matrix(self.D, "D")
        n = A.shape[0]
        if A.shape != (n, n):
            raise DimensionError(f"A must be square, got {A.shape}")
        if B.shape[0] != n:
            raise DimensionError(f"B must have {n} rows, got {B.shape}")
        if C.shape[1] != n:
            raise DimensionError(f"C must have {n} columns, got {C.shape}")
        if D.shape != (C.shape[0], B.shape[1]):
            raise DimensionError(
                f"D must be {C.shape[0]}x{B.shape[1]}, got {D.shape}")
        nu = float(self.nu)
        if not 0.0 < nu < 2.0:
            raise InvalidInput(f"fractional order must lie in (0, 2), got {nu}")
        for name, M in zip("ABCD", (A, B, C, D)):
            M.setflags(write=False)
            object.__setattr__(self, name, M)
        object.__setattr__(self, "nu", nu)

    @property
    def n(self):
        return self.A.shape[0]

    @property
    def m(self):
        return self.B.shape[1]

    @property
    def p(self):
        return self.C.shape[0]

    @property
    def phi(self):
        """Rotation angle ``(pi/2)(nu - 1)``."""
        return 0.5 * np.pi * (self.nu - 1.0)


def principal_power(omega, nu):
    """``(j omega)^nu`` on the principal branch: ``omega^nu * exp(j nu pi/2)``."""
    omega = float(omega)
    if omega < 0.0 or np.isnan(omega):
        raise InvalidInput(f"frequency must be nonnegative, got {omega}")
    if not 0.0 < nu < 2.0:
        raise InvalidInput(f"fractional order must lie in (0, 2), got {nu}")
    return omega ** nu * np.exp(0.5j * np.pi * nu)


def transfer_at(sys, theta):
    """``C (theta I - A)^{-1} B + D`` at an arbitrary complex ``theta``."""
    n = sys.n
    if n == 0:
        return sys.D.astype(complex)
    try:
        X = lin_solve(theta * np.eye(n) - sys.A, sys.B.astype(complex))
    except SingularMatrixError as exc:
        raise ResonanceError(f"theta={theta!r} is an eigenvalue of A") from exc
    return sys.C @ X + sys.D


def eval_transfer(sys, omega):
    """Frequency response ``C (theta I - A)^{-1} B + D`` with ``theta = (j omega)^nu``.

    Raises
    ------
    ResonanceError
        If ``theta I - A`` is singular to solver tolerance.
    """
    return transfer_at(sys, principal_power(omega, sys.nu))


@dataclass(frozen=True)
class StabilityReport:
    stable: bool
    eigenvalues: tuple
    arguments: tuple
    threshold: float
    margin: float = field(default=np.inf)

    def as_dict(self):
        return {
            "stable": self.stable,
            "eigenvalues": [[float(z.real), float(z.imag)] for z in self.eigenvalues],
            "arguments": [float(a) for a in self.arguments],
            "threshold": self.threshold,
            "margin": self.margin,
        }


def is_stable(sys):
    """Classify stability from the spectrum of ``A``.

    Stable iff every eigenvalue satisfies ``|arg(lambda)| > nu*pi/2`` with a
    margin of ``1e-9``. ``arg`` is taken in ``(-pi, pi]``; an eigenvalue at the
    origin counts as unstable.
    """
    if sys.n == 0:
        return StabilityReport(True, (), (), 0.5 * np.pi * sys.nu)
    lam = np.linalg.eigvals(sys.A)
    lam = lam[np.lexsort((lam.imag, lam.real))]
    args = np.angle(lam)
    # np.angle returns -pi for negative reals with a -0.0 imaginary part
    args = np.where(args <= -np.pi, np.pi, args)
    threshold = 0.5 * np.pi * sys.nu
    gaps = np.where(np.abs(lam) == 0.0, -np.inf, np.abs(args) - threshold)
    margin = float(np.min(gaps))
    return StabilityReport(
        stable=bool(margin > STABILITY_MARGIN),
        eigenvalues=tuple(complex(z) for z in lam),
        arguments=tuple(float(a) for a in args),
        threshold=threshold,
        margin=margin,
    )
