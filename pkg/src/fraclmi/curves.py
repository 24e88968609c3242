"""Frequency ranges encoded as curves ``{theta : rho(theta, Delta) = 0, rho(theta, Sigma) >= 0}``.

A pair of 2x2 Hermitian matrices ``(Delta, Sigma)`` carves a curve out of the
complex plane. With ``Delta`` fixed to the rotated form ``Delta0`` below, the
curve is the image of the positive imaginary axis under ``s -> s^nu`` and
``Sigma`` selects a frequency interval on it.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, InvalidInput
from .numkernel import as_matrix, herm_eig, is_hermitian, lin_solve

__all__ = ["RANGE_KINDS", "FrequencyRange", "CurvePair", "CurveClass",
           "CongruenceFactorization", "delta0", "sigma0", "rho", "make_curve",
           "curve_contains", "classify_curve", "congruence_factorize",
           "j_power"]

RANGE_KINDS = ("low", "middle", "high", "entire")


def j_power(nu):
    """``j^nu`` on the principal branch."""
    return np.exp(0.5j * np.pi * nu)


def delta0(phi):
    return np.array([[0.0, np.exp(1j * phi)], [np.exp(-1j * phi), 0.0]])


def sigma0(alpha, beta, gamma, phi):
    return np.array([[alpha, beta * np.exp(1j * phi)],
                     [beta * np.exp(-1j * phi), gamma]], dtype=complex)


@dataclass(frozen=True)
class FrequencyRange:
    """A set of nonnegative frequencies (rad/s).

    ``kind`` is one of ``low`` (``omega <= omega_l``), ``middle``
    (``omega_1 <= omega <= omega_2``), ``high`` (``omega >= omega_h``) or
    ``entire``.
    """

    kind: str
    omega_l: float = None
    omega_1: float = None
    omega_2: float = None
    omega_h: float = None

    def __post_init__(self):
        required = {"low": ("omega_l",), "middle": ("omega_1", "omega_2"),
                    "high": ("omega_h",), "entire": ()}
        if self.kind not in required:
            raise InvalidInput(f"unknown frequency range kind {self.kind!r}")
        for name in ("omega_l", "omega_1", "omega_2", "omega_h"):
            value = getattr(self, name)
            if name not in required[self.kind]:
                if value is not None:
                    raise InvalidInput(f"{name} is not a parameter of a {self.kind} range")
                continue
            if value is None:
                raise InvalidInput(f"{self.kind} range requires {name}")
            value = float(value)
            if not (value >= 0.0 and math.isfinite(value)):
                raise InvalidInput(f"{name} must be a finite nonnegative frequency")
            object.__setattr__(self, name, value)
        if self.kind == "middle" and self.omega_1 > self.omega_2:
            raise InvalidInput("middle range requires omega_1 <= omega_2")

    @classmethod
    def low(cls, omega_l):
        return cls("low", omega_l=omega_l)

    @classmethod
    def middle(cls, omega_1, omega_2):
        return cls("middle", omega_1=omega_1, omega_2=omega_2)

    @classmethod
    def high(cls, omega_h):
        return cls("high", omega_h=omega_h)

    @classmethod
    def entire(cls):
        return cls("entire")

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        kind = d.pop("kind", None)
        unknown = set(d) - {"omega_l", "omega_1", "omega_2", "omega_h"}
        if unknown:
            raise InvalidInput(f"unknown frequency range fields: {sorted(unknown)}")
        return cls(kind, **d)

    def as_dict(self):
        out = {"kind": self.kind}
        for name in ("omega_l", "omega_1", "omega_2", "omega_h"):
            if getattr(self, name) is not None:
                out[name] = getattr(self, name)
        return out

    def bounds(self):
        """``(lo, hi)`` with ``hi = inf`` for unbounded ranges."""
        return {
            "low": (0.0, self.omega_l),
            "middle": (self.omega_1, self.omega_2),
            "high": (self.omega_h, math.inf),
            "entire": (0.0, math.inf),
        }[self.kind]

    def contains(self, omega):
        lo, hi = self.bounds()
        return lo <= omega <= hi

    @property
    def bounded(self):
        return math.isfinite(self.bounds()[1])


@dataclass(frozen=True)
class CurvePair:
    Delta: np.ndarray
    Sigma: np.ndarray
    nu: float
    frange: FrequencyRange = None

    def __post_init__(self):
        for name in ("Delta", "Sigma"):
            M = as_matrix(getattr(self, name))
            if M.shape != (2, 2):
                raise DimensionError(f"{name} must be 2x2, got {M.shape}")
            if not is_hermitian(M):
                raise InvalidInput(f"{name} must be Hermitian")
            M = M.copy()
            M.setflags(write=False)
            object.__setattr__(self, name, M)
        object.__setattr__(self, "nu", float(self.nu))

    @property
    def range_kind(self):
        return self.frange.kind if self.frange is not None else None

    @property
    def phi(self):
        return 0.5 * np.pi * (self.nu - 1.0)


@dataclass(frozen=True)
class CurveClass:
    is_curve: bool
    bounded: bool


@dataclass(frozen=True)
class CongruenceFactorization:
    """``Delta = T* Delta0 T`` and ``Sigma = T* Sigma0 T``."""

    T: np.ndarray
    alpha: float
    beta: float
    gamma: float
    phi: float
    Z: np.ndarray = field(repr=False, default=None)

    @property
    def Delta0(self):
        return delta0(self.phi)

    @property
    def Sigma0(self):
        return sigma0(self.alpha, self.beta, self.gamma, self.phi)

    def rebuild(self):
        Th = self.T.conj().T
        return Th @ self.Delta0 @ self.T, Th @ self.Sigma0 @ self.T


def rho(A, B):
    """``[A; I]* B [A; I]`` for ``A`` of shape (n, m) and ``B`` of shape (n+m, n+m)."""
    A = as_matrix(A)
    B = as_matrix(B)
    n, m = A.shape
    if B.shape != (n + m, n + m):
        raise DimensionError(f"form must be {(n + m, n + m)} for a {A.shape} argument, got {B.shape}")
    S = np.vstack([A, np.eye(m)])
    return S.conj().T @ B @ S


def make_curve(frange, nu):
    """Curve pair for one of the standard frequency ranges."""
    if not isinstance(frange, FrequencyRange):
        frange = FrequencyRange.from_dict(frange)
    if not 0.0 < nu < 2.0:
        raise InvalidInput(f"fractional order must lie in (0, 2), got {nu}")
    phi = 0.5 * np.pi * (nu - 1.0)
    kind = frange.kind
    if kind == "low":
        Sigma = np.diag([-1.0, frange.omega_l ** (2 * nu)]).astype(complex)
    elif kind == "middle":
        w1, w2 = frange.omega_1 ** nu, frange.omega_2 ** nu
        wc = j_power(nu) * (w1 + w2) / 2.0
        Sigma = np.array([[-1.0, wc], [np.conj(wc), -w1 * w2]])
    elif kind == "high":
        Sigma = np.diag([1.0, -frange.omega_h ** (2 * nu)]).astype(complex)
    else:
        Sigma = np.zeros((2, 2), dtype=complex)
    return CurvePair(delta0(phi), Sigma, nu, frange)


def curve_contains(pair, theta, tol=1e-10):
    """Membership of ``theta`` in the curve, with tolerances scaled by ``1 + |theta|^2``."""
    theta = complex(theta)
    scale = tol * (1.0 + abs(theta) ** 2)
    on_line = abs(rho(theta, pair.Delta)[0, 0]) <= scale
    return bool(on_line and rho(theta, pair.Sigma)[0, 0].real >= -scale)


def _zero_tol(M):
    return 1e-12 * (1.0 + float(np.max(np.abs(M))))


def classify_curve(pair):
    if np.linalg.det(pair.Delta).real >= 0.0:
        is_curve = False
    else:
        f = congruence_factorize(pair)
        tol = _zero_tol(f.Sigma0)
        a, g = f.alpha, f.gamma
        is_curve = (-tol <= a <= g) or (a < -tol and g > tol)
    unbounded = (abs(pair.Delta[0, 0]) <= _zero_tol(pair.Delta)
                 and pair.Sigma[0, 0].real >= -_zero_tol(pair.Sigma))
    return CurveClass(is_curve=bool(is_curve), bounded=not unbounded)


def congruence_factorize(pair):
    """Common congruence ``T`` bringing ``(Delta, Sigma)`` to canonical form.

    Raises
    ------
    InvalidInput
        If ``det(Delta) >= 0``.
    """
    Delta, Sigma, phi = pair.Delta, pair.Sigma, pair.phi
    if np.linalg.det(Delta).real >= 0.0:
        raise InvalidInput("congruence factorization requires det(Delta) < 0")
    D0 = delta0(phi)

    # Delta = K* Delta0 K from the two spectral decompositions
    lam, Qd = herm_eig(Delta)
    _, P = herm_eig(D0)
    K = P @ np.diag(np.sqrt(np.abs(lam))) @ Qd.conj().T
    Kinv = lin_solve(K, np.eye(2))
    Y = Kinv.conj().T @ Sigma @ Kinv

    c = Y[0, 1] * np.exp(-1j * phi)
    beta, y = c.real, c.imag
    Y0 = np.array([[Y[0, 0].real, y], [y, Y[1, 1].real]])
    ev, vecs = np.linalg.eigh(Y0)
    alpha, gamma = float(ev[0]), float(ev[1])
    Z = vecs.T.copy()
    if np.linalg.det(Z) < 0:
        Z[1] = -Z[1]
    if Z[0, 0] < 0 or (Z[0, 0] == 0 and Z[1, 0] < 0):
        Z = -Z

    Q = np.diag([1.0, 1j * np.exp(1j * phi)])
    L = Q.conj().T @ Z @ Q
    return CongruenceFactorization(L @ K, alpha, float(beta), gamma, phi, Z)
