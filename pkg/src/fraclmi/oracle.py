"""Frequency-sweep ground truth for the LMI verdicts.

Every value reported here is an exact evaluation of the frequency response
at some sampled frequency, so sweep peaks are certified lower bounds on the
range-restricted norm.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .curves import FrequencyRange, curve_contains
from .errors import InvalidInput, ResonanceError
from .model import eval_transfer, principal_power, transfer_at
from .numkernel import as_matrix, lambda_max, sigma_max

__all__ = ["GridSpec", "SweepResult", "sweep_linf", "sweep_curve", "fdi_value",
           "sample_frequencies", "check_fdi_sampled"]

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class GridSpec:
    points: int = 2000
    omega_min: float = 1e-4
    omega_max: float = 1e4
    refine_budget: int = 200
    refine_tol: float = 1e-10

    def __post_init__(self):
        if int(self.points) < 2:
            raise InvalidInput("frequency grid needs at least 2 points")
        if not 0.0 < self.omega_min < self.omega_max or not math.isfinite(self.omega_max):
            raise InvalidInput("grid bounds must satisfy 0 < omega_min < omega_max < inf")


@dataclass
class SweepResult:
    omegas: np.ndarray
    sigmas: np.ndarray
    peak_omega: float
    peak_sigma: float
    skipped: list = field(default_factory=list)

    @property
    def peak(self):
        return self.peak_omega, self.peak_sigma

    def as_dict(self):
        return {"peak_omega": self.peak_omega, "peak_sigma": self.peak_sigma,
                "points": int(len(self.omegas)), "skipped": list(self.skipped)}


def _sigma(sys, omega):
    return sigma_max(eval_transfer(sys, omega))


def sweep_linf(sys, frange=None, grid=None):
    """Largest singular value of the frequency response over a frequency range.

    A log-spaced grid over ``[omega_min, omega_max]`` intersected with the
    range (plus ``omega = 0`` when the range contains it) is refined by
    golden-section search around the grid maximum. The refined point is
    inserted into the returned grid, so ``peak`` is the argmax of
    ``sigmas``.

    Raises
    ------
    InvalidInput
        If the range does not meet the grid bounds.
    """
    frange = frange or FrequencyRange.entire()
    grid = grid or GridSpec()
    lo, hi = frange.bounds()
    a, b = max(lo, grid.omega_min), min(hi, grid.omega_max)
    if a > b:
        raise InvalidInput(
            f"frequency range [{lo}, {hi}] does not meet the grid [{grid.omega_min}, {grid.omega_max}]")
    omegas = np.geomspace(a, b, int(grid.points)) if a < b else np.array([a])
    if lo == 0.0:
        omegas = np.concatenate([[0.0], omegas])

    kept, sigmas, skipped = [], [], []
    for w in omegas:
        try:
            sigmas.append(_sigma(sys, w))
            kept.append(w)
        except ResonanceError:
            skipped.append(float(w))
    if not kept:
        raise InvalidInput("every grid frequency is a resonance")
    omegas, sigmas = np.array(kept), np.array(sigmas)

    i = int(np.argmax(sigmas))
    best_w, best_s = _refine(sys, omegas, sigmas, i, grid, skipped)
    if best_s > sigmas[i]:
        k = int(np.searchsorted(omegas, best_w))
        if k < len(omegas) and omegas[k] == best_w:
            sigmas[k] = best_s
        else:
            omegas = np.insert(omegas, k, best_w)
            sigmas = np.insert(sigmas, k, best_s)
    i = int(np.argmax(sigmas))
    return SweepResult(omegas, sigmas, float(omegas[i]), float(sigmas[i]), skipped)


def _refine(sys, omegas, sigmas, i, grid, skipped):
    """Golden-section maximization on the bracket around grid point ``i``."""
    best_w, best_s = float(omegas[i]), float(sigmas[i])
    if len(omegas) < 2:
        return best_w, best_s
    left = float(omegas[max(i - 1, 0)])
    right = float(omegas[min(i + 1, len(omegas) - 1)])
    use_log = left > 0.0
    to_w = math.exp if use_log else (lambda u: u)
    a, b = (math.log(left), math.log(right)) if use_log else (left, right)

    def f(u):
        nonlocal best_w, best_s
        w = to_w(u)
        try:
            s = _sigma(sys, w)
        except ResonanceError:
            skipped.append(w)
            return -math.inf
        if s > best_s:
            best_w, best_s = w, s
        return s

    c, d = b - _GOLDEN * (b - a), a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    evals = 2
    while evals < grid.refine_budget:
        if abs(to_w(b) - to_w(a)) <= grid.refine_tol * max(abs(to_w(b)), 1e-300):
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
        evals += 1
    return best_w, best_s


def sweep_curve(sys, pair, grid=None):
    """Grid sweep over every point of a curve, both branches of its line.

    ``rho(theta, Delta0) = 0`` is the whole line ``j^nu * W`` for real ``W``,
    so a curve may also contain points ``-(j omega)^nu``. Those are reported
    at negative "signed" frequencies ``-omega``. For ``nu != 1`` they are not
    frequency-response values, but an LMI built on the curve certifies them
    too, so the peak here bounds from below the smallest ``delta`` the LMI
    can certify.
    """
    grid = grid or GridSpec()
    base = np.geomspace(grid.omega_min, grid.omega_max, int(grid.points))
    base = np.concatenate([[0.0], base])
    signed, sigmas = [], []
    for sign in (-1.0, 1.0):
        for w in base:
            if sign < 0 and w == 0.0:
                continue
            theta = sign * principal_power(w, sys.nu)
            if not curve_contains(pair, theta):
                continue
            try:
                sigmas.append(sigma_max(transfer_at(sys, theta)))
            except ResonanceError:
                continue
            signed.append(sign * w)
    if not signed:
        raise InvalidInput("curve does not meet the frequency grid")
    order = np.argsort(signed)
    omegas, sigmas = np.array(signed)[order], np.array(sigmas)[order]
    i = int(np.argmax(sigmas))
    return SweepResult(omegas, sigmas, float(omegas[i]), float(sigmas[i]))


def fdi_value(sys, Pi, theta):
    """Largest eigenvalue of ``[H; I]* Pi [H; I]`` with ``H = (theta I - A)^{-1} B``.

    ``theta = inf`` evaluates the limit, the trailing block of ``Pi``.
    """
    Pi = as_matrix(Pi)
    n = sys.n
    if theta == math.inf:
        return lambda_max(Pi[n:, n:])
    zero = type(sys)(sys.A, sys.B, np.eye(n), np.zeros((n, sys.m)), sys.nu)
    H = transfer_at(zero, complex(theta))
    S = np.vstack([H, np.eye(sys.m)])
    return lambda_max(S.conj().T @ Pi @ S)


def sample_frequencies(frange, count, seed=0):
    """Seeded frequencies in a range: both endpoints plus uniform and log-uniform draws."""
    rng = np.random.default_rng(seed)
    lo, hi = frange.bounds()
    if math.isinf(hi):
        base = max(lo, 1e-4)
        draws = base * 10.0 ** rng.uniform(0.0, 8.0, size=max(count - 1, 0))
        return np.sort(np.concatenate([[lo], draws]))[:count]
    k_uniform = max(count - 2, 0) // 2
    k_log = max(count - 2 - k_uniform, 0)
    floor = max(lo, hi * 1e-8) if hi > 0 else 0.0
    uniform = rng.uniform(lo, hi, size=k_uniform)
    logs = (10.0 ** rng.uniform(math.log10(floor), math.log10(hi), size=k_log)
            if floor > 0 else np.full(k_log, hi))
    out = np.concatenate([[lo, hi], uniform, logs])
    return np.sort(np.clip(out, lo, hi))[:count]


def check_fdi_sampled(sys, Pi, pair, sample_count=100, seed=0):
    """Worst sampled value of the frequency-domain inequality over a curve.

    Negative means ``[H; I]* Pi [H; I] < 0`` held at every sample,
    including the point at infinity for unbounded curves.
    """
    if pair.frange is None:
        raise InvalidInput("sampling needs a curve built from a frequency range")
    worst = -math.inf
    for w in sample_frequencies(pair.frange, sample_count, seed):
        theta = principal_power(w, sys.nu)
        if not curve_contains(pair, theta):
            continue
        try:
            worst = max(worst, fdi_value(sys, Pi, theta))
        except ResonanceError:
            return math.inf
    if not pair.frange.bounded:
        worst = max(worst, fdi_value(sys, Pi, math.inf))
    return worst
