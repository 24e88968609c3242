"""Hermitian LMI feasibility by smoothed largest-eigenvalue minimization.

An LMI ``F(U, V) < 0`` over Hermitian unknowns is parameterized by real
coordinates ``x`` in the basis returned by :func:`hermitian_basis`; the
engine minimizes a log-sum-exp smoothing of the largest eigenvalue of the
realified matrix (augmented with ``-U`` or ``-V`` where positivity is
required) with BFGS and a backtracking line search, and reports a witness
once the exact largest eigenvalue drops below ``-margin``.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import oracle
from .errors import (DimensionError, InvalidInput, NoFeasibleBound, NumericalFailure,
                     UnstableSystemError)
from .numkernel import as_matrix, eigvalsh, herm_eig, is_hermitian, lambda_max, realify

__all__ = ["hermitian_basis", "VariableBlock", "HermitianAffineMap",
           "FeasibilityOutcome", "SolverOptions", "solve_feasibility",
           "NormBracket", "compute_norm", "default_margin"]


def hermitian_basis(n):
    """Trace-orthogonal real basis of the ``n x n`` Hermitian matrices.

    Order: ``n`` diagonal units, then symmetric pairs ``E_ij + E_ji`` and
    finally imaginary antisymmetric pairs ``j E_ij - j E_ji`` (``i < j``).
    """
    n = int(n)
    if n < 1:
        raise InvalidInput("Hermitian basis needs n >= 1")
    out = []
    for i in range(n):
        E = np.zeros((n, n), dtype=complex)
        E[i, i] = 1.0
        out.append(E)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    for i, j in pairs:
        E = np.zeros((n, n), dtype=complex)
        E[i, j] = E[j, i] = 1.0
        out.append(E)
    for i, j in pairs:
        E = np.zeros((n, n), dtype=complex)
        E[i, j] = 1j
        E[j, i] = -1j
        out.append(E)
    return out


@dataclass(frozen=True)
class VariableBlock:
    name: str
    size: int
    positive: bool
    offset: int

    @property
    def count(self):
        return self.size * self.size


class HermitianAffineMap:
    """``x -> F0 + sum_k x_k F_k`` over the real coordinates of Hermitian blocks.

    Parameters
    ----------
    F0 : array_like
        Hermitian constant term.
    basis : sequence of array_like
        Hermitian coefficient matrices, one per real parameter.
    blocks : sequence of VariableBlock
        Contiguous parameter ranges, each covering the ``size**2``
        coordinates of one Hermitian unknown.
    """

    def __init__(self, F0, basis, blocks=()):
        F0 = as_matrix(F0)
        if F0.shape[0] != F0.shape[1] or not is_hermitian(F0):
            raise InvalidInput("constant term must be square Hermitian")
        basis = [as_matrix(Fk) for Fk in basis]
        for k, Fk in enumerate(basis):
            if Fk.shape != F0.shape:
                raise DimensionError(f"basis term {k} has shape {Fk.shape}, expected {F0.shape}")
            if not is_hermitian(Fk):
                raise InvalidInput(f"basis term {k} is not Hermitian")
        blocks = tuple(blocks)
        offset = 0
        for b in blocks:
            if b.offset != offset:
                raise InvalidInput("variable blocks must tile the parameter vector")
            offset += b.count
        if offset != len(basis):
            raise InvalidInput(f"blocks cover {offset} parameters, basis has {len(basis)}")
        self.F0 = F0
        self.basis = basis
        self.blocks = blocks
        self._stack = (np.array(basis) if basis
                       else np.zeros((0,) + F0.shape, dtype=complex))
        self._hbasis = {b.size: hermitian_basis(b.size) for b in blocks}

    @classmethod
    def from_function(cls, fn, variables):
        """Sample an affine matrix function of named Hermitian unknowns.

        ``variables`` is a sequence of ``(name, size, positive)``; ``fn`` is
        called with one keyword argument per name.
        """
        blocks, offset = [], 0
        for name, size, positive in variables:
            blocks.append(VariableBlock(name, size, bool(positive), offset))
            offset += size * size
        zeros = {b.name: np.zeros((b.size, b.size), dtype=complex) for b in blocks}
        F0 = as_matrix(fn(**zeros))
        basis = []
        for b in blocks:
            for E in hermitian_basis(b.size):
                args = dict(zeros)
                args[b.name] = E
                basis.append(as_matrix(fn(**args)) - F0)
        return cls(F0, basis, blocks)

    @property
    def size(self):
        return self.F0.shape[0]

    @property
    def n_params(self):
        return len(self.basis)

    @property
    def layout(self):
        """Parameter index -> ``(block name, basis element index)``."""
        return [(b.name, k) for b in self.blocks for k in range(b.count)]

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if x.shape != (self.n_params,):
            raise DimensionError(f"expected {self.n_params} parameters, got {x.shape}")
        if not self.n_params:
            return self.F0.copy()
        return self.F0 + np.tensordot(x, self._stack, axes=1)

    def unpack(self, x):
        x = np.asarray(x, dtype=float)
        out = {}
        for b in self.blocks:
            coords = x[b.offset:b.offset + b.count]
            out[b.name] = np.tensordot(coords, np.array(self._hbasis[b.size]), axes=1)
        return out

    def pack(self, **mats):
        x = np.zeros(self.n_params)
        for b in self.blocks:
            M = as_matrix(mats[b.name])
            for k, E in enumerate(self._hbasis[b.size]):
                x[b.offset + k] = np.real(np.vdot(E, M)) / np.real(np.vdot(E, E))
        return x

    def block_matrix(self, x, name):
        return self.unpack(x)[name]


def default_margin(lmi_map):
    return 1e-7 * (1.0 + float(np.max(np.abs(lmi_map.F0))))


@dataclass(frozen=True)
class SolverOptions:
    margin: float = None
    max_iter: int = 5000
    restarts: int = 3
    seed: int = 0
    mu_start: float = 1.0
    mu_stop: float = 1e-6

    def __post_init__(self):
        if self.margin is not None and not self.margin > 0:
            raise InvalidInput("margin must be positive")
        if int(self.max_iter) < 1 or int(self.restarts) < 0:
            raise InvalidInput("max_iter must be >= 1 and restarts >= 0")


@dataclass
class FeasibilityOutcome:
    verdict: str
    witness: dict
    best_margin: float
    iterations: int
    margin_required: float
    x: np.ndarray = field(repr=False, default=None)

    @property
    def feasible(self):
        return self.verdict == "feasible"

    def as_dict(self):
        return {"verdict": self.verdict, "best_margin": self.best_margin,
                "iterations": self.iterations, "margin_required": self.margin_required}


class _Objective:
    """Smoothed largest eigenvalue of ``blockdiag(realify(F), realify(-P_i)) / scale``."""

    def __init__(self, lmi_map, positive):
        self.map = lmi_map
        self.scale = 1.0 + float(np.max(np.abs(lmi_map.F0)))
        pieces0 = [realify(lmi_map.F0)]
        pieces = [[realify(Fk)] for Fk in lmi_map.basis]
        for b in lmi_map.blocks:
            if b.name not in positive:
                continue
            pieces0.append(np.zeros((2 * b.size, 2 * b.size)))
            hb = lmi_map._hbasis[b.size]
            for k in range(lmi_map.n_params):
                j = k - b.offset
                E = -hb[j] if 0 <= j < b.count else np.zeros((b.size, b.size))
                pieces[k].append(realify(E))
        self.G0 = _blockdiag(pieces0) / self.scale
        self.Gk = (np.array([_blockdiag(p) for p in pieces]) / self.scale
                   if pieces else np.zeros((0,) + self.G0.shape))

    def matrix(self, x):
        G = self.G0 + np.tensordot(x, self.Gk, axes=1) if len(x) else self.G0
        if not np.all(np.isfinite(G)):
            raise NumericalFailure("non-finite entries while evaluating the LMI")
        return G

    def exact(self, x):
        return float(eigvalsh(self.matrix(x))[-1])

    def smooth(self, x, mu):
        """Return ``(f_mu, grad, lambda_max)``."""
        w, Q = herm_eig(self.matrix(x))
        lmax = w[-1]
        z = np.exp((w - lmax) / mu)
        total = z.sum()
        f = lmax + mu * math.log(total)
        if not math.isfinite(f):
            raise NumericalFailure("objective evaluated to a non-finite value")
        W = (Q * (z / total)) @ Q.T
        grad = np.tensordot(self.Gk, W, axes=([1, 2], [0, 1])) if len(x) else np.zeros(0)
        return f, grad, float(lmax)


def _blockdiag(mats):
    n = sum(M.shape[0] for M in mats)
    out = np.zeros((n, n))
    i = 0
    for M in mats:
        k = M.shape[0]
        out[i:i + k, i:i + k] = M
        i += k
    return out


def _initial_point(lmi_map):
    """Identity in every block, scaled to ``0.1 * ||F0|| / ||basis||``."""
    norm_basis = max((float(np.max(np.abs(Fk))) for Fk in lmi_map.basis), default=1.0)
    c = 0.1 * float(np.max(np.abs(lmi_map.F0))) / max(norm_basis, 1e-300)
    if not c > 0:
        c = 0.1
    x = np.zeros(lmi_map.n_params)
    for b in lmi_map.blocks:
        x[b.offset:b.offset + b.size] = c
    return x, c


def _bfgs_stage(obj, x, mu, target, max_iter, state):
    """Minimize the smoothed objective at fixed ``mu``. Returns ``(x, done)``."""
    f, g, lmax = obj.smooth(x, mu)
    state["evals"] += 1
    _track(state, x, lmax)
    if lmax <= target:
        return x, True
    n = len(x)
    H = None
    stall = 0
    for _ in range(max_iter):
        if state["iterations"] >= state["budget"]:
            break
        state["iterations"] += 1
        gnorm = float(np.linalg.norm(g))
        if gnorm <= 1e-12:
            break
        d = -(H @ g) if H is not None else -g * (state["step"] / gnorm)
        slope = float(g @ d)
        if slope >= 0:
            H = None
            d = -g * (state["step"] / gnorm)
            slope = float(g @ d)
        t = 1.0
        accepted = False
        for _ in range(60):
            xn = x + t * d
            fn, gn, ln = obj.smooth(xn, mu)
            state["evals"] += 1
            if fn <= f + 1e-4 * t * slope:
                accepted = True
                break
            t *= 0.5
        if not accepted:
            break
        s, y = xn - x, gn - g
        state["step"] = max(float(np.linalg.norm(s)), 1e-12)
        decrease = f - fn
        x, f, g = xn, fn, gn
        _track(state, x, ln)
        if ln <= target:
            return x, True
        sy = float(s @ y)
        if sy > 1e-12 * float(np.linalg.norm(s)) * float(np.linalg.norm(y)):
            if H is None:
                H = np.eye(n) * (sy / float(y @ y))
            r = 1.0 / sy
            V = np.eye(n) - r * np.outer(s, y)
            H = V @ H @ V.T + r * np.outer(s, s)
        stall = stall + 1 if decrease <= 1e-12 * (1.0 + abs(f)) else 0
        if stall >= 5:
            break
    state["last_f"] = f
    return x, False


def _track(state, x, lmax):
    if lmax < state["best"]:
        state["best"] = lmax
        state["best_x"] = x.copy()


def solve_feasibility(lmi_map, side_constraints=None, margin=None, budget=5000,
                      seed=0, restarts=3, mu_start=1.0, mu_stop=1e-6):
    """Search for ``x`` with ``F(x) <= -margin`` and positive blocks ``>= margin``.

    Parameters
    ----------
    lmi_map : HermitianAffineMap
    side_constraints : iterable of str, optional
        Names of blocks required to be positive definite. Defaults to the
        blocks flagged ``positive`` in the map.
    margin : float, optional
        Defaults to ``1e-7 * (1 + max|F0|)``.
    budget : int
        Iteration budget per start.
    seed : int
        Seeds the random restarts.
    restarts : int
        Number of perturbed restarts after the deterministic start.

    Returns
    -------
    FeasibilityOutcome
        ``feasible`` with a re-verified witness, or ``not_proven`` with the
        smallest largest-eigenvalue reached. Budget exhaustion is not an error.

    Raises
    ------
    NumericalFailure
        If the objective becomes NaN or infinite.
    """
    if side_constraints is None:
        positive = {b.name for b in lmi_map.blocks if b.positive}
    else:
        positive = set(side_constraints)
        unknown = positive - {b.name for b in lmi_map.blocks}
        if unknown:
            raise InvalidInput(f"unknown side-constraint blocks {sorted(unknown)}")
    if margin is None:
        margin = default_margin(lmi_map)
    if not margin > 0:
        raise InvalidInput("margin must be positive")
    obj = _Objective(lmi_map, positive)
    target = -margin / obj.scale
    n_stages = max(1, int(round(math.log10(mu_start / mu_stop))) + 1)
    mus = np.geomspace(mu_start, mu_stop, n_stages)
    rng = np.random.default_rng(seed)
    x_init, c = _initial_point(lmi_map)
    log_n = math.log(obj.G0.shape[0])

    total_iter = 0
    best, best_x = math.inf, x_init
    for attempt in range(restarts + 1):
        x = x_init.copy()
        if attempt:
            x = x + c * rng.standard_normal(x.shape)
        state = {"iterations": 0, "evals": 0, "budget": int(budget), "best": math.inf,
                 "best_x": x.copy(), "step": max(c, 1e-3)}
        if not lmi_map.n_params:
            state["best"] = obj.exact(x)
        done = False
        for k, mu in enumerate(mus):
            if state["iterations"] >= state["budget"] or not lmi_map.n_params:
                break
            per_stage = max(1, (state["budget"] - state["iterations"]) // (len(mus) - k))
            x, done = _bfgs_stage(obj, x, mu, target, per_stage, state)
            if done:
                break
            # f_mu overestimates lambda_max by at most mu*log(N): a converged
            # stage this far above the target will not reach it at smaller mu
            if state["last_f"] - mu * log_n > target + 0.05 * abs(target) + 1e-3:
                if k >= 1:
                    break
        total_iter += state["iterations"]
        if state["best"] < best:
            best, best_x = state["best"], state["best_x"]
        if done or best <= target:
            outcome = _verify(lmi_map, best_x, positive, margin, total_iter)
            if outcome is not None:
                return outcome
    return FeasibilityOutcome("not_proven", {}, best * obj.scale, total_iter, margin, best_x)


def _verify(lmi_map, x, positive, margin, iterations):
    F = lmi_map(x)
    lmax = lambda_max(F)
    if lmax > -margin:
        return None
    mats = lmi_map.unpack(x)
    worst = lmax
    for name in positive:
        lmin = float(eigvalsh(mats[name])[0])
        if lmin < margin:
            return None
        worst = max(worst, -lmin)
    return FeasibilityOutcome("feasible", mats, worst, iterations, margin, x.copy())


@dataclass
class NormBracket:
    lower: float
    upper: float
    converged: bool
    peak_omega: float
    search_lower: float
    evaluations: list = field(default_factory=list)

    def as_dict(self):
        return {"lower": self.lower, "upper": self.upper, "converged": self.converged,
                "peak_omega": self.peak_omega, "search_lower": self.search_lower}


def compute_norm(sys, kind, frange=None, tol=1e-3, solver=None, grid=None, max_bisections=60):
    """Bracket the range-restricted L-infinity or the H-infinity norm.

    The lower end is the oracle's sweep peak, the upper end the smallest
    bound at which the LMI engine returns a witness. The bracket is flagged
    converged when ``upper - lower <= tol * upper``.

    Raises
    ------
    UnstableSystemError
        For ``kind="hinf"`` on an unstable system.
    NoFeasibleBound
        If the engine certifies no bound below ``1e6`` times the lower bound.
    """
    from . import lmi
    from .curves import FrequencyRange
    from .model import is_stable

    if not tol > 0:
        raise InvalidInput("tol must be positive")
    solver = solver or SolverOptions()
    if kind == "hinf":
        if not is_stable(sys).stable:
            raise UnstableSystemError("H-infinity analysis requires a stable system")
        frange = FrequencyRange.entire()
        build = lambda d: lmi.build_hinf_lmi(sys, d)
    elif kind == "linf":
        if frange is None:
            frange = FrequencyRange.entire()
        build = lambda d: lmi.build_linf_lmi(sys, frange, d)
    else:
        raise InvalidInput(f"unknown norm kind {kind!r}")

    sweep = oracle.sweep_linf(sys, frange, grid)
    lower = float(sweep.peak_sigma)
    evaluations = []

    def feasible(delta):
        prob = build(delta)
        out = solve_feasibility(prob.map, margin=solver.margin, budget=solver.max_iter,
                                seed=solver.seed, restarts=solver.restarts,
                                mu_start=solver.mu_start, mu_stop=solver.mu_stop)
        evaluations.append((delta, out.verdict, out.best_margin))
        return out.feasible

    floor = max(lower, 1e-8)
    hi = 2.0 * floor
    while not feasible(hi):
        hi *= 2.0
        if hi > 1e6 * floor:
            raise NoFeasibleBound(f"no feasible bound found below {1e6 * floor:.6g}")
    lo = lower
    for _ in range(max_bisections):
        if hi - lo <= tol * hi:
            break
        mid = 0.5 * (lo + hi)
        if feasible(mid):
            hi = mid
        else:
            lo = mid
    return NormBracket(lower=lower, upper=hi, converged=bool(hi - lower <= tol * hi),
                       peak_omega=float(sweep.peak_omega), search_lower=lo,
                       evaluations=evaluations)
