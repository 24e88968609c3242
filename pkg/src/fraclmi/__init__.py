"""Finite-frequency L-infinity and H-infinity bounds for fractional-order systems.

State-space models ``D^nu x = A x + B u, y = C x + D u`` are analysed with
linear matrix inequalities built on frequency curves in the ``(j omega)^nu``
plane, cross-checked by a dense frequency sweep.
"""

from .errors import (ConvergenceError, DimensionError, FraclmiError, InvalidInput,
                     NoFeasibleBound, NotHermitianError, NumericalFailure, ParseError,
                     ResonanceError, SingularMatrixError, UnstableSystemError)
from .numkernel import herm_eig, lambda_max, lin_solve, realify, sigma_max
from .model import FosModel, StabilityReport, eval_transfer, is_stable
from .curves import (CongruenceFactorization, CurvePair, FrequencyRange, classify_curve,
                     congruence_factorize, curve_contains, make_curve, rho)
from .sdp import (FeasibilityOutcome, HermitianAffineMap, NormBracket, SolverOptions,
                  compute_norm, solve_feasibility)
from .lmi import build_hinf_lmi, build_linf_lmi
from .oracle import GridSpec, SweepResult, check_fdi_sampled, sweep_curve, sweep_linf

__version__ = "0.1.0"

__all__ = [
    "FraclmiError", "InvalidInput", "DimensionError", "NotHermitianError", "ParseError",
    "UnstableSystemError", "SingularMatrixError", "ResonanceError", "ConvergenceError",
    "NumericalFailure", "NoFeasibleBound",
    "herm_eig", "lambda_max", "lin_solve", "realify", "sigma_max",
    "FosModel", "StabilityReport", "eval_transfer", "is_stable",
    "CongruenceFactorization", "CurvePair", "FrequencyRange", "classify_curve",
    "congruence_factorize", "curve_contains", "make_curve", "rho",
    "FeasibilityOutcome", "HermitianAffineMap", "NormBracket", "SolverOptions",
    "compute_norm", "solve_feasibility", "build_hinf_lmi", "build_linf_lmi",
    "GridSpec", "SweepResult", "check_fdi_sampled", "sweep_curve", "sweep_linf",
]
