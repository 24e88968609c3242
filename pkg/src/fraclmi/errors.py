"""Exception hierarchy shared by the analysis modules and the CLI."""


class FraclmiError(Exception):
    """Base class. ``code`` is the machine-readable reason used by the CLI."""

    code = "error"


class InvalidInput(FraclmiError, ValueError):
    code = "invalid_input"


class DimensionError(InvalidInput):
    code = "dimension_error"


class NotHermitianError(InvalidInput):
    code = "not_hermitian"


class SingularMatrixError(FraclmiError, ArithmeticError):
    code = "singular_matrix"


class ResonanceError(SingularMatrixError):
    """theta * I - A is singular at the requested frequency."""

    code = "resonance"


class ConvergenceError(FraclmiError, ArithmeticError):
    code = "no_convergence"


class NumericalFailure(FraclmiError, ArithmeticError):
    code = "numerical_failure"


class UnstableSystemError(InvalidInput):
    code = "unstable_system"


class ParseError(InvalidInput):
    code = "parse_error"


class NoFeasibleBound(FraclmiError):
    """The engine found no certifiable bound below the search ceiling."""

    code = "no_feasible_bound"
