"""Solvers for distributed-order fractional Cauchy problems.

The package provides fractional calculus on uniform grids, an operator
calculus f(A) for matrices and Fourier multipliers, Mittag-Leffler and
Talbot-contour solution kernels, and several independent solution routes
for Cauchy problems driven by a leading fractional order plus a finite
atomic measure of lower orders.
"""

from .errors import (
    BlowupError,
    CapabilityError,
    ContourError,
    DomainError,
    FlavorError,
    FracCauchyError,
    GridMismatchError,
    InversionError,
    LocalityError,
    OrderDomainError,
    PreconditionError,
    SchemaError,
    StepSolveError,
)
from .fracops import (
    caputo_derivative,
    caputo_derivative_at,
    duhamel_kth_derivative,
    frac_integral,
    frac_integral_values,
    numeric_laplace,
    rl_caputo_gap,
    rl_derivative,
    rl_derivative_at,
    solve_abel,
)
from .grids import ScalarPath, TimeGrid
from .kernels import (
    Atom,
    OrderMeasure,
    TalbotContour,
    apply_solution_operator,
    c_beta,
    c_beta_path,
    char_eval,
    single_term_measure,
    solution_symbol,
    solution_symbol_path,
)
from .ml import mittag_leffler, ml_array
from .operators import (
    FourierMultiplier,
    MatrixOperator,
    SpectralOperator,
    apply_operator,
    apply_symbol_contour,
    apply_symbol_spectral,
    apply_symbol_taylor,
)
from .problems import (
    CAPUTO,
    RIEMANN_LIOUVILLE,
    CauchyProblem,
    ErrorReport,
    Forcing,
    SolutionPath,
    compare,
)
from .profiles import (
    Constant,
    Cosine,
    Exponential,
    FunctionSpec,
    Polynomial,
    Power,
    Sampled,
    Sine,
)
from .solver import (
    duhamel_caputo,
    duhamel_caputo_zero,
    duhamel_integer,
    duhamel_rl,
    operator_residual,
    oracle_caputo,
    oracle_rl,
    solve_homogeneous,
    solve_repr,
)
from .symbols import (
    ExponentialSymbol,
    PolynomialSymbol,
    PowerSymbol,
    RationalSymbol,
    SymbolFunction,
    constant_symbol,
    identity_symbol,
)

__version__ = "0.1.0"

__all__ = [
    "TimeGrid",
    "ScalarPath",
    "Constant",
    "Power",
    "Polynomial",
    "Exponential",
    "Sine",
    "Cosine",
    "Sampled",
    "FunctionSpec",
    "frac_integral",
    "frac_integral_values",
    "rl_derivative",
    "caputo_derivative",
    "rl_caputo_gap",
    "solve_abel",
    "rl_derivative_at",
    "caputo_derivative_at",
    "duhamel_kth_derivative",
    "numeric_laplace",
    "SymbolFunction",
    "PolynomialSymbol",
    "PowerSymbol",
    "ExponentialSymbol",
    "RationalSymbol",
    "identity_symbol",
    "constant_symbol",
    "SpectralOperator",
    "MatrixOperator",
    "FourierMultiplier",
    "apply_operator",
    "apply_symbol_spectral",
    "apply_symbol_taylor",
    "apply_symbol_contour",
    "mittag_leffler",
    "ml_array",
    "Atom",
    "OrderMeasure",
    "TalbotContour",
    "char_eval",
    "c_beta",
    "c_beta_path",
    "solution_symbol",
    "solution_symbol_path",
    "apply_solution_operator",
    "single_term_measure",
    "CAPUTO",
    "RIEMANN_LIOUVILLE",
    "CauchyProblem",
    "Forcing",
    "SolutionPath",
    "ErrorReport",
    "compare",
    "solve_homogeneous",
    "solve_repr",
    "duhamel_integer",
    "duhamel_caputo",
    "duhamel_caputo_zero",
    "duhamel_rl",
    "oracle_caputo",
    "oracle_rl",
    "operator_residual",
    "FracCauchyError",
    "OrderDomainError",
    "GridMismatchError",
    "CapabilityError",
    "BlowupError",
    "DomainError",
    "LocalityError",
    "ContourError",
    "InversionError",
    "FlavorError",
    "PreconditionError",
    "StepSolveError",
    "SchemaError",
]
