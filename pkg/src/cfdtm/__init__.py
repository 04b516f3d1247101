"""Truncated fractional power-series solutions of conformable ODEs.

The package solves initial value problems whose derivatives are
conformable of order beta on the grid beta = (integer) * alpha, by
mapping the equation term by term into a recurrence over the series
coefficients Y(k) of y(t) = sum_k Y(k) (t - t0)^(alpha k), seeding from
the classical initial data, and unrolling.  A finite-difference
realization of the conformable derivative (oracle module) provides an
independent check on every solution, and the cli module wraps the whole
thing for the command line.
"""

from .derivatives import (
    DerivOrder,
    deriv_product_transform,
    deriv_transform,
    gamma_ratio,
    seed_initial_conditions,
)
from .dsl import (
    DslAst,
    LhsTerm,
    LoweredEquation,
    ParseDiagnostic,
    ParseResult,
    format_equation,
    parse_equation,
    parse_function,
)
from .oracle import (
    ExampleCase,
    OracleConfig,
    VerifyReport,
    compare,
    conformable_deriv,
    exact_registry,
    example_ids,
    grid_points,
    residual,
)
from .problemfile import ProblemFile, load_problem_file, parse_problem_text, problem_from_file
from .series import (
    GRID_TOL,
    STABLE_DEPTH,
    CompatibilityError,
    DomainError,
    EvalGrid,
    FracSeries,
    RepresentabilityError,
    SampledTransform,
    SeriesLengthError,
    cauchy_product,
    cos_transform,
    evaluate,
    exp_transform,
    monomial_transform,
    nary_product,
    scalar_mul,
    series_add,
    series_sub,
    sin_transform,
    transform_of_samples,
)
from .solver import (
    Add,
    Const,
    CosSource,
    Deriv,
    Diagnostic,
    ExpSource,
    Expr,
    Monomial,
    Mul,
    Neg,
    OdeProblem,
    Pow,
    ProblemValidationError,
    SinSource,
    Sub,
    Unknown,
    rhs_coefficient,
    solve,
    validate,
)

__version__ = "0.1.0"

__all__ = [
    "Add",
    "CompatibilityError",
    "Const",
    "CosSource",
    "Deriv",
    "DerivOrder",
    "Diagnostic",
    "DomainError",
    "DslAst",
    "EvalGrid",
    "ExampleCase",
    "ExpSource",
    "Expr",
    "FracSeries",
    "GRID_TOL",
    "LhsTerm",
    "LoweredEquation",
    "Monomial",
    "Mul",
    "Neg",
    "OdeProblem",
    "OracleConfig",
    "ParseDiagnostic",
    "ParseResult",
    "Pow",
    "ProblemFile",
    "ProblemValidationError",
    "RepresentabilityError",
    "STABLE_DEPTH",
    "SampledTransform",
    "SeriesLengthError",
    "SinSource",
    "Sub",
    "Unknown",
    "VerifyReport",
    "cauchy_product",
    "compare",
    "conformable_deriv",
    "cos_transform",
    "deriv_product_transform",
    "deriv_transform",
    "evaluate",
    "exact_registry",
    "example_ids",
    "exp_transform",
    "format_equation",
    "gamma_ratio",
    "grid_points",
    "load_problem_file",
    "monomial_transform",
    "nary_product",
    "parse_equation",
    "parse_function",
    "parse_problem_text",
    "problem_from_file",
    "residual",
    "rhs_coefficient",
    "scalar_mul",
    "seed_initial_conditions",
    "series_add",
    "series_sub",
    "sin_transform",
    "solve",
    "transform_of_samples",
    "validate",
]
