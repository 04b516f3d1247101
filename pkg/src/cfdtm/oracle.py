"""Independent numeric checks for series solutions.

Everything in here deliberately avoids the transform-domain algebra: the
conformable derivative is realized directly from its limit definition as
(t - t0)**(1 - gamma) times a classically differenced derivative, so that
residuals and comparisons act as a genuinely separate route from the
recurrence engine they are checking.

Also home to the registry of built-in worked problems (example1..example5)
with their closed-form solutions, grids, and tolerances.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

from ._stencils import EPS, nested_first
from .series import DomainError, EvalGrid, FracSeries, evaluate, _require_finite
from .solver import (
    Add,
    Const,
    CosSource,
    Deriv,
    ExpSource,
    Expr,
    Monomial,
    Mul,
    Neg,
    OdeProblem,
    Pow,
    SinSource,
    Sub,
    Unknown,
    solve,
)


@dataclass(frozen=True)
class OracleConfig:
    """Step control for the finite-difference derivative.

    h is the relative first-derivative step (scaled by max(1, |t|)).  When
    classical derivatives have to be nested, the step is widened to keep
    roundoff amplification in check; accuracy decays with nesting depth.
    t_min_offset is the smallest allowed distance from the base point.
    """

    h: float = 1e-6
    t_min_offset: float = 1e-3


_DEFAULT_CONFIG = OracleConfig()

#: most classical-derivative nesting levels the stencils support
_MAX_NEST = 4


def conformable_deriv(
    f: Callable[[float], float],
    beta: float,
    t: float,
    t0: float = 0.0,
    config: OracleConfig | None = None,
) -> float:
    """Finite-difference conformable derivative of order beta at t.

    For m < beta <= m + 1 the operator is (t - t0)**(1 - (beta - m)) times
    the (m+1)-th classical derivative, realized as m + 1 nested 5-point
    first-derivative stencils.  Every stencil sample must stay right of t0,
    so t has to sit at least t_min_offset (and the total stencil reach)
    away from the base point.
    """
    cfg = config or _DEFAULT_CONFIG
    beta = float(beta)
    if not math.isfinite(beta) or beta <= 0.0:
        raise ValueError(f"derivative order must be positive, got {beta}")
    t = _require_finite("t", t)
    t0 = _require_finite("t0", t0)
    m = math.ceil(beta) - 1
    if m > _MAX_NEST:
        raise ValueError(f"orders above {_MAX_NEST + 1} exceed the supported stencil depth")
    gamma = beta - m

    scale = max(1.0, abs(t))
    if m == 0:
        step = cfg.h * scale
    else:
        step = max(cfg.h, EPS ** (1.0 / (m + 5))) * scale

    if t - t0 < cfg.t_min_offset:
        raise DomainError(
            f"t = {t} is within {cfg.t_min_offset} of the base point {t0}; "
            "the difference quotient degenerates there"
        )
    reach = 2.0 * step * (m + 1)
    if t - reach <= t0:
        raise DomainError(
            f"stencil around t = {t} (reach {reach:.3g}) would cross the base point {t0}"
        )

    deriv = nested_first(f, t, step, m + 1)
    return (t - t0) ** (1.0 - gamma) * deriv


# ---------------------------------------------------------------------------
# verification reports
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class VerifyReport:
    """Outcome of a residual or comparison run over a grid."""

    grid: EvalGrid
    series_values: tuple[float, ...]
    exact_values: tuple[float, ...] | None
    residuals: tuple[float, ...] | None
    max_abs_error: float
    max_abs_residual: float

    @property
    def abs_errors(self) -> tuple[float, ...] | None:
        if self.exact_values is None:
            return None
        return tuple(abs(s - e) for s, e in zip(self.series_values, self.exact_values))


def _expr_value(e: Expr, t: float, y: Callable[[float], float], p: OdeProblem,
                cfg: OracleConfig) -> float:
    """Pointwise value of a right-hand side, differencing y where needed."""
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Unknown):
        return y(t)
    if isinstance(e, Deriv):
        return conformable_deriv(y, e.beta, t, p.t0, cfg)
    if isinstance(e, Add):
        return _expr_value(e.left, t, y, p, cfg) + _expr_value(e.right, t, y, p, cfg)
    if isinstance(e, Sub):
        return _expr_value(e.left, t, y, p, cfg) - _expr_value(e.right, t, y, p, cfg)
    if isinstance(e, Neg):
        return -_expr_value(e.operand, t, y, p, cfg)
    if isinstance(e, Mul):
        out = 1.0
        for f in e.factors:
            out *= _expr_value(f, t, y, p, cfg)
        return out
    if isinstance(e, Pow):
        return _expr_value(e.base, t, y, p, cfg) ** e.exponent
    if isinstance(e, Monomial):
        return (t - p.t0) ** e.power
    w = (t - p.t0) ** p.alpha / p.alpha
    if isinstance(e, ExpSource):
        return math.exp(e.rate * w)
    if isinstance(e, SinSource):
        return math.sin(e.omega * w + e.phase)
    if isinstance(e, CosSource):
        return math.cos(e.omega * w + e.phase)
    raise TypeError(f"unrecognized node {type(e).__name__}")


def residual(
    p: OdeProblem,
    y: FracSeries,
    points: Sequence[float],
    config: OracleConfig | None = None,
) -> VerifyReport:
    """Pointwise defect T[beta_max] y - rhs(y, t) of a candidate series.

    Both sides are evaluated numerically through the finite-difference
    derivative, never through the transform algebra.
    """
    cfg = config or _DEFAULT_CONFIG
    pts = tuple(float(t) for t in points)
    if not pts:
        empty = EvalGrid((), ())
        return VerifyReport(empty, (), None, (), 0.0, 0.0)

    def fn(t: float) -> float:
        return evaluate(y, t)

    values = tuple(fn(t) for t in pts)
    res = []
    for t in pts:
        lhs = conformable_deriv(fn, p.beta_max, t, p.t0, cfg)
        rhs = _expr_value(p.rhs, t, fn, p, cfg)
        res.append(lhs - rhs)
    grid = EvalGrid(pts, values)
    return VerifyReport(grid, values, None, tuple(res), 0.0, max(abs(r) for r in res))


def compare(
    p: OdeProblem,
    exact: Callable[[float], float],
    points: Sequence[float],
) -> VerifyReport:
    """Solve p and compare the evaluated series against a closed form."""
    pts = tuple(float(t) for t in points)
    if not pts:
        empty = EvalGrid((), ())
        return VerifyReport(empty, (), (), None, 0.0, 0.0)
    series = solve(p)
    values = tuple(evaluate(series, t) for t in pts)
    exact_values = tuple(float(exact(t)) for t in pts)
    err = max(abs(a - b) for a, b in zip(values, exact_values))
    grid = EvalGrid(pts, values)
    return VerifyReport(grid, values, exact_values, None, err, 0.0)


def grid_points(start: float, stop: float, count: int) -> tuple[float, ...]:
    """Evenly spaced points including both ends (a single point when count is 1)."""
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    if count == 1:
        return (float(start),)
    step = (float(stop) - float(start)) / (count - 1)
    return tuple(float(start) + i * step for i in range(count))


# ---------------------------------------------------------------------------
# built-in worked problems
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExampleCase:
    """A built-in problem with its closed-form solution and check settings.

    equation_for renders the equation in the input language for a given
    alpha; exact_for returns the closed-form solution callable; the
    expected_coeffs callable returns the known coefficient prefix used for
    the exact coefficient checks.  compare_stop/residual_span bound the
    grids on which the series is trusted (example2's closed form has a pole
    at t = alpha**(1/alpha), so its windows stay well inside that).
    """

    case_id: str
    title: str
    alpha_default: float
    alpha_fixed: bool
    init: tuple[float, ...]
    beta_max_for: Callable[[float], float]
    n_terms: int
    coeff_rtol: float
    compare_tol: float
    residual_tol: float
    compare_count: int
    residual_count: int
    equation_for: Callable[[float], str]
    exact_for: Callable[[float], Callable[[float], float]]
    expected_coeffs: Callable[[float, int], tuple[float, ...]]
    compare_stop: Callable[[float], float]
    residual_span: Callable[[float], tuple[float, float]]
    valid_stop: Callable[[float], float]


def _e1_exact(alpha: float) -> Callable[[float], float]:
    def fn(t: float) -> float:
        return math.exp(-(t**alpha) / alpha)
    return fn


def _e1_coeffs(alpha: float, n: int) -> tuple[float, ...]:
    return tuple((-1.0) ** k / (math.factorial(k) * alpha**k) for k in range(n + 1))


def _e2_exact(alpha: float) -> Callable[[float], float]:
    def fn(t: float) -> float:
        w = t**alpha
        return w / (alpha - w)
    return fn


def _e2_coeffs(alpha: float, n: int) -> tuple[float, ...]:
    return (0.0,) + tuple(alpha ** (-k) for k in range(1, n + 1))


def _e3_exact(alpha: float) -> Callable[[float], float]:
    def fn(t: float) -> float:
        u = math.exp(2.0 * t**alpha / alpha)
        return (u - 1.0) / (u + 1.0)
    return fn


# odd-index pattern of the hyperbolic-tangent expansion, scaled by alpha powers
_E3_ODD = {1: 1.0, 3: -1.0 / 3.0, 5: 2.0 / 15.0, 7: -17.0 / 315.0, 9: 62.0 / 2835.0}


def _e3_coeffs(alpha: float, n: int) -> tuple[float, ...]:
    out = []
    for k in range(min(n, 9) + 1):
        out.append(_E3_ODD[k] / alpha**k if k in _E3_ODD else 0.0)
    return tuple(out)


def _e4_exact(alpha: float) -> Callable[[float], float]:
    def fn(t: float) -> float:
        return 1.0 + t
    return fn


def _e4_coeffs(alpha: float, n: int) -> tuple[float, ...]:
    out = [0.0] * (n + 1)
    out[0] = 1.0
    if n >= 2:
        out[2] = 1.0
    return tuple(out)


def _e5_exact(alpha: float) -> Callable[[float], float]:
    def fn(t: float) -> float:
        return math.exp(t) - 1.0
    return fn


def _e5_coeffs(alpha: float, n: int) -> tuple[float, ...]:
    out = []
    for k in range(n + 1):
        if k == 0 or k % 2 == 1:
            out.append(0.0)
        else:
            out.append(1.0 / math.factorial(k // 2))
    return tuple(out)


def _const(value: float) -> Callable[[float], float]:
    return lambda _alpha: value


_REGISTRY: dict[str, ExampleCase] = {}


def _register(case: ExampleCase) -> None:
    _REGISTRY[case.case_id] = case


_register(ExampleCase(
    case_id="example1",
    title="linear decay  D[a] y = -y",
    alpha_default=0.5,
    alpha_fixed=False,
    init=(1.0,),
    beta_max_for=lambda a: a,
    n_terms=30,
    coeff_rtol=1e-12,
    compare_tol=1e-8,
    residual_tol=1e-4,
    compare_count=50,
    residual_count=10,
    equation_for=lambda a: f"D[{a!r}] y = -y",
    exact_for=_e1_exact,
    expected_coeffs=_e1_coeffs,
    compare_stop=_const(0.5),
    residual_span=lambda a: (0.05, 0.5),
    valid_stop=_const(math.inf),
))

_register(ExampleCase(
    case_id="example2",
    title="Riccati growth  D[a] y = 1 + 2y + y^2",
    alpha_default=0.5,
    alpha_fixed=False,
    init=(0.0,),
    beta_max_for=lambda a: a,
    n_terms=60,
    coeff_rtol=1e-12,
    compare_tol=1e-6,
    residual_tol=1e-4,
    compare_count=21,
    residual_count=10,
    equation_for=lambda a: f"D[{a!r}] y = 1 + 2*y + y^2",
    exact_for=_e2_exact,
    expected_coeffs=_e2_coeffs,
    compare_stop=lambda a: 0.5 * a ** (1.0 / a),
    residual_span=lambda a: (0.02, 0.5 * a ** (1.0 / a)),
    valid_stop=lambda a: 0.9 * a ** (1.0 / a),
))

_register(ExampleCase(
    case_id="example3",
    title="Riccati saturation  D[a] y = 1 - y^2",
    alpha_default=0.5,
    alpha_fixed=False,
    init=(0.0,),
    beta_max_for=lambda a: a,
    n_terms=80,
    coeff_rtol=1e-12,
    compare_tol=1e-6,
    residual_tol=1e-4,
    compare_count=41,
    residual_count=10,
    equation_for=lambda a: f"D[{a!r}] y = 1 - y^2",
    exact_for=_e3_exact,
    expected_coeffs=_e3_coeffs,
    compare_stop=_const(0.4),
    residual_span=lambda a: (0.05, 0.4),
    valid_stop=lambda a: (a * math.pi / 2.0) ** (1.0 / a),
))

_register(ExampleCase(
    case_id="example4",
    title="Bagley-Torvik  y'' + D[1.5] y + y = 1 + t",
    alpha_default=0.5,
    alpha_fixed=True,
    init=(1.0, 1.0),
    beta_max_for=_const(2.0),
    n_terms=20,
    coeff_rtol=1e-12,
    compare_tol=1e-12,
    residual_tol=1e-4,
    compare_count=41,
    residual_count=10,
    equation_for=lambda a: "1*D[2] y + 1*D[1.5] y + 1*y = 1 + t^1",
    exact_for=_e4_exact,
    expected_coeffs=_e4_coeffs,
    compare_stop=_const(2.0),
    residual_span=lambda a: (0.05, 2.0),
    valid_stop=_const(math.inf),
))

_register(ExampleCase(
    case_id="example5",
    title="mixed orders  D[1.5] y = D[0.5] y",
    alpha_default=0.5,
    alpha_fixed=True,
    init=(0.0, 1.0),
    beta_max_for=_const(1.5),
    n_terms=40,
    coeff_rtol=1e-12,
    compare_tol=1e-8,
    residual_tol=1e-4,
    compare_count=50,
    residual_count=10,
    equation_for=lambda a: "D[1.5] y = D[0.5] y",
    exact_for=_e5_exact,
    expected_coeffs=_e5_coeffs,
    compare_stop=_const(1.0),
    residual_span=lambda a: (0.05, 1.0),
    valid_stop=_const(math.inf),
))


def example_ids() -> tuple[str, ...]:
    """Identifiers of the built-in problems, in order."""
    return tuple(sorted(_REGISTRY))


def exact_registry(name: str) -> ExampleCase:
    """Look up a built-in problem by id (example1..example5)."""
    try:
        return _REGISTRY[name]
    except KeyError:
        known = ", ".join(example_ids())
        raise KeyError(f"unknown example {name!r}; known ids: {known}") from None
