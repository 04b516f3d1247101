"""Recurrence engine for conformable fractional ODEs in explicit form.

A problem is  T[beta_max] y = rhs(y, lower derivatives of y, t)  together
with classical initial data at t0.  Every transform index k of the right
hand side only touches solution coefficients up to k + beta_max/alpha - 1,
so once the first beta_max/alpha coefficients are seeded from the initial
data the rest follow one at a time:

    Y(k + s_max) = rhs_coefficient(k) / gamma_ratio(k, alpha, beta_max).

The right hand side is a small expression tree.  Coefficients of subtrees
are computed lazily per index and memoized per solve, so products (which
convolve their factor streams) stay quadratic overall.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .derivatives import DerivOrder, gamma_ratio, seed_initial_conditions
from .series import GRID_TOL, FracSeries, _require_finite


# ---------------------------------------------------------------------------
# expression tree
# ---------------------------------------------------------------------------

class Expr:
    """Base class for right-hand-side expression nodes."""

    __slots__ = ()


@dataclass(frozen=True)
class Const(Expr):
    """A constant; its transform is a spike at index 0."""

    value: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "value", _require_finite("constant", self.value))


@dataclass(frozen=True)
class Unknown(Expr):
    """The solution y itself."""


@dataclass(frozen=True)
class Deriv(Expr):
    """A conformable derivative of y of the given order (a raw positive real).

    The order is stored unresolved; it is checked against the problem's
    alpha during validation so that bad combinations surface as diagnostics
    rather than construction failures.
    """

    beta: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "beta", float(self.beta))


@dataclass(frozen=True)
class Add(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Sub(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Neg(Expr):
    operand: Expr


@dataclass(frozen=True)
class Mul(Expr):
    """A product of two or more factors; transforms by convolution."""

    factors: tuple[Expr, ...]

    def __post_init__(self) -> None:
        factors = tuple(self.factors)
        if len(factors) < 2:
            raise ValueError(f"a product needs at least 2 factors, got {len(factors)}")
        object.__setattr__(self, "factors", factors)


@dataclass(frozen=True)
class Pow(Expr):
    """An integer power, treated as a product of exponent copies of base."""

    base: Expr
    exponent: int

    def __post_init__(self) -> None:
        if not isinstance(self.exponent, int) or self.exponent < 1:
            raise ValueError(f"exponent must be a positive integer, got {self.exponent!r}")


@dataclass(frozen=True)
class Monomial(Expr):
    """(t - t0)**power as a source term."""

    power: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "power", float(self.power))


@dataclass(frozen=True)
class ExpSource(Expr):
    """exp(rate * (t - t0)**alpha / alpha) as a source term."""

    rate: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "rate", _require_finite("rate", self.rate))


@dataclass(frozen=True)
class SinSource(Expr):
    """sin(omega * (t - t0)**alpha / alpha + phase) as a source term."""

    omega: float
    phase: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "omega", _require_finite("omega", self.omega))
        object.__setattr__(self, "phase", _require_finite("phase", self.phase))


@dataclass(frozen=True)
class CosSource(Expr):
    """cos(omega * (t - t0)**alpha / alpha + phase) as a source term."""

    omega: float
    phase: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "omega", _require_finite("omega", self.omega))
        object.__setattr__(self, "phase", _require_finite("phase", self.phase))


# ---------------------------------------------------------------------------
# problems and validation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OdeProblem:
    """An explicit-form problem T[beta_max] y = rhs with initial data.

    init holds the classical derivatives y(t0), y'(t0), ..., exactly
    ceil(beta_max) of them.  n_terms is the highest retained series index,
    so the solution has n_terms + 1 coefficients.
    """

    alpha: float
    t0: float
    beta_max: float
    rhs: Expr
    init: tuple[float, ...]
    n_terms: int

    def __post_init__(self) -> None:
        if not isinstance(self.rhs, Expr):
            raise TypeError(f"rhs must be an Expr, got {type(self.rhs).__name__}")
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "t0", float(self.t0))
        object.__setattr__(self, "beta_max", float(self.beta_max))
        object.__setattr__(self, "init", tuple(float(v) for v in self.init))
        object.__setattr__(self, "n_terms", int(self.n_terms))


@dataclass(frozen=True)
class Diagnostic:
    """A machine-readable validation finding."""

    code: str
    message: str
    path: str = ""

    def __str__(self) -> str:
        where = f" at {self.path}" if self.path else ""
        return f"[{self.code}]{where}: {self.message}"


class ProblemValidationError(ValueError):
    """Raised by solve() when validate() reports diagnostics."""

    def __init__(self, diagnostics: Sequence[Diagnostic]):
        self.diagnostics = tuple(diagnostics)
        lines = "; ".join(str(d) for d in self.diagnostics)
        super().__init__(f"problem failed validation: {lines}")


def _integral_ratio(value: float, alpha: float) -> int | None:
    """Round value/alpha to an integer, or None if it misses the grid."""
    ratio = value / alpha
    idx = round(ratio)
    if abs(ratio - idx) > GRID_TOL:
        return None
    return idx


def _walk_rhs(e: Expr, path: str, p: OdeProblem, s_max: int, out: list[Diagnostic]) -> None:
    if isinstance(e, Deriv):
        if e.beta <= 0.0 or not math.isfinite(e.beta):
            out.append(Diagnostic("deriv-order", f"derivative order must be positive, got {e.beta}", path))
            return
        s = _integral_ratio(e.beta, p.alpha)
        if s is None or s < 1:
            out.append(Diagnostic(
                "deriv-order",
                f"order {e.beta} is not a positive multiple of alpha = {p.alpha}",
                path,
            ))
        elif s > s_max - 1:
            out.append(Diagnostic(
                "causality",
                f"right-hand derivative order {e.beta} must be at most "
                f"beta_max - alpha = {p.beta_max - p.alpha:g}",
                path,
            ))
    elif isinstance(e, Monomial):
        if e.power < 0.0:
            out.append(Diagnostic("monomial-power", f"monomial power must be >= 0, got {e.power}", path))
        elif _integral_ratio(e.power, p.alpha) is None:
            out.append(Diagnostic(
                "monomial-grid",
                f"power {e.power} is not an integer multiple of alpha = {p.alpha}",
                path,
            ))
    elif isinstance(e, Add) or isinstance(e, Sub):
        _walk_rhs(e.left, path + ".left", p, s_max, out)
        _walk_rhs(e.right, path + ".right", p, s_max, out)
    elif isinstance(e, Neg):
        _walk_rhs(e.operand, path + ".operand", p, s_max, out)
    elif isinstance(e, Mul):
        for i, f in enumerate(e.factors):
            _walk_rhs(f, f"{path}.factors[{i}]", p, s_max, out)
    elif isinstance(e, Pow):
        _walk_rhs(e.base, path + ".base", p, s_max, out)
    elif isinstance(e, (Const, Unknown, ExpSource, SinSource, CosSource)):
        pass
    else:
        out.append(Diagnostic("unknown-node", f"unrecognized node {type(e).__name__}", path))


def validate(p: OdeProblem) -> list[Diagnostic]:
    """Check every problem invariant; an empty list means solvable."""
    out: list[Diagnostic] = []
    if not math.isfinite(p.alpha) or not 0.0 < p.alpha <= 1.0:
        out.append(Diagnostic("alpha-range", f"alpha must lie in (0, 1], got {p.alpha}"))
        return out
    if not math.isfinite(p.t0) or p.t0 < 0.0:
        out.append(Diagnostic("t0-range", f"t0 must be a finite real >= 0, got {p.t0}"))
    if not math.isfinite(p.beta_max) or p.beta_max <= 0.0:
        out.append(Diagnostic("principal-order", f"beta_max must be positive, got {p.beta_max}"))
        return out
    s_max = _integral_ratio(p.beta_max, p.alpha)
    if s_max is None or s_max < 1:
        out.append(Diagnostic(
            "principal-order",
            f"beta_max = {p.beta_max} is not a positive multiple of alpha = {p.alpha}",
        ))
        return out
    expected_init = math.ceil(p.beta_max)
    if len(p.init) != expected_init:
        out.append(Diagnostic(
            "init-length",
            f"need exactly {expected_init} initial derivatives for order {p.beta_max}, "
            f"got {len(p.init)}",
        ))
    for i, v in enumerate(p.init):
        if not math.isfinite(v):
            out.append(Diagnostic("init-value", f"init[{i}] must be finite, got {v}"))
    if p.n_terms < s_max:
        out.append(Diagnostic(
            "n-terms",
            f"n_terms must be at least beta_max/alpha = {s_max}, got {p.n_terms}",
        ))
    _walk_rhs(p.rhs, "rhs", p, s_max, out)
    return out


# ---------------------------------------------------------------------------
# coefficient streams
# ---------------------------------------------------------------------------

class _StreamCtx:
    """Per-solve lazy coefficient streams with memoization.

    The solution prefix is read live from a growing list, which is safe:
    causality guarantees index k of any stream touches solution slots
    strictly below the one currently being produced.
    """

    def __init__(self, alpha: float, coeffs: Sequence[float]):
        self.alpha = alpha
        self.y = coeffs
        self._memo: dict[int, dict[int, float]] = {}
        self._products: dict[int, list[dict[int, float]]] = {}
        self._orders: dict[float, DerivOrder] = {}

    def coeff(self, e: Expr, k: int) -> float:
        memo = self._memo.setdefault(id(e), {})
        if k not in memo:
            memo[k] = self._compute(e, k)
        return memo[k]

    def _order(self, beta: float) -> DerivOrder:
        if beta not in self._orders:
            self._orders[beta] = DerivOrder.for_alpha(beta, self.alpha)
        return self._orders[beta]

    def _compute(self, e: Expr, k: int) -> float:
        if isinstance(e, Const):
            return e.value if k == 0 else 0.0
        if isinstance(e, Unknown):
            return self.y[k]
        if isinstance(e, Deriv):
            order = self._order(e.beta)
            return gamma_ratio(k, self.alpha, order) * self.y[k + order.shift]
        if isinstance(e, Add):
            return self.coeff(e.left, k) + self.coeff(e.right, k)
        if isinstance(e, Sub):
            return self.coeff(e.left, k) - self.coeff(e.right, k)
        if isinstance(e, Neg):
            return -self.coeff(e.operand, k)
        if isinstance(e, Mul):
            return self._product(e, list(e.factors), k)
        if isinstance(e, Pow):
            return self._product(e, [e.base] * e.exponent, k)
        if isinstance(e, Monomial):
            idx = _integral_ratio(e.power, self.alpha)
            if idx is None or idx < 0:
                raise ValueError(f"monomial power {e.power} is off the alpha-grid (validate first)")
            return 1.0 if k == idx else 0.0
        if isinstance(e, ExpSource):
            if k == 0:
                return 1.0
            return self.coeff(e, k - 1) * e.rate / (self.alpha * k)
        if isinstance(e, SinSource):
            return self._wave_mag(e.omega, k) * _QUARTER_SIN[k % 4](e.phase)
        if isinstance(e, CosSource):
            return self._wave_mag(e.omega, k) * _QUARTER_SIN[(k + 1) % 4](e.phase)
        raise TypeError(f"unrecognized node {type(e).__name__}")

    def _wave_mag(self, omega: float, k: int) -> float:
        return omega**k / (self.alpha**k * math.factorial(k))

    def _product(self, node: Expr, factors: list[Expr], k: int) -> float:
        memos = self._products.setdefault(id(node), [dict() for _ in factors])

        def prefix(i: int, kk: int) -> float:
            cache = memos[i]
            if kk in cache:
                return cache[kk]
            if i == 0:
                v = self.coeff(factors[0], kk)
            else:
                v = sum(prefix(i - 1, l) * self.coeff(factors[i], kk - l) for l in range(kk + 1))
            cache[kk] = v
            return v

        return prefix(len(factors) - 1, k)


_QUARTER_SIN = (
    math.sin,
    math.cos,
    lambda phase: -math.sin(phase),
    lambda phase: -math.cos(phase),
)


def rhs_coefficient(e: Expr, k: int, y: FracSeries) -> float:
    """Transform index k of the expression, given a solution prefix y.

    y must supply every index the expression touches at step k; a prefix
    that is too short is an internal contract violation and surfaces as an
    IndexError.
    """
    if k < 0:
        raise ValueError(f"index must be >= 0, got {k}")
    return _StreamCtx(y.alpha, y.coeffs).coeff(e, k)


def solve(p: OdeProblem) -> FracSeries:
    """Run the recurrence and return the length n_terms + 1 solution series.

    Raises ProblemValidationError when validate(p) reports anything.
    """
    diags = validate(p)
    if diags:
        raise ProblemValidationError(diags)
    principal = DerivOrder.for_alpha(p.beta_max, p.alpha)
    coeffs: list[float] = list(seed_initial_conditions(p.alpha, p.beta_max, p.init))
    ctx = _StreamCtx(p.alpha, coeffs)
    for k in range(p.n_terms - principal.shift + 1):
        coeffs.append(ctx.coeff(p.rhs, k) / gamma_ratio(k, p.alpha, principal))
    return FracSeries(p.alpha, p.t0, tuple(coeffs))
