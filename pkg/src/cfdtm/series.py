"""Truncated fractional power series and their transform-domain algebra.

A series here is a finite coefficient list F(0..N) standing for

    f(t) = sum_k F(k) * (t - t0)**(alpha*k),    0 < alpha <= 1,  t >= t0.

The coefficient list is the "transform domain" picture of f: working with
these lists (adding them, convolving them, shifting them) is what the whole
solver is built on.  This module owns the container types, the arithmetic
that stays inside the transform domain, the closed-form coefficient lists of
the usual source terms (powers of t, exponentials, sines and cosines of
t**alpha/alpha), evaluation back in the t domain, and a slow sampling-based
estimator used only to cross-check the closed forms.

All arithmetic is plain float64.  Two series can only be combined when their
alpha and t0 match exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

from ._stencils import EPS, fd_weights

#: tolerance used when a ratio like p/alpha must land on an integer
GRID_TOL = 1e-9


class CompatibilityError(ValueError):
    """Two series cannot be combined: alpha or base point differ."""


class RepresentabilityError(ValueError):
    """A power or derivative order does not land on the alpha-grid."""


class DomainError(ValueError):
    """An evaluation point lies outside the valid t range."""


class SeriesLengthError(ValueError):
    """A coefficient list is too short for the requested operation."""


def _require_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class FracSeries:
    """A truncated fractional power series.

    Attributes:
        alpha: order of the underlying grid, in (0, 1].
        t0: base point, >= 0.  Powers are of (t - t0).
        coeffs: coefficient tuple, index k multiplies (t - t0)**(alpha*k).
    """

    alpha: float
    t0: float
    coeffs: tuple[float, ...]

    def __post_init__(self) -> None:
        alpha = _require_finite("alpha", self.alpha)
        if not 0.0 < alpha <= 1.0:
            raise ValueError(f"alpha must lie in (0, 1], got {alpha}")
        t0 = _require_finite("t0", self.t0)
        if t0 < 0.0:
            raise ValueError(f"t0 must be >= 0, got {t0}")
        coeffs = tuple(_require_finite(f"coeffs[{i}]", c) for i, c in enumerate(self.coeffs))
        if not coeffs:
            raise ValueError("a series needs at least one coefficient")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "t0", t0)
        object.__setattr__(self, "coeffs", coeffs)

    def __len__(self) -> int:
        return len(self.coeffs)


@dataclass(frozen=True)
class EvalGrid:
    """A sampled curve: strictly increasing points with one value per point."""

    points: tuple[float, ...]
    values: tuple[float, ...]

    def __post_init__(self) -> None:
        points = tuple(_require_finite(f"points[{i}]", p) for i, p in enumerate(self.points))
        values = tuple(_require_finite(f"values[{i}]", v) for i, v in enumerate(self.values))
        if len(points) != len(values):
            raise ValueError(
                f"points and values must have equal length, got {len(points)} and {len(values)}"
            )
        for a, b in zip(points, points[1:]):
            if not a < b:
                raise ValueError(f"grid points must be strictly increasing, got {a} then {b}")
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return len(self.points)


def _require_compatible(u: FracSeries, v: FracSeries) -> None:
    if u.alpha != v.alpha:
        raise CompatibilityError(f"alpha mismatch: {u.alpha} vs {v.alpha}")
    if u.t0 != v.t0:
        raise CompatibilityError(f"base point mismatch: {u.t0} vs {v.t0}")


# ---------------------------------------------------------------------------
# transform-domain arithmetic
# ---------------------------------------------------------------------------

def series_add(u: FracSeries, v: FracSeries) -> FracSeries:
    """Coefficientwise sum; the shorter operand is zero-padded."""
    _require_compatible(u, v)
    n = max(len(u), len(v))
    a = u.coeffs + (0.0,) * (n - len(u))
    b = v.coeffs + (0.0,) * (n - len(v))
    return FracSeries(u.alpha, u.t0, tuple(x + y for x, y in zip(a, b)))


def series_sub(u: FracSeries, v: FracSeries) -> FracSeries:
    """Coefficientwise difference; the shorter operand is zero-padded."""
    _require_compatible(u, v)
    n = max(len(u), len(v))
    a = u.coeffs + (0.0,) * (n - len(u))
    b = v.coeffs + (0.0,) * (n - len(v))
    return FracSeries(u.alpha, u.t0, tuple(x - y for x, y in zip(a, b)))


def scalar_mul(c: float, u: FracSeries) -> FracSeries:
    """Multiply every coefficient by the scalar c."""
    c = _require_finite("scalar", c)
    return FracSeries(u.alpha, u.t0, tuple(c * x for x in u.coeffs))


def cauchy_product(u: FracSeries, v: FracSeries) -> FracSeries:
    """Coefficient list of the pointwise product u(t) * v(t).

    The product is the Cauchy convolution F(k) = sum_l U(l) V(k-l).  Only
    indices both operands can fully support are kept, so the result is
    truncated to the shorter input length.
    """
    _require_compatible(u, v)
    n = min(len(u), len(v))
    out = []
    for k in range(n):
        acc = 0.0
        for l in range(k + 1):
            acc += u.coeffs[l] * v.coeffs[k - l]
        out.append(acc)
    return FracSeries(u.alpha, u.t0, tuple(out))


def nary_product(series: Sequence[FracSeries]) -> FracSeries:
    """Left-fold of cauchy_product over a nonempty sequence of series."""
    items = list(series)
    if not items:
        raise ValueError("nary_product needs at least one series")
    acc = items[0]
    for s in items[1:]:
        acc = cauchy_product(acc, s)
    return acc


# ---------------------------------------------------------------------------
# closed-form coefficient lists for source terms
# ---------------------------------------------------------------------------

def monomial_transform(p: float, alpha: float, t0: float, length: int) -> FracSeries:
    """Coefficients of (t - t0)**p: a single spike at index p/alpha.

    p must be nonnegative and p/alpha must be an integer (within GRID_TOL),
    otherwise the monomial cannot live on the alpha-grid.
    """
    p = _require_finite("p", p)
    if p < 0.0:
        raise ValueError(f"monomial power must be >= 0, got {p}")
    if length < 1:
        raise ValueError(f"length must be >= 1, got {length}")
    ratio = p / alpha
    idx = round(ratio)
    if abs(ratio - idx) > GRID_TOL:
        raise RepresentabilityError(
            f"power {p} does not sit on the alpha-grid: {p}/{alpha} = {ratio} is not an integer"
        )
    if idx >= length:
        raise ValueError(
            f"length {length} is too short to hold the spike at index {idx}"
        )
    coeffs = [0.0] * length
    coeffs[idx] = 1.0
    return FracSeries(alpha, t0, tuple(coeffs))


def exp_transform(rate: float, alpha: float, t0: float, length: int) -> FracSeries:
    """Coefficients of exp(rate * (t - t0)**alpha / alpha): rate**k / (alpha**k k!)."""
    rate = _require_finite("rate", rate)
    if length < 1:
        raise ValueError(f"length must be >= 1, got {length}")
    coeffs = [1.0]
    for k in range(1, length):
        coeffs.append(coeffs[-1] * rate / (alpha * k))
    return FracSeries(alpha, t0, tuple(coeffs))


def _quarter_sin(k: int, phase: float) -> float:
    # sin(k*pi/2 + phase) without trig dirt at the quarter turns
    r = k % 4
    if r == 0:
        return math.sin(phase)
    if r == 1:
        return math.cos(phase)
    if r == 2:
        return -math.sin(phase)
    return -math.cos(phase)


def _quarter_cos(k: int, phase: float) -> float:
    return _quarter_sin(k + 1, phase)


def sin_transform(omega: float, phase: float, alpha: float, t0: float, length: int) -> FracSeries:
    """Coefficients of sin(omega * (t - t0)**alpha / alpha + phase).

    F(k) = omega**k / (alpha**k k!) * sin(k*pi/2 + phase).  The quarter-turn
    factor is computed from the mod-4 cycle so the zero slots come out as
    exact zeros.
    """
    omega = _require_finite("omega", omega)
    phase = _require_finite("phase", phase)
    if length < 1:
        raise ValueError(f"length must be >= 1, got {length}")
    coeffs = []
    mag = 1.0
    for k in range(length):
        if k > 0:
            mag *= omega / (alpha * k)
        coeffs.append(mag * _quarter_sin(k, phase))
    return FracSeries(alpha, t0, tuple(coeffs))


def cos_transform(omega: float, phase: float, alpha: float, t0: float, length: int) -> FracSeries:
    """Coefficients of cos(omega * (t - t0)**alpha / alpha + phase)."""
    omega = _require_finite("omega", omega)
    phase = _require_finite("phase", phase)
    if length < 1:
        raise ValueError(f"length must be >= 1, got {length}")
    coeffs = []
    mag = 1.0
    for k in range(length):
        if k > 0:
            mag *= omega / (alpha * k)
        coeffs.append(mag * _quarter_cos(k, phase))
    return FracSeries(alpha, t0, tuple(coeffs))


# ---------------------------------------------------------------------------
# back to the t domain
# ---------------------------------------------------------------------------

def evaluate(u: FracSeries, t: float) -> float:
    """Evaluate the series at t >= t0 by Horner's rule in w = (t - t0)**alpha."""
    t = _require_finite("t", t)
    if t < u.t0:
        raise DomainError(f"t = {t} lies left of the base point t0 = {u.t0}")
    w = (t - u.t0) ** u.alpha
    acc = 0.0
    for c in reversed(u.coeffs):
        acc = acc * w + c
    return acc


# ---------------------------------------------------------------------------
# sampling-based estimator (numeric cross-check only)
# ---------------------------------------------------------------------------

#: largest index the sampled estimator resolves reliably
STABLE_DEPTH = 5


@dataclass(frozen=True)
class SampledTransform:
    """Result of transform_of_samples: the series plus accuracy metadata."""

    series: FracSeries
    stable_depth: int
    warning: str | None


def transform_of_samples(
    f: Callable[[float], float], alpha: float, t0: float, length: int
) -> SampledTransform:
    """Estimate the coefficient list of a callable from point samples.

    The substitution u = (t - t0)**alpha / alpha turns repeated application
    of the reduction T f = (t - t0)**(1 - alpha) f' into plain repeated
    d/du of g(u) = f(t0 + (alpha*u)**(1/alpha)), so F(k) is recovered as
    g's k-th one-sided derivative at u = 0 divided by alpha**k * k!.

    Each derivative is taken with a single one-sided stencil whose step
    balances truncation against roundoff amplification; accuracy decays
    quickly with k and the result is only trustworthy up to STABLE_DEPTH.
    This is an oracle, not a production path.
    """
    alpha = _require_finite("alpha", alpha)
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"alpha must lie in (0, 1], got {alpha}")
    t0 = _require_finite("t0", t0)
    if t0 < 0.0:
        raise ValueError(f"t0 must be >= 0, got {t0}")
    if length < 1:
        raise ValueError(f"length must be >= 1, got {length}")

    inv = 1.0 / alpha

    def g(u: float) -> float:
        if u <= 0.0:
            return float(f(t0))
        return float(f(t0 + (alpha * u) ** inv))

    coeffs = [float(f(t0))]
    for k in range(1, length):
        npts = k + 5
        h = EPS ** (1.0 / (k + 5))
        nodes = [i * h for i in range(npts)]
        weights = fd_weights(0.0, nodes, k)[k]
        deriv = sum(w * g(x) for w, x in zip(weights, nodes))
        coeffs.append(deriv / (alpha**k * math.factorial(k)))

    warning = None
    if length - 1 > STABLE_DEPTH:
        warning = (
            f"coefficients beyond index {STABLE_DEPTH} come from stencils deeper than the "
            "stable range and should not be trusted"
        )
    return SampledTransform(FracSeries(alpha, t0, tuple(coeffs)), STABLE_DEPTH, warning)
