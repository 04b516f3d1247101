"""Transform-domain rules for conformable derivatives of fractional series.

Taking the conformable derivative of order beta of a series on the
alpha-grid shifts the coefficient list left by s = beta/alpha slots and
scales each entry by a ratio of gamma values,

    F(k) = U(k + s) * Gamma(k*alpha + beta + 1) / Gamma(k*alpha + beta - m),

with m the integer part rounding such that m < beta <= m + 1.  The gamma
ratio telescopes into the falling-factorial product of m + 1 linear factors,
which is what gamma_ratio computes; no gamma evaluations are involved.

Initial data enters through the same grid: the first s_max coefficients of a
solution come straight from the classical derivatives at the base point,
with zeros in every slot whose index does not land on an integer power.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .series import (
    GRID_TOL,
    FracSeries,
    RepresentabilityError,
    SeriesLengthError,
    nary_product,
)


@dataclass(frozen=True)
class DerivOrder:
    """A conformable derivative order resolved against a specific alpha.

    Attributes:
        beta: the order itself, > 0.
        m: integer with m < beta <= m + 1 (number of classical derivatives
           consumed before the fractional remainder).
        shift: beta/alpha, the whole number of slots the transform shifts.
    """

    beta: float
    m: int
    shift: int

    @classmethod
    def for_alpha(cls, beta: float, alpha: float) -> "DerivOrder":
        beta = float(beta)
        alpha = float(alpha)
        if not math.isfinite(beta) or beta <= 0.0:
            raise ValueError(f"derivative order must be a positive real, got {beta}")
        if not math.isfinite(alpha) or not 0.0 < alpha <= 1.0:
            raise ValueError(f"alpha must lie in (0, 1], got {alpha}")
        ratio = beta / alpha
        shift = round(ratio)
        if abs(ratio - shift) > GRID_TOL or shift < 1:
            raise RepresentabilityError(
                f"order {beta} does not sit on the alpha-grid: {beta}/{alpha} = {ratio} "
                "must be a positive integer"
            )
        m = math.ceil(beta) - 1
        return cls(beta, m, shift)


def gamma_ratio(k: int, alpha: float, order: DerivOrder) -> float:
    """Falling-factorial value of Gamma(k*alpha+beta+1) / Gamma(k*alpha+beta-m).

    Computed as the product of the m+1 factors (k*alpha + beta - j) for
    j = 0..m.  For beta = alpha this degenerates to alpha * (k + 1).
    """
    if k < 0:
        raise ValueError(f"index must be >= 0, got {k}")
    x = k * alpha + order.beta
    out = 1.0
    for j in range(order.m + 1):
        out *= x - j
    return out


def deriv_transform(u: FracSeries, order: DerivOrder) -> FracSeries:
    """Coefficient list of the conformable derivative of order beta of u.

    Pure shift-and-scale: result[k] = gamma_ratio(k) * u[k + shift].  The
    input must have more coefficients than the shift, and the result is
    shorter by exactly that shift.
    """
    s = order.shift
    if len(u) <= s:
        raise SeriesLengthError(
            f"series of length {len(u)} cannot be shifted by {s} slots"
        )
    out = tuple(
        gamma_ratio(k, u.alpha, order) * u.coeffs[k + s] for k in range(len(u) - s)
    )
    return FracSeries(u.alpha, u.t0, out)


def deriv_product_transform(
    factors: Sequence[tuple[FracSeries, DerivOrder]]
) -> FracSeries:
    """Coefficients of a product of conformable derivatives.

    Each (series, order) pair is shifted individually and the results are
    convolved left to right, which matches the nested-sum formula for the
    transform of such a product.
    """
    items = list(factors)
    if not items:
        raise ValueError("deriv_product_transform needs at least one factor")
    return nary_product([deriv_transform(u, order) for u, order in items])


def seed_initial_conditions(
    alpha: float, beta_max: float, classical_derivs: Sequence[float]
) -> tuple[float, ...]:
    """First beta_max/alpha coefficients of a solution from its initial data.

    classical_derivs holds y(t0), y'(t0), ... and must have exactly
    ceil(beta_max) entries.  Slot k of the prefix is
    classical_derivs[alpha*k] / (alpha*k)! when alpha*k is an integer and
    zero otherwise.
    """
    order = DerivOrder.for_alpha(beta_max, alpha)
    derivs = [float(v) for v in classical_derivs]
    expected = math.ceil(beta_max)
    if len(derivs) != expected:
        raise ValueError(
            f"need exactly {expected} classical derivatives for order {beta_max}, "
            f"got {len(derivs)}"
        )
    prefix = []
    for k in range(order.shift):
        x = alpha * k
        j = round(x)
        if abs(x - j) <= GRID_TOL:
            if j >= len(derivs):
                raise ValueError(
                    f"slot {k} needs the classical derivative of order {j}, "
                    f"but only {len(derivs)} were given"
                )
            prefix.append(derivs[j] / math.factorial(j))
        else:
            prefix.append(0.0)
    return tuple(prefix)
