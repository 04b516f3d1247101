"""Finite-difference derivative properties, residuals, and the case registry."""

import math

import pytest

from cfdtm.oracle import (
    OracleConfig,
    compare,
    conformable_deriv,
    exact_registry,
    example_ids,
    grid_points,
    residual,
)
from cfdtm.series import DomainError, FracSeries, evaluate
from cfdtm.derivatives import DerivOrder, deriv_transform
from cfdtm.dsl import parse_equation
from cfdtm.solver import OdeProblem, solve


def registry_problem(case_id, alpha=None, n_terms=None):
    case = exact_registry(case_id)
    a = case.alpha_default if alpha is None else alpha
    res = parse_equation(case.equation_for(a), a)
    assert res.ok, res.diagnostics
    return case, OdeProblem(
        alpha=a, t0=0.0, beta_max=res.lowered.beta_max, rhs=res.lowered.rhs,
        init=case.init, n_terms=case.n_terms if n_terms is None else n_terms)


# ---------------------------------------------------------------------------
# conformable_deriv
# ---------------------------------------------------------------------------

def test_power_rule_at_one():
    got = conformable_deriv(lambda t: t * t, 0.5, 1.0)
    assert got == pytest.approx(2.0, abs=1e-6)


def test_constant_annihilated():
    got = conformable_deriv(lambda t: 4.25, 0.5, 0.7)
    assert abs(got) <= 1e-8


def test_sine_derivative_closed_form():
    a, w, t = 0.5, 2.0, 0.5
    got = conformable_deriv(lambda x: math.sin(w * x**a / a), a, t)
    want = w * math.cos(w * t**a / a)
    assert got == pytest.approx(want, abs=1e-5)


def test_domain_guard_near_base_point():
    with pytest.raises(DomainError):
        conformable_deriv(lambda t: t, 0.5, 1e-4)
    with pytest.raises(DomainError):
        conformable_deriv(lambda t: t, 0.5, 1.0005, t0=1.0)


def test_order_cap_and_bad_order():
    with pytest.raises(ValueError):
        conformable_deriv(lambda t: t, 6.0, 1.0)
    with pytest.raises(ValueError):
        conformable_deriv(lambda t: t, 0.0, 1.0)


def test_custom_config_step():
    cfg = OracleConfig(h=1e-7, t_min_offset=1e-2)
    got = conformable_deriv(lambda t: t * t, 1.0, 0.5, config=cfg)
    assert got == pytest.approx(1.0, abs=1e-7)
    with pytest.raises(DomainError):
        conformable_deriv(lambda t: t, 1.0, 5e-3, config=cfg)


# ---------------------------------------------------------------------------
# operator properties
# ---------------------------------------------------------------------------

SAMPLE_ALPHAS = (0.5, 0.8)
SAMPLE_POINTS = (0.3, 0.7, 1.1)


@pytest.mark.parametrize("a", SAMPLE_ALPHAS)
def test_linearity(a):
    def f(t):
        return t * t

    def g(t):
        return math.sin(t**a / a)

    for t in SAMPLE_POINTS:
        combo = conformable_deriv(lambda x: 2.0 * f(x) + 3.0 * g(x), a, t)
        parts = 2.0 * conformable_deriv(f, a, t) + 3.0 * conformable_deriv(g, a, t)
        assert combo == pytest.approx(parts, abs=1e-7)


@pytest.mark.parametrize("a", SAMPLE_ALPHAS)
def test_product_rule(a):
    def f(t):
        return t * t

    def g(t):
        return math.sin(t**a / a)

    for t in SAMPLE_POINTS:
        whole = conformable_deriv(lambda x: f(x) * g(x), a, t)
        split = f(t) * conformable_deriv(g, a, t) + g(t) * conformable_deriv(f, a, t)
        assert whole == pytest.approx(split, abs=1e-5)


@pytest.mark.parametrize("a", SAMPLE_ALPHAS)
def test_quotient_rule(a):
    def f(t):
        return t * t

    def g(t):
        # stays within [0.86, 1] on the sample points, safely away from 0
        return math.sin(t**a / a)

    for t in SAMPLE_POINTS:
        whole = conformable_deriv(lambda x: f(x) / g(x), a, t)
        split = (g(t) * conformable_deriv(f, a, t)
                 - f(t) * conformable_deriv(g, a, t)) / g(t) ** 2
        assert whole == pytest.approx(split, abs=1e-5)


def test_normalized_power_has_unit_derivative():
    for a in (0.5, 0.8):
        for t0 in (0.0, 0.5):
            for t in (t0 + 0.3, t0 + 0.9):
                got = conformable_deriv(lambda x: (x - t0) ** a / a, a, t, t0=t0)
                assert got == pytest.approx(1.0, abs=1e-6)


def test_difference_matches_transform_shift():
    # the numeric operator applied to a series-as-callable must agree with
    # the shift formula applied to its coefficients.  For beta = 2*alpha the
    # shift drops the term coeffs[1] * t^(alpha - beta), which is singular
    # rather than a series term, so the identity is only meaningful on series
    # whose slots below the shift are zero; exp(t) on the half grid is one
    a = 0.5
    coeffs = [0.0] * 30
    for j in range(15):
        coeffs[2 * j] = 1.0 / math.factorial(j)
    u = FracSeries(a, 0.0, tuple(coeffs))

    def fn(t):
        return evaluate(u, t)

    for beta in (a, 2 * a):
        shifted = deriv_transform(u, DerivOrder.for_alpha(beta, a))
        for t in (0.3, 0.6):
            numeric = conformable_deriv(fn, beta, t)
            assert numeric == pytest.approx(evaluate(shifted, t), abs=1e-4)


# ---------------------------------------------------------------------------
# residual / compare
# ---------------------------------------------------------------------------

def test_decay_residual_is_small():
    case, p = registry_problem("example1")
    series = solve(p)
    rep = residual(p, series, grid_points(0.05, 0.5, 10))
    assert rep.max_abs_residual <= 1e-4


def test_flat_solution_residual_vanishes():
    case, p = registry_problem("example4")
    series = solve(p)
    rep = residual(p, series, grid_points(0.05, 2.0, 10))
    assert rep.max_abs_residual <= 1e-6


def test_empty_grid_gives_empty_report():
    case, p = registry_problem("example1")
    rep = residual(p, solve(p), ())
    assert rep.max_abs_residual == 0.0
    assert rep.series_values == ()


def test_compare_flat_solution_exact():
    case, p = registry_problem("example4")
    rep = compare(p, case.exact_for(p.alpha), grid_points(0.0, 2.0, 41))
    assert rep.max_abs_error <= 1e-12


def test_compare_decay():
    case, p = registry_problem("example1")
    rep = compare(p, case.exact_for(p.alpha), grid_points(0.0, 0.5, 50))
    assert rep.max_abs_error <= 1e-8


def test_truncated_series_drifts_near_one():
    # with only 10 terms the saturation series peels away from the closed
    # form as t grows
    case, p = registry_problem("example3", alpha=0.6, n_terms=10)
    exact = case.exact_for(0.6)
    rep = compare(p, exact, grid_points(0.5, 1.0, 2))
    errs = rep.abs_errors
    assert errs is not None
    assert errs[1] > errs[0]


def test_report_abs_errors_roundtrip():
    case, p = registry_problem("example1")
    rep = compare(p, case.exact_for(p.alpha), grid_points(0.0, 0.4, 5))
    assert rep.abs_errors == tuple(
        abs(s - e) for s, e in zip(rep.series_values, rep.exact_values))


# ---------------------------------------------------------------------------
# registry
# ---------------------------------------------------------------------------

def test_registry_ids():
    assert example_ids() == ("example1", "example2", "example3", "example4", "example5")


def test_registry_closed_forms():
    e1 = exact_registry("example1").exact_for(1.0)
    assert e1(1.0) == pytest.approx(math.exp(-1.0), rel=1e-15)
    e2 = exact_registry("example2").exact_for(0.5)
    assert e2(0.16) == pytest.approx(4.0, rel=1e-12)
    e3 = exact_registry("example3").exact_for(1.0)
    assert e3(40.0) == pytest.approx(1.0, abs=1e-12)


def test_registry_unknown_name():
    with pytest.raises(KeyError):
        exact_registry("example9")


def test_registry_validity_caps():
    case = exact_registry("example2")
    a = 0.5
    assert case.valid_stop(a) == pytest.approx(0.9 * a ** (1.0 / a), rel=1e-15)
    assert case.compare_stop(a) < case.valid_stop(a)


def test_grid_points():
    assert grid_points(0.0, 1.0, 3) == (0.0, 0.5, 1.0)
    assert grid_points(0.25, 0.75, 1) == (0.25,)
    with pytest.raises(ValueError):
        grid_points(0.0, 1.0, 0)
