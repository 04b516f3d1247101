"""The acceptance gate: one test per numbered criterion, pinned tolerances.

Every test prints a single "criterion NN <label>: PASS/FAIL (<numbers>)"
line before asserting, so a red criterion still leaves its measured
evidence in the log (run with -v for the per-criterion verdict lines,
add -s to see the detail lines of passing criteria too).
"""

import csv
import math
import random

import pytest

from cfdtm.derivatives import DerivOrder, gamma_ratio
from cfdtm.dsl import format_equation, parse_equation
from cfdtm.cli import main
from cfdtm.oracle import (
    compare,
    conformable_deriv,
    exact_registry,
    grid_points,
    residual,
)
from cfdtm.series import evaluate
from cfdtm.solver import Add, Const, Mul, OdeProblem, Unknown, solve


def _report(num: int, label: str, ok: bool, detail: str) -> bool:
    verdict = "PASS" if ok else "FAIL"
    print(f"criterion {num:02d} {label}: {verdict} ({detail})")
    return ok


def registry_problem(case_id, alpha=None, n_terms=None):
    case = exact_registry(case_id)
    a = case.alpha_default if alpha is None else alpha
    res = parse_equation(case.equation_for(a), a)
    assert res.ok, res.diagnostics
    return case, OdeProblem(
        alpha=a, t0=0.0, beta_max=res.lowered.beta_max, rhs=res.lowered.rhs,
        init=case.init, n_terms=case.n_terms if n_terms is None else n_terms)


def max_rel(got, want):
    # Relative error against nonzero targets, absolute against exact zeros,
    # so a single 1e-12 bound covers both.
    return max(abs(g - w) / abs(w) if w != 0.0 else abs(g)
               for g, w in zip(got, want))


def test_c01_decay_coefficients_and_values():
    worst_rel, worst_eval = 0.0, 0.0
    for a in (0.5, 0.75, 1.0):
        _, p = registry_problem("example1", alpha=a, n_terms=12)
        s = solve(p)
        want = [(-1.0) ** n / (math.factorial(n) * a**n) for n in range(13)]
        worst_rel = max(worst_rel, max_rel(s.coeffs, want))
        _, p30 = registry_problem("example1", alpha=a, n_terms=30)
        rep = compare(p30, lambda t: math.exp(-(t**a) / a), grid_points(0.0, 0.5, 50))
        worst_eval = max(worst_eval, rep.max_abs_error)
    ok = worst_rel <= 1e-12 and worst_eval <= 1e-8
    assert _report(1, "decay example", ok,
                   f"coeff rel {worst_rel:.2e}, eval {worst_eval:.2e}")


def test_c02_growth_coefficients_and_values():
    worst_rel, worst_eval = 0.0, 0.0
    for a in (0.5, 0.75, 1.0):
        case, p = registry_problem("example2", alpha=a)
        s = solve(p)
        want = [0.0] + [a**-k for k in range(1, 11)]
        worst_rel = max(worst_rel, max_rel(s.coeffs[:11], want))
        stop = 0.5 * a ** (1.0 / a)

        def exact(t, a=a):
            return t**a / (a - t**a)

        rep = compare(p, exact, grid_points(0.0, stop, 21))
        worst_eval = max(worst_eval, rep.max_abs_error)
    ok = worst_rel <= 1e-12 and worst_eval <= 1e-6
    assert _report(2, "growth example", ok,
                   f"coeff rel {worst_rel:.2e}, eval {worst_eval:.2e}")


def test_c03_saturation_coefficients_and_values():
    odd = {1: 1.0, 3: -1.0 / 3.0, 5: 2.0 / 15.0, 7: -17.0 / 315.0, 9: 62.0 / 2835.0}
    worst_rel, worst_eval = 0.0, 0.0
    for a in (0.5, 1.0):
        case, p = registry_problem("example3", alpha=a)
        s = solve(p)
        want = [odd.get(k, 0.0) / a**k if k in odd else 0.0 for k in range(10)]
        worst_rel = max(worst_rel, max_rel(s.coeffs[:10], want))

        def exact(t, a=a):
            u = math.exp(2.0 * t**a / a)
            return (u - 1.0) / (u + 1.0)

        rep = compare(p, exact, grid_points(0.0, 0.4, 41))
        worst_eval = max(worst_eval, rep.max_abs_error)
    ok = worst_rel <= 1e-12 and worst_eval <= 1e-6
    assert _report(3, "saturation example", ok,
                   f"coeff rel {worst_rel:.2e}, eval {worst_eval:.2e}")


def test_c04_damped_second_order_truncates():
    _, p = registry_problem("example4")
    s = solve(p)
    seed_ok = s.coeffs[:4] == (1.0, 0.0, 1.0, 0.0)
    tail = max(abs(c) for c in s.coeffs[4:21])
    rep = compare(p, lambda t: 1.0 + t, grid_points(0.0, 2.0, 41))
    ok = seed_ok and tail <= 1e-12 and rep.max_abs_error <= 1e-12
    assert _report(4, "terminating example", ok,
                   f"seed {'ok' if seed_ok else 'bad'}, tail {tail:.2e}, "
                   f"eval {rep.max_abs_error:.2e}")


def test_c05_mixed_order_series():
    _, p = registry_problem("example5", n_terms=40)
    s = solve(p)
    want = [0.0 if (k == 0 or k % 2) else 1.0 / math.factorial(k // 2)
            for k in range(41)]
    worst_rel = max_rel(s.coeffs, want)
    rep = compare(p, lambda t: math.exp(t) - 1.0, grid_points(0.0, 1.0, 50))
    ok = worst_rel <= 1e-12 and rep.max_abs_error <= 1e-8
    assert _report(5, "mixed-order example", ok,
                   f"coeff rel {worst_rel:.2e}, eval {rep.max_abs_error:.2e}")


def test_c06_gamma_ratio_identities():
    worst_deg = 0.0
    for a in (0.1, 0.25, 0.5, 1.0):
        order = DerivOrder.for_alpha(a, a)
        for k in range(101):
            want = a * (k + 1)
            worst_deg = max(worst_deg, abs(gamma_ratio(k, a, order) - want) / want)
    rng = random.Random(617)
    worst_lg = 0.0
    for _ in range(50):
        a = rng.uniform(0.3, 1.0)
        s = rng.randint(1, max(1, int(4.0 / a)))
        beta = min(s * a, 4.0)
        if abs(beta / a - round(beta / a)) > 1e-9:
            beta, s = a, 1
        order = DerivOrder.for_alpha(beta, a)
        k = rng.randint(0, 40)
        x = k * a + beta
        want = math.exp(math.lgamma(x + 1.0) - math.lgamma(x - order.m))
        worst_lg = max(worst_lg, abs(gamma_ratio(k, a, order) - want) / want)
    ok = worst_deg <= 1e-14 and worst_lg <= 1e-10
    assert _report(6, "gamma ratio", ok,
                   f"degeneration rel {worst_deg:.2e}, log-gamma rel {worst_lg:.2e}")


def test_c07_difference_operator_properties():
    worst = {}

    def f(t):
        return t * t

    checks = []
    for a in (0.5, 0.8):
        def g(t, a=a):
            return math.sin(t**a / a)

        for t in (0.3, 0.7, 1.1):
            lin = abs(conformable_deriv(lambda x: 2 * f(x) + 3 * g(x), a, t)
                      - 2 * conformable_deriv(f, a, t) - 3 * conformable_deriv(g, a, t))
            power = abs(conformable_deriv(f, a, t) - 2.0 * t ** (2 - a))
            const = abs(conformable_deriv(lambda x: 4.25, a, t))
            prod = abs(conformable_deriv(lambda x: f(x) * g(x), a, t)
                       - f(t) * conformable_deriv(g, a, t)
                       - g(t) * conformable_deriv(f, a, t))
            quot = abs(conformable_deriv(lambda x: f(x) / g(x), a, t)
                       - (g(t) * conformable_deriv(f, a, t)
                          - f(t) * conformable_deriv(g, a, t)) / g(t) ** 2)
            unit = abs(conformable_deriv(lambda x: x**a / a, a, t) - 1.0)
            checks.append((lin, power, const, prod, quot, unit))
    names = ("linearity", "power", "constant", "product", "quotient", "unit")
    tols = (1e-7, 1e-5, 1e-8, 1e-5, 1e-5, 1e-6)
    for i, name in enumerate(names):
        worst[name] = max(c[i] for c in checks)
    ok = all(worst[n] <= tol for n, tol in zip(names, tols))
    assert _report(7, "difference-operator properties", ok,
                   ", ".join(f"{n} {worst[n]:.1e}" for n in names))


def test_c08_residuals_for_all_examples():
    worst = {}
    for cid in ("example1", "example2", "example3", "example4", "example5"):
        case, p = registry_problem(cid)
        s = solve(p)
        lo, hi = case.residual_span(p.alpha)
        rep = residual(p, s, grid_points(lo, hi, 10))
        worst[cid] = rep.max_abs_residual
    ok = all(v <= 1e-4 for v in worst.values())
    assert _report(8, "residual suite", ok,
                   ", ".join(f"{k[-1]}: {v:.1e}" for k, v in worst.items()))


def test_c09_random_linear_problems_match_unrolled_oracle():
    rng = random.Random(20240817)
    worst = 0.0
    for _ in range(100):
        a = rng.uniform(0.1, 1.0)
        coef = rng.uniform(-3.0, 3.0)
        forcing = rng.uniform(-3.0, 3.0)
        y0 = rng.uniform(-2.0, 2.0)
        n = 25
        rhs = Add(Mul((Const(coef), Unknown())), Const(forcing))
        p = OdeProblem(alpha=a, t0=0.0, beta_max=a, rhs=rhs, init=(y0,), n_terms=n)
        got = solve(p).coeffs

        manual = [y0]
        for k in range(n):
            manual.append((coef * manual[k] + (forcing if k == 0 else 0.0))
                          / (a * (k + 1)))

        for x, w in zip(got, manual):
            err = abs(x - w) / abs(w) if w != 0.0 else abs(x)
            worst = max(worst, err)
    ok = worst <= 1e-12
    assert _report(9, "unrolled-recurrence equivalence", ok, f"max rel {worst:.2e}")


def test_c10_four_alpha_comparison_tables(tmp_path):
    out = tmp_path / "fig"
    code = main(["figure1", "--out", str(out)])
    assert code == 0
    errors = {}
    at_one = {}
    for a in (0.9, 0.8, 0.7, 0.6):
        with open(out / f"figure1_alpha_{a:g}.csv", newline="", encoding="utf-8") as fh:
            rows = list(csv.DictReader(fh))
        assert len(rows) == 101
        errs = [(float(r["t"]), abs(float(r["exact"]) - float(r["cfdtm"]))) for r in rows]
        errors[a] = max(e for t, e in errs if t <= 0.6 + 1e-12)
        at_one[a] = errs[-1][1]
    trend_ok = at_one[0.6] > at_one[0.9]
    bound_ok = all(v <= 0.02 for v in errors.values())
    ok = bound_ok and trend_ok
    detail = ", ".join(f"a={a:g}: {errors[a]:.4f}" for a in (0.9, 0.8, 0.7, 0.6))
    assert _report(10, "four-alpha comparison", ok,
                   f"max err on [0,0.6] {detail}; err(1.0) a=0.6 {at_one[0.6]:.3f} "
                   f"vs a=0.9 {at_one[0.9]:.5f}")


CORPUS = [
    ("D[0.5] y = -y", 0.5),
    ("D[0.5] y = 1 + 2*y + y^2", 0.5),
    ("D[0.5] y = 1 - y^2", 0.5),
    ("1*D[2] y + 1*D[1.5] y + 1*y = 1 + t^1", 0.5),
    ("D[1.5] y = D[0.5] y", 0.5),
    ("D[1] y = exp(2*t^a/a)", 1.0),
    ("D[1] y = sin(1*t^a/a + 0.5)", 1.0),
    ("D[1] y = cos(3*t^a/a)", 1.0),
    ("D[1] y = sin(2*t^a/a - 0.25)", 1.0),
    ("D[1] y = exp(-1*t^a/a)", 1.0),
    ("-D[0.5] y = y", 0.5),
    ("2*D[0.5] y - 3*y = t^0.5", 0.5),
    ("D[0.5] y = (1 + y)*(1 - y)", 0.5),
    ("D[0.5] y = -(2)", 0.5),
    ("D[0.5] y = y*y*y", 0.5),
    ("D[0.5] y = 2 - -y", 0.5),
    ("D[1] y = t^2 + t^1", 1.0),
    ("D[0.5] y = 0.5*y + 1e-3", 0.5),
    ("D[2] y + D[1] y = 1", 0.5),
    ("D[0.5] y = y^3 - 2*y^2 + y", 0.5),
    ("D[0.5] y = -2*y", 0.5),
    ("D[1] y = cos(1.5*t^a/a + 0.1) - sin(0.5*t^a/a)", 1.0),
]

MALFORMED = [
    "",
    "y = ",
    "D[0.5] y",
    "D[0.5] y = @",
    "D[] y = 1",
    "D[0.5] y = (1 + y",
    "D[0.5] y = y^0",
    "D[0.5] y = y^2.5",
    "D[0.5] y = exp(2*t^b/a)",
    "D[0.5] y = 1 + * y",
]


def test_c11_parser_suite():
    trips = 0
    for src, a in CORPUS:
        first = parse_equation(src, a)
        assert first.ok, (src, first.diagnostics)
        second = parse_equation(format_equation(first.ast), a)
        assert second.ast == first.ast, src
        trips += 1

    rejected = 0
    for src in MALFORMED:
        result = parse_equation(src, 0.5)
        assert not result.ok and result.diagnostics
        rejected += 1

    res = parse_equation("1*D[2] y + 1*D[1.5] y + 1*y = 1 + t^1", 0.5)
    p = OdeProblem(alpha=0.5, t0=0.0, beta_max=res.lowered.beta_max,
                   rhs=res.lowered.rhs, init=(1.0, 1.0), n_terms=20)
    s = solve(p)
    normalized_ok = (s.coeffs[:4] == (1.0, 0.0, 1.0, 0.0)
                     and max(abs(c) for c in s.coeffs[4:]) <= 1e-12
                     and max(abs(evaluate(s, t) - (1.0 + t))
                             for t in grid_points(0.0, 2.0, 21)) <= 1e-12)

    ok = trips >= 20 and rejected >= 10 and normalized_ok
    assert _report(11, "parser suite", ok,
                   f"{trips} round-trips, {rejected} rejections, "
                   f"normalization {'ok' if normalized_ok else 'bad'}")
