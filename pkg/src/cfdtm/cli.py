"""Command-line front end.

Four subcommands: solve a problem file, run the built-in examples against
their closed forms, tabulate the four-alpha comparison at N = 10, and
print the known transform of a source function.  Delimited output is
CSV (header row, comma separator, LF endings, 17 significant digits);
whenever a CSV is written a PNG plot of the same data lands next to it.

Exit codes: 0 success, 1 I/O failure, 2 validation or parse diagnostics.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .dsl import parse_equation, parse_function
from .oracle import ExampleCase, compare, exact_registry, example_ids, grid_points, residual
from .problemfile import ProblemFile, load_problem_file, problem_from_file
from .series import FracSeries, cos_transform, evaluate, exp_transform, monomial_transform, sin_transform
from .solver import CosSource, ExpSource, Monomial, OdeProblem, SinSource, solve


def main(argv: Sequence[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cfdtm",
        description="Truncated fractional power-series solutions of conformable ODEs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("solve", help="solve a problem file and print the coefficient table")
    sp.add_argument("file", help="path to a key = value problem file")
    sp.add_argument("--csv", metavar="PATH",
                    help="write t,y values here (a PNG plot lands next to it)")
    sp.set_defaults(func=_cmd_solve)

    ep = sub.add_parser("examples", help="run the built-in problems against their closed forms")
    ep.add_argument("--only", metavar="ID", help="run a single case (example1..example5)")
    ep.set_defaults(func=_cmd_examples)

    fp = sub.add_parser("figure1",
                        help="write exact-vs-series tables at N = 10 for alpha = 0.9, 0.8, 0.7, 0.6")
    fp.add_argument("--out", required=True, metavar="DIR", help="output directory")
    fp.set_defaults(func=_cmd_figure1)

    tp = sub.add_parser("transform", help="print the transform coefficients of a source function")
    tp.add_argument("function", help="one of t^p, exp(L*t^a/a), sin(w*t^a/a + c), cos(w*t^a/a + c)")
    tp.add_argument("--alpha", type=float, default=1.0)
    tp.add_argument("--t0", type=float, default=0.0)
    tp.add_argument("--terms", type=int, default=8, help="number of coefficients to print")
    tp.set_defaults(func=_cmd_transform)
    return parser


def _print_diags(diags: Iterable[object]) -> None:
    for d in diags:
        print(f"error: {d}", file=sys.stderr)


def _rational_note(x: float) -> str:
    """A display-only fraction when x is within 1e-9 of a small rational."""
    if x == 0.0 or not math.isfinite(x):
        return ""
    frac = Fraction(x).limit_denominator(10**6)
    if frac == 0 or abs(float(frac) - x) > 1e-9 * max(1.0, abs(x)):
        return ""
    if frac.denominator == 1:
        return f"= {frac.numerator}"
    return f"= {frac.numerator}/{frac.denominator}"


def _print_coeff_table(series: FracSeries) -> None:
    print(f"{'k':>4}  {'Y(k)':>24}")
    for k, c in enumerate(series.coeffs):
        note = _rational_note(c)
        tail = f"  {note}" if note else ""
        print(f"{k:>4}  {c:>24.17g}{tail}")


def _write_csv(path: str, header: Sequence[str], rows: Iterable[Sequence[float]]) -> None:
    import csv

    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(list(header))
        for row in rows:
            writer.writerow([format(float(v), ".17g") for v in row])


def _render_series_png(path: str, pts: Sequence[float], series_vals: Sequence[float],
                       exact_vals: Sequence[float] | None, title: str) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    ax.plot(pts, series_vals, color="tab:blue", label="series")
    if exact_vals is not None:
        ax.plot(pts, exact_vals, "--", color="tab:orange", label="exact")
    ax.set_xlabel("t")
    ax.set_ylabel("y")
    ax.set_title(title)
    ax.grid(alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def _render_panel_png(path: str, panels: Sequence[tuple[float, Sequence[float],
                                                        Sequence[float], Sequence[float]]]) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, axes = plt.subplots(2, 2, figsize=(9.0, 6.5), sharex=True)
    for ax, (alpha, pts, exact_vals, series_vals) in zip(axes.flat, panels):
        ax.plot(pts, exact_vals, "--", color="tab:orange", label="exact")
        ax.plot(pts, series_vals, color="tab:blue", label="series, N = 10")
        ax.set_title(f"alpha = {alpha:g}")
        ax.grid(alpha=0.3)
    axes.flat[0].legend(loc="upper left")
    for ax in axes[-1]:
        ax.set_xlabel("t")
    for row in axes:
        row[0].set_ylabel("y")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


# ---------------------------------------------------------------------------
# solve
# ---------------------------------------------------------------------------

def _cmd_solve(args: argparse.Namespace) -> int:
    pf, diags = load_problem_file(args.file)
    if pf is None:
        _print_diags(diags)
        return 2
    problem, issues = problem_from_file(pf)
    if problem is None:
        _print_diags(issues)
        return 2

    exact: Callable[[float], float] | None = None
    if pf.exact is not None:
        try:
            case = exact_registry(pf.exact)
        except KeyError as err:
            print(f"error: {err.args[0]}", file=sys.stderr)
            return 2
        exact = case.exact_for(pf.alpha)

    series = solve(problem)
    print(f"# {pf.equation}")
    print(f"# alpha = {pf.alpha:g}  t0 = {pf.t0:g}  N = {pf.n_terms}")
    _print_coeff_table(series)

    if args.csv:
        start, stop, count = pf.grid
        pts = grid_points(start, stop, count)
        values = [evaluate(series, t) for t in pts]
        if exact is not None:
            exact_vals = [exact(t) for t in pts]
            header = ("t", "y_series", "y_exact", "abs_err")
            rows = [(t, y, ye, abs(y - ye)) for t, y, ye in zip(pts, values, exact_vals)]
        else:
            exact_vals = None
            header = ("t", "y_series")
            rows = [(t, y) for t, y in zip(pts, values)]
        _write_csv(args.csv, header, rows)
        print(f"wrote {args.csv}")
        png = os.path.splitext(args.csv)[0] + ".png"
        _render_series_png(png, pts, values, exact_vals, pf.equation)
        print(f"wrote {png}")
    return 0


# ---------------------------------------------------------------------------
# examples
# ---------------------------------------------------------------------------

def _case_problem(case: ExampleCase, alpha: float, n_terms: int) -> OdeProblem:
    result = parse_equation(case.equation_for(alpha), alpha)
    if result.lowered is None:
        raise RuntimeError(f"built-in equation failed to parse: {result.diagnostics}")
    return OdeProblem(
        alpha=alpha,
        t0=0.0,
        beta_max=result.lowered.beta_max,
        rhs=result.lowered.rhs,
        init=case.init,
        n_terms=n_terms,
    )


def _run_case(case: ExampleCase) -> tuple[bool, str]:
    alpha = case.alpha_default
    problem = _case_problem(case, alpha, case.n_terms)
    series = solve(problem)

    expected = case.expected_coeffs(alpha, case.n_terms)
    coeff_err = 0.0
    for k, want in enumerate(expected):
        got = series.coeffs[k]
        if want == 0.0:
            coeff_err = max(coeff_err, abs(got))
        else:
            coeff_err = max(coeff_err, abs(got - want) / abs(want))
    coeff_ok = coeff_err <= max(case.coeff_rtol, 1e-12)

    pts = grid_points(0.0, case.compare_stop(alpha), case.compare_count)
    rep = compare(problem, case.exact_for(alpha), pts)
    compare_ok = rep.max_abs_error <= case.compare_tol

    lo, hi = case.residual_span(alpha)
    res = residual(problem, series, grid_points(lo, hi, case.residual_count))
    residual_ok = res.max_abs_residual <= case.residual_tol

    ok = coeff_ok and compare_ok and residual_ok
    detail = (f"coeff {coeff_err:9.2e}  cmp {rep.max_abs_error:9.2e}"
              f"  res {res.max_abs_residual:9.2e}")
    return ok, detail


def _cmd_examples(args: argparse.Namespace) -> int:
    ids = example_ids()
    if args.only is not None:
        if args.only not in ids:
            print(f"error: unknown example {args.only!r}; known ids: {', '.join(ids)}",
                  file=sys.stderr)
            return 2
        ids = (args.only,)

    all_ok = True
    print(f"{'case':<10} {'result':<6} {'checks':<44} description")
    for cid in ids:
        case = exact_registry(cid)
        ok, detail = _run_case(case)
        all_ok = all_ok and ok
        print(f"{cid:<10} {'PASS' if ok else 'FAIL':<6} {detail:<44} {case.title}")
    return 0 if all_ok else 1


# ---------------------------------------------------------------------------
# figure1
# ---------------------------------------------------------------------------

_PANEL_ALPHAS = (0.9, 0.8, 0.7, 0.6)


def _cmd_figure1(args: argparse.Namespace) -> int:
    os.makedirs(args.out, exist_ok=True)
    case = exact_registry("example3")
    pts = grid_points(0.0, 1.0, 101)
    panels = []
    for alpha in _PANEL_ALPHAS:
        problem = _case_problem(case, alpha, 10)
        series = solve(problem)
        exact = case.exact_for(alpha)
        exact_vals = [exact(t) for t in pts]
        series_vals = [evaluate(series, t) for t in pts]
        path = os.path.join(args.out, f"figure1_alpha_{alpha:g}.csv")
        _write_csv(path, ("t", "exact", "cfdtm"),
                   zip(pts, exact_vals, series_vals))
        print(f"wrote {path}")
        panels.append((alpha, pts, exact_vals, series_vals))
    png = os.path.join(args.out, "figure1.png")
    _render_panel_png(png, panels)
    print(f"wrote {png}")
    return 0


# ---------------------------------------------------------------------------
# transform
# ---------------------------------------------------------------------------

def _cmd_transform(args: argparse.Namespace) -> int:
    node, diags = parse_function(args.function)
    if node is None:
        _print_diags(diags)
        return 2
    if not (0.0 < args.alpha <= 1.0):
        print(f"error: alpha must lie in (0, 1], got {args.alpha}", file=sys.stderr)
        return 2
    if args.terms < 1:
        print(f"error: --terms must be positive, got {args.terms}", file=sys.stderr)
        return 2

    try:
        if isinstance(node, ExpSource):
            series = exp_transform(node.rate, args.alpha, args.t0, args.terms)
        elif isinstance(node, SinSource):
            series = sin_transform(node.omega, node.phase, args.alpha, args.t0, args.terms)
        elif isinstance(node, CosSource):
            series = cos_transform(node.omega, node.phase, args.alpha, args.t0, args.terms)
        elif isinstance(node, Monomial):
            series = monomial_transform(node.power, args.alpha, args.t0, args.terms)
        else:
            print("error: only t^p, exp(L*t^a/a), sin(w*t^a/a + c), and cos(w*t^a/a + c) "
                  "have tabulated transforms", file=sys.stderr)
            return 2
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2

    print(f"# {args.function}")
    print(f"# alpha = {args.alpha:g}  t0 = {args.t0:g}")
    _print_coeff_table(series)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
