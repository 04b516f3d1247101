"""Line-oriented problem files.

A problem file is UTF-8 text, one ``key = value`` pair per line, with
``#`` starting a comment and blank lines ignored.  Keys:

    alpha     real in (0, 1]
    t0        real, optional, default 0
    equation  equation text (see the dsl module); everything after the
              first ``=`` on the line is the value, so the equation's own
              ``=`` survives intact
    init      comma-separated reals, ascending derivative order
    n_terms   positive integer
    grid      start,stop,count (two reals and an integer)
    exact     optional id of a built-in example whose closed form to
              compare against

All failures are reported as diagnostics carrying the file line number.
"""

from __future__ import annotations

from dataclasses import dataclass

from .dsl import ParseDiagnostic, parse_equation
from .solver import Diagnostic, OdeProblem, validate

_REQUIRED = ("alpha", "equation", "init", "n_terms", "grid")
_KNOWN = _REQUIRED + ("t0", "exact")


@dataclass(frozen=True)
class ProblemFile:
    alpha: float
    t0: float
    equation: str
    init: tuple[float, ...]
    n_terms: int
    grid: tuple[float, float, int]
    exact: str | None = None


def _bad(line: int, message: str) -> ParseDiagnostic:
    return ParseDiagnostic(line, 1, message, (), "bad-value")


def parse_problem_text(text: str) -> tuple[ProblemFile | None, tuple[ParseDiagnostic, ...]]:
    entries: dict[str, tuple[int, str]] = {}
    diags: list[ParseDiagnostic] = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            diags.append(ParseDiagnostic(lineno, 1, f"expected key = value, got {line!r}",
                                         (), "bad-line"))
            continue
        key, value = line.split("=", 1)
        key = key.strip()
        value = value.strip()
        if key not in _KNOWN:
            diags.append(ParseDiagnostic(lineno, 1, f"unknown key {key!r}", _KNOWN,
                                         "unknown-key"))
            continue
        if key in entries:
            diags.append(ParseDiagnostic(lineno, 1, f"duplicate key {key!r}", (),
                                         "duplicate-key"))
            continue
        entries[key] = (lineno, value)

    for key in _REQUIRED:
        if key not in entries:
            diags.append(ParseDiagnostic(0, 1, f"missing required key {key!r}", (),
                                         "missing-key"))
    if diags:
        return None, tuple(diags)

    def real(key: str) -> float | None:
        lineno, value = entries[key]
        try:
            return float(value)
        except ValueError:
            diags.append(_bad(lineno, f"{key} must be a real number, got {value!r}"))
            return None

    alpha = real("alpha")
    t0 = real("t0") if "t0" in entries else 0.0

    lineno, value = entries["init"]
    init: tuple[float, ...] = ()
    try:
        init = tuple(float(part) for part in value.split(","))
    except ValueError:
        diags.append(_bad(lineno, f"init must be comma-separated reals, got {value!r}"))

    lineno, value = entries["n_terms"]
    n_terms = 0
    try:
        n_terms = int(value)
        if n_terms < 1:
            raise ValueError
    except ValueError:
        diags.append(_bad(lineno, f"n_terms must be a positive integer, got {value!r}"))

    lineno, value = entries["grid"]
    grid: tuple[float, float, int] = (0.0, 0.0, 0)
    parts = [p.strip() for p in value.split(",")]
    try:
        if len(parts) != 3:
            raise ValueError
        grid = (float(parts[0]), float(parts[1]), int(parts[2]))
        if grid[2] < 2:
            diags.append(_bad(lineno, "grid needs at least 2 points"))
        elif grid[1] <= grid[0]:
            diags.append(_bad(lineno, "grid stop must exceed start"))
    except ValueError:
        diags.append(_bad(lineno, f"grid must be start,stop,count, got {value!r}"))

    exact = entries["exact"][1] if "exact" in entries else None

    if diags:
        return None, tuple(diags)
    assert alpha is not None and t0 is not None
    if grid[0] < t0:
        diags.append(_bad(entries["grid"][0], f"grid starts at {grid[0]:g}, before t0 = {t0:g}"))
        return None, tuple(diags)
    return ProblemFile(alpha, t0, entries["equation"][1], init, n_terms, grid, exact), ()


def load_problem_file(path: str) -> tuple[ProblemFile | None, tuple[ParseDiagnostic, ...]]:
    """Read and parse a problem file.  I/O errors propagate to the caller."""
    with open(path, encoding="utf-8") as fh:
        return parse_problem_text(fh.read())


def problem_from_file(
    pf: ProblemFile,
) -> tuple[OdeProblem | None, tuple[ParseDiagnostic | Diagnostic, ...]]:
    """Lower a parsed file to a validated problem, or explain why not."""
    result = parse_equation(pf.equation, pf.alpha)
    if result.lowered is None:
        return None, result.diagnostics
    problem = OdeProblem(
        alpha=pf.alpha,
        t0=pf.t0,
        beta_max=result.lowered.beta_max,
        rhs=result.lowered.rhs,
        init=pf.init,
        n_terms=pf.n_terms,
    )
    issues = validate(problem)
    if issues:
        return None, tuple(issues)
    return problem, ()
