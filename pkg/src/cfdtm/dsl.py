"""Equation text for the command-line tools.

The input language covers exactly the equation shapes the solver accepts:
a left-hand side that is a signed linear combination of derivative terms
(with at most plain y alongside them) and a right-hand side built from
constants, y, powers of y, monomials in t, lower-order derivatives, and
the three source functions whose transform is known in closed form.

Grammar (EBNF, whitespace free between tokens):

    equation := lhs "=" expr
    lhs      := ["-"] lhs_term (("+" | "-") lhs_term)*
    lhs_term := [NUMBER "*"] ("D[" NUMBER "] y" | "y")
    expr     := mul (("+" | "-") mul)*
    mul      := unary ("*" unary)*
    unary    := "-" unary | atom
    atom     := NUMBER | "y" ["^" INTEGER] | "t" "^" NUMBER
              | "D[" NUMBER "] y" | "(" expr ")"
              | "exp(" SIGNED "*t^a/a)"
              | "sin(" SIGNED "*t^a/a" [("+" | "-") NUMBER] ")"
              | "cos(" SIGNED "*t^a/a" [("+" | "-") NUMBER] ")"

The name a inside exp/sin/cos is literal syntax: exp(L*t^a/a) denotes
e raised to L*t**alpha/alpha for whatever alpha the problem supplies.
Parsing never raises; every failure comes back as a diagnostic with a
line, a column, and the token set that would have been accepted.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

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
    Pow,
    SinSource,
    Sub,
    Unknown,
    _integral_ratio,
)


@dataclass(frozen=True)
class ParseDiagnostic:
    line: int
    col: int
    message: str
    expected: tuple[str, ...] = ()
    code: str = "syntax"

    def __str__(self) -> str:
        loc = f"line {self.line}, col {self.col}"
        if self.expected:
            return f"{loc}: {self.message} (expected {', '.join(self.expected)})"
        return f"{loc}: {self.message}"


class _ParseError(Exception):
    def __init__(self, diagnostic: ParseDiagnostic) -> None:
        super().__init__(str(diagnostic))
        self.diagnostic = diagnostic


@dataclass(frozen=True)
class LhsTerm:
    """One additive term on the left: coeff * D[beta] y, or coeff * y."""

    coeff: float
    beta: float | None


@dataclass(frozen=True)
class DslAst:
    lhs: tuple[LhsTerm, ...]
    rhs: Expr


@dataclass(frozen=True)
class LoweredEquation:
    """Explicit form D[beta_max] y = rhs after isolating the principal term."""

    beta_max: float
    rhs: Expr


@dataclass(frozen=True)
class ParseResult:
    ast: DslAst | None
    lowered: LoweredEquation | None
    diagnostics: tuple[ParseDiagnostic, ...] = field(default=())

    @property
    def ok(self) -> bool:
        return not self.diagnostics


# ---------------------------------------------------------------------------
# tokens
# ---------------------------------------------------------------------------

_NUMBER_RE = re.compile(r"(?:[0-9]+(?:\.[0-9]*)?|\.[0-9]+)(?:[eE][+-]?[0-9]+)?")
_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")
_PUNCT = set("+-*/^()[]=")


@dataclass(frozen=True)
class _Tok:
    kind: str  # NUMBER | NAME | PUNCT | EOF
    text: str
    line: int
    col: int


def _tokenize(src: str) -> list[_Tok]:
    toks: list[_Tok] = []
    line, col = 1, 1
    i, n = 0, len(src)
    while i < n:
        ch = src[i]
        if ch == "\n":
            line, col = line + 1, 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        m = _NUMBER_RE.match(src, i)
        if m is not None:
            toks.append(_Tok("NUMBER", m.group(), line, col))
            col += m.end() - i
            i = m.end()
            continue
        m = _NAME_RE.match(src, i)
        if m is not None:
            toks.append(_Tok("NAME", m.group(), line, col))
            col += m.end() - i
            i = m.end()
            continue
        if ch in _PUNCT:
            toks.append(_Tok("PUNCT", ch, line, col))
            i += 1
            col += 1
            continue
        raise _ParseError(ParseDiagnostic(line, col, f"unexpected character {ch!r}", (), "lex"))
    toks.append(_Tok("EOF", "", line, col))
    return toks


# ---------------------------------------------------------------------------
# recursive-descent parser
# ---------------------------------------------------------------------------

class _Parser:
    def __init__(self, toks: list[_Tok]) -> None:
        self._toks = toks
        self._i = 0
        # node / lhs-term identity -> (line, col), for lowering diagnostics
        self.spans: dict[int, tuple[int, int]] = {}

    def _peek(self) -> _Tok:
        return self._toks[self._i]

    def _advance(self) -> _Tok:
        tok = self._toks[self._i]
        self._i += 1
        return tok

    @staticmethod
    def _describe(tok: _Tok) -> str:
        return "end of input" if tok.kind == "EOF" else repr(tok.text)

    def _fail(self, tok: _Tok, message: str, expected: tuple[str, ...] = (),
              code: str = "syntax") -> None:
        raise _ParseError(ParseDiagnostic(tok.line, tok.col, message, expected, code))

    def _expect_punct(self, ch: str) -> _Tok:
        tok = self._peek()
        if tok.kind == "PUNCT" and tok.text == ch:
            return self._advance()
        self._fail(tok, f"found {self._describe(tok)}", (repr(ch),))
        raise AssertionError("unreachable")

    def equation(self) -> DslAst:
        lhs = self._lhs()
        self._expect_punct("=")
        rhs = self._expr()
        tok = self._peek()
        if tok.kind != "EOF":
            self._fail(tok, f"trailing input {self._describe(tok)}", ("end of input",))
        return DslAst(tuple(lhs), rhs)

    def expression(self) -> Expr:
        node = self._expr()
        tok = self._peek()
        if tok.kind != "EOF":
            self._fail(tok, f"trailing input {self._describe(tok)}", ("end of input",))
        return node

    def _lhs(self) -> list[LhsTerm]:
        terms = []
        sign = 1.0
        tok = self._peek()
        if tok.kind == "PUNCT" and tok.text == "-":
            self._advance()
            sign = -1.0
        terms.append(self._lhs_term(sign))
        while True:
            tok = self._peek()
            if tok.kind == "PUNCT" and tok.text in "+-":
                self._advance()
                terms.append(self._lhs_term(1.0 if tok.text == "+" else -1.0))
                continue
            return terms

    def _lhs_term(self, sign: float) -> LhsTerm:
        start = self._peek()
        coeff = 1.0
        if start.kind == "NUMBER":
            self._advance()
            coeff = float(start.text)
            self._expect_punct("*")
        tok = self._peek()
        if tok.kind == "NAME" and tok.text == "D":
            beta = self._deriv_tail()
            term = LhsTerm(sign * coeff, beta)
        elif tok.kind == "NAME" and tok.text == "y":
            self._advance()
            nxt = self._peek()
            if nxt.kind == "PUNCT" and nxt.text == "^":
                self._fail(nxt, "powers of y may only appear on the right-hand side")
            term = LhsTerm(sign * coeff, None)
        else:
            self._fail(tok, f"found {self._describe(tok)}", ("'D['", "'y'"))
            raise AssertionError("unreachable")
        self.spans[id(term)] = (start.line, start.col)
        return term

    def _deriv_tail(self) -> float:
        self._advance()  # the D
        self._expect_punct("[")
        tok = self._peek()
        if tok.kind != "NUMBER":
            self._fail(tok, f"found {self._describe(tok)}", ("a derivative order",))
        self._advance()
        beta = float(tok.text)
        self._expect_punct("]")
        tok = self._peek()
        if not (tok.kind == "NAME" and tok.text == "y"):
            self._fail(tok, f"found {self._describe(tok)}", ("'y'",))
        self._advance()
        return beta

    def _expr(self) -> Expr:
        node = self._mul()
        while True:
            tok = self._peek()
            if tok.kind == "PUNCT" and tok.text in "+-":
                self._advance()
                right = self._mul()
                node = Add(node, right) if tok.text == "+" else Sub(node, right)
                continue
            return node

    def _mul(self) -> Expr:
        factors = [self._unary()]
        while True:
            tok = self._peek()
            if tok.kind == "PUNCT" and tok.text == "*":
                self._advance()
                factors.append(self._unary())
                continue
            break
        if len(factors) == 1:
            return factors[0]
        return Mul(tuple(factors))

    def _unary(self) -> Expr:
        tok = self._peek()
        if tok.kind == "PUNCT" and tok.text == "-":
            self._advance()
            nxt = self._peek()
            if nxt.kind == "NUMBER":
                # fold the sign into the literal so -2 is one constant
                self._advance()
                node: Expr = Const(-float(nxt.text))
            else:
                node = Neg(self._unary())
            self.spans[id(node)] = (tok.line, tok.col)
            return node
        return self._atom()

    def _atom(self) -> Expr:
        tok = self._peek()
        node: Expr
        if tok.kind == "NUMBER":
            self._advance()
            node = Const(float(tok.text))
        elif tok.kind == "PUNCT" and tok.text == "(":
            self._advance()
            inner = self._expr()
            self._expect_punct(")")
            return inner
        elif tok.kind == "NAME" and tok.text == "y":
            self._advance()
            nxt = self._peek()
            if nxt.kind == "PUNCT" and nxt.text == "^":
                self._advance()
                node = Pow(Unknown(), self._integer())
            else:
                node = Unknown()
        elif tok.kind == "NAME" and tok.text == "t":
            self._advance()
            self._expect_punct("^")
            node = Monomial(self._number("a power"))
        elif tok.kind == "NAME" and tok.text == "D":
            node = Deriv(self._deriv_tail())
        elif tok.kind == "NAME" and tok.text in ("exp", "sin", "cos"):
            node = self._source(tok.text)
        else:
            self._fail(tok, f"found {self._describe(tok)}",
                       ("a number", "'y'", "'t'", "'D['", "'exp('", "'sin('", "'cos('", "'('"))
            raise AssertionError("unreachable")
        self.spans[id(node)] = (tok.line, tok.col)
        return node

    def _integer(self) -> int:
        tok = self._peek()
        if tok.kind != "NUMBER":
            self._fail(tok, f"found {self._describe(tok)}", ("an integer exponent",))
        if any(c in tok.text for c in ".eE"):
            self._fail(tok, f"exponent {tok.text} is not an integer", ("an integer exponent",))
        self._advance()
        value = int(tok.text)
        if value < 1:
            self._fail(tok, "exponent must be at least 1")
        return value

    def _number(self, what: str) -> float:
        tok = self._peek()
        if tok.kind != "NUMBER":
            self._fail(tok, f"found {self._describe(tok)}", (what,))
        self._advance()
        return float(tok.text)

    def _signed_number(self, what: str) -> float:
        sign = 1.0
        tok = self._peek()
        if tok.kind == "PUNCT" and tok.text in "+-":
            self._advance()
            if tok.text == "-":
                sign = -1.0
        return sign * self._number(what)

    def _source(self, name: str) -> Expr:
        self._advance()  # exp | sin | cos
        self._expect_punct("(")
        coeff = self._signed_number("a coefficient")
        self._expect_punct("*")
        self._literal_name("t")
        self._expect_punct("^")
        self._literal_name("a")
        self._expect_punct("/")
        self._literal_name("a")
        phase = 0.0
        if name != "exp":
            tok = self._peek()
            if tok.kind == "PUNCT" and tok.text in "+-":
                self._advance()
                magnitude = self._number("a phase")
                phase = magnitude if tok.text == "+" else -magnitude
        self._expect_punct(")")
        if name == "exp":
            return ExpSource(coeff)
        if name == "sin":
            return SinSource(coeff, phase)
        return CosSource(coeff, phase)

    def _literal_name(self, text: str) -> None:
        tok = self._peek()
        if not (tok.kind == "NAME" and tok.text == text):
            self._fail(tok, f"found {self._describe(tok)}", (repr(text),))
        self._advance()


# ---------------------------------------------------------------------------
# lowering to explicit form
# ---------------------------------------------------------------------------

def _lower(ast: DslAst, alpha: float,
           spans: dict[int, tuple[int, int]]) -> tuple[LoweredEquation | None,
                                                       list[ParseDiagnostic]]:
    diags: list[ParseDiagnostic] = []
    if not (isinstance(alpha, (int, float)) and math.isfinite(alpha)
            and 0.0 < float(alpha) <= 1.0):
        diags.append(ParseDiagnostic(1, 1, f"alpha must lie in (0, 1], got {alpha}",
                                     (), "alpha-range"))
        return None, diags
    alpha = float(alpha)

    def where(obj: object) -> tuple[int, int]:
        return spans.get(id(obj), (1, 1))

    deriv_terms = [t for t in ast.lhs if t.beta is not None]
    if not deriv_terms:
        line, col = where(ast.lhs[0])
        diags.append(ParseDiagnostic(
            line, col, "left-hand side needs a derivative of y", (), "principal-missing"))
        return None, diags
    beta_max = max(t.beta for t in deriv_terms)  # type: ignore[type-var]
    principals = [t for t in deriv_terms if t.beta == beta_max]
    if len(principals) > 1:
        line, col = where(principals[1])
        diags.append(ParseDiagnostic(
            line, col, f"the highest order {beta_max:g} appears in more than one term",
            (), "principal-duplicate"))
        return None, diags
    principal = principals[0]
    if principal.coeff == 0.0:
        line, col = where(principal)
        diags.append(ParseDiagnostic(
            line, col, "the highest-order term has coefficient zero",
            (), "principal-zero"))
        return None, diags

    assert principal.beta is not None
    principal_shift = _integral_ratio(principal.beta, alpha)
    if principal_shift is None or principal_shift < 1:
        line, col = where(principal)
        diags.append(ParseDiagnostic(
            line, col,
            f"order {principal.beta:g} is not a positive integer multiple of alpha = {alpha:g}",
            (), "order-grid"))
        principal_shift = None

    rhs = ast.rhs
    for term in ast.lhs:
        if term is principal:
            continue
        node: Expr = Unknown() if term.beta is None else Deriv(term.beta)
        spans[id(node)] = where(term)
        moved = node if term.coeff == 1.0 else Mul((Const(term.coeff), node))
        rhs = Sub(rhs, moved)
    if principal.coeff != 1.0:
        rhs = Mul((Const(1.0 / principal.coeff), rhs))

    def walk(e: Expr) -> None:
        if isinstance(e, Deriv):
            line, col = where(e)
            if not (math.isfinite(e.beta) and e.beta > 0.0):
                diags.append(ParseDiagnostic(
                    line, col, f"derivative order must be positive, got {e.beta:g}",
                    (), "deriv-order"))
                return
            s = _integral_ratio(e.beta, alpha)
            if s is None or s < 1:
                diags.append(ParseDiagnostic(
                    line, col,
                    f"order {e.beta:g} is not a positive integer multiple of alpha = {alpha:g}",
                    (), "order-grid"))
            elif principal_shift is not None and s > principal_shift - 1:
                diags.append(ParseDiagnostic(
                    line, col,
                    "right-hand side derivative order must be below the principal order",
                    (), "causality"))
        elif isinstance(e, Monomial):
            if _integral_ratio(e.power, alpha) is None:
                line, col = where(e)
                diags.append(ParseDiagnostic(
                    line, col,
                    f"power {e.power:g} is not an integer multiple of alpha = {alpha:g}",
                    (), "monomial-grid"))
        elif isinstance(e, (Add, Sub)):
            walk(e.left)
            walk(e.right)
        elif isinstance(e, Neg):
            walk(e.operand)
        elif isinstance(e, Mul):
            for f in e.factors:
                walk(f)
        elif isinstance(e, Pow):
            walk(e.base)

    walk(rhs)
    if diags:
        return None, diags
    return LoweredEquation(beta_max, rhs), []


# ---------------------------------------------------------------------------
# entry points
# ---------------------------------------------------------------------------

def parse_equation(src: str, alpha: float) -> ParseResult:
    """Parse an equation and lower it to explicit form for the given alpha.

    Never raises on bad input: syntax errors, grid mismatches, and
    causality violations all come back in result.diagnostics.
    """
    try:
        parser = _Parser(_tokenize(src))
        ast = parser.equation()
    except _ParseError as err:
        return ParseResult(None, None, (err.diagnostic,))
    except Exception as err:  # totality guard, should not trigger
        return ParseResult(None, None, (ParseDiagnostic(
            1, 1, f"internal parse failure: {err}", (), "internal"),))
    try:
        lowered, diags = _lower(ast, alpha, parser.spans)
    except Exception as err:
        return ParseResult(ast, None, (ParseDiagnostic(
            1, 1, f"internal lowering failure: {err}", (), "internal"),))
    return ParseResult(ast, lowered, tuple(diags))


def parse_function(src: str) -> tuple[Expr | None, tuple[ParseDiagnostic, ...]]:
    """Parse a stand-alone right-hand-side expression (no lhs, no lowering)."""
    try:
        parser = _Parser(_tokenize(src))
        return parser.expression(), ()
    except _ParseError as err:
        return None, (err.diagnostic,)
    except Exception as err:
        return None, (ParseDiagnostic(1, 1, f"internal parse failure: {err}", (), "internal"),)


# ---------------------------------------------------------------------------
# printing (the parser's inverse on its own output)
# ---------------------------------------------------------------------------

_ADD, _MULP, _UNARY, _ATOM = 1, 2, 3, 4


def _num(v: float) -> str:
    return repr(float(v))


def _fmt(e: Expr, prec: int) -> str:
    text, p = _render(e)
    return f"({text})" if p < prec else text


def _phase_text(phase: float) -> str:
    if phase > 0.0:
        return f" + {_num(phase)}"
    if phase < 0.0:
        return f" - {_num(-phase)}"
    return ""


def _render(e: Expr) -> tuple[str, int]:
    if isinstance(e, Const):
        if e.value < 0.0:
            return f"-{_num(-e.value)}", _UNARY
        return _num(e.value), _ATOM
    if isinstance(e, Unknown):
        return "y", _ATOM
    if isinstance(e, Deriv):
        return f"D[{_num(e.beta)}] y", _ATOM
    if isinstance(e, Monomial):
        return f"t^{_num(e.power)}", _ATOM
    if isinstance(e, Pow):
        return f"{_fmt(e.base, _ATOM)}^{e.exponent}", _ATOM
    if isinstance(e, ExpSource):
        return f"exp({_num(e.rate)}*t^a/a)", _ATOM
    if isinstance(e, SinSource):
        return f"sin({_num(e.omega)}*t^a/a{_phase_text(e.phase)})", _ATOM
    if isinstance(e, CosSource):
        return f"cos({_num(e.omega)}*t^a/a{_phase_text(e.phase)})", _ATOM
    if isinstance(e, Neg):
        # -(2.0) keeps the literal out of reach of sign folding, so the
        # reparse rebuilds Neg(Const) rather than a negative constant
        if isinstance(e.operand, Const) and e.operand.value >= 0.0:
            return f"-({_num(e.operand.value)})", _UNARY
        return f"-{_fmt(e.operand, _UNARY)}", _UNARY
    if isinstance(e, Mul):
        return "*".join(_fmt(f, _UNARY) for f in e.factors), _MULP
    if isinstance(e, Add):
        return f"{_fmt(e.left, _ADD)} + {_fmt(e.right, _MULP)}", _ADD
    if isinstance(e, Sub):
        return f"{_fmt(e.left, _ADD)} - {_fmt(e.right, _MULP)}", _ADD
    raise TypeError(f"unrecognized node {type(e).__name__}")


def format_equation(ast: DslAst) -> str:
    """Render an AST back to source; reparsing yields an equal AST."""
    parts = []
    for i, term in enumerate(ast.lhs):
        negative = term.coeff < 0.0
        magnitude = -term.coeff if negative else term.coeff
        body = "y" if term.beta is None else f"D[{_num(term.beta)}] y"
        if magnitude != 1.0:
            body = f"{_num(magnitude)}*{body}"
        if i == 0:
            parts.append(f"-{body}" if negative else body)
        else:
            parts.append(f"- {body}" if negative else f"+ {body}")
    return f"{' '.join(parts)} = {_fmt(ast.rhs, _ADD)}"
