"""Closed expression grammar for problem coefficients.

Coefficient functions (q, r0, r1, optional u0/du0) are given as strings in a
deliberately small language over one variable ``x``:

    literals    floating point, with an ``i`` suffix for imaginary parts
                (``2i``, ``0.5i``, bare ``i``)
    operators   + - * / ^        (^ is right-associative exponentiation)
    calls       sin cos exp ln sqrt abs pow(a, b)

Precedence, tightest first:  ^  >  unary minus  >  * /  >  + -.
So ``-x^2`` is ``-(x^2)`` while ``x^-2`` is a valid power with a unary
exponent.

The evaluator works over complex numbers and refuses to return non-finite
values: division by zero, ln(0), and overflow all raise :class:`EvalError`
carrying the offending point.  Evaluation is pure — same AST, same x, same
bits out.

`parse` reports malformed input with the byte offset of the failure;
`pretty` prints an AST back to a string with minimal parentheses such that
pretty ∘ parse ∘ pretty is idempotent.
"""

from __future__ import annotations

import cmath
import re
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

__all__ = [
    "Expr", "Lit", "Var", "Neg", "Bin", "Call",
    "ParseError", "EvalError",
    "parse", "evaluate", "pretty", "sample",
]


# ---------------------------------------------------------------------------
# AST
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Lit:
    """Complex literal.  Parsed literals are pure-real or pure-imaginary."""
    value: complex


@dataclass(frozen=True)
class Var:
    """The single independent variable x."""


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class Bin:
    op: str          # one of + - * / ^
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Call:
    fn: str          # sin cos exp ln sqrt abs pow
    args: tuple["Expr", ...]


Expr = Union[Lit, Var, Neg, Bin, Call]

_FUNCTIONS = {"sin": 1, "cos": 1, "exp": 1, "ln": 1, "sqrt": 1, "abs": 1, "pow": 2}


class ParseError(ValueError):
    """Malformed source text.  ``offset`` is the byte position of the fault."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class EvalError(ValueError):
    """Evaluation left the domain (division by zero, ln(0), overflow, NaN)."""

    def __init__(self, message: str, x=None):
        if x is not None:
            message = f"{message} at x={x!r}"
        super().__init__(message)
        self.x = x


# ---------------------------------------------------------------------------
# Lexer
# ---------------------------------------------------------------------------

_NUMBER = re.compile(r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")
_IDENT = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")


@dataclass(frozen=True)
class _Token:
    kind: str        # 'num' 'imag' 'ident' or a single-char operator
    text: str
    offset: int


def _tokenize(src: str) -> list[_Token]:
    toks: list[_Token] = []
    pos, n = 0, len(src)
    while pos < n:
        ch = src[pos]
        if ch.isspace():
            pos += 1
            continue
        m = _NUMBER.match(src, pos)
        if m:
            end = m.end()
            if end < n and src[end] == "i":
                toks.append(_Token("imag", m.group(), pos))
                pos = end + 1
            else:
                toks.append(_Token("num", m.group(), pos))
                pos = end
            continue
        m = _IDENT.match(src, pos)
        if m:
            name = m.group()
            if name == "i":
                toks.append(_Token("imag", "1", pos))
            else:
                toks.append(_Token("ident", name, pos))
            pos = m.end()
            continue
        if ch in "+-*/^(),":
            toks.append(_Token(ch, ch, pos))
            pos += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", pos)
    toks.append(_Token("end", "", n))
    return toks


# ---------------------------------------------------------------------------
# Parser — recursive descent, one level per precedence tier
# ---------------------------------------------------------------------------

class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.toks = _tokenize(src)
        self.pos = 0

    def peek(self) -> _Token:
        return self.toks[self.pos]

    def advance(self) -> _Token:
        tok = self.toks[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            raise ParseError(f"expected {kind!r}, found {tok.text or 'end of input'!r}",
                             tok.offset)
        return self.advance()

    # sum := product (('+'|'-') product)*
    def sum(self) -> Expr:
        node = self.product()
        while self.peek().kind in "+-":
            op = self.advance().kind
            node = Bin(op, node, self.product())
        return node

    # product := unary (('*'|'/') unary)*
    def product(self) -> Expr:
        node = self.unary()
        while self.peek().kind in "*/":
            op = self.advance().kind
            node = Bin(op, node, self.unary())
        return node

    # unary := '-' unary | power
    def unary(self) -> Expr:
        if self.peek().kind == "-":
            self.advance()
            return Neg(self.unary())
        return self.power()

    # power := atom ('^' unary)?     — right-associative via unary recursion
    def power(self) -> Expr:
        node = self.atom()
        if self.peek().kind == "^":
            self.advance()
            return Bin("^", node, self.unary())
        return node

    def atom(self) -> Expr:
        tok = self.peek()
        if tok.kind == "num":
            self.advance()
            return Lit(complex(float(tok.text), 0.0))
        if tok.kind == "imag":
            self.advance()
            return Lit(complex(0.0, float(tok.text)))
        if tok.kind == "(":
            self.advance()
            node = self.sum()
            self.expect(")")
            return node
        if tok.kind == "ident":
            self.advance()
            if tok.text == "x":
                return Var()
            arity = _FUNCTIONS.get(tok.text)
            if arity is None:
                raise ParseError(f"unknown identifier {tok.text!r}", tok.offset)
            self.expect("(")
            args = [self.sum()]
            while self.peek().kind == ",":
                self.advance()
                args.append(self.sum())
            self.expect(")")
            if len(args) != arity:
                raise ParseError(
                    f"{tok.text} takes {arity} argument(s), got {len(args)}", tok.offset)
            return Call(tok.text, tuple(args))
        raise ParseError(f"expected a value, found {tok.text or 'end of input'!r}",
                         tok.offset)


def parse(src: str) -> Expr:
    """Parse source text into an AST, or raise :class:`ParseError`."""
    p = _Parser(src)
    node = p.sum()
    tok = p.peek()
    if tok.kind != "end":
        raise ParseError(f"trailing input {tok.text!r}", tok.offset)
    return node


# ---------------------------------------------------------------------------
# Evaluation (scalar, pure) and sampling (vectorized over numpy arrays)
# ---------------------------------------------------------------------------

def _check_finite(v: complex, what: str, x) -> complex:
    if not (cmath.isfinite(v)):
        raise EvalError(f"{what} produced a non-finite value", x)
    return v


def evaluate(e: Expr, x: complex) -> complex:
    """Evaluate ``e`` at the point ``x`` over the complex numbers.

    Raises :class:`EvalError` instead of ever returning inf or NaN.
    """
    xc = complex(x)

    def ev(node: Expr) -> complex:
        if isinstance(node, Lit):
            return node.value
        if isinstance(node, Var):
            return xc
        if isinstance(node, Neg):
            return -ev(node.operand)
        if isinstance(node, Bin):
            a = ev(node.left)
            if node.op == "+":
                return _check_finite(a + ev(node.right), "addition", x)
            if node.op == "-":
                return _check_finite(a - ev(node.right), "subtraction", x)
            if node.op == "*":
                return _check_finite(a * ev(node.right), "multiplication", x)
            if node.op == "/":
                b = ev(node.right)
                if b == 0:
                    raise EvalError("division by zero", x)
                return _check_finite(a / b, "division", x)
            # '^'
            b = ev(node.right)
            try:
                v = a ** b
            except (ZeroDivisionError, OverflowError, ValueError) as err:
                raise EvalError(f"power: {err}", x) from None
            return _check_finite(v, "power", x)
        # Call
        vals = [ev(a) for a in node.args]
        try:
            if node.fn == "sin":
                v = cmath.sin(vals[0])
            elif node.fn == "cos":
                v = cmath.cos(vals[0])
            elif node.fn == "exp":
                v = cmath.exp(vals[0])
            elif node.fn == "ln":
                if vals[0] == 0:
                    raise EvalError("ln of zero", x)
                v = cmath.log(vals[0])
            elif node.fn == "sqrt":
                v = cmath.sqrt(vals[0])
            elif node.fn == "abs":
                v = complex(abs(vals[0]), 0.0)
            else:  # pow
                v = vals[0] ** vals[1]
        except EvalError:
            raise
        except (OverflowError, ValueError, ZeroDivisionError) as err:
            raise EvalError(f"{node.fn}: {err}", x) from None
        return _check_finite(v, node.fn, x)

    return ev(e)


def sample(e: Expr, xs: np.ndarray) -> np.ndarray:
    """Evaluate ``e`` at every point of ``xs`` (vectorized).

    Returns a complex128 array.  Any non-finite result (division by zero,
    ln(0), overflow...) raises :class:`EvalError` naming the first offending
    point, so callers never see silent NaNs.
    """
    xs = np.asarray(xs)
    xc = xs.astype(np.complex128, copy=False)

    def ev(node: Expr) -> np.ndarray:
        if isinstance(node, Lit):
            return np.full(xc.shape, node.value, dtype=np.complex128)
        if isinstance(node, Var):
            return xc.copy()
        if isinstance(node, Neg):
            return -ev(node.operand)
        with np.errstate(all="ignore"):
            if isinstance(node, Bin):
                a, b = ev(node.left), ev(node.right)
                if node.op == "+":
                    return a + b
                if node.op == "-":
                    return a - b
                if node.op == "*":
                    return a * b
                if node.op == "/":
                    return a / b
                return a ** b
            vals = [ev(a) for a in node.args]
            if node.fn == "sin":
                return np.sin(vals[0])
            if node.fn == "cos":
                return np.cos(vals[0])
            if node.fn == "exp":
                return np.exp(vals[0])
            if node.fn == "ln":
                return np.log(vals[0])
            if node.fn == "sqrt":
                return np.sqrt(vals[0])
            if node.fn == "abs":
                return np.abs(vals[0]).astype(np.complex128)
            return vals[0] ** vals[1]

    out = ev(e)
    bad = ~np.isfinite(out)
    if bad.any():
        idx = int(np.argmax(bad))
        raise EvalError("expression is not finite", xs.flat[idx])
    return out


# ---------------------------------------------------------------------------
# Printing
# ---------------------------------------------------------------------------

# Binding strength of each node when it appears as a subexpression.
_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "neg": 3, "^": 4, "atom": 5}


def _fmt_float(v: float) -> str:
    if v == int(v) and abs(v) < 1e16:
        return str(int(v))
    return repr(v)


def _prec_of(e: Expr) -> int:
    if isinstance(e, Bin):
        return _PREC[e.op]
    if isinstance(e, Neg):
        return _PREC["neg"]
    if isinstance(e, Lit):
        # negative literals print with a leading minus, so for bracketing
        # purposes they behave like a unary-minus node
        v = e.value
        if v.real < 0 or (v.real == 0 and v.imag < 0):
            return _PREC["neg"]
    return _PREC["atom"]


def pretty(e: Expr) -> str:
    """Render an AST with minimal parentheses.

    Guarantee: parse(pretty(e)) has the same printed form again, so the
    printer is a fixed point after one parse/print cycle.
    """
    def wrap(child: Expr, need: int) -> str:
        s = pretty(child)
        return f"({s})" if _prec_of(child) < need else s

    if isinstance(e, Lit):
        re_, im = e.value.real, e.value.imag
        if im == 0:
            return _fmt_float(re_) if re_ >= 0 else f"-{_fmt_float(-re_)}"
        if re_ == 0:
            return f"{_fmt_float(im)}i" if im >= 0 else f"-{_fmt_float(-im)}i"
        # composite literals only arise from hand-built ASTs; keep them
        # self-bracketing so they are safe in any context
        sign = "+" if im >= 0 else "-"
        return f"({_fmt_float(re_)}{sign}{_fmt_float(abs(im))}i)"
    if isinstance(e, Var):
        return "x"
    if isinstance(e, Neg):
        # operand at the same tier keeps chains like --x printable
        return "-" + wrap(e.operand, _PREC["neg"])
    if isinstance(e, Bin):
        p = _PREC[e.op]
        if e.op == "^":
            # right-associative; left operand must bind tighter than ^
            left = wrap(e.left, _PREC["^"] + 1)
            right = wrap(e.right, _PREC["neg"])   # unary allowed on the right
            return f"{left}^{right}"
        if e.op in "+-":
            left = wrap(e.left, p)
            right = wrap(e.right, p + 1)    # a-(b-c) keeps its parens
            return f"{left}{e.op}{right}"
        # * /
        left = wrap(e.left, p)
        right = wrap(e.right, p + 1)
        return f"{left}{e.op}{right}"
    return f"{e.fn}({', '.join(pretty(a) for a in e.args)})"


def as_callable(e: Expr) -> Callable[[complex], complex]:
    """Small convenience: close over an AST as a scalar function of x."""
    return lambda x: evaluate(e, x)
