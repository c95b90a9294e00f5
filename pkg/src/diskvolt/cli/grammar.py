"""Symbol grammar for analytic functions given on the command line.

::

    expr    := term (("+" | "-") term)*
    term    := unary ("*" unary)*
    unary   := "-" unary | atom
    atom    := NUMBER | "z" | NAME | call | "(" expr ")"
    call    := FUNC "(" [arg ("," arg)*] ")"
    arg     := [KEY "="] expr          (must be a constant)

``NUMBER`` accepts an optional ``j`` suffix, so ``a=0.6+0.3j`` is a complex
argument.  Bare names other than ``z`` are looked up in the variable
bindings passed to :func:`parse_symbol` (sweeps bind the swept parameter).

Functions and their parameters (positional order in brackets):

==========  =====================================  ===========================
name        parameters                             meaning
==========  =====================================  ===========================
``poly``    c0, c1, ...                            ``sum c_k z^k``
``pow``     [a=1, gamma, c=1]                      ``c (1 - conj(a) z)^-gamma``
``log``     [a=1, m=1, c=1]                        ``c log(2/(1 - conj(a) z))^m``
``fa``      [a, p, alpha]                          kernel test function
``Fa``      [a, p, alpha]                          ``fa`` vanishing at ``a``
``fz``      [a, p, alpha]                          order-type test function
``fzlog``   [a, p]                                 logarithmic test function
==========  =====================================  ===========================

``p`` and ``alpha`` default to the domain-space exponents in effect.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping

from ..analytic import AnalyticFn, constant, log_kernel, monomial, power_kernel, series
from ..errors import SymbolParseError
from .. import testfunctions

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?j?)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/(),=]))"
)


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    pos: int


def _tokens(text: str) -> list[_Tok]:
    out = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise SymbolParseError(f"unexpected character {text[pos:].lstrip()[0]!r} at {pos}")
        kind = m.lastgroup
        out.append(_Tok(kind, m.group(kind), m.start(kind)))
        pos = m.end()
    out.append(_Tok("end", "", len(text)))
    return out


_SIGNATURES = {
    "poly": None,
    "pow": ("a", "gamma", "c"),
    "log": ("a", "m", "c"),
    "fa": ("a", "p", "alpha"),
    "Fa": ("a", "p", "alpha"),
    "fz": ("a", "p", "alpha"),
    "fzlog": ("a", "p"),
}


class _Parser:
    def __init__(self, text: str, env: Mapping[str, complex], p: float, alpha: float):
        self.toks = _tokens(text)
        self.i = 0
        self.env = dict(env)
        self.p = p
        self.alpha = alpha

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def take(self, text: str | None = None) -> _Tok:
        t = self.tok
        if text is not None and t.text != text:
            raise SymbolParseError(f"expected {text!r} at {t.pos}, found {t.text or 'end of input'!r}")
        self.i += 1
        return t

    # values are either python complex constants or AnalyticFn
    def expr(self):
        out = self.term()
        while self.tok.text in ("+", "-"):
            op = self.take().text
            rhs = self.term()
            out = _binop(out, rhs, op)
        return out

    def term(self):
        out = self.unary()
        while self.tok.text in ("*", "/"):
            op = self.take().text
            rhs = self.unary()
            out = _binop(out, rhs, op)
        return out

    def unary(self):
        if self.tok.text == "-":
            self.take()
            return _binop(0j, self.unary(), "-")
        if self.tok.text == "+":
            self.take()
        return self.atom()

    def atom(self):
        t = self.tok
        if t.kind == "num":
            self.take()
            return complex(t.text)
        if t.text == "(":
            self.take()
            out = self.expr()
            self.take(")")
            return out
        if t.kind == "name":
            self.take()
            if self.tok.text == "(":
                return self.call(t)
            if t.text == "z":
                return monomial(1)
            if t.text in self.env:
                return complex(self.env[t.text])
            raise SymbolParseError(f"unknown name {t.text!r} at {t.pos}")
        raise SymbolParseError(f"unexpected {t.text or 'end of input'!r} at {t.pos}")

    def call(self, name: _Tok) -> AnalyticFn:
        if name.text not in _SIGNATURES:
            raise SymbolParseError(f"unknown function {name.text!r} at {name.pos}")
        self.take("(")
        positional: list[complex] = []
        keyword: dict[str, complex] = {}
        while self.tok.text != ")":
            key = None
            if self.tok.kind == "name" and self.toks[self.i + 1].text == "=":
                key = self.take().text
                self.take("=")
            value = self.expr()
            if isinstance(value, AnalyticFn):
                raise SymbolParseError(f"argument of {name.text} must be a constant")
            if key is None:
                if keyword:
                    raise SymbolParseError("positional argument after keyword argument")
                positional.append(value)
            elif key in keyword:
                raise SymbolParseError(f"duplicate argument {key!r}")
            else:
                keyword[key] = value
            if self.tok.text == ",":
                self.take()
            elif self.tok.text != ")":
                raise SymbolParseError(f"expected ',' or ')' at {self.tok.pos}")
        self.take(")")
        return self.build(name.text, positional, keyword)

    def build(self, name, positional, keyword) -> AnalyticFn:
        sig = _SIGNATURES[name]
        if sig is None:
            if keyword:
                raise SymbolParseError("poly takes positional coefficients only")
            if not positional:
                raise SymbolParseError("poly needs at least one coefficient")
            return series(positional)
        if len(positional) > len(sig):
            raise SymbolParseError(f"{name} takes at most {len(sig)} arguments")
        args = dict(zip(sig, positional))
        for k, v in keyword.items():
            if k not in sig:
                raise SymbolParseError(f"{name} has no parameter {k!r}")
            if k in args:
                raise SymbolParseError(f"{name} got {k!r} twice")
            args[k] = v
        try:
            return self._construct(name, args)
        except (ValueError, TypeError) as exc:
            raise SymbolParseError(f"{name}: {exc}") from exc

    def _construct(self, name, args) -> AnalyticFn:
        def real(key, default=None):
            v = args.get(key, default)
            if v is None:
                raise ValueError(f"missing parameter {key!r}")
            v = complex(v)
            if v.imag != 0:
                raise ValueError(f"parameter {key!r} must be real")
            return v.real

        a = complex(args.get("a", 1.0))
        if name == "pow":
            return power_kernel(a, real("gamma"), complex(args.get("c", 1.0)))
        if name == "log":
            m = real("m", 1.0)
            if m != int(m) or m < 0:
                raise ValueError("m must be a non-negative integer")
            return log_kernel(a, int(m), complex(args.get("c", 1.0)))
        if "a" not in args:
            raise ValueError("missing parameter 'a'")
        if not abs(a) < 1:
            raise ValueError("test-function base must lie in the open disk")
        p = real("p", self.p)
        if name == "fzlog":
            return testfunctions.fz_log(a, p)
        alpha = real("alpha", self.alpha)
        if name == "fa":
            return testfunctions.fa(a, p, alpha)
        if name == "Fa":
            return testfunctions.Fa(a, p, alpha)
        return testfunctions.fz_order(a, p, alpha)


def _binop(x, y, op):
    fx, fy = isinstance(x, AnalyticFn), isinstance(y, AnalyticFn)
    if op == "/":
        if fy:
            raise SymbolParseError("division by a function is not supported")
        if y == 0:
            raise SymbolParseError("division by zero")
        return x * (1.0 / y) if fx else x / y
    if not fx and not fy:
        return {"+": x + y, "-": x - y, "*": x * y}[op]
    x = x if fx else constant(x)
    y = y if fy else constant(y)
    return {"+": lambda: x + y, "-": lambda: x - y, "*": lambda: x * y}[op]()


def parse_symbol(text: str, env: Mapping[str, complex] | None = None,
                 p: float = 2.0, alpha: float = 0.0) -> AnalyticFn:
    """Parse a symbol string into an :class:`AnalyticFn`.

    >>> parse_symbol("poly(0,1)").to_symbol()
    'poly(0.0,1.0)'
    """
    if not isinstance(text, str) or not text.strip():
        raise SymbolParseError("empty symbol")
    parser = _Parser(text, env or {}, p, alpha)
    out = parser.expr()
    if parser.tok.kind != "end":
        raise SymbolParseError(f"trailing input at {parser.tok.pos}: {parser.tok.text!r}")
    if not isinstance(out, AnalyticFn):
        out = constant(out)
    return out
