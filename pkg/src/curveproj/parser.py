"""Parse rational-function expressions and curve documents.

Grammar (whitespace is ignored)::

    expr  := term (('+' | '-') term)*
    term  := unary (('*' | '/') unary)*
    unary := ('+' | '-') unary | power
    power := atom ('^' INTEGER)?
    atom  := NUMBER | IDENT | '(' expr ')'

``^`` binds tighter than unary minus, so ``-t^2`` is ``-(t^2)``.  Juxtaposition
such as ``2t`` is rejected.  NUMBER accepts integers and decimal literals
(``0.001``, ``1e-3``); decimals are read exactly as rationals.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .errors import DivisionByZeroPolynomial, MissingField, ParseError, UnknownSymbol
from .ratfun import Poly, RatFun

_NUM = re.compile(r"(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?")
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


@dataclass(frozen=True)
class Token:
    kind: str  # num, ident, op, end
    text: str
    pos: int


def tokenize(src: str) -> list[Token]:
    toks = []
    i, n = 0, len(src)
    while i < n:
        ch = src[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit() or (ch == "." and i + 1 < n and src[i + 1].isdigit()):
            m = _NUM.match(src, i)
            toks.append(Token("num", m.group(0), i))
            i = m.end()
            continue
        if ch.isalpha() or ch == "_":
            m = _IDENT.match(src, i)
            toks.append(Token("ident", m.group(0), i))
            i = m.end()
            continue
        if ch in "+-*/^()":
            toks.append(Token("op", ch, i))
            i += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", i, src)
    toks.append(Token("end", "", n))
    return toks


class _Parser:
    def __init__(self, src: str, variable: str):
        self.src = src
        self.var = variable
        self.toks = tokenize(src)
        self.i = 0

    def peek(self) -> Token:
        return self.toks[self.i]

    def take(self) -> Token:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        return ParseError(msg, tok.pos, self.src)

    def parse(self) -> RatFun:
        if self.peek().kind == "end":
            raise self.error("empty expression")
        val = self.expr()
        tok = self.peek()
        if tok.kind != "end":
            if tok.kind in ("num", "ident") or tok.text == "(":
                raise self.error("implicit multiplication is not allowed", tok)
            raise self.error(f"unexpected {tok.text!r}", tok)
        return val

    def expr(self) -> RatFun:
        val = self.term()
        while self.peek().text in ("+", "-") and self.peek().kind == "op":
            op = self.take().text
            rhs = self.term()
            val = val + rhs if op == "+" else val - rhs
        return val

    def term(self) -> RatFun:
        val = self.unary()
        while self.peek().kind == "op" and self.peek().text in ("*", "/"):
            optok = self.take()
            rhs = self.unary()
            if optok.text == "*":
                val = val * rhs
            else:
                if rhs.is_zero():
                    raise DivisionByZeroPolynomial("division by the zero polynomial", optok.pos, self.src)
                val = val / rhs
        return val

    def unary(self) -> RatFun:
        tok = self.peek()
        if tok.kind == "op" and tok.text in ("+", "-"):
            self.take()
            val = self.unary()
            return -val if tok.text == "-" else val
        return self.power()

    def power(self) -> RatFun:
        base = self.atom()
        tok = self.peek()
        if tok.kind == "op" and tok.text == "^":
            self.take()
            etok = self.peek()
            if etok.kind != "num" or not etok.text.isdigit():
                raise self.error("exponent must be a non-negative integer literal", etok)
            self.take()
            base = base ** int(etok.text)
            if self.peek().kind == "op" and self.peek().text == "^":
                raise self.error("chained exponents need parentheses")
        nxt = self.peek()
        if nxt.kind in ("num", "ident") or (nxt.kind == "op" and nxt.text == "("):
            raise self.error("implicit multiplication is not allowed", nxt)
        return base

    def atom(self) -> RatFun:
        tok = self.peek()
        if tok.kind == "num":
            self.take()
            return RatFun.const(Fraction(tok.text))
        if tok.kind == "ident":
            self.take()
            if tok.text != self.var:
                raise UnknownSymbol(f"unknown symbol {tok.text!r}", tok.pos, self.src)
            return RatFun.from_poly(Poly.x())
        if tok.kind == "op" and tok.text == "(":
            self.take()
            if self.peek().kind == "op" and self.peek().text == ")":
                raise self.error("empty parentheses")
            val = self.expr()
            close = self.peek()
            if not (close.kind == "op" and close.text == ")"):
                if close.kind in ("num", "ident") or close.text == "(":
                    raise self.error("implicit multiplication is not allowed", close)
                raise self.error("expected ')'", close)
            self.take()
            return val
        if tok.kind == "end":
            raise self.error("unexpected end of input", tok)
        raise self.error(f"unexpected {tok.text!r}", tok)


def parse_ratfun_expr(src: str, variable: str = "t") -> RatFun:
    """Parse an expression in one variable into a normalized RatFun."""
    if not isinstance(src, str):
        src = str(src)
    if not _IDENT.fullmatch(variable or ""):
        raise ParseError(f"invalid variable name {variable!r}")
    return _Parser(src, variable).parse()


@dataclass(frozen=True)
class CurveSpec:
    variable: str
    x: str
    y: str
    z: str
    label: str = ""

    @classmethod
    def from_doc(cls, doc: dict) -> "CurveSpec":
        if not isinstance(doc, dict):
            raise ParseError("curve document must be an object")
        var = doc.get("variable", doc.get("var"))
        if var is None:
            raise MissingField("variable")
        for key in ("x", "y", "z"):
            if key not in doc:
                raise MissingField(key)
        return cls(str(var), str(doc["x"]), str(doc["y"]), str(doc["z"]), str(doc.get("label", "")))

    def to_doc(self) -> dict:
        return {"variable": self.variable, "x": self.x, "y": self.y, "z": self.z, "label": self.label}


def parse_curve(doc):
    """Parse {"variable", "x", "y", "z"[, "label"]} into a CurveParam."""
    from .curves import CurveParam

    spec = doc if isinstance(doc, CurveSpec) else CurveSpec.from_doc(doc)
    comps = []
    for key in ("x", "y", "z"):
        try:
            comps.append(parse_ratfun_expr(getattr(spec, key), spec.variable))
        except ParseError as exc:
            exc.args = (f"{key}: {exc.args[0]}",)
            exc.field = key
            raise
    return CurveParam(*comps, variable=spec.variable, label=spec.label)


def load_pair(source):
    """Read a pair document {"C1": ..., "C2": ...} from a path, JSON text or dict."""
    if isinstance(source, dict):
        doc = source
    else:
        p = Path(source)
        text = p.read_text(encoding="utf-8")
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", exc.pos) from None
    if not isinstance(doc, dict):
        raise ParseError("pair document must be an object")
    for key in ("C1", "C2"):
        if key not in doc:
            raise MissingField(key)
    return parse_curve(doc["C1"]), parse_curve(doc["C2"])
