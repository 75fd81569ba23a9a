"""Recursive-descent parser for the infix expression grammar.

Grammar (highest precedence last):

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := '-' unary | power
    power   := primary ('^' unary)?          # right-associative
    primary := NUMBER | IDENT | IDENT '(' expr ')' | '(' expr ')'

``^`` binds tighter than unary minus (``-x^2`` is ``-(x^2)``), and
multiplication is always explicit.  Integer literals become exact rationals;
literals with a decimal point or exponent become float constants.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import ParseError, UnknownFunctionError
from .nodes import (
    FUNCTION_NAMES,
    MINUS_ONE,
    Expr,
    FloatConst,
    Func,
    Pow,
    Product,
    Rational,
    Sum,
    Symbol,
    canonicalize,
)

_OPS = set("+-*/^(),")


class _Token:
    __slots__ = ("kind", "text", "offset")

    def __init__(self, kind: str, text: str, offset: int):
        self.kind = kind  # "num" | "ident" | "op" | "end"
        self.text = text
        self.offset = offset


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c in _OPS:
            tokens.append(_Token("op", c, i))
            i += 1
            continue
        if c.isdigit() or (c == "." and i + 1 < n and text[i + 1].isdigit()):
            j = i
            while j < n and text[j].isdigit():
                j += 1
            is_float = False
            if j < n and text[j] == ".":
                is_float = True
                j += 1
                while j < n and text[j].isdigit():
                    j += 1
            if j < n and text[j] in "eE":
                k = j + 1
                if k < n and text[k] in "+-":
                    k += 1
                if k < n and text[k].isdigit():
                    is_float = True
                    j = k
                    while j < n and text[j].isdigit():
                        j += 1
            tokens.append(_Token("num", text[i:j], i))
            if is_float:
                tokens[-1].kind = "float"
            i = j
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(_Token("ident", text[i:j], i))
            i = j
            continue
        raise ParseError(f"unexpected character {c!r}", i)
    tokens.append(_Token("end", "", n))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def next(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, text: str) -> _Token:
        tok = self.peek()
        if tok.kind != "op" or tok.text != text:
            raise ParseError(f"expected {text!r}", tok.offset)
        return self.next()

    def parse_expr(self) -> Expr:
        terms = [self.parse_term()]
        while True:
            tok = self.peek()
            if tok.kind == "op" and tok.text in "+-":
                self.next()
                rhs = self.parse_term()
                if tok.text == "-":
                    rhs = Product((MINUS_ONE, rhs))
                terms.append(rhs)
            else:
                break
        return terms[0] if len(terms) == 1 else Sum(tuple(terms))

    def parse_term(self) -> Expr:
        factors = [self.parse_unary()]
        while True:
            tok = self.peek()
            if tok.kind == "op" and tok.text in "*/":
                self.next()
                rhs = self.parse_unary()
                if tok.text == "/":
                    rhs = Pow(rhs, MINUS_ONE)
                factors.append(rhs)
            else:
                break
        return factors[0] if len(factors) == 1 else Product(tuple(factors))

    def parse_unary(self) -> Expr:
        tok = self.peek()
        if tok.kind == "op" and tok.text == "-":
            self.next()
            return Product((MINUS_ONE, self.parse_unary()))
        return self.parse_power()

    def parse_power(self) -> Expr:
        base = self.parse_primary()
        tok = self.peek()
        if tok.kind == "op" and tok.text == "^":
            self.next()
            # unary on the right keeps ^ right-associative and admits x^-2
            return Pow(base, self.parse_unary())
        return base

    def parse_primary(self) -> Expr:
        tok = self.next()
        if tok.kind == "num":
            return Rational(Fraction(int(tok.text)))
        if tok.kind == "float":
            return FloatConst(float(tok.text))
        if tok.kind == "ident":
            nxt = self.peek()
            if nxt.kind == "op" and nxt.text == "(":
                if tok.text not in FUNCTION_NAMES:
                    raise UnknownFunctionError(tok.text, tok.offset)
                self.next()
                arg = self.parse_expr()
                self.expect(")")
                return Func(tok.text, arg)
            if tok.text in FUNCTION_NAMES:
                raise ParseError(f"function {tok.text!r} requires an argument list", tok.offset)
            return Symbol(tok.text)
        if tok.kind == "op" and tok.text == "(":
            inner = self.parse_expr()
            self.expect(")")
            return inner
        raise ParseError(f"unexpected token {tok.text!r}" if tok.text else "unexpected end of input", tok.offset)


def parse(text: str) -> Expr:
    """Parse an infix expression string into its canonical tree."""
    if not isinstance(text, str) or not text.strip():
        raise ParseError("empty expression", 0)
    parser = _Parser(_tokenize(text))
    tree = parser.parse_expr()
    tail = parser.peek()
    if tail.kind != "end":
        raise ParseError(f"unexpected trailing input {tail.text!r}", tail.offset)
    return canonicalize(tree)
