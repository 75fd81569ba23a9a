"""Deterministic infix printer.

The printer is the inverse of the parser on canonical forms:
``parse(print_expr(e)) == canonicalize(e)`` for every expression.  Output
style matches the wire format used throughout the tool payloads: single
spaces around binary ``+``/``-``, none around ``*`` and ``^``, and float
constants rendered with shortest round-trip precision (Python ``repr``).
"""

from __future__ import annotations

from .errors import ExprError
from .nodes import (
    MINUS_ONE,
    Expr,
    FloatConst,
    Func,
    Pow,
    Product,
    Rational,
    Sum,
    Symbol,
    _make_product,
    split_term,
)

_PREC_ADD = 1
_PREC_MUL = 2
_PREC_POW = 3
_PREC_ATOM = 4


def print_expr(e: Expr) -> str:
    return _render(e, 0)


def _prec(e: Expr) -> int:
    if isinstance(e, Sum):
        return _PREC_ADD
    if isinstance(e, Product):
        return _PREC_MUL
    if isinstance(e, Pow):
        return _PREC_POW
    return _PREC_ATOM


def _render(e: Expr, context: int) -> str:
    if isinstance(e, Rational):
        v = e.value
        text = str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
        if (v < 0 or v.denominator != 1) and context >= _PREC_MUL:
            return f"({text})"
        return text
    if isinstance(e, FloatConst):
        text = repr(e.value)
        if e.value < 0 and context >= _PREC_MUL:
            return f"({text})"
        return text
    if isinstance(e, Func):
        return f"{e.name}({_render(e.arg, 0)})"
    if isinstance(e, Pow):
        return _render_pow(e)
    if isinstance(e, Product):
        return _render_product(e, context)
    if isinstance(e, Sum):
        text = _render_sum(e)
        return f"({text})" if context > _PREC_ADD else text
    if isinstance(e, Symbol):
        return e.name
    raise ExprError(f"cannot print {e!r}")


def _render_pow(e: Pow) -> str:
    base = _render(e.base, _PREC_ATOM)
    if isinstance(e.base, (Rational, FloatConst)) and base.startswith("("):
        pass  # negative or fractional constants already got parens
    elif _prec(e.base) < _PREC_ATOM:
        base = f"({_render(e.base, 0)})"
    exp = _render_exponent(e.exp)
    return f"{base}^{exp}"


def _render_exponent(e: Expr) -> str:
    if isinstance(e, Rational) and e.value.denominator == 1 and e.value >= 0:
        return str(e.value.numerator)
    if isinstance(e, FloatConst) and e.value >= 0:
        return repr(e.value)
    if isinstance(e, Func):
        return _render(e, 0)
    if isinstance(e, Symbol):
        return e.name
    return f"({_render(e, 0)})"


def _render_product(e: Product, context: int) -> str:
    factors = e.factors
    prefix = ""
    # -1 coefficients read as a sign, except before a sum: "-(a + b)*c" would
    # reparse as a nested negation and distribute, changing the tree
    if factors[0] == MINUS_ONE and len(factors) > 1 and not isinstance(factors[1], Sum):
        prefix = "-"
        factors = factors[1:]
    parts = []
    for i, f in enumerate(factors):
        # a leading numeric coefficient may carry its sign/slash bare
        bare = i == 0 and not prefix and isinstance(f, (Rational, FloatConst))
        text = _render(f, _PREC_ADD if bare else _PREC_MUL)
        if i > 0 and text.startswith("-"):
            text = f"({text})"
        parts.append(text)
    text = prefix + "*".join(parts)
    if context > _PREC_MUL or (context >= _PREC_MUL and text.startswith("-")):
        return f"({text})"
    return text


def _render_sum(e: Sum) -> str:
    out = _render(e.terms[0], _PREC_ADD)
    for term in e.terms[1:]:
        coeff, _core = split_term(term)
        if coeff < 0:
            flipped = _make_product((MINUS_ONE, term))
            # canonical flips never yield sums, but a subtrahend sum would
            # reassociate without parens, so guard anyway
            context = _PREC_MUL if isinstance(flipped, Sum) else _PREC_ADD
            out += f" - {_render(flipped, context)}"
        else:
            out += f" + {_render(term, _PREC_ADD)}"
    return out
