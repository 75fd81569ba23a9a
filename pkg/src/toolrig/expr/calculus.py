"""Symbolic differentiation over the closed function set."""

from __future__ import annotations

from fractions import Fraction

from .errors import ExprError
from .nodes import (
    MINUS_ONE,
    ONE,
    ZERO,
    Expr,
    FloatConst,
    Func,
    Pow,
    Product,
    Rational,
    Sum,
    canonicalize,
    free_symbols,
)

_HALF = Rational(Fraction(1, 2))


def differentiate(e: Expr, wrt: str) -> Expr:
    """Derivative of ``e`` with respect to the symbol named ``wrt``, canonicalized.

    ``d/dx abs(x)`` is ``abs(x)/x`` (domain error at 0 surfaces only on
    evaluation), which keeps the function set closed.
    """
    if not wrt:
        raise ExprError("differentiation variable must be a symbol name")
    return canonicalize(_d(canonicalize(e), wrt))


def _d(e: Expr, x: str) -> Expr:
    if isinstance(e, (Rational, FloatConst)):
        return ZERO
    if hasattr(e, "name") and not isinstance(e, Func):  # Symbol
        return ONE if e.name == x else ZERO
    if isinstance(e, Sum):
        return Sum(tuple(_d(t, x) for t in e.terms))
    if isinstance(e, Product):
        terms = []
        for i, f in enumerate(e.factors):
            terms.append(Product(e.factors[:i] + (_d(f, x),) + e.factors[i + 1 :]))
        return Sum(tuple(terms))
    if isinstance(e, Pow):
        u, v = e.base, e.exp
        du, dv = _d(u, x), _d(v, x)
        if x not in free_symbols(v):
            # power rule: v * u^(v-1) * u'
            return Product((v, Pow(u, Sum((v, MINUS_ONE))), du))
        if x not in free_symbols(u):
            # exponential rule: u^v * ln(u) * v'
            return Product((e, Func("ln", u), dv))
        # general case: u^v * (v' ln u + v u' / u)
        inner = Sum((Product((dv, Func("ln", u))), Product((v, du, Pow(u, MINUS_ONE)))))
        return Product((e, inner))
    if isinstance(e, Func):
        u = e.arg
        du = _d(u, x)
        if e.name == "sin":
            outer: Expr = Func("cos", u)
        elif e.name == "cos":
            outer = Product((MINUS_ONE, Func("sin", u)))
        elif e.name == "tan":
            outer = Pow(Func("cos", u), Rational(Fraction(-2)))
        elif e.name == "exp":
            outer = Func("exp", u)
        elif e.name == "ln":
            outer = Pow(u, MINUS_ONE)
        elif e.name == "sqrt":
            outer = Product((_HALF, Pow(Func("sqrt", u), MINUS_ONE)))
        elif e.name == "abs":
            outer = Product((Func("abs", u), Pow(u, MINUS_ONE)))
        else:
            raise ExprError(f"no derivative rule for {e.name!r}")
        return Product((outer, du))
    raise ExprError(f"cannot differentiate {e!r}")
