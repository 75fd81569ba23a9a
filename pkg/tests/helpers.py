"""Shared test utilities: seeded expression generator and independent oracles."""

from __future__ import annotations

import random
from fractions import Fraction

from toolrig.expr import (
    EvalError,
    Expr,
    FloatConst,
    Func,
    NumericValue,
    Pow,
    Product,
    Rational,
    Sum,
    Symbol,
    evaluate,
)

SMOOTH_FUNCS = ("sin", "cos", "exp", "sqrt", "ln")


def gen_expr(rng: random.Random, symbols=("x",), depth=3, funcs=SMOOTH_FUNCS) -> Expr:
    """Random expression over ``symbols`` with bounded size and magnitudes."""
    if depth == 0 or rng.random() < 0.25:
        roll = rng.random()
        if roll < 0.4:
            return Symbol(rng.choice(symbols))
        if roll < 0.7:
            return Rational(Fraction(rng.randint(-5, 5)))
        return FloatConst(round(rng.uniform(-3, 3), 3))
    kind = rng.choice(("sum", "product", "power", "func"))
    if kind == "sum":
        n = rng.randint(2, 3)
        return Sum(tuple(gen_expr(rng, symbols, depth - 1, funcs) for _ in range(n)))
    if kind == "product":
        n = rng.randint(2, 3)
        return Product(tuple(gen_expr(rng, symbols, depth - 1, funcs) for _ in range(n)))
    if kind == "power":
        base = gen_expr(rng, symbols, depth - 1, funcs)
        return Pow(base, Rational(Fraction(rng.randint(1, 4))))
    return Func(rng.choice(funcs), gen_expr(rng, symbols, depth - 1, funcs))


def central_difference(e: Expr, wrt: str, point: dict[str, float], h: float = 1e-6) -> float:
    """Finite-difference derivative oracle, independent of the symbolic path."""
    hi = dict(point)
    lo = dict(point)
    hi[wrt] = point[wrt] + h
    lo[wrt] = point[wrt] - h
    return (evaluate(e, hi).value - evaluate(e, lo).value) / (2 * h)


def horner(coeffs, x):
    """Evaluate a polynomial given ascending coefficients via Horner's scheme."""
    acc = 0.0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def cofactor_determinant(m) -> float:
    """Cofactor-expansion determinant oracle (n <= 4 in practice)."""
    n = len(m)
    if n == 1:
        return m[0][0]
    total = 0.0
    for j in range(n):
        minor = [row[:j] + row[j + 1 :] for row in m[1:]]
        total += ((-1) ** j) * m[0][j] * cofactor_determinant(minor)
    return total


def try_eval(e: Expr, point: dict[str, float]) -> float | None:
    try:
        return evaluate(e, point).value
    except EvalError:
        return None
