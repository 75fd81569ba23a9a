#!/usr/bin/env python3
# Walk through the expression layer: parsing, canonical forms, derivatives,
# unit-aware evaluation, and deterministic equivalence checks.

from toolrig.expr import (
    NumericValue,
    differentiate,
    equivalent,
    evaluate,
    parse,
    print_expr,
)

# Parsing is standard infix with explicit '*'; integers become exact rationals.
position = parse("A*t^3 - B*t^2 + C*t")
print("position x(t)      :", print_expr(position))
print("lowest terms       :", print_expr(parse("2/4")))

# Canonical forms are unique and byte-stable, so reordered input converges.
print("reordered input    :", print_expr(parse("C*t - B*t^2 + A*t^3")))

# Differentiation returns the canonical derivative.
velocity = differentiate(position, "t")
print("velocity v(t)      :", print_expr(velocity))

# Evaluation propagates SI units through products, powers, and sums.
kg = (0, 1, 0, 0, 0, 0, 0)
m_per_s = (1, 0, -1, 0, 0, 0, 0)
energy = evaluate(
    parse("0.5*m*v^2"),
    {"m": NumericValue(2.0, kg), "v": NumericValue(-1.0, m_per_s)},
)
print("kinetic energy     :", energy.value, "in unit", energy.unit)

# Equivalence: expansion settles polynomial identities exactly; everything
# else degrades to seeded sampling, so verdicts are reproducible.
print("factored == expanded:", equivalent(parse("(t - 2)*(t - 3)"), parse("t^2 - 5*t + 6"), 1e-9))
print("pythagorean identity:", equivalent(parse("sin(x)^2 + cos(x)^2"), parse("1"), 1e-9))
print("x^2 == x^3 anywhere :", equivalent(parse("x^2"), parse("x^3"), 1e-9))
