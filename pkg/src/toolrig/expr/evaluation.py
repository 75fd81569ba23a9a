"""IEEE double evaluation with SI unit propagation.

Quantities carry a 7-vector of integer exponents over the SI base dimensions
(m, kg, s, A, K, mol, cd).  Sums require unit agreement, units multiply
through products, powers scale unit vectors (the scaled exponents must stay
integral), and the transcendental functions demand dimensionless arguments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .errors import DomainError, EvalError, UnboundSymbolError, UnitMismatchError
from .nodes import Expr, FloatConst, Func, Pow, Product, Rational, Sum, Symbol

DIMENSIONS = ("m", "kg", "s", "A", "K", "mol", "cd")
ZERO_UNIT = (0, 0, 0, 0, 0, 0, 0)


@dataclass(frozen=True, slots=True)
class NumericValue:
    """A double-precision value with an SI unit exponent vector."""

    value: float
    unit: tuple[int, ...] = field(default=ZERO_UNIT)

    def __post_init__(self):
        object.__setattr__(self, "value", float(self.value))
        unit = tuple(int(u) for u in self.unit)
        if len(unit) != len(DIMENSIONS):
            raise UnitMismatchError(f"unit vector must have {len(DIMENSIONS)} entries")
        object.__setattr__(self, "unit", unit)

    @property
    def dimensionless(self) -> bool:
        return self.unit == ZERO_UNIT

    def __add__(self, other: "NumericValue") -> "NumericValue":
        if self.unit != other.unit:
            raise UnitMismatchError(f"cannot add units {self.unit} and {other.unit}")
        return NumericValue(self.value + other.value, self.unit)

    def __sub__(self, other: "NumericValue") -> "NumericValue":
        if self.unit != other.unit:
            raise UnitMismatchError(f"cannot subtract units {self.unit} and {other.unit}")
        return NumericValue(self.value - other.value, self.unit)

    def __lt__(self, other: "NumericValue") -> bool:
        if self.unit != other.unit:
            raise UnitMismatchError(f"cannot compare units {self.unit} and {other.unit}")
        return self.value < other.value


Bindings = Mapping[str, "NumericValue | float | int"]


def coerce_bindings(bindings: Bindings) -> dict[str, NumericValue]:
    out: dict[str, NumericValue] = {}
    for name, value in bindings.items():
        if not name:
            raise EvalError("binding names must be non-empty")
        out[name] = value if isinstance(value, NumericValue) else NumericValue(float(value))
    return out


def evaluate(e: Expr, bindings: Bindings) -> NumericValue:
    """Evaluate ``e`` under ``bindings``; every free symbol must be bound."""
    bound = coerce_bindings(bindings)
    value, unit = _ev(e, bound)
    if not math.isfinite(value):
        raise DomainError("evaluation overflowed the double range")
    return NumericValue(value, unit)


def _ev(e: Expr, b: dict[str, NumericValue]) -> tuple[float, tuple[int, ...]]:
    if isinstance(e, Rational):
        return float(e.value), ZERO_UNIT
    if isinstance(e, FloatConst):
        return e.value, ZERO_UNIT
    if isinstance(e, Symbol):
        try:
            nv = b[e.name]
        except KeyError:
            raise UnboundSymbolError(e.name) from None
        return nv.value, nv.unit
    if isinstance(e, Sum):
        total, unit = _ev(e.terms[0], b)
        for t in e.terms[1:]:
            v, u = _ev(t, b)
            if u != unit:
                raise UnitMismatchError(f"sum mixes units {unit} and {u}")
            total += v
        return total, unit
    if isinstance(e, Product):
        total = 1.0
        unit = [0] * len(DIMENSIONS)
        for f in e.factors:
            v, u = _ev(f, b)
            total *= v
            for i, ui in enumerate(u):
                unit[i] += ui
        return total, tuple(unit)
    if isinstance(e, Pow):
        return _ev_pow(e, b)
    if isinstance(e, Func):
        return _ev_func(e, b)
    raise EvalError(f"cannot evaluate {e!r}")


def _ev_pow(e: Pow, b: dict[str, NumericValue]) -> tuple[float, tuple[int, ...]]:
    bv, bu = _ev(e.base, b)
    ev, eu = _ev(e.exp, b)
    if eu != ZERO_UNIT:
        raise UnitMismatchError("exponents must be dimensionless")

    if bu == ZERO_UNIT:
        unit = ZERO_UNIT
    elif isinstance(e.exp, Rational):
        # exact unit scaling; the scaled exponents must stay integral
        scaled = []
        for u in bu:
            s = Fraction(u) * e.exp.value
            if s.denominator != 1:
                raise UnitMismatchError(f"exponent {e.exp.value} leaves a fractional unit")
            scaled.append(int(s))
        unit = tuple(scaled)
    else:
        raise UnitMismatchError("dimensionful base requires an exact rational exponent")

    exact = e.exp.value if isinstance(e.exp, Rational) else None
    return _pow_value(bv, ev, exact), unit


def _pow_value(base: float, exp: float, exact: Fraction | None) -> float:
    if base == 0.0:
        if exp > 0:
            return 0.0
        if exp == 0:
            return 1.0
        raise DomainError("division by zero (0 raised to a negative power)")
    if base < 0.0:
        if exact is not None and exact.denominator == 1:
            return _checked(base**exact.numerator)
        if exp == int(exp):
            return _checked(base ** int(exp))
        raise DomainError("negative base with non-integer exponent")
    try:
        return _checked(base**exp)
    except OverflowError:
        raise DomainError("power overflow") from None


def _checked(v: float) -> float:
    if not math.isfinite(v):
        raise DomainError("overflow")
    return v


def _ev_func(e: Func, b: dict[str, NumericValue]) -> tuple[float, tuple[int, ...]]:
    v, u = _ev(e.arg, b)
    if e.name == "abs":
        return abs(v), u
    if e.name == "sqrt":
        if any(ui % 2 for ui in u):
            raise UnitMismatchError("sqrt needs even unit exponents")
        if v < 0:
            raise DomainError("sqrt of a negative value")
        return math.sqrt(v), tuple(ui // 2 for ui in u)
    if u != ZERO_UNIT:
        raise UnitMismatchError(f"{e.name} requires a dimensionless argument")
    if e.name == "sin":
        return math.sin(v), ZERO_UNIT
    if e.name == "cos":
        return math.cos(v), ZERO_UNIT
    if e.name == "tan":
        return math.tan(v), ZERO_UNIT
    if e.name == "exp":
        try:
            return _checked(math.exp(v)), ZERO_UNIT
        except OverflowError:
            raise DomainError("exp overflow") from None
    if e.name == "ln":
        if v <= 0:
            raise DomainError("ln of a non-positive value")
        return math.log(v), ZERO_UNIT
    raise EvalError(f"no evaluation rule for {e.name!r}")
