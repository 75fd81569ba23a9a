"""Immutable symbolic expression trees with a deterministic canonical form.

Node kinds: exact rational constants, float constants, symbols, n-ary sums,
n-ary products, powers, and the unary functions sin/cos/tan/exp/ln/sqrt/abs.

Canonicalization guarantees:

* idempotence: ``canonicalize(canonicalize(e)) == canonicalize(e)``;
* rationals are kept in lowest terms with positive denominator (via
  :class:`fractions.Fraction`);
* sum and product children are stored in one fixed total order, so canonical
  trees (and therefore their printed forms) are byte-identical across runs.

Products order their factors by node-kind rank and then recursively, which
places the numeric coefficient first.  Sums order terms by descending
symbolic degree of the coefficient-stripped term, which is what turns the
derivative of ``A*t^3 - B*t^2 + C*t`` into ``3*A*t^2 - 2*B*t + C`` rather
than some alphabetized shuffle.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction

from .errors import ExprError

FUNCTION_NAMES = ("abs", "cos", "exp", "ln", "sin", "sqrt", "tan")

# Guards that keep canonicalization and expansion bounded.
_FOLD_EXP_LIMIT = 64
_EXPAND_POW_LIMIT = 16
_EXPAND_TERM_LIMIT = 4096


class Expr:
    """Base class for expression nodes. Instances are immutable and hashable."""

    __slots__ = ()


@dataclass(frozen=True, slots=True)
class Rational(Expr):
    value: Fraction

    def __post_init__(self):
        if not isinstance(self.value, Fraction):
            object.__setattr__(self, "value", Fraction(self.value))


@dataclass(frozen=True, slots=True)
class FloatConst(Expr):
    value: float

    def __post_init__(self):
        v = self.value
        if v != v or v in (float("inf"), float("-inf")):
            raise ExprError("non-finite float constant")
        if v == 0.0:
            object.__setattr__(self, "value", 0.0)  # normalize -0.0


@dataclass(frozen=True, slots=True)
class Symbol(Expr):
    name: str


@dataclass(frozen=True, slots=True)
class Func(Expr):
    name: str
    arg: Expr


@dataclass(frozen=True, slots=True)
class Pow(Expr):
    base: Expr
    exp: Expr


@dataclass(frozen=True, slots=True)
class Sum(Expr):
    terms: tuple[Expr, ...]


@dataclass(frozen=True, slots=True)
class Product(Expr):
    factors: tuple[Expr, ...]


ZERO = Rational(Fraction(0))
ONE = Rational(Fraction(1))
MINUS_ONE = Rational(Fraction(-1))


def num(value) -> Expr:
    """Wrap a Python number as a constant node (int/Fraction exact, float as-is)."""
    if isinstance(value, bool):
        raise ExprError("booleans are not expression constants")
    if isinstance(value, int):
        return Rational(Fraction(value))
    if isinstance(value, Fraction):
        return Rational(value)
    if isinstance(value, float):
        return FloatConst(value)
    raise ExprError(f"cannot coerce {type(value).__name__} to a constant")


def sym(name: str) -> Symbol:
    if not name:
        raise ExprError("symbol names must be non-empty")
    return Symbol(name)


def add(*terms: Expr) -> Expr:
    return canonicalize(Sum(tuple(terms)))


def mul(*factors: Expr) -> Expr:
    return canonicalize(Product(tuple(factors)))


def pow_(base: Expr, exp: Expr) -> Expr:
    return canonicalize(Pow(base, exp))


def neg(e: Expr) -> Expr:
    return canonicalize(Product((MINUS_ONE, e)))


def sub(a: Expr, b: Expr) -> Expr:
    return canonicalize(Sum((a, Product((MINUS_ONE, b)))))


def div(a: Expr, b: Expr) -> Expr:
    return canonicalize(Product((a, Pow(b, MINUS_ONE))))


def func(name: str, arg: Expr) -> Expr:
    if name not in FUNCTION_NAMES:
        raise ExprError(f"unknown function {name!r}")
    return canonicalize(Func(name, arg))


# ---------------------------------------------------------------------------
# Ordering
# ---------------------------------------------------------------------------

_RANK = {Rational: 0, FloatConst: 1, Symbol: 2, Func: 3, Pow: 4, Product: 5, Sum: 6}


def sort_key(e: Expr):
    """Total order over canonical expressions: node-kind rank, then recursive."""
    if isinstance(e, Rational):
        return (0, e.value)
    if isinstance(e, FloatConst):
        return (1, e.value)
    if isinstance(e, Symbol):
        return (2, e.name)
    if isinstance(e, Func):
        return (3, e.name, sort_key(e.arg))
    if isinstance(e, Pow):
        return (4, sort_key(e.base), sort_key(e.exp))
    if isinstance(e, Product):
        return (5, tuple(sort_key(f) for f in e.factors))
    if isinstance(e, Sum):
        return (6, tuple(sort_key(t) for t in e.terms))
    raise ExprError(f"unorderable node {e!r}")


def degree(e: Expr):
    """Symbolic degree used for sum-term ordering (symbols count 1, functions 0)."""
    if isinstance(e, (Rational, FloatConst)):
        return Fraction(0)
    if isinstance(e, Symbol):
        return Fraction(1)
    if isinstance(e, Func):
        return Fraction(0)
    if isinstance(e, Pow):
        if isinstance(e.exp, Rational):
            return e.exp.value * degree(e.base)
        if isinstance(e.exp, FloatConst):
            return Fraction(e.exp.value) * degree(e.base)
        return Fraction(0)
    if isinstance(e, Product):
        return sum((degree(f) for f in e.factors), Fraction(0))
    if isinstance(e, Sum):
        return max(degree(t) for t in e.terms)
    raise ExprError(f"no degree for {e!r}")


def _num_value(e: Expr):
    """Numeric payload of a constant node, else None."""
    if isinstance(e, Rational):
        return e.value
    if isinstance(e, FloatConst):
        return e.value
    return None


def split_term(e: Expr):
    """Split a canonical term into (numeric coefficient, coefficient-free core)."""
    v = _num_value(e)
    if v is not None:
        return v, ONE
    if isinstance(e, Product):
        head = _num_value(e.factors[0])
        if head is not None:
            rest = e.factors[1:]
            core = rest[0] if len(rest) == 1 else Product(rest)
            return head, core
    return Fraction(1), e


def _term_key(term: Expr):
    coeff, core = split_term(term)
    return (-degree(core), sort_key(core), coeff)


# ---------------------------------------------------------------------------
# Canonicalization
# ---------------------------------------------------------------------------

def _const(v) -> Expr:
    if isinstance(v, Fraction):
        return Rational(v)
    return FloatConst(float(v))


def _mul_num(a, b):
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a * b
    return float(a) * float(b)


def _add_num(a, b):
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a + b
    return float(a) + float(b)


def _iroot(n: int, k: int) -> int | None:
    """Exact integer k-th root of n >= 0, or None if n is not a perfect power."""
    if n < 0:
        return None
    if n in (0, 1):
        return n
    r = round(n ** (1.0 / k))
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand**k == n:
            return cand
    return None


def _fold_pow(base, exp):
    """Fold a numeric base**exp exactly where safe; None means stay symbolic."""
    if isinstance(exp, Fraction):
        if isinstance(base, Fraction):
            if exp.denominator == 1:
                e = exp.numerator
                if abs(e) > _FOLD_EXP_LIMIT:
                    return None
                if e >= 0:
                    return base**e
                if base == 0:
                    return None
                return Fraction(1) / (base ** (-e))
            # fractional exponent: fold only perfect roots of non-negative bases
            if base < 0:
                return None
            num_root = _iroot(base.numerator, exp.denominator)
            den_root = _iroot(base.denominator, exp.denominator)
            if num_root is None or den_root is None:
                return None
            return _fold_pow(Fraction(num_root, den_root), Fraction(exp.numerator))
        if isinstance(base, float) and exp.denominator == 1 and abs(exp.numerator) <= _FOLD_EXP_LIMIT:
            if base == 0.0 and exp.numerator < 0:
                return None
            try:
                folded = float(base) ** exp.numerator
            except OverflowError:
                return None
            return folded if math.isfinite(folded) else None
    return None


def _make_pow(base: Expr, exp: Expr) -> Expr:
    if isinstance(exp, Rational):
        if exp.value == 0:
            return ONE
        if exp.value == 1:
            return base

    bv, ev = _num_value(base), _num_value(exp)
    if bv is not None and ev is not None:
        folded = _fold_pow(bv, ev)
        if folded is not None:
            return _const(folded)
    if bv == 1:
        return ONE  # 1**x == 1 for any real exponent

    if isinstance(base, Pow):
        # (b**p)**q == b**(p*q) whenever q is an integer
        if isinstance(exp, Rational) and exp.value.denominator == 1:
            return _make_pow(base.base, _make_product((base.exp, exp)))
    if isinstance(base, Product) and isinstance(exp, Rational) and exp.value.denominator == 1:
        return _make_product(tuple(_make_pow(f, exp) for f in base.factors))
    return Pow(base, exp)


def _make_func(name: str, arg: Expr) -> Expr:
    v = _num_value(arg)
    if name == "abs" and v is not None:
        return _const(-v if v < 0 else v)
    if isinstance(arg, Rational):
        a = arg.value
        if name in ("sin", "tan") and a == 0:
            return ZERO
        if name in ("cos", "exp") and a == 0:
            return ONE
        if name == "ln" and a == 1:
            return ZERO
        if name == "sqrt" and a >= 0:
            folded = _fold_pow(a, Fraction(1, 2))
            if folded is not None:
                return _const(folded)
    return Func(name, arg)


def _make_product(factors) -> Expr:
    coeff = Fraction(1)
    bases: dict[Expr, list[Expr]] = {}
    queue = deque(factors)
    while queue:
        f = queue.popleft()
        if isinstance(f, Product):
            queue.extend(f.factors)
            continue
        v = _num_value(f)
        if v is not None:
            coeff = _mul_num(coeff, v)
            continue
        if isinstance(f, Pow):
            bases.setdefault(f.base, []).append(f.exp)
        else:
            bases.setdefault(f, []).append(ONE)
    if coeff == 0:
        return ZERO

    rebuilt: list[Expr] = []
    reflatten = False
    for b, exps in bases.items():
        exp_node = exps[0] if len(exps) == 1 else _make_sum(exps)
        p = _make_pow(b, exp_node)
        v = _num_value(p)
        if v is not None:
            coeff = _mul_num(coeff, v)
        else:
            if isinstance(p, Product):
                reflatten = True
            rebuilt.append(p)
    if reflatten:
        return _make_product([_const(coeff)] + rebuilt)
    if coeff == 0:
        return ZERO

    rebuilt.sort(key=sort_key)
    if not rebuilt:
        return _const(coeff)
    if isinstance(coeff, float) and coeff == -1.0:
        # +1.0 coefficients already drop via the ==1 check; normalizing -1.0
        # the same way keeps coefficient float-ness out of canonical identity
        coeff = Fraction(-1)
    if coeff != 1:
        if len(rebuilt) == 1 and isinstance(rebuilt[0], Sum):
            # a lone numeric coefficient distributes over a sum, so shapes
            # like -(z + 4) flatten instead of hiding a sum inside a term
            c = _const(coeff)
            return _make_sum(_make_product((c, t)) for t in rebuilt[0].terms)
        rebuilt.insert(0, _const(coeff))
    if len(rebuilt) == 1:
        return rebuilt[0]
    return Product(tuple(rebuilt))


def _make_sum(terms) -> Expr:
    acc: dict[Expr, object] = {}
    queue = deque(terms)
    while queue:
        t = queue.popleft()
        if isinstance(t, Sum):
            queue.extend(t.terms)
            continue
        coeff, core = split_term(t)
        prev = acc.get(core)
        acc[core] = coeff if prev is None else _add_num(prev, coeff)

    rebuilt: list[Expr] = []
    for core, coeff in acc.items():
        if coeff == 0:
            continue
        if core == ONE:
            rebuilt.append(_const(coeff))
        elif coeff == 1 and isinstance(coeff, Fraction):
            rebuilt.append(core)
        else:
            rebuilt.append(_make_product((_const(coeff), core)))
    if not rebuilt:
        return ZERO
    rebuilt.sort(key=_term_key)
    if len(rebuilt) == 1:
        return rebuilt[0]
    return Sum(tuple(rebuilt))


def canonicalize(e: Expr) -> Expr:
    """Rewrite ``e`` into its unique canonical form."""
    if isinstance(e, (Rational, FloatConst, Symbol)):
        return e
    if isinstance(e, Func):
        return _make_func(e.name, canonicalize(e.arg))
    if isinstance(e, Pow):
        return _make_pow(canonicalize(e.base), canonicalize(e.exp))
    if isinstance(e, Product):
        return _make_product(canonicalize(f) for f in e.factors)
    if isinstance(e, Sum):
        return _make_sum(canonicalize(t) for t in e.terms)
    raise ExprError(f"cannot canonicalize {e!r}")


def is_zero(e: Expr) -> bool:
    v = _num_value(e)
    return v == 0


def free_symbols(e: Expr) -> set[str]:
    if isinstance(e, Symbol):
        return {e.name}
    if isinstance(e, (Rational, FloatConst)):
        return set()
    if isinstance(e, Func):
        return free_symbols(e.arg)
    if isinstance(e, Pow):
        return free_symbols(e.base) | free_symbols(e.exp)
    if isinstance(e, Product):
        return set().union(*(free_symbols(f) for f in e.factors))
    if isinstance(e, Sum):
        return set().union(*(free_symbols(t) for t in e.terms))
    raise ExprError(f"no symbols for {e!r}")


# ---------------------------------------------------------------------------
# Expansion (distributes products over sums; used by equivalence and solvers)
# ---------------------------------------------------------------------------

def _sum_terms(e: Expr) -> tuple[Expr, ...]:
    return e.terms if isinstance(e, Sum) else (e,)


def expand(e: Expr) -> Expr:
    """Distribute products/integer powers over sums and collect like terms.

    Falls back to the merely canonical form when the expansion would exceed
    the internal term budget, so the result is always deterministic.
    """
    return _expand(canonicalize(e))


def _expand(e: Expr) -> Expr:
    if isinstance(e, (Rational, FloatConst, Symbol)):
        return e
    if isinstance(e, Func):
        return _make_func(e.name, _expand(e.arg))
    if isinstance(e, Sum):
        return _make_sum(_expand(t) for t in e.terms)
    if isinstance(e, Pow):
        base = _expand(e.base)
        exp = _expand(e.exp)
        if (
            isinstance(base, Sum)
            and isinstance(exp, Rational)
            and exp.value.denominator == 1
            and 2 <= exp.value.numerator <= _EXPAND_POW_LIMIT
        ):
            out: Expr = base
            for _ in range(exp.value.numerator - 1):
                out = _distribute((out, base))
                if _too_wide(out):
                    return _make_pow(base, exp)
            return out
        return _make_pow(base, exp)
    if isinstance(e, Product):
        factors = tuple(_expand(f) for f in e.factors)
        out = _distribute(factors)
        if _too_wide(out):
            return _make_product(factors)
        return out
    raise ExprError(f"cannot expand {e!r}")


def _too_wide(e: Expr) -> bool:
    return isinstance(e, Sum) and len(e.terms) > _EXPAND_TERM_LIMIT


def _distribute(factors) -> Expr:
    combos: list[tuple[Expr, ...]] = [()]
    for f in factors:
        terms = _sum_terms(f)
        if len(combos) * len(terms) > _EXPAND_TERM_LIMIT:
            return _make_product(tuple(factors))
        combos = [c + (t,) for c in combos for t in terms]
    return _make_sum(_make_product(c) for c in combos)
