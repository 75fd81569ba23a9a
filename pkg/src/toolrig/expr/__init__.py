"""Symbolic expression core: parse, canonicalize, differentiate, evaluate, compare."""

from .calculus import differentiate
from .equivalence import equivalent
from .errors import (
    DomainError,
    EvalError,
    ExprError,
    ParseError,
    UnboundSymbolError,
    UnitMismatchError,
    UnknownFunctionError,
)
from .evaluation import DIMENSIONS, ZERO_UNIT, Bindings, NumericValue, evaluate
from .nodes import (
    FUNCTION_NAMES,
    Expr,
    FloatConst,
    Func,
    Pow,
    Product,
    Rational,
    Sum,
    Symbol,
    add,
    canonicalize,
    div,
    expand,
    free_symbols,
    func,
    is_zero,
    mul,
    neg,
    num,
    pow_,
    sub,
    sym,
)
from .parser import parse
from .printer import print_expr

__all__ = [
    "Bindings",
    "DIMENSIONS",
    "DomainError",
    "EvalError",
    "Expr",
    "ExprError",
    "FUNCTION_NAMES",
    "FloatConst",
    "Func",
    "NumericValue",
    "ParseError",
    "Pow",
    "Product",
    "Rational",
    "Sum",
    "Symbol",
    "UnboundSymbolError",
    "UnitMismatchError",
    "UnknownFunctionError",
    "ZERO_UNIT",
    "add",
    "canonicalize",
    "differentiate",
    "div",
    "equivalent",
    "evaluate",
    "expand",
    "free_symbols",
    "func",
    "is_zero",
    "mul",
    "neg",
    "num",
    "parse",
    "pow_",
    "print_expr",
    "sub",
    "sym",
]
