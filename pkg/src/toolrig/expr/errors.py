"""Exception types raised by the expression layer."""


class ExprError(Exception):
    """Base class for all expression-layer errors."""


class ParseError(ExprError):
    """Syntax error while parsing an infix expression.

    Carries the byte offset of the offending token so callers can point
    at the exact location in the source string.
    """

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class UnknownFunctionError(ParseError):
    """An identifier was applied like a function but is not in the function set."""

    def __init__(self, name: str, offset: int):
        super().__init__(f"unknown function {name!r}", offset)
        self.name = name


class EvalError(ExprError):
    """Base class for numeric evaluation failures."""


class UnboundSymbolError(EvalError):
    def __init__(self, name: str):
        super().__init__(f"unbound symbol {name!r}")
        self.name = name


class DomainError(EvalError):
    """Evaluation left the real domain (ln of non-positive, sqrt of negative,
    division by zero, overflow)."""


class UnitMismatchError(EvalError):
    """Operation combined quantities whose unit vectors disagree."""
