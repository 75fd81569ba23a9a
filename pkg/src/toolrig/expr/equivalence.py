"""Deterministic expression equivalence.

Two expressions are equivalent when their difference expands to the zero
constant, or when they agree within tolerance at seeded random probe points.
The probe PRNG is seeded from a stable hash of the printed operands, so the
verdict is identical across runs and platforms.
"""

from __future__ import annotations

import hashlib
import random

from .errors import EvalError
from .evaluation import NumericValue, evaluate
from .nodes import MINUS_ONE, Expr, Product, Sum, canonicalize, expand, free_symbols, is_zero
from .printer import print_expr

PROBE_COUNT = 32
PROBE_RETRIES = 8
MIN_VALID_PROBES = 8


def equivalent(a: Expr, b: Expr, tol: float) -> bool:
    """True when ``a`` and ``b`` denote the same function, within ``tol``.

    The symbolic branch expands ``a - b`` and checks for the zero constant;
    otherwise 32 probes per free symbol are drawn uniformly from
    [-3, -0.1] U [0.1, 3], retrying up to 8 times on domain errors.  Fewer
    than 8 valid probes means "not shown equivalent" and returns False.
    """
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    a = canonicalize(a)
    b = canonicalize(b)
    if a == b:
        return True
    diff = expand(Sum((a, Product((MINUS_ONE, b)))))
    if is_zero(diff):
        return True

    symbols = sorted(free_symbols(a) | free_symbols(b))
    rng = random.Random(_stable_seed(a, b))
    valid = 0
    for _ in range(PROBE_COUNT):
        pair = _probe(a, b, symbols, rng)
        if pair is None:
            continue
        va, vb = pair
        valid += 1
        if abs(va - vb) > tol * (1.0 + max(abs(va), abs(vb))):
            return False
    return valid >= MIN_VALID_PROBES


def _stable_seed(a: Expr, b: Expr) -> int:
    digest = hashlib.sha256(f"{print_expr(a)}\x00{print_expr(b)}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


def _probe(a: Expr, b: Expr, symbols: list[str], rng: random.Random):
    for _ in range(PROBE_RETRIES):
        bindings = {}
        for name in symbols:
            magnitude = rng.uniform(0.1, 3.0)
            sign = 1.0 if rng.random() < 0.5 else -1.0
            bindings[name] = NumericValue(sign * magnitude)
        try:
            va = evaluate(a, bindings)
            vb = evaluate(b, bindings)
        except EvalError:
            continue
        return va.value, vb.value
    return None
