"""Univariate polynomial extraction and deterministic root finding.

Roots come from the closed form for degree <= 2 and from companion-matrix
eigenvalues (shifted-QR, via LAPACK) for degree >= 3, followed by a fixed
number of Newton polish steps.  Output ordering is (real part, imaginary
part), the tie-break used everywhere downstream.
"""

from __future__ import annotations

import cmath
from fractions import Fraction

import numpy as np

from ..expr import Expr, Pow, Rational, Sum, Symbol, expand
from ..expr.nodes import ONE, split_term

MAX_DEGREE = 8
_POLISH_STEPS = 12
_NEAR_DEGENERATE_TOL = 1e-6
_IMAG_CLEANUP = 1e-9


def polynomial_coefficients(e: Expr, var: str) -> list[float] | None:
    """Ascending numeric coefficients of ``e`` as a polynomial in ``var``.

    Returns None when ``e`` is not a polynomial in ``var`` with numeric
    coefficients (e.g. other free symbols, fractional powers, functions).
    """
    e = expand(e)
    terms = e.terms if isinstance(e, Sum) else (e,)
    coeffs: dict[int, float] = {}
    for term in terms:
        coeff, core = split_term(term)
        if core == ONE:
            power = 0
        elif isinstance(core, Symbol) and core.name == var:
            power = 1
        elif (
            isinstance(core, Pow)
            and isinstance(core.base, Symbol)
            and core.base.name == var
            and isinstance(core.exp, Rational)
            and core.exp.value.denominator == 1
            and core.exp.value >= 2
        ):
            power = int(core.exp.value)
        else:
            return None
        if isinstance(coeff, Fraction):
            coeff = float(coeff)
        coeffs[power] = coeffs.get(power, 0.0) + coeff
    degree = max(coeffs) if coeffs else 0
    return [coeffs.get(k, 0.0) for k in range(degree + 1)]


def poly_eval(coeffs: list[float], z: complex) -> complex:
    acc = 0j
    for c in reversed(coeffs):
        acc = acc * z + c
    return acc


def _poly_derivative(coeffs: list[float]) -> list[float]:
    return [k * c for k, c in enumerate(coeffs)][1:]


def _polish(coeffs: list[float], root: complex) -> complex:
    deriv = _poly_derivative(coeffs)
    best = root
    best_value = abs(poly_eval(coeffs, root))
    z = root
    for _ in range(_POLISH_STEPS):
        dp = poly_eval(deriv, z)
        if abs(dp) < 1e-300:
            break
        z = z - poly_eval(coeffs, z) / dp
        value = abs(poly_eval(coeffs, z))
        if value < best_value:
            best, best_value = z, value
    return best


def find_roots(coeffs: list[float]) -> list[complex]:
    """All complex roots of the polynomial, sorted by (real, imag)."""
    # strip trailing zero coefficients down to the true degree
    while len(coeffs) > 1 and coeffs[-1] == 0.0:
        coeffs = coeffs[:-1]
    degree = len(coeffs) - 1
    if degree < 1:
        return []
    if degree == 1:
        roots = [complex(-coeffs[0] / coeffs[1])]
    elif degree == 2:
        c, b, a = coeffs
        disc = cmath.sqrt(complex(b * b - 4 * a * c))
        roots = [(-b - disc) / (2 * a), (-b + disc) / (2 * a)]
    else:
        monic = np.array(coeffs, dtype=float) / coeffs[-1]
        companion = np.zeros((degree, degree))
        companion[1:, :-1] = np.eye(degree - 1)
        companion[:, -1] = -monic[:-1]
        eigen = np.linalg.eigvals(companion)
        roots = [_polish(coeffs, complex(z)) for z in eigen]
    roots = [_clean_imag(z) for z in roots]
    roots.sort(key=lambda z: (z.real, z.imag))
    return roots


def _clean_imag(z: complex) -> complex:
    if abs(z.imag) <= _IMAG_CLEANUP * (1.0 + abs(z.real)):
        return complex(z.real, 0.0)
    return z


def max_residual(coeffs: list[float], roots: list[complex]) -> float:
    if not roots:
        return 0.0
    return max(abs(poly_eval(coeffs, r)) for r in roots)


def near_degenerate_pairs(roots: list[complex]) -> bool:
    for i, a in enumerate(roots):
        for b in roots[i + 1 :]:
            if abs(a - b) < _NEAR_DEGENERATE_TOL * (1.0 + abs(a)):
                return True
    return False


def roots_to_wire(coeffs: list[float], roots: list[complex]) -> list[dict[str, float]]:
    # each root carries its own residual; -0.0 normalized so wire bytes are
    # identical across JSON implementations
    return [
        {
            "re": r.real if r.real != 0.0 else 0.0,
            "im": r.imag if r.imag != 0.0 else 0.0,
            "residual": abs(poly_eval(coeffs, r)),
        }
        for r in roots
    ]
