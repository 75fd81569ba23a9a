"""Equivalence classes for payload and tool-input comparison.

Three classes cover every canonical-step comparison: symbolic equivalence of
expression strings, numeric-with-tolerance over structured payloads, and set
equality of root lists under bipartite matching.  The same predicates drive
template validation and trace alignment during scoring.
"""

from __future__ import annotations

from typing import Any

from ..expr import ExprError, equivalent, parse

_SYMBOLIC_TOL = 1e-9


def numbers_close(a: float, b: float, tol: float) -> bool:
    return abs(a - b) <= tol * (1.0 + max(abs(a), abs(b)))


def exprs_equivalent(a: str, b: str, tol: float = _SYMBOLIC_TOL) -> bool:
    if a == b:
        return True
    try:
        return equivalent(parse(a), parse(b), tol)
    except ExprError:
        return False


def equations_equivalent(a: str, b: str, tol: float = _SYMBOLIC_TOL) -> bool:
    """Two 'lhs = rhs' strings describe the same residual (up to sign)."""
    if a == b:
        return True
    try:
        la, ra = a.split("=")
        lb, rb = b.split("=")
        return exprs_equivalent(f"({la}) - ({ra})", f"({lb}) - ({rb})", tol) or exprs_equivalent(
            f"({la}) - ({ra})", f"-(({lb}) - ({rb}))", tol
        )
    except (ValueError, ExprError):
        return False


def roots_match(a: list[Any], b: list[Any], tol: float) -> bool:
    """Set equality of complex root lists under greedy bipartite pairing."""
    if len(a) != len(b):
        return False
    remaining = list(range(len(b)))
    for ra in a:
        ca = complex(ra.get("re", 0.0), ra.get("im", 0.0))
        hit = None
        for idx in remaining:
            cb = complex(b[idx].get("re", 0.0), b[idx].get("im", 0.0))
            if abs(ca - cb) <= tol * (1.0 + abs(ca)):
                hit = idx
                break
        if hit is None:
            return False
        remaining.remove(hit)
    return True


def payload_equivalent(got: Any, want: Any, equivalence: str, tol: float) -> bool:
    """Compare an artifact payload against an expected payload under a class."""
    if equivalence == "exact":
        return got == want
    if equivalence == "root-set":
        if isinstance(got, dict) and isinstance(want, dict):
            return roots_match(got.get("roots", []), want.get("roots", []), tol)
        return False
    return _structural(got, want, equivalence, tol)


def _structural(got: Any, want: Any, equivalence: str, tol: float) -> bool:
    if isinstance(want, dict):
        if not isinstance(got, dict) or set(got) != set(want):
            return False
        return all(_structural(got[k], want[k], equivalence, tol) for k in want)
    if isinstance(want, list):
        if not isinstance(got, list) or len(got) != len(want):
            return False
        return all(_structural(g, w, equivalence, tol) for g, w in zip(got, want))
    if isinstance(want, bool) or isinstance(got, bool):
        return got == want
    if isinstance(want, (int, float)) and isinstance(got, (int, float)):
        return numbers_close(float(got), float(want), tol)
    if isinstance(want, str) and isinstance(got, str):
        if equivalence == "symbolic":
            return exprs_equivalent(got, want, max(tol, _SYMBOLIC_TOL))
        return got == want
    return got == want


def inputs_match(tool_id: str, got: Any, want: Any, tol: float) -> bool:
    """Order- and representation-tolerant comparison of two tool inputs."""
    if got == want:
        return True
    if not isinstance(got, dict) or not isinstance(want, dict):
        return False
    if tool_id == "symbolic_diff":
        return got.get("wrt") == want.get("wrt") and exprs_equivalent(
            str(got.get("expr")), str(want.get("expr"))
        )
    if tool_id == "integrate":
        if got.get("wrt") != want.get("wrt"):
            return False
        for bound in ("lower", "upper"):
            if (bound in got) != (bound in want):
                return False
            if bound in want and not numbers_close(float(got[bound]), float(want[bound]), tol):
                return False
        return exprs_equivalent(str(got.get("expr")), str(want.get("expr")))
    if tool_id == "solve_equation":
        return got.get("wrt") == want.get("wrt") and equations_equivalent(
            str(got.get("equation")), str(want.get("equation"))
        )
    if tool_id == "algebra_solver":
        if sorted(got.get("unknowns", [])) != sorted(want.get("unknowns", [])):
            return False
        system_got = list(got.get("system", []))
        system_want = list(want.get("system", []))
        if len(system_got) != len(system_want):
            return False
        remaining = list(system_want)
        for eq in system_got:
            hit = next((w for w in remaining if equations_equivalent(str(eq), str(w))), None)
            if hit is None:
                return False
            remaining.remove(hit)
        return True
    if tool_id == "numeric_evaluator":
        if set(got.get("bindings", {})) != set(want.get("bindings", {})):
            return False
        for name, want_value in want.get("bindings", {}).items():
            if not _binding_close(got["bindings"][name], want_value, tol):
                return False
        return exprs_equivalent(str(got.get("expr")), str(want.get("expr")))
    if tool_id == "matrix_determinant":
        return _structural(got.get("matrix"), want.get("matrix"), "numeric", tol)
    if tool_id == "linear_regression":
        return _structural(got.get("points"), want.get("points"), "numeric", tol)
    return got == want


def _binding_close(got: Any, want: Any, tol: float) -> bool:
    def split(entry: Any) -> tuple[float, list[int]] | None:
        if isinstance(entry, bool):
            return None
        if isinstance(entry, (int, float)):
            return float(entry), [0] * 7
        if isinstance(entry, dict) and "value" in entry:
            return float(entry["value"]), list(entry.get("unit", [0] * 7))
        return None

    a, b = split(got), split(want)
    if a is None or b is None:
        return got == want
    return numbers_close(a[0], b[0], tol) and a[1] == b[1]
