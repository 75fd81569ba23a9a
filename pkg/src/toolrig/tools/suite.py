"""The deterministic computational tools agents may call.

Registered tool ids: symbolic_diff, solve_equation, integrate,
matrix_determinant, linear_regression, numeric_evaluator, algebra_solver.
Each returns a ToolResult carrying the echoed input, the output payload, and
diagnostics (status, conditioning, residuals, convergence, provenance notes).
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from ..expr import (
    DomainError,
    EvalError,
    Expr,
    Func,
    NumericValue,
    ParseError,
    Pow,
    Rational,
    Sum,
    Symbol,
    UnboundSymbolError,
    UnitMismatchError,
    add,
    differentiate,
    div,
    evaluate,
    expand,
    free_symbols,
    mul,
    neg,
    num,
    parse,
    print_expr,
    sub,
    sym,
)
from ..expr.nodes import ONE, split_term
from . import linalg, polynomial
from .base import (
    CONTRADICTION,
    DEGENERATE_DESIGN,
    DOMAIN_ERROR,
    IDENTITY_EQUATION,
    ILL_CONDITIONED,
    INVALID_INPUT,
    NEAR_DEGENERATE_ROOT,
    PARSE_ERROR,
    SINGULAR_SYSTEM,
    UNBOUND_SYMBOL,
    UNIT_MISMATCH,
    UNSUPPORTED_FORM,
    Diagnostics,
    Tool,
    ToolFailure,
)

MAX_MATRIX_SIZE = 64


def _parse_or_fail(text: str, field: str = "expr") -> Expr:
    try:
        return parse(text)
    except ParseError as err:
        raise ToolFailure(PARSE_ERROR, f"{field}: {err}") from None


def _eval_or_fail(e: Expr, bindings) -> NumericValue:
    try:
        return evaluate(e, bindings)
    except UnboundSymbolError as err:
        raise ToolFailure(UNBOUND_SYMBOL, str(err)) from None
    except UnitMismatchError as err:
        raise ToolFailure(UNIT_MISMATCH, str(err)) from None
    except DomainError as err:
        raise ToolFailure(DOMAIN_ERROR, str(err)) from None


class SymbolicDiffTool(Tool):
    tool_id = "symbolic_diff"
    description = "Symbolic derivative of an infix expression with respect to one symbol."
    input_schema = {
        "fields": {
            "expr": {"type": "string", "required": True},
            "wrt": {"type": "string", "required": True},
        }
    }
    output_schema = {"fields": {"expr": {"type": "string"}}}

    def _execute(self, payload):
        e = _parse_or_fail(payload["expr"])
        d = differentiate(e, payload["wrt"])
        return {"expr": print_expr(d)}, Diagnostics(type="symbolic", simplified=True)


class SolveEquationTool(Tool):
    tool_id = "solve_equation"
    description = "All complex roots of a univariate polynomial equation (degree <= 8)."
    input_schema = {
        "fields": {
            "equation": {"type": "string", "required": True},
            "wrt": {"type": "string", "required": True},
        }
    }
    output_schema = {"fields": {"roots": {"type": "array"}}}

    def _execute(self, payload):
        return _solve_polynomial_equation(payload["equation"], payload["wrt"])


def _solve_polynomial_equation(equation: str, wrt: str):
    if equation.count("=") != 1:
        raise ToolFailure(INVALID_INPUT, "equation must contain exactly one '='")
    lhs_text, rhs_text = equation.split("=")
    lhs = _parse_or_fail(lhs_text, "lhs")
    rhs = _parse_or_fail(rhs_text, "rhs")
    residual = sub(lhs, rhs)
    coeffs = polynomial.polynomial_coefficients(residual, wrt)
    if coeffs is None:
        raise ToolFailure(
            UNSUPPORTED_FORM,
            f"equation is not a polynomial in {wrt!r} with numeric coefficients",
        )
    degree = len(coeffs) - 1
    if degree > polynomial.MAX_DEGREE:
        raise ToolFailure(UNSUPPORTED_FORM, f"degree {degree} exceeds cap {polynomial.MAX_DEGREE}")
    if degree == 0:
        if coeffs[0] == 0.0:
            raise ToolFailure(IDENTITY_EQUATION, "equation holds for every value")
        raise ToolFailure(CONTRADICTION, "constant equation with no solution")

    roots = polynomial.find_roots(coeffs)
    residual_norm = polynomial.max_residual(coeffs, roots)
    notes = []
    status = "ok"
    if polynomial.near_degenerate_pairs(roots):
        notes.append(NEAR_DEGENERATE_ROOT)
        status = "warning"
    diag = Diagnostics(
        status=status,
        type="analytic" if degree <= 2 else "numeric",
        residual_norm=residual_norm,
        notes=tuple(notes),
    )
    return {"roots": polynomial.roots_to_wire(coeffs, roots)}, diag


class IntegrateTool(Tool):
    tool_id = "integrate"
    description = (
        "Symbolic antiderivative (polynomials and single-function patterns) or "
        "definite integral via the symbolic route / deterministic adaptive Simpson."
    )
    input_schema = {
        "fields": {
            "expr": {"type": "string", "required": True},
            "wrt": {"type": "string", "required": True},
            "lower": {"type": "number"},
            "upper": {"type": "number"},
        }
    }
    output_schema = {"fields": {"expr": {"type": "string"}, "value": {"type": "number"}}}

    def _execute(self, payload):
        e = _parse_or_fail(payload["expr"])
        wrt = payload["wrt"]
        has_lower = "lower" in payload
        has_upper = "upper" in payload
        if has_lower != has_upper:
            raise ToolFailure(INVALID_INPUT, "bounds must be given together")

        anti = _antiderivative(e, wrt)
        if not has_lower:
            if anti is None:
                raise ToolFailure(UNSUPPORTED_FORM, "no symbolic antiderivative for this form")
            return {"expr": print_expr(anti)}, Diagnostics(type="symbolic", simplified=True)

        lower, upper = float(payload["lower"]), float(payload["upper"])
        if anti is not None:
            try:
                value = evaluate(anti, {wrt: upper}).value - evaluate(anti, {wrt: lower}).value
            except EvalError as err:
                raise ToolFailure(DOMAIN_ERROR, f"antiderivative undefined at a bound: {err}") from None
            diag = Diagnostics(
                type="symbolic",
                simplified=True,
                convergence={"iterations": 0, "achieved_tolerance": 0.0},
            )
            return {"value": value}, diag

        def integrand(t: float) -> float:
            return evaluate(e, {wrt: t}).value

        from .quadrature import adaptive_simpson

        try:
            result = adaptive_simpson(integrand, lower, upper, tol=1e-10, max_depth=40)
        except EvalError as err:
            raise ToolFailure(DOMAIN_ERROR, f"integrand domain error inside bounds: {err}") from None
        status = "warning" if result.depth_exhausted else "ok"
        diag = Diagnostics(
            status=status,
            type="numeric",
            convergence={
                "iterations": result.evaluations,
                "achieved_tolerance": result.error_estimate,
            },
            notes=("NO_CONVERGENCE",) if result.depth_exhausted else (),
        )
        return {"value": result.value}, diag


def _antiderivative(e: Expr, var: str) -> Expr | None:
    """Table-driven antiderivative: power rule, exp/sin/cos with linear argument, 1/x.

    Works on the expanded form, so factored polynomials integrate symbolically.
    """
    e = expand(e)
    terms = e.terms if isinstance(e, Sum) else (e,)
    parts: list[Expr] = []
    for term in terms:
        coeff, core = split_term(term)
        core_anti = _anti_core(core, var)
        if core_anti is None:
            return None
        parts.append(mul(num(coeff), core_anti))
    return add(*parts)


def _anti_core(core: Expr, var: str) -> Expr | None:
    x = sym(var)
    if core == ONE:
        return x
    if isinstance(core, Symbol):
        if core.name == var:
            return mul(num(Fraction(1, 2)), Pow(x, num(2)))
        return mul(core, x)  # constant symbol times var
    if var not in free_symbols(core):
        return mul(core, x)
    if isinstance(core, Pow) and core.base == x:
        p = core.exp
        if isinstance(p, Rational):
            if p.value == -1:
                return Func("ln", Func("abs", x))
            return div(Pow(x, num(p.value + 1)), num(p.value + 1))
        return None
    if isinstance(core, Func) and core.name in ("exp", "sin", "cos"):
        linear = polynomial.polynomial_coefficients(core.arg, var)
        if linear is None or len(linear) != 2 or linear[1] == 0.0:
            return None
        slope = linear[1]
        if core.name == "exp":
            return div(core, num(slope))
        if core.name == "sin":
            return div(neg(Func("cos", core.arg)), num(slope))
        return div(Func("sin", core.arg), num(slope))
    return None


class MatrixDeterminantTool(Tool):
    tool_id = "matrix_determinant"
    description = "Determinant via LU with partial pivoting, with a 1-norm condition estimate."
    input_schema = {"fields": {"matrix": {"type": "array", "required": True}}}
    output_schema = {"fields": {"value": {"type": "number"}}}

    def _execute(self, payload):
        matrix = payload["matrix"]
        if not matrix or not all(isinstance(row, list) for row in matrix):
            raise ToolFailure(INVALID_INPUT, "matrix must be a non-empty array of rows")
        n = len(matrix)
        if any(len(row) != n for row in matrix):
            raise ToolFailure(INVALID_INPUT, "matrix must be square")
        if n > MAX_MATRIX_SIZE:
            raise ToolFailure(INVALID_INPUT, f"matrix size {n} exceeds cap {MAX_MATRIX_SIZE}")
        a = np.array(matrix, dtype=float)

        try:
            lu, piv, sign = linalg.lu_factor(a)
        except linalg.SingularMatrixError:
            diag = Diagnostics(status="warning", type="numeric", notes=(ILL_CONDITIONED,))
            return {"value": 0.0}, diag
        det = float(sign)
        for k in range(n):
            det *= float(lu[k, k])
        cond = linalg.condition_estimate_1norm(a, lu, piv)
        status, notes = "ok", ()
        if cond > linalg.ILL_CONDITIONED_THRESHOLD:
            status, notes = "warning", (ILL_CONDITIONED,)
        diag = Diagnostics(status=status, type="numeric", condition_number=cond, notes=notes)
        return {"value": det}, diag


class LinearRegressionTool(Tool):
    tool_id = "linear_regression"
    description = "Least-squares line fit via an orthogonal decomposition (never normal equations)."
    input_schema = {"fields": {"points": {"type": "array", "required": True}}}
    output_schema = {"fields": {"slope": {"type": "number"}, "intercept": {"type": "number"}}}

    def _execute(self, payload):
        points = payload["points"]
        if len(points) < 2:
            raise ToolFailure(INVALID_INPUT, "need at least two points")
        try:
            xs = np.array([float(p[0]) for p in points])
            ys = np.array([float(p[1]) for p in points])
        except (TypeError, ValueError, IndexError):
            raise ToolFailure(INVALID_INPUT, "points must be [x, y] pairs") from None
        if np.ptp(xs) == 0.0:
            raise ToolFailure(DEGENERATE_DESIGN, "all x values are identical")

        design = np.column_stack([xs, np.ones_like(xs)])
        solution, *_ = np.linalg.lstsq(design, ys, rcond=None)
        slope, intercept = float(solution[0]), float(solution[1])
        residuals = ys - (slope * xs + intercept)
        ss_res = float(residuals @ residuals)
        ss_tot = float(((ys - ys.mean()) ** 2).sum())
        if ss_tot == 0.0:
            r_squared = 1.0 if ss_res <= 1e-24 else 0.0
        else:
            r_squared = 1.0 - ss_res / ss_tot
        diag = Diagnostics(type="numeric", residual_norm=float(np.sqrt(ss_res)), r_squared=r_squared)
        return {"slope": slope, "intercept": intercept}, diag


class NumericEvaluatorTool(Tool):
    tool_id = "numeric_evaluator"
    description = "Double-precision evaluation with SI unit propagation."
    input_schema = {
        "fields": {
            "expr": {"type": "string", "required": True},
            "bindings": {"type": "object", "required": True},
        }
    }
    output_schema = {"fields": {"value": {"type": "number"}, "unit": {"type": "array"}}}

    def _execute(self, payload):
        e = _parse_or_fail(payload["expr"])
        bindings = {}
        for name, entry in payload["bindings"].items():
            if isinstance(entry, dict):
                if "value" not in entry:
                    raise ToolFailure(INVALID_INPUT, f"binding {name!r} needs a 'value'")
                unit = entry.get("unit", list(np.zeros(7, dtype=int)))
                try:
                    bindings[name] = NumericValue(float(entry["value"]), tuple(unit))
                except (UnitMismatchError, TypeError, ValueError) as err:
                    raise ToolFailure(INVALID_INPUT, f"binding {name!r}: {err}") from None
            elif isinstance(entry, (int, float)) and not isinstance(entry, bool):
                bindings[name] = NumericValue(float(entry))
            else:
                raise ToolFailure(INVALID_INPUT, f"binding {name!r} must be a number or value/unit object")
        result = _eval_or_fail(e, bindings)
        return {"value": result.value, "unit": list(result.unit)}, Diagnostics(type="numeric")


class AlgebraSolverTool(Tool):
    tool_id = "algebra_solver"
    description = (
        "Single univariate polynomial equations (delegates to the root solver) "
        "or square linear systems via partial-pivot elimination."
    )
    input_schema = {
        "fields": {
            "system": {"type": "array", "required": True},
            "unknowns": {"type": "array", "required": True},
        }
    }
    output_schema = {"fields": {"roots": {"type": "array"}, "solution": {"type": "object"}}}

    def _execute(self, payload):
        system = payload["system"]
        unknowns = payload["unknowns"]
        if not system or not unknowns:
            raise ToolFailure(INVALID_INPUT, "system and unknowns must be non-empty")
        if not all(isinstance(s, str) for s in system) or not all(isinstance(u, str) for u in unknowns):
            raise ToolFailure(INVALID_INPUT, "system entries and unknowns must be strings")
        if len(set(unknowns)) != len(unknowns):
            raise ToolFailure(INVALID_INPUT, "duplicate unknowns")

        if len(system) == 1 and len(unknowns) == 1:
            return _solve_polynomial_equation(system[0], unknowns[0])
        return self._solve_linear(system, unknowns)

    def _solve_linear(self, system, unknowns):
        if len(system) != len(unknowns):
            raise ToolFailure(UNSUPPORTED_FORM, "linear route needs as many equations as unknowns")
        n = len(unknowns)
        a = np.zeros((n, n))
        b = np.zeros(n)
        zeros = {u: 0.0 for u in unknowns}
        for i, equation in enumerate(system):
            if equation.count("=") != 1:
                raise ToolFailure(INVALID_INPUT, f"equation {i}: must contain exactly one '='")
            lhs_text, rhs_text = equation.split("=")
            residual = sub(_parse_or_fail(lhs_text, "lhs"), _parse_or_fail(rhs_text, "rhs"))
            for j, u in enumerate(unknowns):
                coeff = differentiate(residual, u)
                if free_symbols(coeff):
                    raise ToolFailure(UNSUPPORTED_FORM, f"equation {i} is not linear in {u!r}")
                a[i, j] = evaluate(coeff, {}).value
            try:
                b[i] = -evaluate(residual, zeros).value
            except EvalError as err:
                raise ToolFailure(UNSUPPORTED_FORM, f"equation {i}: {err}") from None

        try:
            lu, piv, _sign = linalg.lu_factor(a)
        except linalg.SingularMatrixError:
            raise ToolFailure(SINGULAR_SYSTEM, "coefficient matrix is singular") from None
        x = linalg.lu_solve(lu, piv, b)
        cond = linalg.condition_estimate_1norm(a, lu, piv)
        residual_norm = float(np.max(np.abs(a @ x - b))) if n else 0.0
        status, notes = "ok", ()
        if cond > linalg.ILL_CONDITIONED_THRESHOLD:
            status, notes = "warning", (ILL_CONDITIONED,)
        diag = Diagnostics(
            status=status,
            type="numeric",
            condition_number=cond,
            residual_norm=residual_norm,
            notes=notes,
        )
        solution = {u: float(x[j]) for j, u in enumerate(unknowns)}
        return {"solution": solution}, diag
