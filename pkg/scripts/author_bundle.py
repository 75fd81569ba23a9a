#!/usr/bin/env python3
"""Regenerate the bundled problem templates (src/toolrig/bank/bundled/).

The bundle spans calculus (extrema, definite integrals), mechanics
(kinematics and kinetic energy), linear algebra (determinants and linear
systems), and data fitting, with canonical-trace lengths from 3 to 10 steps.
Two templates carry adversarial regimes (near-degenerate stationary points,
ill-conditioned matrices) behind explicit flags.

Run from the repository root:  python3 scripts/author_bundle.py
"""

import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
BUNDLE_DIR = ROOT / "src" / "toolrig" / "bank" / "bundled"

UNIT_NONE = [0, 0, 0, 0, 0, 0, 0]
UNIT_KG = [0, 1, 0, 0, 0, 0, 0]
UNIT_M_PER_S = [1, 0, -1, 0, 0, 0, 0]
UNIT_MOMENTUM = [1, 1, -1, 0, 0, 0, 0]


def step(step_id, tool_id, input_payload, **kw):
    out = {
        "step_id": step_id,
        "tool_id": tool_id,
        "input": input_payload,
        "equivalence": kw.pop("equivalence", "numeric"),
        "tolerance": kw.pop("tolerance", 1e-6),
        "depends_on": kw.pop("depends_on", []),
        "commutative": kw.pop("commutative", False),
        "deliverable_for": kw.pop("deliverable_for", []),
        "deliverable_field": kw.pop("deliverable_field", "output"),
        "checkpoint": kw.pop("checkpoint", None),
    }
    assert not kw, f"unused step fields: {kw}"
    return out


def ref(pattern, tolerance=1e-6, source=None):
    return {"pattern": pattern, "tolerance": tolerance, "source": source}


def kinetic_bindings(t_binding):
    return {"A": "${A}", "B": "${B}", "C": "${C}", "m": "${m}", "t": t_binding}


MAVEN_0001 = {
    "id": "MAVEN-0001",
    "domain": "mechanics",
    "adversarial": False,
    "statement": (
        "A particle of mass m = ${m} kg moves along x(t) = A*t^3 - B*t^2 + C*t "
        "with A = ${A}, B = ${B}, C = ${C} (SI units). Find the time t* of the "
        "local maximum of kinetic energy and the kinetic energy K(t*) at that time."
    ),
    "sub_questions": [
        "1. Compute v(t)=dx/dt.",
        "2. Compute K(t)=0.5 m v(t)^2.",
        "3. Solve dK/dt = 0 for t (identify candidate times).",
        "4. Verify second derivative condition for maxima.",
        "5. Evaluate K(t) at the verified time(s).",
    ],
    "required_tools": ["symbolic_diff", "algebra_solver", "numeric_evaluator"],
    "parameters": {
        "A": {"type": "int", "min": 1, "max": 3},
        "B": {"type": "int", "min": 2, "max": 5},
        "C": {"type": "int", "min": 1, "max": 4},
        "m": {"type": "int", "min": 1, "max": 4},
    },
    "constraints": [{"expr": "B^2 - 3*A*C", "op": ">=", "value": 1}],
    "derived": {
        "t_star": "B/(3*A)",
        "v_star": "C - B^2/(3*A)",
        "K_star": "0.5*m*(C - B^2/(3*A))^2",
    },
    "canonical_trace": [
        step(
            "step-01",
            "symbolic_diff",
            {"expr": "A*t^3 - B*t^2 + C*t", "wrt": "t"},
            equivalence="symbolic",
            tolerance=1e-9,
            deliverable_for=[1],
        ),
        step(
            "step-02",
            "symbolic_diff",
            {"expr": "0.5*m*(3*A*t^2 - 2*B*t + C)^2", "wrt": "t"},
            equivalence="symbolic",
            tolerance=1e-9,
            depends_on=["step-01"],
            deliverable_for=[2],
            deliverable_field="input.expr",
        ),
        step(
            "step-03",
            "algebra_solver",
            {
                "system": ["${m}*(3*${A}*t^2 - 2*${B}*t + ${C})*(6*${A}*t - 2*${B}) = 0"],
                "unknowns": ["t"],
            },
            equivalence="root-set",
            depends_on=["step-02"],
            deliverable_for=[3],
        ),
        step(
            "step-04",
            "symbolic_diff",
            {"expr": "${step-02.output.expr}", "wrt": "t"},
            equivalence="symbolic",
            tolerance=1e-9,
            depends_on=["step-02"],
        ),
        step(
            "step-05",
            "numeric_evaluator",
            {"expr": "${step-04.output.expr}", "bindings": kinetic_bindings("${t_star}")},
            depends_on=["step-03", "step-04"],
            checkpoint={
                "kind": "second-derivative-sign",
                "sign": -1,
                "sub_question": 4,
                "candidate_from": "t",
            },
        ),
        step(
            "step-06",
            "numeric_evaluator",
            {
                "expr": "0.5*m*(3*A*t^2 - 2*B*t + C)^2",
                "bindings": kinetic_bindings("${t_star}"),
            },
            depends_on=["step-05"],
            deliverable_for=[5],
        ),
    ],
    "reference_solution": {
        "t_star": ref("B/(3*A)"),
        "K_star": ref("0.5*m*(C - B^2/(3*A))^2", source={"step": "step-06", "path": "output.value"}),
    },
    "failure_modes": [
        "selecting a v(t)=0 kinetic-energy minimum instead of the interior maximum",
        "sign error when reading the second-derivative check",
        "solving only v'(t)=0 and dropping the other stationary candidates",
    ],
    "expects_diagnostics": {},
    "min_steps": 6,
}


MAVEN_0002 = {
    "id": "MAVEN-0002",
    "domain": "calculus",
    "adversarial": False,
    "statement": (
        "A cart's speed is v(t) = a*t^2 + b*t + c with a = ${a}, b = ${b}, c = ${c} "
        "(SI units). Compute the displacement over [0, ${T}] and verify it against "
        "the antiderivative."
    ),
    "sub_questions": [
        "1. Find the antiderivative F(t) of v(t).",
        "2. Compute the displacement as the definite integral of v(t) from 0 to ${T}.",
        "3. Verify that F(T) - F(0) reproduces the definite integral.",
    ],
    "required_tools": ["integrate", "numeric_evaluator"],
    "parameters": {
        "a": {"type": "int", "min": 1, "max": 5},
        "b": {"type": "int", "min": 1, "max": 5},
        "c": {"type": "int", "min": 1, "max": 5},
        "T": {"type": "int", "min": 2, "max": 4},
    },
    "constraints": [],
    "derived": {"displacement": "a*T^3/3 + b*T^2/2 + c*T"},
    "canonical_trace": [
        step(
            "step-01",
            "integrate",
            {"expr": "${a}*t^2 + ${b}*t + ${c}", "wrt": "t"},
            equivalence="symbolic",
            tolerance=1e-9,
            commutative=True,
            deliverable_for=[1],
        ),
        step(
            "step-02",
            "integrate",
            {"expr": "${a}*t^2 + ${b}*t + ${c}", "wrt": "t", "lower": 0, "upper": "${T}"},
            commutative=True,
            deliverable_for=[2],
        ),
        step(
            "step-03",
            "numeric_evaluator",
            {
                "expr": "abs((${step-01.output.expr}) - (${step-02.output.value}))",
                "bindings": {"t": "${T}"},
            },
            depends_on=["step-01", "step-02"],
            checkpoint={"kind": "residual-below", "threshold": 1e-4, "sub_question": 3},
        ),
    ],
    "reference_solution": {
        "displacement": ref(
            "a*T^3/3 + b*T^2/2 + c*T", source={"step": "step-02", "path": "output.value"}
        )
    },
    "failure_modes": [
        "adding a spurious integration constant that breaks the F(T)-F(0) check",
        "swapping the integration bounds",
    ],
    "expects_diagnostics": {},
    "min_steps": 3,
}


MAVEN_0003 = {
    "id": "MAVEN-0003",
    "domain": "calculus",
    "adversarial": False,
    "statement": (
        "Consider f(x) = x^3 - p*x^2 + q*x + r with p = ${p}, q = ${q}, r = ${r}. "
        "Locate the local minimum of f and report its position and value."
    ),
    "sub_questions": [
        "1. Compute f'(x).",
        "2. Solve f'(x) = 0 for the critical points.",
        "3. Compute f''(x).",
        "4. Verify the second-derivative sign at the local-minimum candidate.",
        "5. Evaluate f at the verified minimum.",
    ],
    "required_tools": ["symbolic_diff", "solve_equation", "numeric_evaluator"],
    "parameters": {
        "p": {"type": "int", "min": 2, "max": 5},
        "q": {"type": "int", "min": 1, "max": 4},
        "r": {"type": "int", "min": 0, "max": 5},
    },
    "constraints": [{"expr": "p^2 - 3*q", "op": ">=", "value": 1}],
    "derived": {
        "x_min": "(p + sqrt(p^2 - 3*q))/3",
        "f_min": (
            "((p + sqrt(p^2 - 3*q))/3)^3 - p*((p + sqrt(p^2 - 3*q))/3)^2 "
            "+ q*(p + sqrt(p^2 - 3*q))/3 + r"
        ),
    },
    "canonical_trace": [
        step(
            "step-01",
            "symbolic_diff",
            {"expr": "x^3 - ${p}*x^2 + ${q}*x + ${r}", "wrt": "x"},
            equivalence="symbolic",
            tolerance=1e-9,
            deliverable_for=[1],
        ),
        step(
            "step-02",
            "solve_equation",
            {"equation": "${step-01.output.expr} = 0", "wrt": "x"},
            equivalence="root-set",
            depends_on=["step-01"],
            deliverable_for=[2],
        ),
        step(
            "step-03",
            "symbolic_diff",
            {"expr": "${step-01.output.expr}", "wrt": "x"},
            equivalence="symbolic",
            tolerance=1e-9,
            depends_on=["step-01"],
            deliverable_for=[3],
        ),
        step(
            "step-04",
            "numeric_evaluator",
            {"expr": "${step-03.output.expr}", "bindings": {"x": "${x_min}"}},
            depends_on=["step-02", "step-03"],
            checkpoint={
                "kind": "second-derivative-sign",
                "sign": 1,
                "sub_question": 4,
                "candidate_from": "x",
            },
        ),
        step(
            "step-05",
            "numeric_evaluator",
            {"expr": "x^3 - ${p}*x^2 + ${q}*x + ${r}", "bindings": {"x": "${x_min}"}},
            depends_on=["step-04"],
            deliverable_for=[5],
        ),
    ],
    "reference_solution": {
        "x_min": ref("(p + sqrt(p^2 - 3*q))/3"),
        "f_min": ref(
            "((p + sqrt(p^2 - 3*q))/3)^3 - p*((p + sqrt(p^2 - 3*q))/3)^2 "
            "+ q*(p + sqrt(p^2 - 3*q))/3 + r",
            source={"step": "step-05", "path": "output.value"},
        ),
    },
    "failure_modes": [
        "reporting the local maximum branch (p - sqrt(p^2 - 3q))/3",
        "sign slip while expanding f'(x)",
    ],
    "expects_diagnostics": {},
    "min_steps": 5,
}


MAVEN_0004 = {
    "id": "MAVEN-0004",
    "domain": "mechanics",
    "adversarial": False,
    "statement": (
        "A braking cart follows x(t) = ${x0} + ${v0}*t - ${k}*t^2 (SI units). "
        "Find when the cart stops and where it is at that moment."
    ),
    "sub_questions": [
        "1. Compute the velocity v(t).",
        "2. Solve v(t) = 0 for the stopping time.",
        "3. Verify the stopping condition by evaluating v at that time.",
        "4. Evaluate the position at the stopping time.",
    ],
    "required_tools": ["symbolic_diff", "solve_equation", "numeric_evaluator"],
    "parameters": {
        "x0": {"type": "int", "min": 0, "max": 10},
        "v0": {"type": "int", "min": 4, "max": 9},
        "k": {"type": "int", "min": 1, "max": 3},
    },
    "constraints": [],
    "derived": {"t_stop": "v0/(2*k)", "x_stop": "x0 + v0^2/(4*k)"},
    "canonical_trace": [
        step(
            "step-01",
            "symbolic_diff",
            {"expr": "${x0} + ${v0}*t - ${k}*t^2", "wrt": "t"},
            equivalence="symbolic",
            tolerance=1e-9,
            deliverable_for=[1],
        ),
        step(
            "step-02",
            "solve_equation",
            {"equation": "${step-01.output.expr} = 0", "wrt": "t"},
            equivalence="root-set",
            depends_on=["step-01"],
            deliverable_for=[2],
        ),
        step(
            "step-03",
            "numeric_evaluator",
            {"expr": "abs(${step-01.output.expr})", "bindings": {"t": "${t_stop}"}},
            depends_on=["step-02"],
            checkpoint={
                "kind": "residual-below",
                "threshold": 1e-4,
                "sub_question": 3,
                "candidate_from": "t",
            },
        ),
        step(
            "step-04",
            "numeric_evaluator",
            {"expr": "${x0} + ${v0}*t - ${k}*t^2", "bindings": {"t": "${t_stop}"}},
            depends_on=["step-03"],
            deliverable_for=[4],
        ),
    ],
    "reference_solution": {
        "t_stop": ref("v0/(2*k)"),
        "x_stop": ref("x0 + v0^2/(4*k)", source={"step": "step-04", "path": "output.value"}),
    },
    "failure_modes": ["differentiating x0 away incorrectly", "using x(t)=0 instead of v(t)=0"],
    "expects_diagnostics": {},
    "min_steps": 4,
}


MAVEN_0005 = {
    "id": "MAVEN-0005",
    "domain": "linear-algebra",
    "adversarial": False,
    "statement": (
        "A coupled measurement chain has matrix M = [[${a}, 1, 0], [1, ${b}, 1], "
        "[0, 1, ${c}]] and observation vector d = [${d1}, ${d2}, ${d3}]. Report "
        "det(M), solve M*x = d, and summarize the solution."
    ),
    "sub_questions": [
        "1. Compute det(M).",
        "2. Verify the system is comfortably non-singular.",
        "3. Solve M*x = d for x = (x1, x2, x3).",
        "4. Verify the residual of the first equation.",
        "5. Report the component sum x1 + x2 + x3.",
    ],
    "required_tools": ["matrix_determinant", "algebra_solver", "numeric_evaluator"],
    "parameters": {
        "a": {"type": "int", "min": 2, "max": 6},
        "b": {"type": "int", "min": 2, "max": 6},
        "c": {"type": "int", "min": 2, "max": 6},
        "d1": {"type": "int", "min": 1, "max": 5},
        "d2": {"type": "int", "min": 1, "max": 5},
        "d3": {"type": "int", "min": 1, "max": 5},
    },
    "constraints": [{"expr": "a*b*c - a - c", "op": ">=", "value": 2}],
    "derived": {
        "detM": "a*b*c - a - c",
        "x1": "(d1*(b*c - 1) - (d2*c - d3))/(a*b*c - a - c)",
        "x2": "(a*(d2*c - d3) - d1*c)/(a*b*c - a - c)",
        "x3": "(a*(b*d3 - d2) - d3 + d1)/(a*b*c - a - c)",
        "comp_sum": "x1 + x2 + x3",
    },
    "canonical_trace": [
        step(
            "step-01",
            "matrix_determinant",
            {"matrix": [["${a}", 1, 0], [1, "${b}", 1], [0, 1, "${c}"]]},
            commutative=True,
            deliverable_for=[1],
        ),
        step(
            "step-02",
            "numeric_evaluator",
            {"expr": "1/abs(${step-01.output.value})", "bindings": {}},
            depends_on=["step-01"],
            checkpoint={"kind": "residual-below", "threshold": 0.5, "sub_question": 2},
        ),
        step(
            "step-03",
            "algebra_solver",
            {
                "system": [
                    "${a}*x1 + x2 = ${d1}",
                    "x1 + ${b}*x2 + x3 = ${d2}",
                    "x2 + ${c}*x3 = ${d3}",
                ],
                "unknowns": ["x1", "x2", "x3"],
            },
            commutative=True,
            deliverable_for=[3],
        ),
        step(
            "step-04",
            "numeric_evaluator",
            {
                "expr": "abs(${a}*x1 + x2 - ${d1})",
                "bindings": {"x1": "${x1}", "x2": "${x2}"},
            },
            depends_on=["step-03"],
            checkpoint={"kind": "residual-below", "threshold": 1e-4, "sub_question": 4},
        ),
        step(
            "step-05",
            "numeric_evaluator",
            {
                "expr": "x1 + x2 + x3",
                "bindings": {"x1": "${x1}", "x2": "${x2}", "x3": "${x3}"},
            },
            depends_on=["step-03"],
            deliverable_for=[5],
        ),
    ],
    "reference_solution": {
        "determinant": ref("a*b*c - a - c", source={"step": "step-01", "path": "output.value"}),
        "component_sum": ref("comp_sum", source={"step": "step-05", "path": "output.value"}),
    },
    "failure_modes": [
        "expanding the determinant along the wrong row and dropping the zero pattern",
        "solving M^T instead of M",
    ],
    "expects_diagnostics": {},
    "min_steps": 5,
}


MAVEN_0006 = {
    "id": "MAVEN-0006",
    "domain": "data-fitting",
    "adversarial": False,
    "statement": (
        "Sensor calibration points (0, ${y0}), (1, ${y1}), (2, ${y2}), (3, ${y3}) "
        "lie on a line. Fit y = slope*x + intercept and predict the reading at "
        "x = ${xq}."
    ),
    "sub_questions": [
        "1. Fit the least-squares line through the calibration points.",
        "2. Verify the fit reproduces the first calibration point.",
        "3. Predict the reading at the query position.",
    ],
    "required_tools": ["linear_regression", "numeric_evaluator"],
    "parameters": {
        "s": {"type": "int", "min": 1, "max": 4},
        "b0": {"type": "int", "min": 0, "max": 5},
        "xq": {"type": "int", "min": 5, "max": 9},
    },
    "constraints": [],
    "derived": {
        "y0": "b0",
        "y1": "s + b0",
        "y2": "2*s + b0",
        "y3": "3*s + b0",
        "prediction": "s*xq + b0",
    },
    "canonical_trace": [
        step(
            "step-01",
            "linear_regression",
            {"points": [[0, "${y0}"], [1, "${y1}"], [2, "${y2}"], [3, "${y3}"]]},
            deliverable_for=[1],
        ),
        step(
            "step-02",
            "numeric_evaluator",
            {
                "expr": "abs(slope*0 + intercept - ${y0})",
                "bindings": {
                    "slope": "${step-01.output.slope}",
                    "intercept": "${step-01.output.intercept}",
                },
            },
            depends_on=["step-01"],
            checkpoint={"kind": "residual-below", "threshold": 1e-4, "sub_question": 2},
        ),
        step(
            "step-03",
            "numeric_evaluator",
            {
                "expr": "slope*${xq} + intercept",
                "bindings": {
                    "slope": "${step-01.output.slope}",
                    "intercept": "${step-01.output.intercept}",
                },
            },
            depends_on=["step-01"],
            deliverable_for=[3],
        ),
    ],
    "reference_solution": {
        "slope": ref("s"),
        "intercept": ref("b0"),
        "prediction": ref("s*xq + b0", source={"step": "step-03", "path": "output.value"}),
    },
    "failure_modes": ["swapping slope and intercept", "averaging instead of fitting"],
    "expects_diagnostics": {},
    "min_steps": 3,
}


MAVEN_0007 = {
    "id": "MAVEN-0007",
    "domain": "mechanics",
    "adversarial": False,
    "statement": (
        "A force field along a track is F(x) = ${a}*x^2 + ${b} (SI units). A block "
        "of mass m = ${m} kg starts at rest at x = 0 and is pushed to x = ${L}. "
        "Analyze the work done, the matched-force point, and the exit speed."
    ),
    "sub_questions": [
        "1. Find the antiderivative W(x) of F(x).",
        "2. Compute the work over [0, ${L}].",
        "3. Verify W(L) - W(0) matches the definite integral.",
        "4. Compute the average force W/L.",
        "5. Solve F(x) = F_avg for the matched-force positions.",
        "6. Verify F at the positive matched point reproduces the average force.",
        "7. Compute the final speed from the work-energy theorem.",
        "8. Report the final momentum.",
    ],
    "required_tools": ["integrate", "solve_equation", "numeric_evaluator"],
    "parameters": {
        "a": {"type": "int", "min": 1, "max": 3},
        "b": {"type": "int", "min": 1, "max": 4},
        "m": {"type": "int", "min": 1, "max": 4},
        "L": {"type": "int", "min": 2, "max": 3},
    },
    "constraints": [],
    "derived": {
        "W": "a*L^3/3 + b*L",
        "F_avg": "a*L^2/3 + b",
        "x_m": "L/sqrt(3)",
        "v_f": "sqrt(2*(a*L^3/3 + b*L)/m)",
        "p_f": "m*sqrt(2*(a*L^3/3 + b*L)/m)",
    },
    "canonical_trace": [
        step(
            "step-01",
            "integrate",
            {"expr": "${a}*x^2 + ${b}", "wrt": "x"},
            equivalence="symbolic",
            tolerance=1e-9,
            commutative=True,
            deliverable_for=[1],
        ),
        step(
            "step-02",
            "integrate",
            {"expr": "${a}*x^2 + ${b}", "wrt": "x", "lower": 0, "upper": "${L}"},
            commutative=True,
            deliverable_for=[2],
        ),
        step(
            "step-03",
            "numeric_evaluator",
            {
                "expr": "abs((${step-01.output.expr}) - (${step-02.output.value}))",
                "bindings": {"x": "${L}"},
            },
            depends_on=["step-01", "step-02"],
            checkpoint={"kind": "residual-below", "threshold": 1e-4, "sub_question": 3},
        ),
        step(
            "step-04",
            "numeric_evaluator",
            {"expr": "(${step-02.output.value})/${L}", "bindings": {}},
            depends_on=["step-02"],
            deliverable_for=[4],
        ),
        step(
            "step-05",
            "solve_equation",
            {"equation": "${a}*x^2 + ${b} = ${F_avg}", "wrt": "x"},
            equivalence="root-set",
            depends_on=["step-04"],
            deliverable_for=[5],
        ),
        step(
            "step-06",
            "numeric_evaluator",
            {"expr": "abs(${a}*x^2 + ${b} - (${F_avg}))", "bindings": {"x": "${x_m}"}},
            depends_on=["step-05"],
            checkpoint={
                "kind": "residual-below",
                "threshold": 1e-4,
                "sub_question": 6,
                "candidate_from": "x",
            },
        ),
        step(
            "step-07",
            "numeric_evaluator",
            {"expr": "sqrt(2*(${W})/${m})", "bindings": {}},
            depends_on=["step-02"],
            deliverable_for=[7],
        ),
        step(
            "step-08",
            "numeric_evaluator",
            {"expr": "${m}*v", "bindings": {"v": "${v_f}"}},
            depends_on=["step-07"],
            deliverable_for=[8],
        ),
    ],
    "reference_solution": {
        "work": ref("a*L^3/3 + b*L", source={"step": "step-02", "path": "output.value"}),
        "x_match": ref("L/sqrt(3)"),
        "final_speed": ref(
            "sqrt(2*(a*L^3/3 + b*L)/m)", source={"step": "step-07", "path": "output.value"}
        ),
        "momentum": ref(
            "m*sqrt(2*(a*L^3/3 + b*L)/m)", source={"step": "step-08", "path": "output.value"}
        ),
    },
    "failure_modes": [
        "discarding the negative matched-force root without noting it",
        "using W = F(L)*L instead of the integral",
    ],
    "expects_diagnostics": {},
    "min_steps": 8,
}


MAVEN_0008 = {
    "id": "MAVEN-0008",
    "domain": "mechanics",
    "adversarial": True,
    "statement": (
        "An adversarially calibrated servo cart has velocity "
        "v(t) = (t - ${r})^2*(t - ${s}) + ${d} (SI units); the tiny offset d makes "
        "the cart almost stop twice near t = ${r}. Resolve the stopping structure, "
        "the degeneracy indicators, and the end-of-run state."
    ),
    "sub_questions": [
        "1. Compute the acceleration a(t) = dv/dt.",
        "2. Solve v(t) = 0 for the stopping candidates and note the solver diagnostics.",
        "3. Verify the near-stop residual: evaluate |v| at t = ${r}.",
        "4. Verify the acceleration also vanishes at the near-stop center.",
        "5. Compute the displacement over [${r}, ${s}] by integrating v.",
        "6. Evaluate the residual speed at t = ${s}.",
        "7. Report the mean-speed index |displacement|/(s - r).",
    ],
    "required_tools": ["symbolic_diff", "algebra_solver", "integrate", "numeric_evaluator"],
    "parameters": {
        "r": {"type": "int", "min": 1, "max": 2},
        "s": {"type": "int", "min": 4, "max": 6},
        "sep": {"type": "float", "min": 3e-07, "max": 6e-07},
    },
    "constraints": [],
    "derived": {
        "d": "sep^2*(s - r)",
        "displacement": "-(s - r)^4/12 + sep^2*(s - r)^2",
        "v_end": "sep^2*(s - r)",
        "speed_index": "abs(-(s - r)^4/12 + sep^2*(s - r)^2)/(s - r)",
    },
    "canonical_trace": [
        step(
            "step-01",
            "symbolic_diff",
            {"expr": "(t - ${r})^2*(t - ${s}) + ${d}", "wrt": "t"},
            equivalence="symbolic",
            tolerance=1e-9,
            commutative=True,
            deliverable_for=[1],
        ),
        step(
            "step-02",
            "algebra_solver",
            {"system": ["(t - ${r})^2*(t - ${s}) + ${d} = 0"], "unknowns": ["t"]},
            equivalence="root-set",
            tolerance=1e-3,
            commutative=True,
            deliverable_for=[2],
        ),
        step(
            "step-03",
            "numeric_evaluator",
            {"expr": "abs((t - ${r})^2*(t - ${s}) + ${d})", "bindings": {"t": "${r}"}},
            depends_on=["step-02"],
            checkpoint={
                "kind": "residual-below",
                "threshold": 1e-4,
                "sub_question": 3,
                "candidate_from": "t",
            },
        ),
        step(
            "step-04",
            "numeric_evaluator",
            {"expr": "abs(${step-01.output.expr})", "bindings": {"t": "${r}"}},
            depends_on=["step-01", "step-02"],
            checkpoint={
                "kind": "residual-below",
                "threshold": 1e-4,
                "sub_question": 4,
                "candidate_from": "t",
            },
        ),
        step(
            "step-05",
            "integrate",
            {
                "expr": "(t - ${r})^2*(t - ${s}) + ${d}",
                "wrt": "t",
                "lower": "${r}",
                "upper": "${s}",
            },
            depends_on=["step-02"],
            deliverable_for=[5],
        ),
        step(
            "step-06",
            "numeric_evaluator",
            {"expr": "(t - ${r})^2*(t - ${s}) + ${d}", "bindings": {"t": "${s}"}},
            depends_on=["step-02"],
            deliverable_for=[6],
        ),
        step(
            "step-07",
            "numeric_evaluator",
            {"expr": "abs(dx)/(${s} - ${r})", "bindings": {"dx": "${displacement}"}},
            depends_on=["step-05"],
            deliverable_for=[7],
        ),
    ],
    "reference_solution": {
        "near_stop_center": ref("r"),
        "displacement": ref(
            "-(s - r)^4/12 + sep^2*(s - r)^2",
            source={"step": "step-05", "path": "output.value"},
        ),
        "v_end": ref("sep^2*(s - r)", source={"step": "step-06", "path": "output.value"}),
        "speed_index": ref("speed_index", source={"step": "step-07", "path": "output.value"}),
    },
    "failure_modes": [
        "treating the near-double stop as a single clean stop",
        "trusting root multiplicity reported at machine-noise separations",
        "division by the near-zero residual speed while normalizing",
    ],
    "expects_diagnostics": {"step-02": ["NEAR_DEGENERATE_ROOT"]},
    "min_steps": 7,
}


MAVEN_0009 = {
    "id": "MAVEN-0009",
    "domain": "linear-algebra",
    "adversarial": True,
    "statement": (
        "A near-dependent measurement matrix N = [[1, 1, 1], [1, 1 + ${eps}, 1], "
        "[1, 1, 1 + ${k}]] is suspected of ill-conditioning. Quantify it, then "
        "solve the independent calibration system P*x = d with "
        "P = [[${p}, 1], [1, ${q}]] and d = [${d1}, ${d2}]."
    ),
    "sub_questions": [
        "1. Compute det(N) and note the conditioning diagnostics.",
        "2. Verify det(N) is consistent with near-dependence.",
        "3. Compute det(P).",
        "4. Solve P*x = d.",
        "5. Verify the residual of the first calibration equation.",
        "6. Report x1*x2.",
    ],
    "required_tools": ["matrix_determinant", "algebra_solver", "numeric_evaluator"],
    "parameters": {
        "eps": {"type": "float", "min": 1e-14, "max": 1e-13},
        "k": {"type": "int", "min": 1, "max": 3},
        "p": {"type": "int", "min": 2, "max": 5},
        "q": {"type": "int", "min": 2, "max": 5},
        "d1": {"type": "int", "min": 1, "max": 4},
        "d2": {"type": "int", "min": 1, "max": 4},
    },
    "constraints": [{"expr": "p*q - 1", "op": ">=", "value": 3}],
    "derived": {
        "one_eps": "1 + eps",
        "one_k": "1 + k",
        "detN": "eps*k",
        "detP": "p*q - 1",
        "x1": "(d1*q - d2)/(p*q - 1)",
        "x2": "(p*d2 - d1)/(p*q - 1)",
        "xprod": "x1*x2",
    },
    "canonical_trace": [
        step(
            "step-01",
            "matrix_determinant",
            {"matrix": [[1, 1, 1], [1, "${one_eps}", 1], [1, 1, "${one_k}"]]},
            commutative=True,
            deliverable_for=[1],
        ),
        step(
            "step-02",
            "numeric_evaluator",
            {"expr": "abs(${step-01.output.value})", "bindings": {}},
            depends_on=["step-01"],
            checkpoint={"kind": "residual-below", "threshold": 1e-6, "sub_question": 2},
        ),
        step(
            "step-03",
            "matrix_determinant",
            {"matrix": [["${p}", 1], [1, "${q}"]]},
            commutative=True,
            deliverable_for=[3],
        ),
        step(
            "step-04",
            "algebra_solver",
            {
                "system": ["${p}*x1 + x2 = ${d1}", "x1 + ${q}*x2 = ${d2}"],
                "unknowns": ["x1", "x2"],
            },
            depends_on=["step-03"],
            deliverable_for=[4],
        ),
        step(
            "step-05",
            "numeric_evaluator",
            {
                "expr": "abs(${p}*x1 + x2 - ${d1})",
                "bindings": {"x1": "${x1}", "x2": "${x2}"},
            },
            depends_on=["step-04"],
            checkpoint={"kind": "residual-below", "threshold": 1e-4, "sub_question": 5},
        ),
        step(
            "step-06",
            "numeric_evaluator",
            {"expr": "x1*x2", "bindings": {"x1": "${x1}", "x2": "${x2}"}},
            depends_on=["step-04"],
            deliverable_for=[6],
        ),
    ],
    "reference_solution": {
        "near_det": ref("eps*k", source={"step": "step-01", "path": "output.value"}),
        "cal_det": ref("p*q - 1", source={"step": "step-03", "path": "output.value"}),
        "xprod": ref("xprod", source={"step": "step-06", "path": "output.value"}),
    },
    "failure_modes": [
        "reading the near-zero determinant as exactly zero and aborting",
        "ignoring the ILL_CONDITIONED warning on N and reusing it for the solve",
    ],
    "expects_diagnostics": {"step-01": ["ILL_CONDITIONED"]},
    "min_steps": 6,
}


MAVEN_0010 = {
    "id": "MAVEN-0010",
    "domain": "linear-algebra",
    "adversarial": False,
    "statement": (
        "A three-branch flow network satisfies x + y + z = ${T}, x - y = ${dxy}, "
        "y - z = ${dyz}. Branch costs follow c(u) = ${pc}*u^2 + ${qc}*u. Solve the "
        "flows, audit every balance equation, then analyze the cost structure."
    ),
    "sub_questions": [
        "1. Solve the balance system for (x, y, z).",
        "2. Verify the residual of the conservation equation.",
        "3. Verify the residual of the first difference equation.",
        "4. Verify the residual of the second difference equation.",
        "5. Compute the total branch cost.",
        "6. Compute the marginal-cost expression c'(u).",
        "7. Evaluate the marginal cost at x.",
        "8. Evaluate the marginal cost at y.",
        "9. Report the cost index (total cost per unit of throughput).",
    ],
    "required_tools": ["algebra_solver", "numeric_evaluator", "symbolic_diff"],
    "parameters": {
        "T": {"type": "int", "min": 9, "max": 15},
        "dxy": {"type": "int", "min": -2, "max": 2},
        "dyz": {"type": "int", "min": -2, "max": 2},
        "pc": {"type": "int", "min": 1, "max": 3},
        "qc": {"type": "int", "min": 1, "max": 4},
    },
    "constraints": [
        {"expr": "(T - dxy + dyz)/3", "op": ">=", "value": 2},
        {"expr": "(T - dxy + dyz)/3 + dxy", "op": ">=", "value": 1},
        {"expr": "(T - dxy + dyz)/3 - dyz", "op": ">=", "value": 1},
    ],
    "derived": {
        "y_flow": "(T - dxy + dyz)/3",
        "x_flow": "(T - dxy + dyz)/3 + dxy",
        "z_flow": "(T - dxy + dyz)/3 - dyz",
        "total_cost": (
            "pc*(((T - dxy + dyz)/3 + dxy)^2 + ((T - dxy + dyz)/3)^2 + "
            "((T - dxy + dyz)/3 - dyz)^2) + qc*T"
        ),
        "marginal_x": "2*pc*((T - dxy + dyz)/3 + dxy) + qc",
        "marginal_y": "2*pc*(T - dxy + dyz)/3 + qc",
        "cost_index": (
            "(pc*(((T - dxy + dyz)/3 + dxy)^2 + ((T - dxy + dyz)/3)^2 + "
            "((T - dxy + dyz)/3 - dyz)^2) + qc*T)/T"
        ),
    },
    "canonical_trace": [
        step(
            "step-01",
            "algebra_solver",
            {
                "system": ["x + y + z = ${T}", "x - y = ${dxy}", "y - z = ${dyz}"],
                "unknowns": ["x", "y", "z"],
            },
            deliverable_for=[1],
        ),
        step(
            "step-02",
            "numeric_evaluator",
            {
                "expr": "abs(x + y + z - ${T})",
                "bindings": {"x": "${x_flow}", "y": "${y_flow}", "z": "${z_flow}"},
            },
            depends_on=["step-01"],
            commutative=True,
            checkpoint={"kind": "residual-below", "threshold": 1e-4, "sub_question": 2},
        ),
        step(
            "step-03",
            "numeric_evaluator",
            {
                "expr": "abs(x - y - (${dxy}))",
                "bindings": {"x": "${x_flow}", "y": "${y_flow}"},
            },
            depends_on=["step-01"],
            commutative=True,
            checkpoint={"kind": "residual-below", "threshold": 1e-4, "sub_question": 3},
        ),
        step(
            "step-04",
            "numeric_evaluator",
            {
                "expr": "abs(y - z - (${dyz}))",
                "bindings": {"y": "${y_flow}", "z": "${z_flow}"},
            },
            depends_on=["step-01"],
            commutative=True,
            checkpoint={"kind": "residual-below", "threshold": 1e-4, "sub_question": 4},
        ),
        step(
            "step-05",
            "numeric_evaluator",
            {
                "expr": "${pc}*(x^2 + y^2 + z^2) + ${qc}*(x + y + z)",
                "bindings": {"x": "${x_flow}", "y": "${y_flow}", "z": "${z_flow}"},
            },
            depends_on=["step-01"],
            deliverable_for=[5],
        ),
        step(
            "step-06",
            "symbolic_diff",
            {"expr": "${pc}*u^2 + ${qc}*u", "wrt": "u"},
            equivalence="symbolic",
            tolerance=1e-9,
            deliverable_for=[6],
        ),
        step(
            "step-07",
            "numeric_evaluator",
            {"expr": "${step-06.output.expr}", "bindings": {"u": "${x_flow}"}},
            depends_on=["step-06"],
            commutative=True,
            deliverable_for=[7],
        ),
        step(
            "step-08",
            "numeric_evaluator",
            {"expr": "${step-06.output.expr}", "bindings": {"u": "${y_flow}"}},
            depends_on=["step-06"],
            commutative=True,
            deliverable_for=[8],
        ),
        step(
            "step-09",
            "numeric_evaluator",
            {"expr": "c/${T}", "bindings": {"c": "${total_cost}"}},
            depends_on=["step-05"],
            deliverable_for=[9],
        ),
    ],
    "reference_solution": {
        "total_cost": ref("total_cost", source={"step": "step-05", "path": "output.value"}),
        "marginal_at_x": ref("marginal_x", source={"step": "step-07", "path": "output.value"}),
        "marginal_at_y": ref("marginal_y", source={"step": "step-08", "path": "output.value"}),
        "cost_index": ref("cost_index", source={"step": "step-09", "path": "output.value"}),
    },
    "failure_modes": [
        "sign confusion in the difference equations",
        "charging the marginal cost with the quadratic instead of its derivative",
    ],
    "expects_diagnostics": {},
    "min_steps": 9,
}


MAVEN_0011 = {
    "id": "MAVEN-0011",
    "domain": "data-fitting",
    "adversarial": False,
    "statement": (
        "Calibration readings at x = 0, 1, 2 are (0, ${y0}), (1, ${y1}), (2, ${y2}); "
        "they come from the quadratic g(x) = x^2 + ${u}*x + ${w}. Fit the best "
        "line, integrate it over [0, 2], find where it reaches the alarm level "
        "H = ${H}, and quantify the model gap there."
    ),
    "sub_questions": [
        "1. Fit the least-squares line to the three readings.",
        "2. Verify the fit residual at x = 0 stays within the linear-fit budget.",
        "3. Predict the linear reading at x = 3.",
        "4. Find the antiderivative of the fitted line.",
        "5. Integrate the fitted line over [0, 2].",
        "6. Verify the antiderivative reproduces the definite integral.",
        "7. Solve for where the fitted line reaches the alarm level H.",
        "8. Verify the crossing satisfies the line equation.",
        "9. Evaluate the quadratic model at the crossing.",
        "10. Report the model gap |g(x_cross) - H|.",
    ],
    "required_tools": ["linear_regression", "integrate", "solve_equation", "numeric_evaluator"],
    "parameters": {
        "u": {"type": "int", "min": 0, "max": 3},
        "w": {"type": "int", "min": 1, "max": 4},
        "H": {"type": "int", "min": 8, "max": 12},
    },
    "constraints": [{"expr": "(H - w + 1/3)/(u + 2)", "op": "<=", "value": 4}],
    "derived": {
        "y0": "w",
        "y1": "1 + u + w",
        "y2": "4 + 2*u + w",
        "slope": "u + 2",
        "intercept": "w - 1/3",
        "pred3": "3*(u + 2) + w - 1/3",
        "area": "2*(u + 2) + 2*(w - 1/3)",
        "x_cross": "(H - w + 1/3)/(u + 2)",
        "g_cross": "((H - w + 1/3)/(u + 2))^2 + u*(H - w + 1/3)/(u + 2) + w",
        "gap": "abs(((H - w + 1/3)/(u + 2))^2 + u*(H - w + 1/3)/(u + 2) + w - H)",
    },
    "canonical_trace": [
        step(
            "step-01",
            "linear_regression",
            {"points": [[0, "${y0}"], [1, "${y1}"], [2, "${y2}"]]},
            deliverable_for=[1],
        ),
        step(
            "step-02",
            "numeric_evaluator",
            {
                "expr": "abs(slope*0 + intercept - ${y0})",
                "bindings": {"slope": "${slope}", "intercept": "${intercept}"},
            },
            depends_on=["step-01"],
            checkpoint={"kind": "residual-below", "threshold": 1.0, "sub_question": 2},
        ),
        step(
            "step-03",
            "numeric_evaluator",
            {
                "expr": "slope*3 + intercept",
                "bindings": {"slope": "${slope}", "intercept": "${intercept}"},
            },
            depends_on=["step-01"],
            deliverable_for=[3],
        ),
        step(
            "step-04",
            "integrate",
            {"expr": "${slope}*x + ${intercept}", "wrt": "x"},
            equivalence="symbolic",
            tolerance=1e-9,
            depends_on=["step-01"],
            commutative=True,
            deliverable_for=[4],
        ),
        step(
            "step-05",
            "integrate",
            {"expr": "${slope}*x + ${intercept}", "wrt": "x", "lower": 0, "upper": 2},
            depends_on=["step-01"],
            commutative=True,
            deliverable_for=[5],
        ),
        step(
            "step-06",
            "numeric_evaluator",
            {
                "expr": "abs((${step-04.output.expr}) - (${step-05.output.value}))",
                "bindings": {"x": 2},
            },
            depends_on=["step-04", "step-05"],
            checkpoint={"kind": "residual-below", "threshold": 1e-4, "sub_question": 6},
        ),
        step(
            "step-07",
            "solve_equation",
            {"equation": "${slope}*x + ${intercept} = ${H}", "wrt": "x"},
            equivalence="root-set",
            depends_on=["step-01"],
            deliverable_for=[7],
        ),
        step(
            "step-08",
            "numeric_evaluator",
            {
                "expr": "abs(${slope}*x + ${intercept} - ${H})",
                "bindings": {"x": "${x_cross}"},
            },
            depends_on=["step-07"],
            checkpoint={
                "kind": "residual-below",
                "threshold": 1e-4,
                "sub_question": 8,
                "candidate_from": "x",
            },
        ),
        step(
            "step-09",
            "numeric_evaluator",
            {"expr": "x^2 + ${u}*x + ${w}", "bindings": {"x": "${x_cross}"}},
            depends_on=["step-08"],
            deliverable_for=[9],
        ),
        step(
            "step-10",
            "numeric_evaluator",
            {"expr": "abs(g - ${H})", "bindings": {"g": "${g_cross}"}},
            depends_on=["step-09"],
            deliverable_for=[10],
        ),
    ],
    "reference_solution": {
        "slope": ref("u + 2"),
        "intercept": ref("w - 1/3"),
        "prediction_at_3": ref("pred3", source={"step": "step-03", "path": "output.value"}),
        "area": ref("area", source={"step": "step-05", "path": "output.value"}),
        "x_cross": ref("x_cross"),
        "model_gap": ref("gap", source={"step": "step-10", "path": "output.value"}),
    },
    "failure_modes": [
        "fitting the quadratic exactly and ignoring the requested linear model",
        "reporting the crossing of the quadratic instead of the fitted line",
    ],
    "expects_diagnostics": {},
    "min_steps": 10,
}


MAVEN_0012 = {
    "id": "MAVEN-0012",
    "domain": "mechanics",
    "adversarial": False,
    "statement": (
        "A probe of mass m = ${m} kg travels at v = ${v} m/s. Compute its kinetic "
        "energy and momentum with full unit tracking."
    ),
    "sub_questions": [
        "1. Compute the kinetic energy 0.5*m*v^2 with units.",
        "2. Verify the energy/(m*v^2) ratio is dimensionless.",
        "3. Compute the momentum m*v with units.",
        "4. Verify p/m carries velocity units.",
    ],
    "required_tools": ["numeric_evaluator"],
    "parameters": {
        "m": {"type": "int", "min": 1, "max": 5},
        "v": {"type": "int", "min": 1, "max": 6},
    },
    "constraints": [],
    "derived": {"ke": "0.5*m*v^2", "mom": "m*v"},
    "canonical_trace": [
        step(
            "step-01",
            "numeric_evaluator",
            {
                "expr": "0.5*m*v^2",
                "bindings": {
                    "m": {"value": "${m}", "unit": UNIT_KG},
                    "v": {"value": "${v}", "unit": UNIT_M_PER_S},
                },
            },
            commutative=True,
            deliverable_for=[1],
        ),
        step(
            "step-02",
            "numeric_evaluator",
            {
                "expr": "(0.5*m*v^2)/(m*v^2)",
                "bindings": {
                    "m": {"value": "${m}", "unit": UNIT_KG},
                    "v": {"value": "${v}", "unit": UNIT_M_PER_S},
                },
            },
            depends_on=["step-01"],
            checkpoint={"kind": "units-match", "unit": UNIT_NONE, "sub_question": 2},
        ),
        step(
            "step-03",
            "numeric_evaluator",
            {
                "expr": "m*v",
                "bindings": {
                    "m": {"value": "${m}", "unit": UNIT_KG},
                    "v": {"value": "${v}", "unit": UNIT_M_PER_S},
                },
            },
            commutative=True,
            deliverable_for=[3],
        ),
        step(
            "step-04",
            "numeric_evaluator",
            {
                "expr": "p/m",
                "bindings": {
                    "p": {"value": "${mom}", "unit": UNIT_MOMENTUM},
                    "m": {"value": "${m}", "unit": UNIT_KG},
                },
            },
            depends_on=["step-03"],
            checkpoint={"kind": "units-match", "unit": UNIT_M_PER_S, "sub_question": 4},
        ),
    ],
    "reference_solution": {
        "kinetic_energy": ref("0.5*m*v^2", source={"step": "step-01", "path": "output.value"}),
        "momentum": ref("m*v", source={"step": "step-03", "path": "output.value"}),
    },
    "failure_modes": [
        "dropping the unit vector when rebinding intermediate values",
        "adding energy to momentum in a sanity check",
    ],
    "expects_diagnostics": {},
    "min_steps": 4,
}


TEMPLATES = [
    MAVEN_0001,
    MAVEN_0002,
    MAVEN_0003,
    MAVEN_0004,
    MAVEN_0005,
    MAVEN_0006,
    MAVEN_0007,
    MAVEN_0008,
    MAVEN_0009,
    MAVEN_0010,
    MAVEN_0011,
    MAVEN_0012,
]


def main() -> int:
    BUNDLE_DIR.mkdir(parents=True, exist_ok=True)
    for template in TEMPLATES:
        path = BUNDLE_DIR / f"{template['id']}.json"
        path.write_text(json.dumps(template, indent=2) + "\n")
        print(f"wrote {path.relative_to(ROOT)}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
