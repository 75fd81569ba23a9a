#!/usr/bin/env python3
# Exercise each registered tool and inspect the diagnostics that ride along
# with every result: status flags, residuals, condition estimates, notes.

import json

from toolrig.tools import default_registry

registry = default_registry()


def show(tool_id, payload):
    result = registry.execute(tool_id, payload)
    print(f"\n== {tool_id} {json.dumps(payload)[:96]}")
    print("   output     :", json.dumps(result.output))
    print("   diagnostics:", json.dumps(result.diagnostics.to_wire()))


show("symbolic_diff", {"expr": "A*t^3 - B*t^2 + C*t", "wrt": "t"})

show("solve_equation", {"equation": "t^2 - 5*t + 6 = 0", "wrt": "t"})
show("solve_equation", {"equation": "t^2 + 1 = 0", "wrt": "t"})  # complex pair, ordered

# near-degenerate roots carry a warning
show("solve_equation", {"equation": "(t - 1)*(t - 1.0000001) = 0", "wrt": "t"})

show("integrate", {"expr": "3*t^2", "wrt": "t", "lower": 0, "upper": 2})
show("integrate", {"expr": "cos(x)", "wrt": "x"})
show("integrate", {"expr": "x*sin(x)", "wrt": "x", "lower": 0, "upper": 2})  # Simpson path

show("matrix_determinant", {"matrix": [[1, 2], [3, 4]]})
show("matrix_determinant", {"matrix": [[1, 1], [1, 1 + 1e-14]]})  # ILL_CONDITIONED

show("linear_regression", {"points": [[0, 1], [1, 3], [2, 5]]})

show(
    "numeric_evaluator",
    {
        "expr": "0.5*m*v^2",
        "bindings": {
            "m": {"value": 2, "unit": [0, 1, 0, 0, 0, 0, 0]},
            "v": {"value": -1, "unit": [1, 0, -1, 0, 0, 0, 0]},
        },
    },
)

show("algebra_solver", {"system": ["x + y = 3", "x - y = 1"], "unknowns": ["x", "y"]})
show("algebra_solver", {"system": ["x + y = 1", "2*x + 2*y = 2"], "unknowns": ["x", "y"]})
