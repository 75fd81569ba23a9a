"""matrix_determinant, linear_regression, numeric_evaluator."""

import random

from helpers import cofactor_determinant
from toolrig.tools import default_registry


def run(tool_id, payload):
    return default_registry().execute(tool_id, payload)


def test_identity_determinant():
    result = run("matrix_determinant", {"matrix": [[1, 0, 0], [0, 1, 0], [0, 0, 1]]})
    assert result.output["value"] == 1.0
    assert result.diagnostics.condition_number >= 1.0


def test_two_by_two_against_cofactor_oracle():
    m = [[1.0, 2.0], [3.0, 4.0]]
    result = run("matrix_determinant", {"matrix": m})
    assert abs(result.output["value"] - cofactor_determinant(m)) < 1e-14
    assert abs(result.output["value"] + 2.0) < 1e-14


def test_near_singular_flags_ill_conditioned():
    m = [[1.0, 1.0], [1.0, 1.0 + 1e-14]]
    result = run("matrix_determinant", {"matrix": m})
    assert result.diagnostics.status == "warning"
    assert "ILL_CONDITIONED" in result.diagnostics.notes
    assert result.diagnostics.condition_number > 1e12
    assert abs(result.output["value"] - cofactor_determinant(m)) < 1e-16


def test_non_square_rejected():
    result = run("matrix_determinant", {"matrix": [[1, 2, 3], [4, 5, 6]]})
    assert not result.ok


def test_determinant_matches_cofactor_seeded():
    # 200 seeded matrices with n <= 4: LU matches cofactor expansion to 1e-10
    rng = random.Random(20260810)
    for _ in range(200):
        n = rng.randint(1, 4)
        m = [[rng.uniform(-3, 3) for _ in range(n)] for _ in range(n)]
        got = run("matrix_determinant", {"matrix": m}).output["value"]
        want = cofactor_determinant(m)
        assert abs(got - want) <= 1e-10 * max(1.0, abs(want))


def test_exact_fit_regression():
    result = run("linear_regression", {"points": [[0, 1], [1, 3], [2, 5]]})
    assert abs(result.output["slope"] - 2.0) < 1e-12
    assert abs(result.output["intercept"] - 1.0) < 1e-12
    assert result.diagnostics.residual_norm < 1e-12
    assert abs(result.diagnostics.r_squared - 1.0) < 1e-12


def test_two_point_interpolation():
    result = run("linear_regression", {"points": [[0, 0], [1, 1]]})
    assert abs(result.output["slope"] - 1.0) < 1e-12
    assert abs(result.output["intercept"]) < 1e-12


def test_regression_against_grid_minimization():
    # brute-force grid confirms (slope 0, intercept 1/3) minimizes squared error
    points = [[0.0, 0.0], [1.0, 1.0], [2.0, 0.0]]
    result = run("linear_regression", {"points": points})

    def sse(m, c):
        return sum((y - (m * x + c)) ** 2 for x, y in points)

    best = min(
        ((m / 100.0, c / 100.0) for m in range(-100, 101) for c in range(-100, 101)),
        key=lambda mc: sse(*mc),
    )
    assert abs(result.output["slope"] - best[0]) <= 0.01
    assert abs(result.output["intercept"] - best[1]) <= 0.01
    assert abs(result.output["slope"]) < 1e-12
    assert abs(result.output["intercept"] - 1.0 / 3.0) < 1e-12


def test_regression_optimality_under_perturbation():
    rng = random.Random(3)
    points = [[x, rng.uniform(-2, 2)] for x in range(6)]
    result = run("linear_regression", {"points": points})
    slope, intercept = result.output["slope"], result.output["intercept"]

    def sse(m, c):
        return sum((y - (m * x + c)) ** 2 for x, y in points)

    base = sse(slope, intercept)
    for dm in (-1e-3, 0.0, 1e-3):
        for dc in (-1e-3, 0.0, 1e-3):
            assert sse(slope + dm, intercept + dc) >= base - 1e-15


def test_degenerate_design():
    result = run("linear_regression", {"points": [[2, 0], [2, 1], [2, 4]]})
    assert not result.ok
    assert "DEGENERATE_DESIGN" in result.diagnostics.notes


def test_numeric_evaluator_kinetic_energy():
    result = run(
        "numeric_evaluator",
        {
            "expr": "0.5*m*v^2",
            "bindings": {
                "m": {"value": 2, "unit": [0, 1, 0, 0, 0, 0, 0]},
                "v": {"value": -1, "unit": [1, 0, -1, 0, 0, 0, 0]},
            },
        },
    )
    assert result.output == {"value": 1.0, "unit": [2, 1, -2, 0, 0, 0, 0]}


def test_numeric_evaluator_plain_number_binding():
    result = run("numeric_evaluator", {"expr": "x", "bindings": {"x": 7}})
    assert result.output == {"value": 7.0, "unit": [0, 0, 0, 0, 0, 0, 0]}


def test_numeric_evaluator_domain_error():
    result = run("numeric_evaluator", {"expr": "sqrt(x)", "bindings": {"x": -1}})
    assert not result.ok
    assert "DOMAIN_ERROR" in result.diagnostics.notes


def test_numeric_evaluator_unbound():
    result = run("numeric_evaluator", {"expr": "x + y", "bindings": {"x": 1}})
    assert not result.ok
    assert "UNBOUND_SYMBOL" in result.diagnostics.notes


def test_schema_rejects_extra_fields():
    result = run("numeric_evaluator", {"expr": "x", "bindings": {"x": 1}, "mode": "fast"})
    assert not result.ok
    assert "INVALID_INPUT" in result.diagnostics.notes
