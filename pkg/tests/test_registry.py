"""Tool registry, descriptors, manifests, and diagnostics invariants."""

import json

import pytest

from toolrig.tools import (
    Diagnostics,
    ToolRegistry,
    UnknownToolError,
    default_registry,
    registry_from_manifest,
)

REQUIRED_TOOLS = {
    "symbolic_diff",
    "algebra_solver",
    "solve_equation",
    "integrate",
    "matrix_determinant",
    "linear_regression",
    "numeric_evaluator",
}


def test_default_registry_covers_required_tools():
    registry = default_registry()
    assert REQUIRED_TOOLS <= set(registry.tool_ids())
    for descriptor in registry.descriptors():
        assert descriptor.purity == "deterministic"
        assert descriptor.input_schema["fields"]
        assert descriptor.version == "1.0.0"


def test_unknown_tool_raises():
    with pytest.raises(UnknownToolError):
        default_registry().get("oracle_machine")


def test_duplicate_registration_rejected():
    registry = default_registry()
    with pytest.raises(ValueError):
        registry.register(registry.get("integrate"))


def test_manifest_round_trip(tmp_path):
    manifest = tmp_path / "registry.json"
    manifest.write_text(
        json.dumps(
            {
                "tools": [
                    {"tool_id": "symbolic_diff", "version": "1.0.0"},
                    {"tool_id": "numeric_evaluator"},
                    {"tool_id": "integrate", "enabled": False},
                ]
            }
        )
    )
    registry = registry_from_manifest(manifest)
    assert registry.tool_ids() == ["numeric_evaluator", "symbolic_diff"]


def test_manifest_version_mismatch(tmp_path):
    manifest = tmp_path / "registry.json"
    manifest.write_text(json.dumps({"tools": [{"tool_id": "integrate", "version": "9.9.9"}]}))
    with pytest.raises(ValueError):
        registry_from_manifest(manifest)


def test_manifest_unknown_tool(tmp_path):
    manifest = tmp_path / "registry.json"
    manifest.write_text(json.dumps({"tools": [{"tool_id": "clairvoyance"}]}))
    with pytest.raises(ValueError):
        registry_from_manifest(manifest)


def test_empty_registry_possible():
    assert ToolRegistry(tools=[]).tool_ids() == []


def test_diagnostics_invariants():
    with pytest.raises(ValueError):
        Diagnostics(status="ok", notes=("DOMAIN_ERROR",))
    with pytest.raises(ValueError):
        Diagnostics(condition_number=0.5)
    wire = Diagnostics(type="symbolic", simplified=True).to_wire()
    assert wire == {"type": "symbolic", "simplified": True}  # ok status stays implicit
    wire = Diagnostics(status="failed", notes=("DOMAIN_ERROR",), detail="ln of -1").to_wire()
    assert wire["status"] == "failed" and wire["notes"] == ["DOMAIN_ERROR"]


def test_every_tool_is_byte_deterministic():
    from toolrig.jsonutil import canonical_dumps

    payloads = {
        "symbolic_diff": {"expr": "A*t^3 - B*t^2 + C*t", "wrt": "t"},
        "solve_equation": {"equation": "t^3 - 6*t^2 + 11*t - 6 = 0", "wrt": "t"},
        "algebra_solver": {"system": ["x + y = 3", "x - y = 1"], "unknowns": ["x", "y"]},
        "integrate": {"expr": "x*sin(x)", "wrt": "x", "lower": 0, "upper": 2},
        "matrix_determinant": {"matrix": [[2.5, 1.0, 0.0], [1.0, 3.5, 1.0], [0.0, 1.0, 4.5]]},
        "linear_regression": {"points": [[0, 0.5], [1, 1.75], [2, 2.5], [3, 4.0]]},
        "numeric_evaluator": {"expr": "sqrt(x) + ln(x)", "bindings": {"x": 2.25}},
    }
    registry = default_registry()
    for tool_id, payload in payloads.items():
        first = canonical_dumps(registry.execute(tool_id, payload).to_wire())
        second = canonical_dumps(registry.execute(tool_id, payload).to_wire())
        assert first == second, tool_id


def test_roots_carry_per_root_residuals():
    result = default_registry().execute(
        "solve_equation", {"equation": "t^2 - 5*t + 6 = 0", "wrt": "t"}
    )
    for root in result.output["roots"]:
        assert set(root) == {"re", "im", "residual"}
        assert root["residual"] <= result.diagnostics.residual_norm + 1e-15
