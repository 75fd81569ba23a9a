"""Tool plumbing: descriptors, diagnostics, results, and schema validation.

Every tool is a pure function of its input payload.  A (tool_id, version,
input) triple fully determines the output, and any behavioral change to a
tool requires a version bump.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

# Machine-readable note codes.  The *_ERROR-style codes are error-class: a
# result whose status is "ok" must not carry any of them.
PARSE_ERROR = "PARSE_ERROR"
INVALID_INPUT = "INVALID_INPUT"
UNSUPPORTED_FORM = "UNSUPPORTED_FORM"
DOMAIN_ERROR = "DOMAIN_ERROR"
UNIT_MISMATCH = "UNIT_MISMATCH"
UNBOUND_SYMBOL = "UNBOUND_SYMBOL"
CONTRADICTION = "CONTRADICTION"
IDENTITY_EQUATION = "IDENTITY_EQUATION"
SINGULAR_SYSTEM = "SINGULAR_SYSTEM"
DEGENERATE_DESIGN = "DEGENERATE_DESIGN"
NO_CONVERGENCE = "NO_CONVERGENCE"
ILL_CONDITIONED = "ILL_CONDITIONED"
NEAR_DEGENERATE_ROOT = "NEAR_DEGENERATE_ROOT"

ERROR_NOTES = frozenset(
    {
        PARSE_ERROR,
        INVALID_INPUT,
        UNSUPPORTED_FORM,
        DOMAIN_ERROR,
        UNIT_MISMATCH,
        UNBOUND_SYMBOL,
        CONTRADICTION,
        IDENTITY_EQUATION,
        SINGULAR_SYSTEM,
        DEGENERATE_DESIGN,
    }
)


class ToolFailure(Exception):
    """Raised inside a tool to signal a failed result with a note code."""

    def __init__(self, note: str, detail: str):
        super().__init__(detail)
        self.note = note
        self.detail = detail


@dataclass(frozen=True)
class Diagnostics:
    """Solver status flags, conditioning, convergence, and provenance notes."""

    status: str = "ok"  # ok | warning | failed
    type: str | None = None  # symbolic | analytic | numeric
    condition_number: float | None = None
    residual_norm: float | None = None
    convergence: dict[str, Any] | None = None
    simplified: bool | None = None
    r_squared: float | None = None
    notes: tuple[str, ...] = ()
    detail: str | None = None

    def __post_init__(self):
        if self.status == "ok" and any(n in ERROR_NOTES for n in self.notes):
            raise ValueError("status=ok results cannot carry error-class notes")
        if self.condition_number is not None and self.condition_number < 1.0:
            raise ValueError("condition numbers are >= 1")

    def to_wire(self) -> dict[str, Any]:
        # status "ok" is implied on the wire; optional fields appear only when set
        out: dict[str, Any] = {}
        if self.status != "ok":
            out["status"] = self.status
        if self.type is not None:
            out["type"] = self.type
        if self.simplified is not None:
            out["simplified"] = self.simplified
        if self.condition_number is not None:
            out["condition_number"] = self.condition_number
        if self.residual_norm is not None:
            out["residual_norm"] = self.residual_norm
        if self.convergence is not None:
            out["convergence"] = self.convergence
        if self.r_squared is not None:
            out["r_squared"] = self.r_squared
        if self.notes:
            out["notes"] = list(self.notes)
        if self.detail is not None:
            out["detail"] = self.detail
        return out


@dataclass(frozen=True)
class ToolResult:
    tool_id: str
    version: str
    input: Any
    output: dict[str, Any]
    diagnostics: Diagnostics

    @property
    def ok(self) -> bool:
        return self.diagnostics.status != "failed"

    def to_wire(self) -> dict[str, Any]:
        return {
            "tool_id": self.tool_id,
            "version": self.version,
            "input": self.input,
            "output": self.output,
            "diagnostics": self.diagnostics.to_wire(),
        }


@dataclass(frozen=True)
class ToolDescriptor:
    tool_id: str
    version: str
    input_schema: dict[str, Any]
    output_schema: dict[str, Any]
    description: str
    purity: str = "deterministic"

    def to_wire(self) -> dict[str, Any]:
        return {
            "tool_id": self.tool_id,
            "version": self.version,
            "input_schema": self.input_schema,
            "output_schema": self.output_schema,
            "description": self.description,
            "purity": self.purity,
        }


_TYPE_CHECKS = {
    "string": lambda v: isinstance(v, str),
    "number": lambda v: isinstance(v, (int, float)) and not isinstance(v, bool),
    "boolean": lambda v: isinstance(v, bool),
    "object": lambda v: isinstance(v, dict),
    "array": lambda v: isinstance(v, list),
}


def validate_payload(schema: dict[str, Any], payload: Any) -> str | None:
    """Check a payload against a field-map schema; returns an error string or None."""
    if not isinstance(payload, dict):
        return "input payload must be a JSON object"
    fields = schema.get("fields", {})
    for name, spec in fields.items():
        if name not in payload:
            if spec.get("required", False):
                return f"missing required field {name!r}"
            continue
        check = _TYPE_CHECKS.get(spec.get("type", "object"))
        if check is not None and not check(payload[name]):
            return f"field {name!r} must be of type {spec.get('type')}"
    extra = set(payload) - set(fields)
    if extra:
        return f"unknown fields: {sorted(extra)}"
    return None


class Tool:
    """Base class: subclasses set metadata and implement ``_execute``."""

    tool_id: str = ""
    version: str = "1.0.0"
    input_schema: dict[str, Any] = {}
    output_schema: dict[str, Any] = {}
    description: str = ""

    def descriptor(self) -> ToolDescriptor:
        return ToolDescriptor(
            tool_id=self.tool_id,
            version=self.version,
            input_schema=self.input_schema,
            output_schema=self.output_schema,
            description=self.description,
        )

    def run(self, payload: Any) -> ToolResult:
        """Execute on ``payload``; failures come back as failed results, not raises."""
        problem = validate_payload(self.input_schema, payload)
        if problem is not None:
            return self._failed(payload, INVALID_INPUT, problem)
        try:
            output, diagnostics = self._execute(payload)
        except ToolFailure as failure:
            return self._failed(payload, failure.note, failure.detail)
        return ToolResult(self.tool_id, self.version, payload, output, diagnostics)

    def _failed(self, payload: Any, note: str, detail: str) -> ToolResult:
        diag = Diagnostics(status="failed", notes=(note,), detail=detail)
        return ToolResult(self.tool_id, self.version, payload, {}, diag)

    def _execute(self, payload: dict[str, Any]) -> tuple[dict[str, Any], Diagnostics]:
        raise NotImplementedError
