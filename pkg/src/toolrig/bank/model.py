"""Problem templates and instances.

A template is parameterized: parameter specs plus constraints, derived
quantities, a canonical trace whose inputs carry ``${name}`` placeholders,
verification checkpoints, and a reference solution.  Instantiation samples
parameters with a seeded PRNG, concretizes the trace by actually running the
tools, and freezes the expected outputs.
"""

from __future__ import annotations

import copy
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

CHECKPOINT_KINDS = ("units-match", "residual-below", "second-derivative-sign")
EQUIVALENCE_CLASSES = ("symbolic", "numeric", "root-set", "exact")
DEFAULT_TOLERANCE = 1e-6


class BankError(Exception):
    """Schema or invariant violation in a template/instance file."""


@dataclass(frozen=True)
class Checkpoint:
    kind: str
    sub_question: int
    threshold: float | None = None  # residual-below
    sign: int | None = None  # second-derivative-sign: +1 or -1
    unit: list[int] | None = None  # units-match
    candidate_from: str | None = None  # binding key naming the candidate under test

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {"kind": self.kind, "sub_question": self.sub_question}
        if self.threshold is not None:
            out["threshold"] = self.threshold
        if self.sign is not None:
            out["sign"] = self.sign
        if self.unit is not None:
            out["unit"] = self.unit
        if self.candidate_from is not None:
            out["candidate_from"] = self.candidate_from
        return out

    @staticmethod
    def from_json(data: dict[str, Any]) -> "Checkpoint":
        kind = data.get("kind")
        if kind not in CHECKPOINT_KINDS:
            raise BankError(f"unknown checkpoint kind {kind!r}")
        if "sub_question" not in data:
            raise BankError("checkpoint needs a sub_question index")
        return Checkpoint(
            kind=kind,
            sub_question=int(data["sub_question"]),
            threshold=data.get("threshold"),
            sign=data.get("sign"),
            unit=data.get("unit"),
            candidate_from=data.get("candidate_from"),
        )


@dataclass(frozen=True)
class TraceStep:
    step_id: str
    tool_id: str
    input: Any  # pattern (template) or concrete payload (instance)
    equivalence: str = "numeric"
    tolerance: float = DEFAULT_TOLERANCE
    depends_on: tuple[str, ...] = ()
    commutative: bool = False
    deliverable_for: tuple[int, ...] = ()
    deliverable_field: str = "output"
    checkpoint: Checkpoint | None = None
    expected_output: dict[str, Any] | None = None  # set on instances
    expected_notes: tuple[str, ...] = ()

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "step_id": self.step_id,
            "tool_id": self.tool_id,
            "input": self.input,
            "equivalence": self.equivalence,
            "tolerance": self.tolerance,
            "depends_on": list(self.depends_on),
            "commutative": self.commutative,
            "deliverable_for": list(self.deliverable_for),
            "deliverable_field": self.deliverable_field,
            "checkpoint": self.checkpoint.to_json() if self.checkpoint else None,
        }
        if self.expected_output is not None:
            out["expected_output"] = self.expected_output
        if self.expected_notes:
            out["expected_notes"] = list(self.expected_notes)
        return out

    @staticmethod
    def from_json(data: dict[str, Any]) -> "TraceStep":
        for key in ("step_id", "tool_id", "input"):
            if key not in data:
                raise BankError(f"trace step missing {key!r}")
        equivalence = data.get("equivalence", "numeric")
        if equivalence not in EQUIVALENCE_CLASSES:
            raise BankError(f"unknown equivalence class {equivalence!r}")
        checkpoint = data.get("checkpoint")
        return TraceStep(
            step_id=data["step_id"],
            tool_id=data["tool_id"],
            input=data["input"],
            equivalence=equivalence,
            tolerance=float(data.get("tolerance", DEFAULT_TOLERANCE)),
            depends_on=tuple(data.get("depends_on", [])),
            commutative=bool(data.get("commutative", False)),
            deliverable_for=tuple(int(i) for i in data.get("deliverable_for", [])),
            deliverable_field=data.get("deliverable_field", "output"),
            checkpoint=Checkpoint.from_json(checkpoint) if checkpoint else None,
            expected_output=data.get("expected_output"),
            expected_notes=tuple(data.get("expected_notes", [])),
        )


@dataclass(frozen=True)
class ReferenceEntry:
    pattern: str  # expression over parameters and derived values
    tolerance: float = DEFAULT_TOLERANCE
    source: dict[str, str] | None = None  # {"step": ..., "path": ...}

    def to_json(self) -> dict[str, Any]:
        return {"pattern": self.pattern, "tolerance": self.tolerance, "source": self.source}

    @staticmethod
    def from_json(data: dict[str, Any]) -> "ReferenceEntry":
        if "pattern" not in data:
            raise BankError("reference entry missing 'pattern'")
        return ReferenceEntry(
            pattern=data["pattern"],
            tolerance=float(data.get("tolerance", DEFAULT_TOLERANCE)),
            source=data.get("source"),
        )


@dataclass(frozen=True)
class ProblemTemplate:
    id: str
    statement: str
    sub_questions: tuple[str, ...]
    required_tools: tuple[str, ...]
    parameters: dict[str, dict[str, Any]] = field(default_factory=dict)
    constraints: tuple[dict[str, Any], ...] = ()
    derived: dict[str, str] = field(default_factory=dict)
    canonical_trace: tuple[TraceStep, ...] = ()
    reference_solution: dict[str, ReferenceEntry] = field(default_factory=dict)
    failure_modes: tuple[str, ...] = ()
    domain: str = "general"
    adversarial: bool = False
    expects_diagnostics: dict[str, list[str]] = field(default_factory=dict)
    min_steps: int = 0

    @property
    def verification_checkpoints(self) -> tuple[TraceStep, ...]:
        return tuple(s for s in self.canonical_trace if s.checkpoint is not None)

    def validate_shape(self, known_tools: set[str] | None = None) -> None:
        if not self.id:
            raise BankError("template needs an id")
        if not isinstance(self.required_tools, tuple) or not all(
            isinstance(t, str) for t in self.required_tools
        ):
            raise BankError(f"{self.id}: required_tools must be a list of tool ids")
        if known_tools is not None:
            rogue = set(self.required_tools) - known_tools
            if rogue:
                raise BankError(f"{self.id}: required_tools not registered: {sorted(rogue)}")
        seen: set[str] = set()
        for step in self.canonical_trace:
            if step.step_id in seen:
                raise BankError(f"{self.id}: duplicate step id {step.step_id!r}")
            if step.tool_id not in self.required_tools:
                raise BankError(f"{self.id}: step {step.step_id} uses unlisted tool {step.tool_id!r}")
            for dep in step.depends_on:
                if dep not in seen:
                    raise BankError(f"{self.id}: step {step.step_id} depends on unknown/later {dep!r}")
            if step.checkpoint is not None and not (
                1 <= step.checkpoint.sub_question <= len(self.sub_questions)
            ):
                raise BankError(f"{self.id}: checkpoint sub_question out of range")
            for sq in step.deliverable_for:
                if not 1 <= sq <= len(self.sub_questions):
                    raise BankError(f"{self.id}: deliverable_for index {sq} out of range")
            seen.add(step.step_id)
        if self.min_steps != len(self.canonical_trace):
            raise BankError(
                f"{self.id}: min_steps {self.min_steps} != trace length {len(self.canonical_trace)}"
            )

    def to_json(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "statement": self.statement,
            "sub_questions": list(self.sub_questions),
            "required_tools": list(self.required_tools),
            "parameters": copy.deepcopy(self.parameters),
            "constraints": copy.deepcopy(list(self.constraints)),
            "derived": dict(self.derived),
            "canonical_trace": [s.to_json() for s in self.canonical_trace],
            "reference_solution": {k: v.to_json() for k, v in self.reference_solution.items()},
            "failure_modes": list(self.failure_modes),
            "domain": self.domain,
            "adversarial": self.adversarial,
            "expects_diagnostics": copy.deepcopy(self.expects_diagnostics),
            "min_steps": self.min_steps,
        }

    @staticmethod
    def from_json(data: dict[str, Any]) -> "ProblemTemplate":
        for key in ("id", "statement", "sub_questions", "required_tools"):
            if key not in data:
                raise BankError(f"template missing {key!r}")
        if not isinstance(data["required_tools"], list):
            raise BankError("required_tools must be a list")
        reference = data.get("reference_solution", {})
        if not isinstance(reference, dict):
            raise BankError("reference_solution must be an object")
        trace = tuple(TraceStep.from_json(s) for s in data.get("canonical_trace", []))
        template = ProblemTemplate(
            id=data["id"],
            statement=data["statement"],
            sub_questions=tuple(data["sub_questions"]),
            required_tools=tuple(data["required_tools"]),
            parameters=data.get("parameters", {}),
            constraints=tuple(data.get("constraints", [])),
            derived=data.get("derived", {}),
            canonical_trace=trace,
            reference_solution={
                k: ReferenceEntry.from_json(v) for k, v in reference.items() if isinstance(v, dict)
            },
            failure_modes=tuple(data.get("failure_modes", [])),
            domain=data.get("domain", "general"),
            adversarial=bool(data.get("adversarial", False)),
            expects_diagnostics=data.get("expects_diagnostics", {}),
            min_steps=int(data.get("min_steps", len(trace))),
        )
        template.validate_shape()
        return template


@dataclass(frozen=True)
class ProblemInstance:
    instance_id: str
    template_id: str
    seed: int
    statement: str
    sub_questions: tuple[str, ...]
    required_tools: tuple[str, ...]
    bindings: dict[str, Any]  # parameters plus derived values
    trace: tuple[TraceStep, ...]  # concrete inputs, frozen expected outputs
    reference: dict[str, dict[str, Any]]  # name -> {value, tolerance, source}
    min_steps: int
    domain: str
    adversarial: bool

    @property
    def deliverable_sub_questions(self) -> tuple[int, ...]:
        out: set[int] = set()
        for step in self.trace:
            out.update(step.deliverable_for)
        return tuple(sorted(out))

    @property
    def checkpoints(self) -> tuple[TraceStep, ...]:
        return tuple(s for s in self.trace if s.checkpoint is not None)

    def final_answer(self) -> dict[str, float]:
        return {name: entry["value"] for name, entry in self.reference.items()}

    def to_json(self) -> dict[str, Any]:
        return {
            "instance_id": self.instance_id,
            "template_id": self.template_id,
            "seed": self.seed,
            "statement": self.statement,
            "sub_questions": list(self.sub_questions),
            "required_tools": list(self.required_tools),
            "bindings": self.bindings,
            "trace": [s.to_json() for s in self.trace],
            "reference": self.reference,
            "min_steps": self.min_steps,
            "domain": self.domain,
            "adversarial": self.adversarial,
        }

    @staticmethod
    def from_json(data: dict[str, Any]) -> "ProblemInstance":
        return ProblemInstance(
            instance_id=data["instance_id"],
            template_id=data["template_id"],
            seed=int(data["seed"]),
            statement=data["statement"],
            sub_questions=tuple(data["sub_questions"]),
            required_tools=tuple(data["required_tools"]),
            bindings=data["bindings"],
            trace=tuple(TraceStep.from_json(s) for s in data["trace"]),
            reference=data["reference"],
            min_steps=int(data["min_steps"]),
            domain=data.get("domain", "general"),
            adversarial=bool(data.get("adversarial", False)),
        )


def bundle_load(path: str | Path | None = None) -> list[ProblemTemplate]:
    """Load a template bundle (directory of *.json); None means the packaged set."""
    if path is None:
        path = Path(__file__).parent / "bundled"
    path = Path(path)
    if not path.is_dir():
        raise BankError(f"bundle directory not found: {path}")
    templates = []
    for file in sorted(path.glob("*.json")):
        try:
            templates.append(ProblemTemplate.from_json(json.loads(file.read_text())))
        except json.JSONDecodeError as err:
            raise BankError(f"{file.name}: invalid JSON: {err}") from None
    if not templates:
        raise BankError(f"no templates in {path}")
    return templates


def bundle_save(templates: list[ProblemTemplate], path: str | Path) -> None:
    path = Path(path)
    path.mkdir(parents=True, exist_ok=True)
    for template in templates:
        (path / f"{template.id}.json").write_text(json.dumps(template.to_json(), indent=2) + "\n")
