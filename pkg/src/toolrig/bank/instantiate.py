"""Seeded parametric instantiation.

``instantiate(template, seed)`` is a pure function of (template.id, seed):
parameters are rejection-sampled against the template constraints with a
PRNG seeded from a stable hash, derived quantities are evaluated, and the
canonical trace is concretized by running the tools and freezing their
outputs as the expected artifacts.
"""

from __future__ import annotations

import hashlib
import random
import re
from typing import Any

from ..expr import evaluate, parse
from ..tools import ToolRegistry, default_registry
from .model import BankError, ProblemInstance, ProblemTemplate, TraceStep

_MAX_ATTEMPTS = 1000
_PLACEHOLDER = re.compile(r"\$\{([^}]+)\}")


class GenerationError(BankError):
    pass


def _stable_rng(template_id: str, seed: int) -> random.Random:
    digest = hashlib.sha256(f"{template_id}:{seed}".encode()).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))


def _sample_parameters(template: ProblemTemplate, rng: random.Random) -> dict[str, Any]:
    params: dict[str, Any] = {}
    for name in sorted(template.parameters):
        spec = template.parameters[name]
        kind = spec.get("type", "float")
        if kind == "int":
            params[name] = rng.randint(int(spec["min"]), int(spec["max"]))
        elif kind == "float":
            params[name] = rng.uniform(float(spec["min"]), float(spec["max"]))
        elif kind == "choice":
            params[name] = rng.choice(list(spec["values"]))
        else:
            raise BankError(f"unknown parameter type {kind!r} for {name!r}")
    return params


def _constraints_hold(template: ProblemTemplate, params: dict[str, Any]) -> bool:
    for constraint in template.constraints:
        value = evaluate(parse(constraint["expr"]), params).value
        bound = float(constraint["value"])
        op = constraint["op"]
        ok = {
            ">": value > bound,
            ">=": value >= bound,
            "<": value < bound,
            "<=": value <= bound,
            "!=": value != bound,
            "==": value == bound,
        }.get(op)
        if ok is None:
            raise BankError(f"unknown constraint op {op!r}")
        if not ok:
            return False
    return True


def _literal(value: Any) -> str:
    if isinstance(value, bool):
        raise BankError("boolean values cannot be spliced into expressions")
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def resolve_pattern(pattern: Any, values: dict[str, Any], steps: dict[str, dict[str, Any]]) -> Any:
    """Substitute ``${name}`` and ``${step-XX.output.path}`` placeholders.

    A string that is exactly one placeholder resolves to the raw typed value;
    placeholders embedded in longer strings substitute textually.
    """
    if isinstance(pattern, dict):
        return {k: resolve_pattern(v, values, steps) for k, v in pattern.items()}
    if isinstance(pattern, list):
        return [resolve_pattern(v, values, steps) for v in pattern]
    if not isinstance(pattern, str):
        return pattern

    exact = _PLACEHOLDER.fullmatch(pattern)
    if exact:
        return _lookup(exact.group(1), values, steps)

    def replace(match: re.Match) -> str:
        return _literal(_lookup(match.group(1), values, steps))

    return _PLACEHOLDER.sub(replace, pattern)


def _lookup(token: str, values: dict[str, Any], steps: dict[str, dict[str, Any]]) -> Any:
    if "." in token:
        head, *path = token.split(".")
        if head not in steps:
            raise GenerationError(f"placeholder references unexecuted step {head!r}")
        node: Any = {"output": steps[head]}
        for part in path:
            if not isinstance(node, dict) or part not in node:
                raise GenerationError(f"placeholder path {token!r} not found")
            node = node[part]
        return node
    if token not in values:
        raise GenerationError(f"placeholder {token!r} is not a parameter or derived value")
    return values[token]


def instantiate(
    template: ProblemTemplate,
    seed: int,
    registry: ToolRegistry | None = None,
    overrides: dict[str, Any] | None = None,
) -> ProblemInstance:
    """Concrete instance from (template, seed); ``overrides`` pins parameters."""
    registry = registry if registry is not None else default_registry()
    template.validate_shape(set(registry.tool_ids()))
    rng = _stable_rng(template.id, seed)

    params: dict[str, Any] | None = None
    for _ in range(_MAX_ATTEMPTS):
        candidate = _sample_parameters(template, rng)
        if overrides:
            candidate.update(overrides)
        if _constraints_hold(template, candidate):
            params = candidate
            break
    if params is None:
        raise GenerationError(f"{template.id}: no parameter sample satisfied constraints")

    values = dict(params)
    for name, pattern in template.derived.items():
        values[name] = evaluate(parse(pattern), values).value

    statement = resolve_pattern(template.statement, values, {})
    sub_questions = tuple(resolve_pattern(q, values, {}) for q in template.sub_questions)

    step_outputs: dict[str, dict[str, Any]] = {}
    concrete_steps: list[TraceStep] = []
    for step in template.canonical_trace:
        concrete_input = resolve_pattern(step.input, values, step_outputs)
        result = registry.execute(step.tool_id, concrete_input)
        if not result.ok:
            raise GenerationError(
                f"{template.id} seed {seed}: step {step.step_id} failed: {result.diagnostics.detail}"
            )
        expected_notes = tuple(template.expects_diagnostics.get(step.step_id, []))
        missing = set(expected_notes) - set(result.diagnostics.notes)
        if missing:
            raise GenerationError(
                f"{template.id} seed {seed}: step {step.step_id} lacks diagnostics {sorted(missing)}"
            )
        step_outputs[step.step_id] = result.output
        concrete_steps.append(
            TraceStep(
                step_id=step.step_id,
                tool_id=step.tool_id,
                input=concrete_input,
                equivalence=step.equivalence,
                tolerance=step.tolerance,
                depends_on=step.depends_on,
                commutative=step.commutative,
                deliverable_for=step.deliverable_for,
                deliverable_field=step.deliverable_field,
                checkpoint=step.checkpoint,
                expected_output=result.output,
                expected_notes=expected_notes,
            )
        )

    reference: dict[str, dict[str, Any]] = {}
    for name, entry in template.reference_solution.items():
        reference[name] = {
            "value": evaluate(parse(entry.pattern), values).value,
            "tolerance": entry.tolerance,
            "source": entry.source,
        }

    return ProblemInstance(
        instance_id=f"{template.id}-s{seed:04d}",
        template_id=template.id,
        seed=seed,
        statement=statement,
        sub_questions=sub_questions,
        required_tools=template.required_tools,
        bindings=values,
        trace=tuple(concrete_steps),
        reference=reference,
        min_steps=template.min_steps,
        domain=template.domain,
        adversarial=template.adversarial,
    )
