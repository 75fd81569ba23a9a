"""Template validation: canonical replay plus perturbation stability.

For each seed the canonical trace is executed in the context-service sandbox
and must reproduce its frozen expectations; then the battery re-runs it with

* every numeric input leaf perturbed by a relative 1e-9 (alternating sign),
  requiring the checkpoints and the reference-sourced answers to stay put;
* equivalence tolerances scaled one decade both ways, requiring the baseline
  matches to survive;
* admissible adjacent swaps of commutative independent steps, requiring
  byte-identical per-step artifacts.

A template ships only if every seed passes every check.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from ..expr import Expr, FloatConst, Func, ParseError, Pow, Product, Rational, Sum, parse, print_expr
from ..jsonutil import canonical_dumps
from ..server import ContextService, ContextStore
from ..tools import ToolRegistry, default_registry
from .instantiate import instantiate
from .matching import numbers_close, payload_equivalent
from .model import Checkpoint, ProblemInstance, ProblemTemplate, TraceStep

PERTURBATION = 1e-9
_EXPR_FIELDS = {
    "symbolic_diff": ("expr",),
    "integrate": ("expr",),
    "numeric_evaluator": ("expr",),
}


@dataclass
class SeedReport:
    seed: int
    baseline_ok: bool = False
    tolerance_ok: bool = False
    perturbation_ok: bool = False
    reorder_ok: bool = False
    messages: list[str] = field(default_factory=list)

    @property
    def stable(self) -> bool:
        return self.baseline_ok and self.tolerance_ok and self.perturbation_ok and self.reorder_ok


@dataclass
class ValidationReport:
    template_id: str
    seeds: list[SeedReport]

    @property
    def all_stable(self) -> bool:
        return all(s.stable for s in self.seeds)


def checkpoint_passes(checkpoint: Checkpoint, output: dict[str, Any]) -> bool:
    if checkpoint.kind == "residual-below":
        value = output.get("value")
        return isinstance(value, (int, float)) and abs(value) <= checkpoint.threshold
    if checkpoint.kind == "second-derivative-sign":
        value = output.get("value")
        if not isinstance(value, (int, float)) or value == 0:
            return False
        return (value > 0) == (checkpoint.sign > 0)
    if checkpoint.kind == "units-match":
        return list(output.get("unit", [])) == list(checkpoint.unit)
    return False


def validate(
    template: ProblemTemplate, n_seeds: int, registry: ToolRegistry | None = None
) -> ValidationReport:
    if n_seeds < 1:
        raise ValueError("n_seeds must be at least 1")
    registry = registry if registry is not None else default_registry()
    reports = []
    for seed in range(n_seeds):
        reports.append(_validate_seed(template, seed, registry))
    return ValidationReport(template.id, reports)


def _validate_seed(template: ProblemTemplate, seed: int, registry: ToolRegistry) -> SeedReport:
    report = SeedReport(seed=seed)
    try:
        instance = instantiate(template, seed, registry=registry)
    except Exception as err:  # generation failures are report entries, not raises
        report.messages.append(f"generation failed: {err}")
        return report

    baseline = _execute(instance, list(instance.trace), registry)
    report.baseline_ok = _check_run(instance, baseline, 1.0, report.messages, check_steps=True)

    report.tolerance_ok = all(
        _check_run(instance, baseline, scale, report.messages, check_steps=True)
        for scale in (10.0, 0.1)
    )

    perturbed_steps = [_perturb_step(s, i) for i, s in enumerate(instance.trace)]
    perturbed = _execute(instance, perturbed_steps, registry)
    report.perturbation_ok = _check_run(
        instance, perturbed, 1.0, report.messages, check_steps=False, label="perturbed"
    )

    report.reorder_ok = _check_reorders(instance, baseline, registry, report.messages)
    return report


def _execute(
    instance: ProblemInstance, steps: list[TraceStep], registry: ToolRegistry
) -> dict[str, dict[str, Any]]:
    """Run steps through a fresh context service; returns step_id -> artifact."""
    service = ContextService(registry=registry, store=ContextStore())
    outputs: dict[str, dict[str, Any]] = {}
    for step in steps:
        _status, response = service.call(
            {
                "problem_id": instance.instance_id,
                "step_id": step.step_id,
                "tool_id": step.tool_id,
                "input": step.input,
                "persist": True,
            }
        )
        outputs[step.step_id] = response
    return outputs


def _check_run(
    instance: ProblemInstance,
    responses: dict[str, dict[str, Any]],
    tol_scale: float,
    messages: list[str],
    check_steps: bool,
    label: str = "baseline",
) -> bool:
    ok = True
    by_id = {s.step_id: s for s in instance.trace}
    for step in instance.trace:
        response = responses[step.step_id]
        if not response.get("ok", False):
            messages.append(f"{label}: step {step.step_id} failed")
            ok = False
            continue
        if check_steps and not payload_equivalent(
            response["output"], step.expected_output, step.equivalence, step.tolerance * tol_scale
        ):
            messages.append(f"{label}: step {step.step_id} output drifted (x{tol_scale})")
            ok = False
        notes = set(response.get("diagnostics", {}).get("notes", []))
        if check_steps and set(step.expected_notes) - notes:
            messages.append(f"{label}: step {step.step_id} lost expected diagnostics")
            ok = False
        if step.checkpoint is not None and not checkpoint_passes(step.checkpoint, response["output"]):
            messages.append(f"{label}: checkpoint at {step.step_id} no longer passes")
            ok = False
    for name, entry in instance.reference.items():
        source = entry.get("source")
        if not source:
            continue
        step = by_id[source["step"]]
        got: Any = responses[step.step_id]["output"]
        for part in source["path"].split(".")[1:]:  # path starts with "output"
            got = got.get(part) if isinstance(got, dict) else None
        if not isinstance(got, (int, float)) or not numbers_close(
            float(got), entry["value"], entry["tolerance"] * tol_scale
        ):
            messages.append(f"{label}: reference {name!r} drifted out of tolerance (x{tol_scale})")
            ok = False
    return ok


# -- input perturbation -----------------------------------------------------

def _perturb_step(step: TraceStep, salt: int) -> TraceStep:
    counter = [salt]
    payload = _perturb_value(step.input, counter, expr_fields=_EXPR_FIELDS.get(step.tool_id, ()))
    if step.tool_id in ("solve_equation",):
        payload["equation"] = _perturb_equation(step.input["equation"], counter)
    if step.tool_id == "algebra_solver":
        payload["system"] = [_perturb_equation(eq, counter) for eq in step.input["system"]]
    return TraceStep(
        step_id=step.step_id,
        tool_id=step.tool_id,
        input=payload,
        equivalence=step.equivalence,
        tolerance=step.tolerance,
        depends_on=step.depends_on,
        commutative=step.commutative,
        deliverable_for=step.deliverable_for,
        deliverable_field=step.deliverable_field,
        checkpoint=step.checkpoint,
        expected_output=step.expected_output,
        expected_notes=step.expected_notes,
    )


def _bump(value: float, counter: list[int]) -> float:
    sign = 1.0 if counter[0] % 2 == 0 else -1.0
    counter[0] += 1
    return value * (1.0 + sign * PERTURBATION)


def _perturb_value(node: Any, counter: list[int], expr_fields: tuple[str, ...] = (), key: str | None = None) -> Any:
    if isinstance(node, dict):
        out = {}
        for k, v in node.items():
            if k == "unit":  # unit vectors are exact integers, never perturbed
                out[k] = v
            elif k == "wrt" or k == "unknowns":
                out[k] = v
            else:
                out[k] = _perturb_value(v, counter, expr_fields, k)
        return out
    if isinstance(node, list):
        return [_perturb_value(v, counter, expr_fields) for v in node]
    if isinstance(node, bool):
        return node
    if isinstance(node, (int, float)):
        return _bump(float(node), counter)
    if isinstance(node, str) and key in expr_fields:
        return _perturb_expr_text(node, counter)
    return node


def _perturb_expr_text(text: str, counter: list[int]) -> str:
    try:
        tree = parse(text)
    except ParseError:
        return text
    return print_expr(_perturb_tree(tree, counter))


def _perturb_tree(e: Expr, counter: list[int]) -> Expr:
    if isinstance(e, Rational):
        if e.value == 0:
            return e
        return FloatConst(_bump(float(e.value), counter))
    if isinstance(e, FloatConst):
        return FloatConst(_bump(e.value, counter)) if e.value != 0.0 else e
    if isinstance(e, Func):
        return Func(e.name, _perturb_tree(e.arg, counter))
    if isinstance(e, Pow):
        # exponents stay exact: perturbing them changes the algebraic class
        return Pow(_perturb_tree(e.base, counter), e.exp)
    if isinstance(e, Product):
        return Product(tuple(_perturb_tree(f, counter) for f in e.factors))
    if isinstance(e, Sum):
        return Sum(tuple(_perturb_tree(t, counter) for t in e.terms))
    return e


def _perturb_equation(equation: str, counter: list[int]) -> str:
    lhs, rhs = equation.split("=")
    return f"{_perturb_expr_text(lhs.strip(), counter)} = {_perturb_expr_text(rhs.strip(), counter)}"


# -- commutative reordering ---------------------------------------------------

def admissible_swaps(steps: tuple[TraceStep, ...]) -> list[int]:
    """Indices i where steps i and i+1 are commutative and independent."""
    swaps = []
    for i in range(len(steps) - 1):
        a, b = steps[i], steps[i + 1]
        if not (a.commutative and b.commutative):
            continue
        if a.step_id in b.depends_on or b.step_id in a.depends_on:
            continue
        swaps.append(i)
    return swaps


def _check_reorders(
    instance: ProblemInstance,
    baseline: dict[str, dict[str, Any]],
    registry: ToolRegistry,
    messages: list[str],
) -> bool:
    ok = True
    for i in admissible_swaps(instance.trace):
        order = list(instance.trace)
        order[i], order[i + 1] = order[i + 1], order[i]
        rerun = _execute(instance, order, registry)
        for step in instance.trace:
            got = canonical_dumps(rerun[step.step_id].get("output"))
            want = canonical_dumps(baseline[step.step_id].get("output"))
            if got != want:
                messages.append(f"reorder swap@{i}: step {step.step_id} artifact changed")
                ok = False
    return ok
