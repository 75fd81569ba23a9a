"""Trace reconstruction for rule-violating episodes.

Multi-call responses were already split into sequential single calls at
execution time; reconstruction acknowledges the split.  A bare asserted
number that matches the result of exactly one numeric_evaluator application
over already-persisted artifacts is replaced by that inferred call.  Either
way the diagnostic flag records that reconstruction was necessary, and the
compliance component of the rubric carries the penalty.  Reconstruction never
rewrites an existing artifact's payload, only the trace structure and flags.
"""

from __future__ import annotations

from typing import Any

from ..bank import ProblemInstance, numbers_close
from ..expr import ExprError, evaluate, free_symbols, parse
from ..server import ContextService
from .episode import Episode

_INFER_TOL = 1e-6


def reconstruct(
    episode: Episode, instance: ProblemInstance, service: ContextService | None = None
) -> Episode:
    """Resolve what violations can be resolved; flags and scoring do the rest."""
    if not episode.any_violation:
        episode.reconstructed = False
        episode.unreconstructed_violation = False
        return episode

    resolved: set[str] = set()
    if episode.flags.get("multi_call"):
        resolved.add("multi_call")  # the runner executed the split calls in written order
    if episode.flags.get("manual_computation") and service is not None:
        if _infer_manual_step(episode, instance, service):
            resolved.add("manual_computation")

    episode.reconstructed = bool(resolved)
    episode.unreconstructed_violation = any(
        on and name not in resolved for name, on in episode.flags.items()
    )
    return episode


def _infer_manual_step(
    episode: Episode, instance: ProblemInstance, service: ContextService
) -> bool:
    inferred_any = False
    for assertion in episode.manual_assertions:
        targets = assertion.get("asserted", [])
        candidates = assertion.get("numbers", [])
        inference = _search_single_call(episode.artifacts, instance, targets, candidates)
        if inference is None:
            continue
        expr_text, bindings, target = inference
        step_id = f"recon-{len([a for a in episode.artifacts if a['step_id'].startswith('recon')]) + 1:02d}"
        status, response = service.call(
            {
                "problem_id": instance.instance_id,
                "run_id": episode.run_id,
                "step_id": step_id,
                "tool_id": "numeric_evaluator",
                "input": {"expr": expr_text, "bindings": bindings},
                "persist": True,
            }
        )
        if status == 200 and response.get("ok"):
            artifact = service.store.trace(episode.run_id, instance.instance_id)[-1]
            episode.artifacts.append(artifact)
            assertion["inferred_step"] = step_id
            assertion["matched_value"] = target
            inferred_any = True
    return inferred_any


def _search_single_call(
    artifacts: list[dict[str, Any]],
    instance: ProblemInstance,
    targets: list[float],
    candidates: list[float],
) -> tuple[str, dict[str, Any], float] | None:
    """Find one numeric_evaluator application over persisted expression artifacts
    that reproduces an asserted number within the inference tolerance."""
    known = {
        name: value
        for name, value in instance.bindings.items()
        if isinstance(value, (int, float)) and not isinstance(value, bool)
    }
    for artifact in artifacts:
        expr_text = artifact.get("output", {}).get("expr")
        if not isinstance(expr_text, str):
            continue
        try:
            tree = parse(expr_text)
        except ExprError:
            continue
        symbols = free_symbols(tree)
        base = {name: known[name] for name in symbols if name in known}
        unresolved = sorted(symbols - set(base))
        if len(unresolved) > 1:
            continue
        trial_bindings: list[dict[str, Any]] = []
        if not unresolved:
            trial_bindings.append(base)
        else:
            for c in candidates:
                trial_bindings.append({**base, unresolved[0]: c})
        for bindings in trial_bindings:
            try:
                value = evaluate(tree, bindings).value
            except ExprError:
                continue
            for target in targets:
                if numbers_close(value, target, _INFER_TOL):
                    return expr_text, bindings, target
    return None
