"""Rubric scoring: trace alignment, checkpoint interpretation, the point map.

Point map over the fixed 70/20/10 totals:

    tool_usage  (70) = 35*tool_selection + 20*trace_fidelity + 15*compliance
    correctness (20) = 12*[final answer correct] + 8*sub_question_accuracy
    approach    (10) = 6*verification_score + 4*decomposition

where compliance is 1 minus 0.5 for a reconstructed violation and 1.0 for an
unreconstructed one (floored at 0): reconstruction mitigates but does not
erase the penalty.  Accuracy is binary: completion marker seen AND the final
answer matches the reference under its tolerances.
"""

from __future__ import annotations

import json
import urllib.request
from dataclasses import dataclass, field
from typing import Any

from ..bank import ProblemInstance, TraceStep, checkpoint_passes, inputs_match, numbers_close
from ..bank.matching import exprs_equivalent, payload_equivalent
from .episode import Episode
from .protocol import harvest_numbers


@dataclass
class ScoreBreakdown:
    tool_usage: float = 0.0
    correctness: float = 0.0
    approach: float = 0.0
    accuracy: bool = False
    sub_question_accuracy: float = 0.0
    tool_selection_accuracy: float = 0.0
    trace_fidelity: float = 0.0
    verification_score: float = 0.0
    decomposition: float = 0.0
    compliance: float = 1.0
    final_answer_correct: bool = False
    tags: list[str] = field(default_factory=list)

    @property
    def partial_total(self) -> float:
        return self.tool_usage + self.correctness + self.approach

    def to_json(self) -> dict[str, Any]:
        return {
            "tool_usage": self.tool_usage,
            "correctness": self.correctness,
            "approach": self.approach,
            "partial_total": self.partial_total,
            "accuracy": self.accuracy,
            "sub_question_accuracy": self.sub_question_accuracy,
            "tool_selection_accuracy": self.tool_selection_accuracy,
            "trace_fidelity": self.trace_fidelity,
            "verification_score": self.verification_score,
            "decomposition": self.decomposition,
            "compliance": self.compliance,
            "final_answer_correct": self.final_answer_correct,
            "tags": self.tags,
        }

    @staticmethod
    def from_json(data: dict[str, Any]) -> "ScoreBreakdown":
        out = ScoreBreakdown()
        for name in (
            "tool_usage",
            "correctness",
            "approach",
            "sub_question_accuracy",
            "tool_selection_accuracy",
            "trace_fidelity",
            "verification_score",
            "decomposition",
            "compliance",
        ):
            setattr(out, name, float(data[name]))
        out.accuracy = bool(data["accuracy"])
        out.final_answer_correct = bool(data["final_answer_correct"])
        out.tags = list(data.get("tags", []))
        return out


def align_trace(
    artifacts: list[dict[str, Any]], canonical: tuple[TraceStep, ...]
) -> dict[str, int]:
    """Order-tolerant alignment: LCS over the canonical steps, then commutative
    canonical steps may match leftover executed steps out of order."""

    def matches(step: TraceStep, artifact: dict[str, Any]) -> bool:
        return artifact.get("tool_id") == step.tool_id and inputs_match(
            step.tool_id, artifact.get("input"), step.input, step.tolerance
        )

    n, m = len(canonical), len(artifacts)
    lcs = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(n - 1, -1, -1):
        for j in range(m - 1, -1, -1):
            if matches(canonical[i], artifacts[j]):
                lcs[i][j] = 1 + lcs[i + 1][j + 1]
            else:
                lcs[i][j] = max(lcs[i + 1][j], lcs[i][j + 1])

    aligned: dict[str, int] = {}
    used: set[int] = set()
    i = j = 0
    while i < n and j < m:
        if matches(canonical[i], artifacts[j]) and lcs[i][j] == 1 + lcs[i + 1][j + 1]:
            aligned[canonical[i].step_id] = j
            used.add(j)
            i += 1
            j += 1
        elif lcs[i + 1][j] >= lcs[i][j + 1]:
            i += 1
        else:
            j += 1

    for step in canonical:
        if step.step_id in aligned or not step.commutative:
            continue
        for j in range(m):
            if j not in used and matches(step, artifacts[j]):
                aligned[step.step_id] = j
                used.add(j)
                break
    return aligned


def _deliverable_matched(
    step: TraceStep, artifacts: list[dict[str, Any]], aligned_idx: int | None
) -> int | None:
    """Artifact index satisfying the step's deliverable, if any.

    The artifact aligned to the step itself wins; otherwise the earliest
    satisfying artifact counts (alternative tool-paths still get credit).
    """

    def satisfies(artifact: dict[str, Any]) -> bool:
        if artifact.get("tool_id") != step.tool_id:
            return False
        if step.deliverable_field == "output":
            return payload_equivalent(
                artifact.get("output"), step.expected_output, step.equivalence, step.tolerance
            )
        if step.deliverable_field == "input.expr":
            got = artifact.get("input", {}).get("expr")
            want = step.input.get("expr") if isinstance(step.input, dict) else None
            return isinstance(got, str) and isinstance(want, str) and exprs_equivalent(got, want)
        return False

    if aligned_idx is not None and satisfies(artifacts[aligned_idx]):
        return aligned_idx
    for idx, artifact in enumerate(artifacts):
        if satisfies(artifact):
            return idx
    return None


def _candidate_used_later(
    candidate: float, after_index: int, artifacts: list[dict[str, Any]], final_answer: Any
) -> bool:
    later: set[float] = set()
    for artifact in artifacts[after_index + 1 :]:
        harvest_numbers(artifact.get("input"), later)
    harvest_numbers(final_answer, later)
    return any(numbers_close(candidate, value, 1e-9) for value in later)


def score(episode: Episode, instance: ProblemInstance) -> ScoreBreakdown:
    out = ScoreBreakdown()
    artifacts = episode.artifacts
    aligned = align_trace(artifacts, instance.trace)

    # trace fidelity: order-tolerant alignment over the canonical minimum steps
    out.trace_fidelity = len(aligned) / instance.min_steps if instance.min_steps else 0.0

    # tool selection: aligned steps are appropriate by construction; unaligned
    # ones get credit only for staying inside the instance's toolbox
    if artifacts:
        aligned_indices = set(aligned.values())
        appropriate = sum(
            1
            for idx, artifact in enumerate(artifacts)
            if idx in aligned_indices or artifact.get("tool_id") in instance.required_tools
        )
        out.tool_selection_accuracy = appropriate / len(artifacts)
    else:
        out.tool_selection_accuracy = 0.0

    # verification: checkpoints must be executed, pass, and be acted on
    checkpoints = instance.checkpoints
    if checkpoints:
        credits = 0
        for step in checkpoints:
            idx = aligned.get(step.step_id)
            if idx is None:
                continue
            artifact = artifacts[idx]
            passed = checkpoint_passes(step.checkpoint, artifact.get("output", {}))
            if not passed:
                continue
            if step.checkpoint.candidate_from is not None:
                bindings = artifact.get("input", {}).get("bindings", {})
                candidate = bindings.get(step.checkpoint.candidate_from)
                if isinstance(candidate, dict):
                    candidate = candidate.get("value")
                if not isinstance(candidate, (int, float)) or not _candidate_used_later(
                    float(candidate), idx, artifacts, episode.final_answer
                ):
                    continue
            elif not episode.completion_marker_seen:
                continue  # a passing check the agent never acted on
            credits += 1
        out.verification_score = credits / len(checkpoints)
    else:
        out.verification_score = 1.0

    # sub-question deliverables (verification sub-questions live above instead)
    deliverable_steps = {
        sq: step for step in instance.trace for sq in step.deliverable_for
    }
    matched_at: dict[int, int] = {}
    for sq, step in deliverable_steps.items():
        idx = _deliverable_matched(step, artifacts, aligned.get(step.step_id))
        if idx is not None:
            matched_at[sq] = idx
    total = len(deliverable_steps)
    out.sub_question_accuracy = len(matched_at) / total if total else 1.0

    # decomposition: deliverables matched in an order consistent with the
    # canonical dependency DAG
    dependents = {s.step_id: set(s.depends_on) for s in instance.trace}

    def closure(step_id: str) -> set[str]:
        seen: set[str] = set()
        stack = list(dependents.get(step_id, ()))
        while stack:
            current = stack.pop()
            if current in seen:
                continue
            seen.add(current)
            stack.extend(dependents.get(current, ()))
        return seen

    sq_of_step: dict[str, list[int]] = {}
    for sq, step in deliverable_steps.items():
        sq_of_step.setdefault(step.step_id, []).append(sq)
    ordered = 0
    for sq, step in deliverable_steps.items():
        if sq not in matched_at:
            continue
        prereq_sqs = [
            p for dep in closure(step.step_id) for p in sq_of_step.get(dep, [])
        ]
        if all(p in matched_at and matched_at[p] <= matched_at[sq] for p in prereq_sqs):
            ordered += 1
    out.decomposition = ordered / total if total else 1.0

    # final answer
    out.final_answer_correct = _final_correct(episode.final_answer, instance)
    out.accuracy = episode.completion_marker_seen and out.final_answer_correct

    # compliance and the point map
    out.compliance = max(
        0.0,
        1.0
        - (0.5 if episode.reconstructed else 0.0)
        - (1.0 if episode.unreconstructed_violation else 0.0),
    )
    out.tool_usage = (
        35.0 * out.tool_selection_accuracy + 20.0 * out.trace_fidelity + 15.0 * out.compliance
    )
    out.correctness = 12.0 * out.final_answer_correct + 8.0 * out.sub_question_accuracy
    out.approach = 6.0 * out.verification_score + 4.0 * out.decomposition
    if episode.reconstructed:
        out.tags.append("reconstructed")
    for name in episode.violation_names():
        out.tags.append(f"violation:{name}")
    return out


def _final_correct(final_answer: Any, instance: ProblemInstance) -> bool:
    if not isinstance(final_answer, dict) or not instance.reference:
        return False
    for name, entry in instance.reference.items():
        value = final_answer.get(name)
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            return False
        if not numbers_close(float(value), entry["value"], entry["tolerance"]):
            return False
    return True


def apply_external_judge(
    breakdown: ScoreBreakdown, episode: Episode, instance: ProblemInstance, endpoint: str
) -> ScoreBreakdown:
    """Optionally replace the approach sub-scores with an external judge's.

    The deterministic judge remains the default; on any failure the
    deterministic scores stand and the breakdown is tagged.
    """
    body = json.dumps(
        {
            "instance_id": instance.instance_id,
            "transcript": episode.transcript,
            "artifacts": episode.artifacts,
            "deterministic": {
                "verification_score": breakdown.verification_score,
                "decomposition": breakdown.decomposition,
            },
        }
    ).encode()
    request = urllib.request.Request(
        endpoint, data=body, headers={"Content-Type": "application/json"}, method="POST"
    )
    try:
        with urllib.request.urlopen(request, timeout=10.0) as response:
            verdict = json.loads(response.read())
        breakdown.verification_score = float(verdict["verification_score"])
        breakdown.decomposition = float(verdict["decomposition"])
        breakdown.approach = 6.0 * breakdown.verification_score + 4.0 * breakdown.decomposition
        breakdown.tags.append("external_judge")
    except Exception:
        breakdown.tags.append("judge_unreachable")
    return breakdown
