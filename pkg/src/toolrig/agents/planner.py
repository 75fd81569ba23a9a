"""Three-stage reference reasoner with a deterministic rule-based synthesizer.

Each turn runs (1) context buffering, which extracts salient facts from the
statement and the last tool response into a compact scratchpad, (2) action
synthesis, which turns the first open sub-goal into an atomic task with at
most MAX_REFINEMENTS refinement attempts and terminates early once every
sub-goal is satisfied, and (3) invocation generation, which emits one
schema-valid tool call and retains a compact audit record.

The rule table pattern-matches sub-goal text to tools.  It fully covers the
kinetic-energy family; on sub-goals it cannot resolve to a single tool it
abstains with an explicit marker payload rather than guessing.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field
from typing import Any

from ..jsonutil import canonical_dumps
from ..tools.base import validate_payload
from .base import MAX_REFINEMENTS, Agent, AgentAction, Final, Observation, ToolCall

_PARAM_RE = re.compile(r"\b([A-Za-z]\w*)\s*=\s*(-?\d+(?:\.\d+)?(?:e-?\d+)?)\b")
_TRAJECTORY_RE = re.compile(r"x\(t\)\s*=\s*(.+?)(?=\s+with\b|,|\.\s|;|$)")


@dataclass
class ContextBuffer:
    """Compact, short-lived scratchpad carried between turns."""

    facts: dict[str, Any] = field(default_factory=dict)
    satisfied: dict[int, list[str]] = field(default_factory=dict)  # sub-goal -> result ids
    refinement_count: int = 0

    def digest(self) -> str:
        return hashlib.sha256(canonical_dumps(
            {"facts": {k: repr(v) for k, v in sorted(self.facts.items())},
             "satisfied": {str(k): v for k, v in self.satisfied.items()}}
        ).encode()).hexdigest()[:16]


@dataclass(frozen=True)
class AuditRecord:
    buffer_digest: str
    task: str
    invocation: dict[str, Any]


class ReferenceReasoner(Agent):
    name = "planner"

    def __init__(self, answer_keys_hint: tuple[str, ...] = ()):
        self.buffer = ContextBuffer()
        self.audit_log: list[AuditRecord] = []
        self.step_counter = 0
        self.answer_keys_hint = answer_keys_hint
        self.pending_candidates: list[float] = []

    # -- stage 1: context buffering -----------------------------------------

    def _update_buffer(self, obs: Observation) -> None:
        facts = self.buffer.facts
        if "params" not in facts:
            facts["params"] = {m.group(1): float(m.group(2)) for m in _PARAM_RE.finditer(obs.statement)}
            trajectory = _TRAJECTORY_RE.search(obs.statement)
            if trajectory:
                facts["trajectory"] = trajectory.group(1).strip()
        if obs.last_response and obs.last_response.get("ok"):
            output = obs.last_response.get("output", {})
            facts[f"out:{len(obs.result_ids)}"] = output
            if "expr" in output:
                facts.setdefault("exprs", []).append(output["expr"])
            if "roots" in output:
                facts["roots"] = [r["re"] for r in output["roots"] if abs(r.get("im", 0.0)) < 1e-9]
            if "value" in output:
                facts["last_value"] = output["value"]
        goal = facts.get("active_goal")
        if goal is not None and obs.last_response and obs.last_response.get("ok"):
            self.buffer.satisfied.setdefault(goal, []).extend(obs.result_ids[-1:])
            facts["active_goal"] = None

    # -- stage 2: action synthesis -------------------------------------------

    def _synthesize(self, obs: Observation) -> tuple[str, dict[str, Any] | None, int | None]:
        open_goals = [
            i + 1
            for i in range(len(obs.sub_questions))
            if (i + 1) not in self.buffer.satisfied
        ]
        if not open_goals:
            return "all sub-goals satisfied", None, None  # early termination

        goal = open_goals[0]
        text = obs.sub_questions[goal - 1]
        self.buffer.refinement_count = 0
        for attempt in range(MAX_REFINEMENTS):
            self.buffer.refinement_count = attempt + 1
            invocation = self._rule_for(text, attempt)
            if invocation is None:
                continue
            schema = self._schema_for(obs, invocation["tool_id"])
            if schema is not None and validate_payload(schema, invocation["input"]) is None:
                return text, invocation, goal
        return text, None, goal

    def _schema_for(self, obs: Observation, tool_id: str) -> dict[str, Any] | None:
        for descriptor in obs.tool_descriptors:
            if descriptor["tool_id"] == tool_id:
                return descriptor["input_schema"]
        return None

    def _rule_for(self, goal_text: str, attempt: int) -> dict[str, Any] | None:
        facts = self.buffer.facts
        lowered = goal_text.lower()
        params = facts.get("params", {})

        if "dx/dt" in goal_text or "velocity" in lowered:
            trajectory = facts.get("trajectory")
            if trajectory:
                return {"tool_id": "symbolic_diff", "input": {"expr": trajectory, "wrt": "t"}}
        if re.search(r"k\(t\)\s*=\s*0\.5", lowered):
            exprs = facts.get("exprs", [])
            if exprs:
                kinetic = f"0.5*m*({exprs[0]})^2"
                facts["kinetic"] = kinetic
                return {"tool_id": "symbolic_diff", "input": {"expr": kinetic, "wrt": "t"}}
        if lowered.startswith(tuple(f"{n}. solve" for n in range(1, 12))) or "solve dk/dt" in lowered:
            exprs = facts.get("exprs", [])
            if len(exprs) >= 2:
                concrete = _substitute_params(exprs[-1], params)
                return {
                    "tool_id": "algebra_solver",
                    "input": {"system": [f"{concrete} = 0"], "unknowns": ["t"]},
                }
        if "second derivative" in lowered:
            exprs = facts.get("exprs", [])
            if len(exprs) == 2 and "curvature" not in facts:
                # prerequisite: differentiate dK/dt before testing its sign
                facts["curvature"] = "pending"
                return {
                    "tool_id": "symbolic_diff",
                    "input": {"expr": exprs[-1], "wrt": "t"},
                    "prerequisite": True,
                }
            if len(exprs) >= 3:
                candidate = self._pick_candidate()
                if candidate is not None:
                    bindings = {k: v for k, v in params.items() if k in "ABCm"}
                    bindings["t"] = candidate
                    facts["t_candidate"] = candidate
                    return {
                        "tool_id": "numeric_evaluator",
                        "input": {"expr": exprs[-1], "bindings": bindings},
                    }
        if "evaluate k(t)" in lowered or ("evaluate" in lowered and "kinetic" in facts):
            candidate = facts.get("t_verified", facts.get("t_candidate"))
            kinetic = facts.get("kinetic")
            if candidate is not None and kinetic is not None:
                bindings = {k: v for k, v in params.items() if k in "ABCm"}
                bindings["t"] = candidate
                return {
                    "tool_id": "numeric_evaluator",
                    "input": {"expr": kinetic, "bindings": bindings},
                }
        return None

    def _pick_candidate(self) -> float | None:
        if not self.pending_candidates:
            roots = self.buffer.facts.get("roots")
            if not roots:
                return None
            self.pending_candidates = sorted(roots)
        # try candidates inside-out: interior extremum precedes boundary zeros
        mid = len(self.pending_candidates) // 2
        return self.pending_candidates.pop(mid) if self.pending_candidates else None

    # -- stage 3: invocation generation ---------------------------------------

    def next_action(self, obs: Observation) -> AgentAction:
        self._update_buffer(obs)
        self._interpret_check(obs)
        task, invocation, goal = self._synthesize(obs)
        if invocation is None and goal is None:
            answer = self._final_answer(obs)
            self.audit_log.append(AuditRecord(self.buffer.digest(), task, {"final": answer}))
            return Final(answer)
        if invocation is None:
            answer = {"status": "ABSTAIN", "unresolved_sub_question": goal}
            self.audit_log.append(AuditRecord(self.buffer.digest(), task, {"final": answer}))
            return Final(answer)
        self.step_counter += 1
        # prerequisite calls gather inputs the goal still needs; they do not
        # mark the goal satisfied
        self.buffer.facts["active_goal"] = None if invocation.get("prerequisite") else goal
        call = ToolCall(f"plan-{self.step_counter:02d}", invocation["tool_id"], invocation["input"])
        self.audit_log.append(AuditRecord(self.buffer.digest(), task, invocation))
        return call

    def _interpret_check(self, obs: Observation) -> None:
        # a negative second derivative confirms the pending candidate as the max
        facts = self.buffer.facts
        if facts.get("t_candidate") is not None and facts.get("last_value") is not None:
            if facts["last_value"] < 0:
                facts["t_verified"] = facts["t_candidate"]
            elif facts.get("active_goal") is None:
                facts["t_candidate"] = None  # rejected; synthesis retries another root

    def _final_answer(self, obs: Observation) -> dict[str, Any]:
        facts = self.buffer.facts
        answer: dict[str, Any] = {}
        for key in obs.answer_keys:
            if key.startswith("t_") and facts.get("t_verified") is not None:
                answer[key] = facts["t_verified"]
            elif key.lower().startswith("k") and facts.get("last_value") is not None:
                answer[key] = facts["last_value"]
        return answer


def _substitute_params(expr_text: str, params: dict[str, float]) -> str:
    out = expr_text
    for name, value in sorted(params.items(), key=lambda kv: -len(kv[0])):
        literal = str(int(value)) if float(value).is_integer() else repr(value)
        out = re.sub(rf"\b{re.escape(name)}\b", literal, out)
    return out
