"""Agent-side interaction types.

Agents receive Observations and emit exactly one AgentAction per turn: a
ToolCall or a Final answer carrying the literal completion marker.  Actions
render to the canonical response-text format the protocol layer parses, so
built-in agents and text-generation backends travel through the same
enforcement path.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from ..jsonutil import canonical_dumps

COMPLETION_MARKER = "PROBLEM_COMPLETED"
MAX_REFINEMENTS = 3  # bound on action-synthesis refinement attempts


@dataclass(frozen=True)
class Observation:
    statement: str
    sub_questions: tuple[str, ...]
    tool_descriptors: tuple[dict[str, Any], ...]
    answer_keys: tuple[str, ...]
    last_response: dict[str, Any] | None
    result_ids: tuple[str, ...]
    remaining_steps: int


@dataclass(frozen=True)
class ToolCall:
    step_id: str
    tool_id: str
    input: Any
    persist: bool = True


@dataclass(frozen=True)
class Final:
    answer: dict[str, Any] = field(default_factory=dict)
    marker: str = COMPLETION_MARKER


AgentAction = ToolCall | Final


def render_action(action: AgentAction) -> str:
    """Canonical response text for an action."""
    if isinstance(action, ToolCall):
        payload = {
            "step_id": action.step_id,
            "tool_id": action.tool_id,
            "input": action.input,
            "persist": action.persist,
        }
        return (
            f"Invoking {action.tool_id} for {action.step_id}.\n"
            f"```tool_call\n{canonical_dumps(payload)}\n```"
        )
    return f"```final_answer\n{canonical_dumps(action.answer)}\n```\n{action.marker}"


class Agent:
    """One agent instance drives one episode; agents are never shared."""

    name = "agent"

    def next_action(self, obs: Observation) -> AgentAction:
        raise NotImplementedError

    def respond(self, obs: Observation) -> str:
        return render_action(self.next_action(obs))
