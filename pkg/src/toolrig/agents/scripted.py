"""Scripted agents: canonical-trace oracle, violation fixtures, degrading agent."""

from __future__ import annotations

from ..bank import ProblemInstance
from ..expr import evaluate, free_symbols, parse
from .base import Agent, AgentAction, Final, Observation, ToolCall, render_action


class OracleAgent(Agent):
    """Replays the instance's canonical trace verbatim, then completes."""

    name = "oracle"

    def __init__(self, instance: ProblemInstance):
        self.instance = instance
        self.cursor = 0

    def next_action(self, obs: Observation) -> AgentAction:
        if self.cursor < len(self.instance.trace):
            step = self.instance.trace[self.cursor]
            self.cursor += 1
            return ToolCall(step.step_id, step.tool_id, step.input, persist=True)
        return Final(self.instance.final_answer())


class DegradingAgent(Agent):
    """Oracle behavior up to a step-count cutoff, then gives up markerless."""

    name = "degrading"

    def __init__(self, instance: ProblemInstance, cutoff: int = 7):
        self.instance = instance
        self.cutoff = cutoff
        self.cursor = 0

    def next_action(self, obs: Observation) -> AgentAction:
        if self.instance.min_steps <= self.cutoff and self.cursor >= len(self.instance.trace):
            return Final(self.instance.final_answer())
        step = self.instance.trace[min(self.cursor, len(self.instance.trace) - 1)]
        self.cursor += 1
        return ToolCall(step.step_id, step.tool_id, step.input)

    def respond(self, obs: Observation) -> str:
        if self.instance.min_steps <= self.cutoff:
            return render_action(self.next_action(obs))
        if self.cursor < 1:
            return render_action(self.next_action(obs))
        return "This problem is too long for me; giving up."


VIOLATION_KINDS = ("multi_call", "manual", "no_marker")


class ViolationAgent(Agent):
    """Emits one configured protocol violation, then finishes the episode."""

    name = "violation"

    def __init__(self, instance: ProblemInstance, kind: str):
        if kind not in VIOLATION_KINDS:
            raise ValueError(f"unknown violation kind {kind!r}")
        self.instance = instance
        self.kind = kind
        self.cursor = 0
        self.asserted = False

    def respond(self, obs: Observation) -> str:
        trace = self.instance.trace
        if self.kind == "multi_call":
            if self.cursor == 0:
                self.cursor = 2
                first = render_action(ToolCall(trace[0].step_id, trace[0].tool_id, trace[0].input))
                second = render_action(ToolCall(trace[1].step_id, trace[1].tool_id, trace[1].input))
                return f"Batching two computations at once.\n{first}\n{second}"
            if self.cursor < len(trace):
                step = trace[self.cursor]
                self.cursor += 1
                return render_action(ToolCall(step.step_id, step.tool_id, step.input))
            return render_action(Final(self.instance.final_answer()))

        if self.kind == "manual":
            if self.cursor == 0:
                step = trace[0]
                self.cursor = 1
                return render_action(ToolCall(step.step_id, step.tool_id, step.input))
            if not self.asserted:
                self.asserted = True
                return self._manual_assertion()
            return render_action(Final(self.instance.final_answer()))

        # no_marker: full canonical trace, then a markerless sign-off
        if self.cursor < len(trace):
            step = trace[self.cursor]
            self.cursor += 1
            return render_action(ToolCall(step.step_id, step.tool_id, step.input))
        return "All sub-questions are answered by the persisted artifacts above."

    def _manual_assertion(self) -> str:
        """Assert, in prose, the value of the first step's output at a known point."""
        step = self.instance.trace[0]
        expr_text = step.expected_output.get("expr", "")
        point = self.instance.bindings.get("t_star", 1.0)
        tree = parse(expr_text)
        bindings = {
            name: self.instance.bindings[name]
            for name in free_symbols(tree)
            if name in self.instance.bindings
        }
        missing = free_symbols(tree) - set(bindings)
        bindings.update({name: point for name in missing})
        value = evaluate(tree, bindings).value
        return f"No tool needed here: v({point!r}) = {value!r}. Moving on."

    def next_action(self, obs: Observation) -> AgentAction:
        step = self.instance.trace[0]
        return ToolCall(step.step_id, step.tool_id, step.input)
