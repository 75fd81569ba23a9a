"""Agent runtime: interaction types, oracle/violation/degrading fixtures,
the three-stage reference reasoner, and the text-generation hook."""

from __future__ import annotations

from ..bank import ProblemInstance
from .base import (
    COMPLETION_MARKER,
    MAX_REFINEMENTS,
    Agent,
    AgentAction,
    Final,
    Observation,
    ToolCall,
    render_action,
)
from .llm import (
    BackendError,
    CassetteBackend,
    ChatBackend,
    HttpChatBackend,
    LlmAgent,
    StubBackend,
    system_prompt,
)
from .planner import AuditRecord, ContextBuffer, ReferenceReasoner
from .scripted import DegradingAgent, OracleAgent, ViolationAgent

BUILTIN_MODELS = (
    "oracle",
    "planner",
    "degrading",
    "violation:multi_call",
    "violation:manual",
    "violation:no_marker",
)


def make_agent(model: str, instance: ProblemInstance) -> Agent:
    """Deterministic agent factory; `llm:<endpoint>|<model>` wires a backend."""
    if model == "oracle":
        return OracleAgent(instance)
    if model == "planner":
        return ReferenceReasoner()
    if model == "degrading":
        return DegradingAgent(instance)
    if model.startswith("violation:"):
        return ViolationAgent(instance, model.split(":", 1)[1])
    if model.startswith("llm:"):
        spec = model.split(":", 1)[1]
        endpoint, _, name = spec.partition("|")
        return LlmAgent(HttpChatBackend(endpoint, name or "default"))
    if model.startswith("cassette:"):
        return LlmAgent(CassetteBackend(model.split(":", 1)[1]))
    raise ValueError(f"unknown model {model!r}")


__all__ = [
    "Agent",
    "AgentAction",
    "AuditRecord",
    "BUILTIN_MODELS",
    "BackendError",
    "COMPLETION_MARKER",
    "CassetteBackend",
    "ChatBackend",
    "ContextBuffer",
    "DegradingAgent",
    "Final",
    "HttpChatBackend",
    "LlmAgent",
    "MAX_REFINEMENTS",
    "Observation",
    "OracleAgent",
    "ReferenceReasoner",
    "StubBackend",
    "ToolCall",
    "ViolationAgent",
    "make_agent",
    "render_action",
    "system_prompt",
]
