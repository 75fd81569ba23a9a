"""Text-generation-backed agent.

The backend is an abstract chat interface; all network effects live behind
it.  The system prompt encodes the interaction rules (tools only, one call
per response, the completion marker) plus the tool schemas.  Completions are
parsed for tool-call blocks; anything malformed surfaces downstream as an
enforcement violation rather than an exception here.

A cassette backend records/replays transcripts keyed by a hash of the
message list, so recorded sessions replay deterministically in tests.
"""

from __future__ import annotations

import hashlib
import json
import os
import urllib.request
from pathlib import Path

from ..jsonutil import canonical_dumps
from .base import COMPLETION_MARKER, Agent, AgentAction, Final, Observation, ToolCall

DEFAULT_API_KEY_VAR = "TOOLRIG_API_KEY"


class BackendError(Exception):
    pass


class ChatBackend:
    def complete(self, messages: list[dict[str, str]]) -> str:
        raise NotImplementedError


class StubBackend(ChatBackend):
    """Returns scripted completions in order; raises when exhausted."""

    def __init__(self, completions: list[str]):
        self.completions = list(completions)
        self.requests: list[list[dict[str, str]]] = []

    def complete(self, messages: list[dict[str, str]]) -> str:
        self.requests.append(messages)
        if not self.completions:
            raise BackendError("stub backend exhausted")
        return self.completions.pop(0)


class HttpChatBackend(ChatBackend):
    """Generic JSON chat endpoint; temperature is forced to 0."""

    def __init__(
        self,
        endpoint: str,
        model: str,
        max_tokens: int = 1024,
        api_key_var: str = DEFAULT_API_KEY_VAR,
        timeout_s: float = 30.0,
    ):
        self.endpoint = endpoint
        self.model = model
        self.max_tokens = max_tokens
        self.api_key_var = api_key_var
        self.timeout_s = timeout_s

    def complete(self, messages: list[dict[str, str]]) -> str:
        body = canonical_dumps(
            {
                "model": self.model,
                "messages": messages,
                "temperature": 0,
                "max_tokens": self.max_tokens,
            }
        ).encode()
        headers = {"Content-Type": "application/json"}
        api_key = os.environ.get(self.api_key_var)
        if api_key:
            headers["Authorization"] = f"Bearer {api_key}"
        request = urllib.request.Request(self.endpoint, data=body, headers=headers, method="POST")
        try:
            with urllib.request.urlopen(request, timeout=self.timeout_s) as response:
                payload = json.loads(response.read())
        except Exception as err:
            raise BackendError(f"backend request failed: {err}") from None
        try:
            return payload["choices"][0]["message"]["content"]
        except (KeyError, IndexError, TypeError):
            raise BackendError("malformed backend response") from None


def _messages_key(messages: list[dict[str, str]]) -> str:
    return hashlib.sha256(canonical_dumps(messages).encode()).hexdigest()


class CassetteBackend(ChatBackend):
    """Record/replay: wraps an inner backend in record mode, replays otherwise."""

    def __init__(self, path: str | Path, inner: ChatBackend | None = None):
        self.path = Path(path)
        self.inner = inner
        self.tape: dict[str, str] = {}
        if self.path.exists():
            self.tape = json.loads(self.path.read_text())

    def complete(self, messages: list[dict[str, str]]) -> str:
        key = _messages_key(messages)
        if key in self.tape:
            return self.tape[key]
        if self.inner is None:
            raise BackendError(f"no recorded completion for request {key[:12]}")
        completion = self.inner.complete(messages)
        self.tape[key] = completion
        self.path.write_text(json.dumps(self.tape, indent=2, sort_keys=True))
        return completion


def system_prompt(obs: Observation) -> str:
    tool_lines = "\n".join(
        f"- {d['tool_id']} (v{d['version']}): {d['description']} "
        f"input schema: {canonical_dumps(d['input_schema'])}"
        for d in obs.tool_descriptors
    )
    return (
        "You are solving a multi-step math/physics problem with deterministic tools.\n"
        "Rules:\n"
        "1. All computation goes through explicit tool calls; never do arithmetic yourself.\n"
        "2. Each response may contain at most ONE tool call, formatted as a fenced block:\n"
        '```tool_call\n{"step_id": "step-01", "tool_id": "...", "input": {...}, "persist": true}\n```\n'
        f"3. When finished, emit a ```final_answer``` JSON block with keys "
        f"{list(obs.answer_keys)} followed by the literal marker {COMPLETION_MARKER}.\n"
        f"Available tools:\n{tool_lines}\n"
    )


class LlmAgent(Agent):
    name = "llm"

    def __init__(self, backend: ChatBackend):
        self.backend = backend
        self.history: list[dict[str, str]] = []

    def respond(self, obs: Observation) -> str:
        if not self.history:
            self.history.append({"role": "system", "content": system_prompt(obs)})
            self.history.append(
                {
                    "role": "user",
                    "content": f"{obs.statement}\n\nSub-questions:\n"
                    + "\n".join(obs.sub_questions),
                }
            )
        else:
            self.history.append(
                {
                    "role": "user",
                    "content": f"Last tool response: {canonical_dumps(obs.last_response)}; "
                    f"persisted: {list(obs.result_ids)}; remaining steps: {obs.remaining_steps}",
                }
            )
        try:
            completion = self.backend.complete(self.history)
        except BackendError:
            try:  # one retry, then abstain
                completion = self.backend.complete(self.history)
            except BackendError:
                completion = render_abstain()
        self.history.append({"role": "assistant", "content": completion})
        return completion

    def next_action(self, obs: Observation) -> AgentAction:
        from ..evaluation.protocol import parse_response

        parsed = parse_response(self.respond(obs))
        if parsed.calls and isinstance(parsed.calls[0], dict):
            call = parsed.calls[0]
            return ToolCall(
                call.get("step_id", "step-01"),
                call.get("tool_id", ""),
                call.get("input", {}),
                bool(call.get("persist", True)),
            )
        return Final(parsed.final_answer or {"status": "ABSTAIN"})


def render_abstain() -> str:
    return (
        '```final_answer\n{"status":"ABSTAIN"}\n```\n' + COMPLETION_MARKER
    )
