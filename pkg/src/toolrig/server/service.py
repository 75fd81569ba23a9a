"""Transport-independent context service.

Implements the call/query/trace/reset semantics shared by the HTTP server,
the evaluation runner, and the problem-bank validator.  Responses follow the
wire shapes exactly: call answers {ok, result_id?, output, diagnostics} and
query answers {ok, matches}.
"""

from __future__ import annotations

import re
from typing import Any

from ..tools import ToolRegistry, UnknownToolError, default_registry
from .store import DEFAULT_RUN_ID, ContextStore, DuplicateStepError

_FIELD_PATH_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*(\.[A-Za-z_][A-Za-z0-9_]*)*$")


class ContextService:
    def __init__(self, registry: ToolRegistry | None = None, store: ContextStore | None = None):
        self.registry = registry if registry is not None else default_registry()
        self.store = store if store is not None else ContextStore()

    # Each handler returns (http_status, response_body).

    def call(self, body: Any) -> tuple[int, dict[str, Any]]:
        if not isinstance(body, dict):
            return 400, _error("bad_request", "request body must be a JSON object")
        problem_id = body.get("problem_id")
        step_id = body.get("step_id")
        tool_id = body.get("tool_id")
        payload = body.get("input")
        persist = body.get("persist", False)
        run_id = body.get("run_id", DEFAULT_RUN_ID)
        if not isinstance(problem_id, str) or not problem_id:
            return 400, _error("bad_request", "problem_id must be a non-empty string")
        if not isinstance(step_id, str) or not step_id:
            return 400, _error("bad_request", "step_id must be a non-empty string")
        if not isinstance(tool_id, str) or not tool_id:
            return 400, _error("bad_request", "tool_id must be a non-empty string")
        if not isinstance(persist, bool):
            return 400, _error("bad_request", "persist must be a boolean")

        try:
            tool = self.registry.get(tool_id)
        except UnknownToolError:
            return 404, _error("unknown_tool", f"no tool registered as {tool_id!r}")

        if persist and self.store.has_step(run_id, problem_id, step_id):
            return 409, _error("duplicate_step", f"step {step_id!r} already persisted")

        result = tool.run(payload)
        response: dict[str, Any] = {
            "ok": result.ok,
            "output": result.output,
            "diagnostics": result.diagnostics.to_wire(),
        }
        if persist:
            # failed calls persist too, so failures stay auditable
            try:
                artifact = self.store.persist(
                    run_id,
                    problem_id,
                    step_id,
                    tool_id,
                    result.version,
                    result.input,
                    result.output,
                    result.diagnostics.to_wire(),
                )
            except DuplicateStepError:
                return 409, _error("duplicate_step", f"step {step_id!r} already persisted")
            response["result_id"] = artifact["result_id"]
        return 200, response

    def query(self, body: Any) -> tuple[int, dict[str, Any]]:
        if not isinstance(body, dict):
            return 400, _error("bad_request", "request body must be a JSON object")
        problem_id = body.get("problem_id")
        query = body.get("query")
        run_id = body.get("run_id", DEFAULT_RUN_ID)
        if not isinstance(problem_id, str) or not isinstance(query, dict):
            return 400, _error("bad_request", "need problem_id and query object")
        from_step = query.get("from_step")
        fields = query.get("fields", [])
        if not isinstance(from_step, str) or not isinstance(fields, list):
            return 400, _error("bad_request", "query needs from_step and a fields list")
        for path in fields:
            if not isinstance(path, str) or not _FIELD_PATH_RE.match(path):
                return 400, _error("bad_request", f"invalid field path {path!r}")

        matches = []
        for artifact in self.store.artifacts_at(run_id, problem_id, from_step):
            projected: dict[str, Any] = {"result_id": artifact["result_id"]}
            for path in fields:
                value = _walk(artifact, path.split("."))
                if value is not _MISSING:
                    _nest(projected, path.split("."), value)
            matches.append(projected)
        return 200, {"ok": True, "matches": matches}

    def trace(self, body: Any) -> tuple[int, dict[str, Any]]:
        if not isinstance(body, dict) or not isinstance(body.get("problem_id"), str):
            return 400, _error("bad_request", "need problem_id")
        run_id = body.get("run_id", DEFAULT_RUN_ID)
        return 200, {"ok": True, "trace": self.store.trace(run_id, body["problem_id"])}

    def reset(self, body: Any) -> tuple[int, dict[str, Any]]:
        if not isinstance(body, dict):
            return 400, _error("bad_request", "request body must be a JSON object")
        run_id = body.get("run_id")
        problem_id = body.get("problem_id")
        if run_id is None and problem_id is None:
            return 400, _error("bad_request", "reset needs run_id and/or problem_id")
        self.store.reset(run_id=run_id, problem_id=problem_id)
        return 200, {"ok": True}

    def tools(self) -> tuple[int, dict[str, Any]]:
        return 200, {"ok": True, "tools": [d.to_wire() for d in self.registry.descriptors()]}


_MISSING = object()


def _walk(obj: Any, parts: list[str]) -> Any:
    for part in parts:
        if not isinstance(obj, dict) or part not in obj:
            return _MISSING
        obj = obj[part]
    return obj


def _nest(target: dict[str, Any], parts: list[str], value: Any) -> None:
    for part in parts[:-1]:
        target = target.setdefault(part, {})
    target[parts[-1]] = value


def _error(code: str, message: str) -> dict[str, Any]:
    return {"ok": False, "error": {"code": code, "message": message}}
