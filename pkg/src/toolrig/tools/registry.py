"""Tool registry: the versioned set of tools a context server exposes."""

from __future__ import annotations

import json
from pathlib import Path

from .base import Tool, ToolDescriptor, ToolResult
from .suite import (
    AlgebraSolverTool,
    IntegrateTool,
    LinearRegressionTool,
    MatrixDeterminantTool,
    NumericEvaluatorTool,
    SolveEquationTool,
    SymbolicDiffTool,
)

_BUILTIN_TOOLS = (
    SymbolicDiffTool,
    AlgebraSolverTool,
    SolveEquationTool,
    IntegrateTool,
    MatrixDeterminantTool,
    LinearRegressionTool,
    NumericEvaluatorTool,
)


class UnknownToolError(KeyError):
    def __init__(self, tool_id: str):
        super().__init__(tool_id)
        self.tool_id = tool_id


class ToolRegistry:
    def __init__(self, tools: list[Tool] | None = None):
        self._tools: dict[str, Tool] = {}
        for tool in tools if tools is not None else [cls() for cls in _BUILTIN_TOOLS]:
            self.register(tool)

    def register(self, tool: Tool) -> None:
        if tool.tool_id in self._tools:
            raise ValueError(f"tool {tool.tool_id!r} already registered")
        self._tools[tool.tool_id] = tool

    def __contains__(self, tool_id: str) -> bool:
        return tool_id in self._tools

    def get(self, tool_id: str) -> Tool:
        try:
            return self._tools[tool_id]
        except KeyError:
            raise UnknownToolError(tool_id) from None

    def execute(self, tool_id: str, payload) -> ToolResult:
        return self.get(tool_id).run(payload)

    def tool_ids(self) -> list[str]:
        return sorted(self._tools)

    def descriptors(self) -> list[ToolDescriptor]:
        return [self._tools[tid].descriptor() for tid in self.tool_ids()]


def default_registry() -> ToolRegistry:
    return ToolRegistry()


def registry_from_manifest(path: str | Path) -> ToolRegistry:
    """Build a registry from a manifest listing enabled tool ids (and versions).

    Manifest shape: {"tools": [{"tool_id": "...", "enabled": true}, ...]}.
    A version entry, when present, must match the built-in tool version.
    """
    manifest = json.loads(Path(path).read_text())
    by_id = {cls.tool_id: cls for cls in _BUILTIN_TOOLS}
    tools: list[Tool] = []
    for entry in manifest.get("tools", []):
        tool_id = entry.get("tool_id")
        if tool_id not in by_id:
            raise ValueError(f"manifest names unknown tool {tool_id!r}")
        if not entry.get("enabled", True):
            continue
        tool = by_id[tool_id]()
        wanted = entry.get("version")
        if wanted is not None and wanted != tool.version:
            raise ValueError(f"tool {tool_id!r} version {tool.version} does not satisfy manifest {wanted}")
        tools.append(tool)
    return ToolRegistry(tools)
