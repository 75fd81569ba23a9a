"""Deterministic, versioned computational tool suite."""

from .base import (
    Diagnostics,
    Tool,
    ToolDescriptor,
    ToolFailure,
    ToolResult,
    validate_payload,
)
from .registry import ToolRegistry, UnknownToolError, default_registry, registry_from_manifest

__all__ = [
    "Diagnostics",
    "Tool",
    "ToolDescriptor",
    "ToolFailure",
    "ToolRegistry",
    "ToolResult",
    "UnknownToolError",
    "default_registry",
    "registry_from_manifest",
    "validate_payload",
]
