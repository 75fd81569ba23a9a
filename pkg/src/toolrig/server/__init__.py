"""Persistent-context protocol server: tool execution, step-keyed artifacts, queries."""

from .http import ContextServer
from .service import ContextService
from .store import DEFAULT_RUN_ID, ContextStore, DuplicateStepError, result_id_for

__all__ = [
    "ContextServer",
    "ContextService",
    "ContextStore",
    "DEFAULT_RUN_ID",
    "DuplicateStepError",
    "result_id_for",
]
