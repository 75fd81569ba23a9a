"""Interaction-protocol enforcement.

A response may contain at most one tool invocation; the literal marker
PROBLEM_COMPLETED terminates the episode.  Zero-call responses that assert
new numeric results in prose raise a manual-computation suspicion; multi-call
responses retain the ordered call list for reconstruction.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Any

from ..agents.base import COMPLETION_MARKER

_BLOCK_RE = re.compile(r"```(tool_call|final_answer)\s*\n(.*?)```", re.DOTALL)
_NUMBER_RE = re.compile(r"-?\d+(?:\.\d+)?(?:[eE]-?\d+)?")
# prose assertions of computed values: "= -1.0", "answer is 42", "result: 3.5"
_ASSERTION_RE = re.compile(
    r"(?:=\s*|(?:answer|result|value)\s+(?:is|:)\s*)(-?\d+(?:\.\d+)?(?:[eE]-?\d+)?)",
    re.IGNORECASE,
)

MALFORMED_CALL = "MALFORMED_CALL"


@dataclass
class ParsedResponse:
    calls: list[Any] = field(default_factory=list)  # dicts, or MALFORMED_CALL sentinels
    final_answer: dict[str, Any] | None = None
    marker_seen: bool = False
    prose: str = ""


@dataclass
class EnforceOutcome:
    kind: str  # accepted | multi_call | final | malformed | none
    calls: list[dict[str, Any]] = field(default_factory=list)
    final_answer: dict[str, Any] | None = None
    marker_seen: bool = False
    manual_suspect: bool = False
    asserted_numbers: list[float] = field(default_factory=list)
    prose_numbers: list[float] = field(default_factory=list)


def parse_response(text: str) -> ParsedResponse:
    parsed = ParsedResponse()
    parsed.marker_seen = COMPLETION_MARKER in text
    for kind, body in _BLOCK_RE.findall(text):
        try:
            payload = json.loads(body)
        except json.JSONDecodeError:
            payload = MALFORMED_CALL
        if kind == "tool_call":
            parsed.calls.append(payload)
        elif isinstance(payload, dict):
            parsed.final_answer = payload
    parsed.prose = _BLOCK_RE.sub(" ", text).replace(COMPLETION_MARKER, " ")
    return parsed


def enforce(text: str, known_numbers: set[float] | None = None) -> EnforceOutcome:
    """Classify one agent response under the single-call, tools-only rules."""
    parsed = parse_response(text)
    outcome = EnforceOutcome(kind="none")
    outcome.marker_seen = parsed.marker_seen
    outcome.final_answer = parsed.final_answer
    outcome.prose_numbers = [float(m.group(0)) for m in _NUMBER_RE.finditer(parsed.prose)]

    malformed = [c for c in parsed.calls if c == MALFORMED_CALL]
    calls = [c for c in parsed.calls if isinstance(c, dict)]

    if malformed:
        outcome.kind = "malformed"
        outcome.calls = calls
        return outcome

    if parsed.marker_seen:
        outcome.kind = "final"
        outcome.calls = calls  # calls alongside the marker still count as multi-call abuse
        _flag_manual(outcome, parsed.prose, known_numbers)
        return outcome

    if len(calls) == 1:
        outcome.kind = "accepted"
        outcome.calls = calls
        return outcome
    if len(calls) > 1:
        outcome.kind = "multi_call"
        outcome.calls = calls
        return outcome

    _flag_manual(outcome, parsed.prose, known_numbers)
    return outcome


def _flag_manual(outcome: EnforceOutcome, prose: str, known_numbers: set[float] | None) -> None:
    known = known_numbers or set()
    for match in _ASSERTION_RE.finditer(prose):
        value = float(match.group(1))
        if not _is_known(value, known):
            outcome.manual_suspect = True
            outcome.asserted_numbers.append(value)


def _is_known(value: float, known: set[float]) -> bool:
    return any(abs(value - k) <= 1e-9 * (1.0 + max(abs(value), abs(k))) for k in known)


def harvest_numbers(obj: Any, into: set[float]) -> None:
    """Collect every numeric leaf of a JSON-ish object (for the known-number set)."""
    if isinstance(obj, bool):
        return
    if isinstance(obj, (int, float)):
        into.add(float(obj))
    elif isinstance(obj, str):
        for match in _NUMBER_RE.finditer(obj):
            into.add(float(match.group(0)))
    elif isinstance(obj, dict):
        for v in obj.values():
            harvest_numbers(v, into)
    elif isinstance(obj, list):
        for v in obj:
            harvest_numbers(v, into)
