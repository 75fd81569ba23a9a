"""Episode state: transcript, executed trace, violation flags, final answer."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

VIOLATION_FLAGS = ("multi_call", "manual_computation", "timeout", "malformed")


@dataclass
class Episode:
    model: str
    instance_id: str
    run_id: str
    transcript: list[str] = field(default_factory=list)
    artifacts: list[dict[str, Any]] = field(default_factory=list)  # persisted, seq order
    flags: dict[str, bool] = field(
        default_factory=lambda: {name: False for name in VIOLATION_FLAGS}
    )
    manual_assertions: list[dict[str, Any]] = field(default_factory=list)
    completion_marker_seen: bool = False
    final_answer: dict[str, Any] | None = None
    reconstructed: bool = False
    unreconstructed_violation: bool = False
    executed_calls: int = 0
    errored: str | None = None

    @property
    def any_violation(self) -> bool:
        return any(self.flags.values())

    def violation_names(self) -> list[str]:
        return sorted(name for name, on in self.flags.items() if on)

    @property
    def wall_time_ms(self) -> int:
        # deterministic virtual time: reports must be byte-identical across
        # parallelism levels and resumed runs, so wall time is a turn/call count
        return 1000 * len(self.transcript) + 10 * self.executed_calls

    def to_json(self) -> dict[str, Any]:
        return {
            "model": self.model,
            "instance_id": self.instance_id,
            "run_id": self.run_id,
            "transcript": self.transcript,
            "artifacts": self.artifacts,
            "flags": self.flags,
            "manual_assertions": self.manual_assertions,
            "completion_marker_seen": self.completion_marker_seen,
            "final_answer": self.final_answer,
            "reconstructed": self.reconstructed,
            "unreconstructed_violation": self.unreconstructed_violation,
            "executed_calls": self.executed_calls,
            "errored": self.errored,
        }

    @staticmethod
    def from_json(data: dict[str, Any]) -> "Episode":
        episode = Episode(data["model"], data["instance_id"], data["run_id"])
        episode.transcript = list(data.get("transcript", []))
        episode.artifacts = list(data.get("artifacts", []))
        episode.flags = {name: bool(data.get("flags", {}).get(name, False)) for name in VIOLATION_FLAGS}
        episode.manual_assertions = list(data.get("manual_assertions", []))
        episode.completion_marker_seen = bool(data.get("completion_marker_seen", False))
        episode.final_answer = data.get("final_answer")
        episode.reconstructed = bool(data.get("reconstructed", False))
        episode.unreconstructed_violation = bool(data.get("unreconstructed_violation", False))
        episode.executed_calls = int(data.get("executed_calls", 0))
        episode.errored = data.get("errored")
        return episode
