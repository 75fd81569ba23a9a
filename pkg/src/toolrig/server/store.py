"""Append-only artifact store with journal replay.

Artifacts are keyed by (run_id, problem_id, step_id); re-persisting a step is
an error.  The journal holds one canonical-JSON event per line in one file
per run, so replaying a journal directory reconstructs an identical index —
a server can be killed after any prefix of operations and restarted without
losing previously computed traces.
"""

from __future__ import annotations

import hashlib
import json
import re
import threading
from pathlib import Path
from typing import Any

from ..jsonutil import canonical_dumps

DEFAULT_RUN_ID = "default"


class DuplicateStepError(Exception):
    def __init__(self, problem_id: str, step_id: str):
        super().__init__(f"step {step_id!r} already persisted for problem {problem_id!r}")
        self.problem_id = problem_id
        self.step_id = step_id


def result_id_for(problem_id: str, step_id: str) -> str:
    return f"{problem_id}-{step_id}-result"


def _safe_filename(run_id: str) -> str:
    cleaned = re.sub(r"[^A-Za-z0-9._-]", "_", run_id)
    if cleaned != run_id:
        digest = hashlib.sha256(run_id.encode()).hexdigest()[:8]
        cleaned = f"{cleaned}-{digest}"
    return f"{cleaned}.jsonl"


class _RunState:
    __slots__ = ("index", "order", "seq")

    def __init__(self):
        self.index: dict[tuple[str, str], dict[str, Any]] = {}
        self.order: list[dict[str, Any]] = []
        self.seq = 0


class ContextStore:
    """Thread-safe artifact store; ``journal_dir=None`` keeps it in memory only."""

    def __init__(self, journal_dir: str | Path | None = None):
        self._lock = threading.RLock()
        self._runs: dict[str, _RunState] = {}
        self._journal_dir = Path(journal_dir) if journal_dir is not None else None
        if self._journal_dir is not None:
            self._journal_dir.mkdir(parents=True, exist_ok=True)
            self._replay()

    def _run(self, run_id: str) -> _RunState:
        if run_id not in self._runs:
            self._runs[run_id] = _RunState()
        return self._runs[run_id]

    def _replay(self) -> None:
        for path in sorted(self._journal_dir.glob("*.jsonl")):
            with path.open() as handle:
                for line in handle:
                    line = line.strip()
                    if not line:
                        continue
                    event = json.loads(line)
                    if event.get("event") == "reset":
                        self._apply_reset(event.get("run_id"), event.get("problem_id"))
                    else:
                        self._apply_artifact(event)

    def _apply_artifact(self, artifact: dict[str, Any]) -> None:
        run = self._run(artifact.get("run_id", DEFAULT_RUN_ID))
        key = (artifact["problem_id"], artifact["step_id"])
        run.index[key] = artifact
        run.order.append(artifact)
        run.seq = max(run.seq, artifact["created_seq"] + 1)

    def _apply_reset(self, run_id: str | None, problem_id: str | None) -> None:
        if run_id is not None and problem_id is None:
            self._runs.pop(run_id, None)
            return
        for rid in [run_id] if run_id is not None else list(self._runs):
            run = self._runs.get(rid)
            if run is None:
                continue
            run.index = {k: v for k, v in run.index.items() if k[0] != problem_id}
            run.order = [a for a in run.order if a["problem_id"] != problem_id]

    def _append_journal(self, run_id: str, event: dict[str, Any]) -> None:
        if self._journal_dir is None:
            return
        path = self._journal_dir / _safe_filename(run_id)
        with path.open("a") as handle:
            handle.write(canonical_dumps(event) + "\n")
            handle.flush()

    def persist(
        self,
        run_id: str,
        problem_id: str,
        step_id: str,
        tool_id: str,
        version: str,
        input_payload: Any,
        output: Any,
        diagnostics: dict[str, Any],
    ) -> dict[str, Any]:
        """Append one artifact; raises DuplicateStepError on a step-id collision."""
        with self._lock:
            run = self._run(run_id)
            key = (problem_id, step_id)
            if key in run.index:
                raise DuplicateStepError(problem_id, step_id)
            artifact = {
                "result_id": result_id_for(problem_id, step_id),
                "run_id": run_id,
                "problem_id": problem_id,
                "step_id": step_id,
                "tool_id": tool_id,
                "version": version,
                "input": input_payload,
                "output": output,
                "diagnostics": diagnostics,
                "created_seq": run.seq,
            }
            run.seq += 1
            run.index[key] = artifact
            run.order.append(artifact)
            self._append_journal(run_id, artifact)
            return artifact

    def has_step(self, run_id: str, problem_id: str, step_id: str) -> bool:
        with self._lock:
            return (problem_id, step_id) in self._runs.get(run_id, _RunState()).index

    def artifacts_at(self, run_id: str, problem_id: str, step_id: str) -> list[dict[str, Any]]:
        with self._lock:
            run = self._runs.get(run_id)
            if run is None:
                return []
            artifact = run.index.get((problem_id, step_id))
            return [artifact] if artifact is not None else []

    def trace(self, run_id: str, problem_id: str) -> list[dict[str, Any]]:
        with self._lock:
            run = self._runs.get(run_id)
            if run is None:
                return []
            return [a for a in run.order if a["problem_id"] == problem_id]

    def reset(self, run_id: str | None = None, problem_id: str | None = None) -> None:
        """Drop a namespace from the index; the journal records the supersession."""
        with self._lock:
            if run_id is None and problem_id is None:
                return
            journal_runs = [run_id] if run_id is not None else list(self._runs)
            self._apply_reset(run_id, problem_id)
            event = {"event": "reset", "run_id": run_id, "problem_id": problem_id}
            for rid in journal_runs:
                self._append_journal(rid, event)
