"""Episode execution and the resumable, parallel evaluation run.

Each episode owns a private context namespace (run_id = model/instance).
Finished episodes checkpoint to the resume directory as canonical-JSON files;
re-running with the same directory skips them and reproduces a byte-identical
report, regardless of parallelism.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable

from ..agents import Agent, make_agent
from ..agents.base import Observation
from ..bank import ProblemInstance
from ..jsonutil import canonical_dumps
from ..server import ContextService
from .aggregate import Report, episode_row
from .episode import Episode
from .protocol import enforce, harvest_numbers
from .reconstruct import reconstruct
from .scoring import ScoreBreakdown, apply_external_judge, score

DEFAULT_STEP_BUDGET_FACTOR = 3
DEFAULT_TIME_BUDGET_S = 10.0


@dataclass
class RunConfig:
    models: tuple[str, ...]
    parallelism: int = 1
    resume_dir: str | Path | None = None
    step_budget: int | None = None  # None: 3 * min_steps per instance
    time_budget_s: float = DEFAULT_TIME_BUDGET_S
    seed: int = 0
    judge_endpoint: str | None = None
    stop_after: int | None = None  # run at most N new episodes (kill/resume tests)

    def to_json(self) -> dict[str, Any]:
        return {
            "models": list(self.models),
            "parallelism": self.parallelism,
            "resume_dir": str(self.resume_dir) if self.resume_dir else None,
            "step_budget": self.step_budget,
            "time_budget_s": self.time_budget_s,
            "seed": self.seed,
            "judge_endpoint": self.judge_endpoint,
        }


def _observation(
    instance: ProblemInstance,
    service: ContextService,
    last_response: dict[str, Any] | None,
    result_ids: list[str],
    remaining: int,
) -> Observation:
    _, listing = service.tools()
    return Observation(
        statement=instance.statement,
        sub_questions=tuple(instance.sub_questions),
        tool_descriptors=tuple(listing["tools"]),
        answer_keys=tuple(instance.reference),
        last_response=last_response,
        result_ids=tuple(result_ids),
        remaining_steps=remaining,
    )


def run_episode(
    agent: Agent,
    instance: ProblemInstance,
    service: ContextService,
    run_id: str,
    step_budget: int | None = None,
) -> Episode:
    budget = step_budget if step_budget is not None else DEFAULT_STEP_BUDGET_FACTOR * instance.min_steps
    episode = Episode(model=agent.name, instance_id=instance.instance_id, run_id=run_id)
    known: set[float] = set()
    harvest_numbers(instance.statement, known)

    last_response: dict[str, Any] | None = None
    result_ids: list[str] = []
    actionless_streak = 0
    max_turns = budget + 16

    for _turn in range(max_turns):
        obs = _observation(instance, service, last_response, result_ids, budget - episode.executed_calls)
        try:
            text = agent.respond(obs)
        except Exception as err:  # agent backends may die; the run continues
            episode.errored = f"agent failure: {err}"
            break
        episode.transcript.append(text)
        outcome = enforce(text, known)

        if outcome.kind == "final":
            episode.completion_marker_seen = True
            episode.final_answer = outcome.final_answer or {}
            if outcome.calls:
                episode.flags["multi_call"] = True
            if outcome.manual_suspect:
                episode.flags["manual_computation"] = True
                episode.manual_assertions.append(
                    {"asserted": outcome.asserted_numbers, "numbers": outcome.prose_numbers}
                )
            break

        if outcome.kind == "malformed":
            episode.flags["malformed"] = True
            actionless_streak += 1
            if actionless_streak >= 2:
                break
            continue

        if outcome.kind in ("accepted", "multi_call"):
            if outcome.kind == "multi_call":
                episode.flags["multi_call"] = True
            actionless_streak = 0
            for call in outcome.calls:  # multi-call: sequential execution in written order
                last_response = _execute_call(episode, instance, service, run_id, call, known)
                if last_response is not None and "result_id" in last_response:
                    result_ids.append(last_response["result_id"])
                if episode.executed_calls >= budget:
                    episode.flags["timeout"] = True
                    break
            if episode.flags["timeout"]:
                break
            continue

        # zero-call prose
        if outcome.manual_suspect:
            episode.flags["manual_computation"] = True
            episode.manual_assertions.append(
                {"asserted": outcome.asserted_numbers, "numbers": outcome.prose_numbers}
            )
        actionless_streak += 1
        if actionless_streak >= 2:
            break
    else:
        episode.flags["timeout"] = True

    return episode


def _execute_call(
    episode: Episode,
    instance: ProblemInstance,
    service: ContextService,
    run_id: str,
    call: dict[str, Any],
    known: set[float],
) -> dict[str, Any] | None:
    episode.executed_calls += 1
    step_id = call.get("step_id") or f"auto-{episode.executed_calls:02d}"
    body = {
        "problem_id": instance.instance_id,
        "run_id": run_id,
        "step_id": step_id,
        "tool_id": call.get("tool_id", ""),
        "input": call.get("input", {}),
        "persist": bool(call.get("persist", True)),
    }
    status, response = service.call(body)
    if status == 200 and "result_id" in response:
        artifact = service.store.trace(run_id, instance.instance_id)[-1]
        episode.artifacts.append(artifact)
        harvest_numbers(artifact.get("output"), known)
        harvest_numbers(artifact.get("input"), known)
    return response


AgentFactory = Callable[[str, ProblemInstance], Agent]


@dataclass
class _Job:
    model: str
    instance: ProblemInstance

    @property
    def key(self) -> tuple[str, str]:
        return (self.model, self.instance.instance_id)


def run(
    models: list[str],
    instances: list[ProblemInstance],
    config: RunConfig,
    agent_factory: AgentFactory = make_agent,
    service: ContextService | None = None,
) -> Report:
    """Evaluate models x instances; deterministic, parallel, resumable."""
    service = service if service is not None else ContextService()
    resume_dir = Path(config.resume_dir) if config.resume_dir else None
    episode_dir = resume_dir / "episodes" if resume_dir else None
    if episode_dir:
        episode_dir.mkdir(parents=True, exist_ok=True)
        (resume_dir / "run_config.json").write_text(canonical_dumps(config.to_json()))

    jobs = [
        _Job(model, instance)
        for model in sorted(models)
        for instance in sorted(instances, key=lambda x: x.instance_id)
    ]
    instances_by_id = {i.instance_id: i for i in instances}

    records: dict[tuple[str, str], dict[str, Any]] = {}
    pending: list[_Job] = []
    for job in jobs:
        path = episode_dir / f"{job.model}__{job.instance.instance_id}.json" if episode_dir else None
        if path is not None and path.exists():
            records[job.key] = json.loads(path.read_text())
        else:
            pending.append(job)

    if config.stop_after is not None:
        pending = pending[: config.stop_after]

    def execute(job: _Job) -> tuple[tuple[str, str], dict[str, Any]]:
        run_id = f"{job.model}/{job.instance.instance_id}"
        service.store.reset(run_id=run_id)  # per-episode isolation
        agent = agent_factory(job.model, job.instance)
        agent.name = job.model
        episode = run_episode(agent, job.instance, service, run_id, config.step_budget)
        episode = reconstruct(episode, job.instance, service)
        breakdown = score(episode, job.instance)
        if config.judge_endpoint:
            breakdown = apply_external_judge(breakdown, episode, job.instance, config.judge_endpoint)
        record = {
            "episode": episode.to_json(),
            "breakdown": breakdown.to_json(),
            "min_steps": job.instance.min_steps,
            "wall_time_ms": episode.wall_time_ms,
        }
        if episode_dir:
            path = episode_dir / f"{job.model}__{job.instance.instance_id}.json"
            tmp = path.with_suffix(".tmp")
            tmp.write_text(canonical_dumps(record))
            tmp.replace(path)
        return job.key, record

    if pending:
        if config.parallelism <= 1:
            for job in pending:
                key, record = execute(job)
                records[key] = record
        else:
            with ThreadPoolExecutor(max_workers=config.parallelism) as pool:
                for key, record in pool.map(execute, pending):
                    records[key] = record

    rows = []
    for job in jobs:
        record = records.get(job.key)
        if record is None:
            continue  # interrupted run: remaining jobs resume later
        rows.append(
            episode_row(
                job.model,
                job.instance.instance_id,
                ScoreBreakdown.from_json(record["breakdown"]),
                Episode.from_json(record["episode"]),
                record["min_steps"],
                record["wall_time_ms"],
            )
        )
    report = Report(rows=rows)
    if instances_by_id and len(records) < len(jobs):
        report.partial = True
    return report
