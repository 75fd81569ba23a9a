"""Report assembly: per-episode CSV rows, per-model summaries, difficulty buckets.

All emission is deterministic: rows sort by (model, instance_id), floats print
with shortest round-trip repr, and booleans as true/false, so identical runs
produce byte-identical files.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass, field
from typing import Any

from .episode import Episode
from .scoring import ScoreBreakdown

CSV_COLUMNS = (
    "model",
    "instance_id",
    "accuracy",
    "partial_total",
    "tool_usage",
    "correctness",
    "approach",
    "trace_fidelity",
    "verification_score",
    "reconstructed",
    "violations",
    "min_steps",
    "wall_time_ms",
)

STEP_BUCKETS = (6, 7, 8, 9, 10, 15)


def bucket_for(min_steps: int) -> int:
    """Smallest difficulty bucket holding the instance (short tasks pool at 6)."""
    for bucket in STEP_BUCKETS:
        if min_steps <= bucket:
            return bucket
    return STEP_BUCKETS[-1]


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def episode_row(
    model: str,
    instance_id: str,
    breakdown: ScoreBreakdown,
    episode: Episode,
    min_steps: int,
    wall_time_ms: int,
) -> dict[str, Any]:
    return {
        "model": model,
        "instance_id": instance_id,
        "accuracy": breakdown.accuracy,
        "partial_total": breakdown.partial_total,
        "tool_usage": breakdown.tool_usage,
        "correctness": breakdown.correctness,
        "approach": breakdown.approach,
        "trace_fidelity": breakdown.trace_fidelity,
        "verification_score": breakdown.verification_score,
        "reconstructed": episode.reconstructed,
        "violations": ";".join(episode.violation_names()),
        "min_steps": min_steps,
        "wall_time_ms": wall_time_ms,
        "completion": episode.completion_marker_seen,
    }


@dataclass
class Report:
    rows: list[dict[str, Any]] = field(default_factory=list)
    partial: bool = False

    def sorted_rows(self) -> list[dict[str, Any]]:
        return sorted(self.rows, key=lambda r: (r["model"], r["instance_id"]))

    def csv(self) -> str:
        lines = [",".join(CSV_COLUMNS)]
        for row in self.sorted_rows():
            lines.append(",".join(_cell(row[column]) for column in CSV_COLUMNS))
        return "\n".join(lines) + "\n"

    def models(self) -> list[str]:
        return sorted({row["model"] for row in self.rows})

    def summary(self) -> list[dict[str, Any]]:
        out = []
        for model in self.models():
            rows = [r for r in self.sorted_rows() if r["model"] == model]
            partials = [r["partial_total"] for r in rows]
            violations: dict[str, int] = {}
            for row in rows:
                for name in filter(None, row["violations"].split(";")):
                    violations[name] = violations.get(name, 0) + 1
            completions = [r["completion"] for r in rows if "completion" in r]
            out.append(
                {
                    "model": model,
                    "episodes": len(rows),
                    "mean_partial": statistics.fmean(partials) if partials else 0.0,
                    "median_partial": statistics.median(partials) if partials else 0.0,
                    "accuracy_pct": 100.0 * sum(r["accuracy"] for r in rows) / len(rows),
                    # the row CSV does not carry the marker; summaries rebuilt from
                    # it leave completion blank rather than guessing
                    "completion_pct": (
                        100.0 * sum(completions) / len(completions)
                        if len(completions) == len(rows)
                        else None
                    ),
                    "violations_multi_call": violations.get("multi_call", 0),
                    "violations_manual_computation": violations.get("manual_computation", 0),
                    "violations_timeout": violations.get("timeout", 0),
                    "violations_malformed": violations.get("malformed", 0),
                }
            )
        return out

    def summary_csv(self) -> str:
        columns = (
            "model",
            "episodes",
            "mean_partial",
            "median_partial",
            "accuracy_pct",
            "completion_pct",
            "violations_multi_call",
            "violations_manual_computation",
            "violations_timeout",
            "violations_malformed",
        )
        lines = [",".join(columns)]
        for entry in self.summary():
            lines.append(",".join(_cell(entry[c]) for c in columns))
        return "\n".join(lines) + "\n"

    def buckets(self) -> list[dict[str, Any]]:
        """Accuracy by min-step bucket; empty buckets emit with a blank accuracy."""
        out = []
        for model in self.models():
            rows = [r for r in self.sorted_rows() if r["model"] == model]
            for bucket in STEP_BUCKETS:
                hits = [r for r in rows if bucket_for(r["min_steps"]) == bucket]
                out.append(
                    {
                        "model": model,
                        "bucket": bucket,
                        "episodes": len(hits),
                        "accuracy_pct": (
                            100.0 * sum(r["accuracy"] for r in hits) / len(hits) if hits else None
                        ),
                    }
                )
        return out

    def buckets_csv(self) -> str:
        lines = ["model,bucket,episodes,accuracy_pct"]
        for entry in self.buckets():
            accuracy = "" if entry["accuracy_pct"] is None else _cell(entry["accuracy_pct"])
            lines.append(f"{entry['model']},{entry['bucket']},{entry['episodes']},{accuracy}")
        return "\n".join(lines) + "\n"


def report_from_csv(text: str) -> Report:
    """Rebuild a row-level report from its CSV emission (for the report command)."""
    lines = [line for line in text.strip().split("\n") if line]
    header = lines[0].split(",")
    rows = []
    for line in lines[1:]:
        cells = dict(zip(header, line.split(",")))
        rows.append(
            {
                "model": cells["model"],
                "instance_id": cells["instance_id"],
                "accuracy": cells["accuracy"] == "true",
                "partial_total": float(cells["partial_total"]),
                "tool_usage": float(cells["tool_usage"]),
                "correctness": float(cells["correctness"]),
                "approach": float(cells["approach"]),
                "trace_fidelity": float(cells["trace_fidelity"]),
                "verification_score": float(cells["verification_score"]),
                "reconstructed": cells["reconstructed"] == "true",
                "violations": cells["violations"],
                "min_steps": int(cells["min_steps"]),
                "wall_time_ms": int(cells["wall_time_ms"]),
            }
        )
    return Report(rows=rows)
