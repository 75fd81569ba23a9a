"""Evaluation engine: protocol enforcement, reconstruction, scoring, reports."""

from .aggregate import CSV_COLUMNS, STEP_BUCKETS, Report, bucket_for, episode_row, report_from_csv
from .episode import VIOLATION_FLAGS, Episode
from .protocol import EnforceOutcome, ParsedResponse, enforce, harvest_numbers, parse_response
from .reconstruct import reconstruct
from .runner import RunConfig, run, run_episode
from .scoring import ScoreBreakdown, align_trace, apply_external_judge, score

__all__ = [
    "CSV_COLUMNS",
    "EnforceOutcome",
    "Episode",
    "ParsedResponse",
    "Report",
    "RunConfig",
    "STEP_BUCKETS",
    "ScoreBreakdown",
    "VIOLATION_FLAGS",
    "align_trace",
    "apply_external_judge",
    "bucket_for",
    "enforce",
    "episode_row",
    "harvest_numbers",
    "parse_response",
    "reconstruct",
    "report_from_csv",
    "run",
    "run_episode",
    "score",
]
