"""toolrig: deterministic tool suite, persistent-context server, problem bank,
and rubric-based evaluation engine for tool-using agents."""

__version__ = "0.1.0"
