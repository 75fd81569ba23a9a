"""Parametric problem bank: templates, seeded instances, validation."""

from .instantiate import GenerationError, instantiate, resolve_pattern
from .matching import (
    equations_equivalent,
    exprs_equivalent,
    inputs_match,
    numbers_close,
    payload_equivalent,
    roots_match,
)
from .model import (
    BankError,
    Checkpoint,
    ProblemInstance,
    ProblemTemplate,
    ReferenceEntry,
    TraceStep,
    bundle_load,
    bundle_save,
)
from .validate import SeedReport, ValidationReport, checkpoint_passes, validate

__all__ = [
    "BankError",
    "Checkpoint",
    "GenerationError",
    "ProblemInstance",
    "ProblemTemplate",
    "ReferenceEntry",
    "SeedReport",
    "TraceStep",
    "ValidationReport",
    "bundle_load",
    "bundle_save",
    "checkpoint_passes",
    "equations_equivalent",
    "exprs_equivalent",
    "inputs_match",
    "instantiate",
    "numbers_close",
    "payload_equivalent",
    "resolve_pattern",
    "roots_match",
    "validate",
]
