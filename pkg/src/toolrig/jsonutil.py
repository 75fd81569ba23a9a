"""Canonical JSON: sorted keys, compact separators, shortest float repr.

Every wire payload, journal line, and golden file goes through this module so
that byte-for-byte comparisons are meaningful.
"""

from __future__ import annotations

import json
from typing import Any


def canonical_dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), allow_nan=False)


def canonical_bytes(obj: Any) -> bytes:
    return canonical_dumps(obj).encode("utf-8")
