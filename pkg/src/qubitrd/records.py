"""Shared serialization of result records to text and plain dictionaries."""

from __future__ import annotations

import json
from typing import Any


def format_value(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.17g}"
    if isinstance(value, (dict, list, tuple)):
        return json.dumps(value, sort_keys=True, default=_jsonable)
    return str(value)


def _jsonable(value: Any):
    if isinstance(value, float):
        return value
    if hasattr(value, "item"):
        return value.item()
    raise TypeError(f"cannot serialize {type(value)!r}")


def record_to_text(items: list[tuple[str, Any]]) -> str:
    """Render one record as ``key: value`` lines."""
    return "\n".join(f"{key}: {format_value(value)}" for key, value in items) + "\n"
