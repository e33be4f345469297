"""JSON report envelope with a fixed key order."""
from __future__ import annotations

import json

KEYS = ("command", "inputs", "result", "witnesses", "notes")


def jsonable(x):
    """Tuples and frozensets become lists; sets are sorted so output is stable."""
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (set, frozenset)):
        return [jsonable(v) for v in sorted(x)]
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if hasattr(x, "item"):  # numpy scalars
        return x.item()
    return x


def make_report(command: str, inputs: dict, result: dict, witnesses: dict | None = None,
                notes: list | None = None) -> dict:
    return {"command": command, "inputs": jsonable(inputs), "result": jsonable(result),
            "witnesses": jsonable(witnesses or {}), "notes": list(notes or [])}


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2) + "\n"
