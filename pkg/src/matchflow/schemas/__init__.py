"""Versioned JSON schemas for every artifact the CLI emits."""

import json
from importlib import resources

SCHEMA_NAMES = (
    "serve_stats",
    "cleaning_report",
    "model",
    "metrics",
    "momentum_swings",
    "ahp",
    "trend",
    "randomness",
    "sweep",
    "scalogram",
    "report",
)


def load_schema(name: str) -> dict:
    if name not in SCHEMA_NAMES:
        raise KeyError(f"no schema named {name!r}; known: {SCHEMA_NAMES}")
    path = resources.files(__package__).joinpath(f"{name}.schema.json")
    return json.loads(path.read_text())
