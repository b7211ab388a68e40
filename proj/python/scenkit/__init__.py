"""Python access to the scenkit pipeline.

The heavy lifting happens in the compiled ``_scenkit`` extension; this module
adds thin conveniences on top.
"""

import json

from ._scenkit import (
    ArgumentError,
    ClassificationError,
    ConfigError,
    IoError,
    LookupError,
    SchemaError,
    ScenkitError,
    SpecError,
    TooShortError,
    ValidationError,
    complexity_class,
    default_weights,
    dump_config,
    extract,
    report,
    scenario_complexity,
    scene_count,
    score,
    simulate,
    synth,
)
from . import _scenkit

__version__ = "0.1.0"


def analyze(data_dir, recording_id, config=None):
    """Extraction stats and catalog entries (as dicts) for one recording."""
    stats, lines = _scenkit._analyze_lines(str(data_dir), recording_id, config)
    return stats, [json.loads(line) for line in lines]


def read_catalog(path):
    with open(path, encoding="utf-8") as f:
        return [json.loads(line) for line in f if line.strip()]


__all__ = [
    "ArgumentError",
    "ClassificationError",
    "ConfigError",
    "IoError",
    "LookupError",
    "SchemaError",
    "ScenkitError",
    "SpecError",
    "TooShortError",
    "ValidationError",
    "analyze",
    "complexity_class",
    "default_weights",
    "dump_config",
    "extract",
    "read_catalog",
    "report",
    "scenario_complexity",
    "scene_count",
    "score",
    "simulate",
    "synth",
]
