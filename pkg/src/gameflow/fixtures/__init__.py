"""Shipped fixture data: two digitized playoff games, TFS table, demo model.

``chiba_ryukyu`` and ``chiba_tokyo`` are game bundles whose replayed
dominance paths reproduce the shipped minute-by-minute reference series;
``reference_series`` returns those series for direct comparison.
"""

from __future__ import annotations

import csv
import json
from importlib import resources
from pathlib import Path

_ROOT = resources.files(__name__)


def path(name: str) -> Path:
    """Filesystem path of a fixture file or bundle directory."""
    return Path(str(_ROOT / name))


def tfs_table() -> dict[str, float]:
    """Published league TFS values used by the shipped bundles."""
    doc = json.loads((_ROOT / "opponents.json").read_text(encoding="utf-8"))
    return {k: float(v) for k, v in doc.items()}


def reference_series(name: str) -> dict[str, list[float]]:
    """Digitized (t_min, mt, pw) reference series for a shipped game."""
    out: dict[str, list[float]] = {"t_min": [], "mt": [], "pw": []}
    with open(path(f"{name}_series.csv"), newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            out["t_min"].append(float(row["t_min"]))
            out["mt"].append(float(row["mt"]))
            out["pw"].append(float(row["pw"]))
    return out
