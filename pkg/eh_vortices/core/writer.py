"""Output files: curve JSON, topology CSV, key-value reports, polynomial dumps."""

from __future__ import annotations

import json
import os
from collections.abc import Iterable, Sequence
from pathlib import Path
from typing import Any

import pandas as pd

from eh_vortices.core.models import TopologyReport, VortexCurve

TOPOLOGY_COLUMNS = ("time", "component_count", "radius", "planarity", "arclength")


def atomic_write_text(path: Path, text: str) -> Path:
    """Write through a sibling temp file and rename, so readers never see half a file."""
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(f".{path.name}.tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)
    return path


def curve_document(
    time: float,
    curves: Sequence[VortexCurve],
    config: dict[str, Any],
    extra: dict[str, Any] | None = None,
) -> dict[str, Any]:
    document: dict[str, Any] = {
        "time": float(time),
        "config": config,
        "curves": [c.to_dict() for c in curves],
    }
    document.update(extra or {})
    return document


def write_json(path: Path, document: dict[str, Any]) -> Path:
    return atomic_write_text(path, json.dumps(document, indent=2, sort_keys=True) + "\n")


def topology_table(reports: Sequence[TopologyReport]) -> pd.DataFrame:
    """One row per frame; shape columns describe the longest component (0 if none)."""
    rows = []
    for report in reports:
        largest = report.largest()
        rows.append(
            {
                "time": report.time,
                "component_count": report.component_count,
                "radius": largest.ring_radius if largest else 0.0,
                "planarity": max(
                    (c.planarity_deviation for c in report.components), default=0.0
                ),
                "arclength": sum(c.arc_length for c in report.components),
            }
        )
    return pd.DataFrame(rows, columns=list(TOPOLOGY_COLUMNS))


def write_csv(path: Path, table: pd.DataFrame, config: dict[str, Any]) -> Path:
    """CSV preceded by a ``# config=`` line echoing the run configuration."""
    header = f"# config={json.dumps(config, sort_keys=True)}\n"
    body = table.to_csv(index=False, float_format="%.10g", lineterminator="\n")
    return atomic_write_text(path, header + body)


def write_key_values(
    path: Path, pairs: Iterable[tuple[str, str]], config: dict[str, Any] | None = None
) -> Path:
    lines = [f"{key}={value}" for key, value in pairs]
    if config is not None:
        lines.append(f"config={json.dumps(config, sort_keys=True)}")
    return atomic_write_text(path, "\n".join(lines) + "\n")


def format_key_values(pairs: Iterable[tuple[str, str]]) -> str:
    return "\n".join(f"{key}={value}" for key, value in pairs)
