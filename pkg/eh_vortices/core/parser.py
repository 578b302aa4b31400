"""Reading output documents back in."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np
import pandas as pd

from eh_vortices.core.models import VortexCurve
from eh_vortices.exceptions import ParseError


@dataclass
class CurveDocument:
    """A per-frame curve file."""

    time: float
    curves: list[VortexCurve]
    config: dict[str, Any] = field(default_factory=dict)
    grid: dict[str, Any] = field(default_factory=dict)


def _parse_curve(data: Any, index: int) -> VortexCurve:
    try:
        points = np.asarray(data["points"], dtype=np.float64).reshape(-1, 3)
        closed = bool(data["closed"])
    except (KeyError, TypeError, ValueError) as exc:
        msg = f"curve {index}: expected closed flag and [[x, y, z], ...] points"
        raise ParseError(msg) from exc
    component = int(data.get("component_id", index))
    return VortexCurve(points=points, closed=closed, component_id=component)


def parse_curve_document(data: Any) -> CurveDocument:
    if not isinstance(data, dict) or "time" not in data or "curves" not in data:
        msg = "curve document needs 'time' and 'curves' fields"
        raise ParseError(msg)
    try:
        time = float(data["time"])
    except (TypeError, ValueError) as exc:
        msg = f"curve document time is not a number: {data['time']!r}"
        raise ParseError(msg) from exc
    return CurveDocument(
        time=time,
        curves=[_parse_curve(c, k) for k, c in enumerate(data["curves"])],
        config=dict(data.get("config", {})),
        grid=dict(data.get("grid", {})),
    )


def read_curve_document(path: Path) -> CurveDocument:
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        msg = f"{path}: not valid JSON: {exc}"
        raise ParseError(msg) from exc
    return parse_curve_document(raw)


def read_topology_csv(path: Path) -> pd.DataFrame:
    """Topology table, skipping the leading config comment."""
    try:
        return pd.read_csv(path, comment="#")
    except (pd.errors.ParserError, pd.errors.EmptyDataError) as exc:
        msg = f"{path}: cannot read topology table: {exc}"
        raise ParseError(msg) from exc


def read_key_values(text: str) -> dict[str, str]:
    pairs: dict[str, str] = {}
    for number, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        key, sep, value = line.partition("=")
        if not sep:
            msg = f"line {number}: expected key=value, got {line!r}"
            raise ParseError(msg)
        pairs[key.strip()] = value.strip()
    return pairs
