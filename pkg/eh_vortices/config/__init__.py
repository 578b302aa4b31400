"""Run configuration loading and validation."""

from __future__ import annotations

import json
import re
from fractions import Fraction
from pathlib import Path
from typing import Any

from eh_vortices.core.models import (
    DEFAULT_ALPHA,
    MIN_RESOLUTION,
    CaseTag,
    CorrectionSource,
    GridSpec,
    RunConfig,
)
from eh_vortices.exceptions import ConfigError, ParameterError
from eh_vortices.logging import get_logger

_log = get_logger(__name__)

COMMANDS = ("verify", "track", "render", "integrate")
CAMERAS = ("ring", "pair", "pair-side")
_MUTATION = re.compile(r"^(alpha|beta|gamma)\.[xyz]:\S+$")
_TRUE_WORDS = frozenset({"true", "yes", "on", "1"})
_FALSE_WORDS = frozenset({"false", "no", "off", "0"})


def _parse_float(data: dict[str, Any], key: str, default: float) -> float:
    raw = data.get(key, default)
    try:
        return float(raw)
    except (TypeError, ValueError) as exc:
        msg = f"{key}: expected a number, got {raw!r}"
        raise ConfigError(msg) from exc


def _parse_int(data: dict[str, Any], key: str, default: int) -> int:
    raw = data.get(key, default)
    try:
        return int(raw)
    except (TypeError, ValueError) as exc:
        msg = f"{key}: expected an integer, got {raw!r}"
        raise ConfigError(msg) from exc


def _parse_bool(data: dict[str, Any], key: str, default: bool) -> bool:
    raw = data.get(key, default)
    if isinstance(raw, bool):
        return raw
    if isinstance(raw, int) and raw in (0, 1):
        return bool(raw)
    if isinstance(raw, str) and raw.strip().lower() in _TRUE_WORDS | _FALSE_WORDS:
        return raw.strip().lower() in _TRUE_WORDS
    msg = f"{key}: expected true or false, got {raw!r}"
    raise ConfigError(msg)


def _parse_fraction(data: dict[str, Any], key: str, default: Fraction) -> Fraction:
    raw = data.get(key, default)
    try:
        return Fraction(str(raw))
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        msg = f"{key}: expected a rational number, got {raw!r}"
        raise ConfigError(msg) from exc


def _parse_interval(raw: Any, key: str) -> tuple[float, float]:
    try:
        lo, hi = (float(v) for v in (raw.split(":") if isinstance(raw, str) else raw))
    except (TypeError, ValueError) as exc:
        msg = f"{key}: expected lo:hi, got {raw!r}"
        raise ConfigError(msg) from exc
    if not lo < hi:
        msg = f"{key}: lower bound {lo} must be below upper bound {hi}"
        raise ConfigError(msg)
    return lo, hi


def parse_time_range(raw: str) -> tuple[float, float, int]:
    """``start:end:frames`` (closed interval, uniformly spaced)."""
    parts = raw.split(":")
    if len(parts) != 3:
        msg = f"t: expected start:end:frames, got {raw!r}"
        raise ConfigError(msg)
    try:
        start, end, frames = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        msg = f"t: expected start:end:frames, got {raw!r}"
        raise ConfigError(msg) from exc
    if frames < 1:
        msg = f"t: frame count must be positive, got {frames}"
        raise ConfigError(msg)
    return start, end, frames


def _parse_grid(data: dict[str, Any]) -> GridSpec:
    nested = data.get("grid")
    if nested is not None:
        # echoed configs carry the grid as {bounds, resolution, offset}
        if not isinstance(nested, dict):
            msg = f"grid: expected a mapping of bounds, resolution and offset, got {nested!r}"
            raise ConfigError(msg)
        data = {**nested, **{k: v for k, v in data.items() if k != "grid"}}
    if "bounds" in data:
        raw = data["bounds"]
        if not isinstance(raw, list) or len(raw) != 3:
            msg = f"bounds: expected three lo:hi intervals, got {raw!r}"
            raise ConfigError(msg)
        bounds = [_parse_interval(b, f"bounds[{k}]") for k, b in enumerate(raw)]
    else:
        box = _parse_float(data, "box", 4.0)
        if not box > 0:
            msg = f"box: half-width must be positive, got {box}"
            raise ConfigError(msg)
        bounds = [(-box, box)] * 3
    if data.get("y_bounds") is not None:
        bounds[1] = _parse_interval(data["y_bounds"], "y_bounds")

    raw_res = data.get("resolution", 48)
    try:
        res = [int(raw_res)] * 3 if not isinstance(raw_res, list) else [int(r) for r in raw_res]
    except (TypeError, ValueError) as exc:
        msg = f"resolution: expected an integer or three integers, got {raw_res!r}"
        raise ConfigError(msg) from exc
    if len(res) != 3 or min(res) < MIN_RESOLUTION:
        msg = f"resolution: need {MIN_RESOLUTION} or more cells per axis, got {raw_res!r}"
        raise ConfigError(msg)
    raw_offset = data.get("offset", (0.0, 0.0, 0.0))
    try:
        offset = tuple(float(o) for o in raw_offset)
    except (TypeError, ValueError) as exc:
        msg = f"offset: expected three fractions of a cell, got {raw_offset!r}"
        raise ConfigError(msg) from exc
    if len(offset) != 3:
        msg = f"offset: expected three fractions of a cell, got {raw_offset!r}"
        raise ConfigError(msg)
    try:
        return GridSpec(
            bounds=tuple(bounds),  # type: ignore[arg-type]
            resolution=tuple(res),  # type: ignore[arg-type]
            offset=offset,  # type: ignore[arg-type]
        )
    except ParameterError as exc:
        raise ConfigError(str(exc)) from exc


def _parse_enum(data: dict[str, Any], key: str, enum: Any, default: Any) -> Any:
    raw = data.get(key, default.value)
    try:
        return enum(raw)
    except ValueError as exc:
        allowed = ", ".join(e.value for e in enum)
        msg = f"{key}: {raw!r} is not one of {allowed}"
        raise ConfigError(msg) from exc


def load_run_config(data: dict[str, Any]) -> RunConfig:
    """Parse a plain mapping (CLI flags over an optional JSON file) into a RunConfig."""
    command = str(data.get("command", "verify"))
    if command not in COMMANDS:
        msg = f"command: {command!r} is not one of {', '.join(COMMANDS)}"
        raise ConfigError(msg)

    case = _parse_enum(data, "case", CaseTag, CaseTag.RING_A)
    # track draws from the tabulated coefficients, verify and integrate from the series
    default_source = (
        CorrectionSource.TABULATED if command == "track" else CorrectionSource.SERIES
    )
    source = _parse_enum(data, "source", CorrectionSource, default_source)
    a = _parse_fraction(data, "a", Fraction(1))
    m = _parse_float(data, "m", 1.0)
    alpha = _parse_float(data, "alpha", DEFAULT_ALPHA)
    scale = _parse_float(data, "coupling_scale", 1.0)
    for key, value, ok in (
        ("a", a, a > 0),
        ("m", m, m > 0),
        ("alpha", alpha, alpha >= 0),
        ("coupling_scale", scale, scale >= 0),
    ):
        if not ok:
            msg = f"{key}: value {value} is out of range"
            raise ConfigError(msg)

    if data.get("t") is not None:
        t_start, t_end, frames = parse_time_range(str(data["t"]))
    else:
        t_start = _parse_float(data, "t_start", 0.0)
        t_end = _parse_float(data, "t_end", t_start)
        frames = _parse_int(data, "frames", 1)
    if command == "track" and frames < 2:
        msg = f"t: tracking needs at least 2 frames, got {frames}"
        raise ConfigError(msg)

    dt = _parse_float(data, "dt", 0.01)
    if not dt > 0:
        msg = f"dt: time step must be positive, got {dt}"
        raise ConfigError(msg)

    mutation = data.get("mutate")
    if mutation is not None and not _MUTATION.match(str(mutation)):
        msg = f"mutate: expected alpha|beta|gamma.x|y|z:<rational>, got {mutation!r}"
        raise ConfigError(msg)

    camera = str(data.get("camera", "ring"))
    if camera not in CAMERAS:
        msg = f"camera: {camera!r} is not one of {', '.join(CAMERAS)}"
        raise ConfigError(msg)

    workers = _parse_int(data, "workers", 1)
    levels = _parse_int(data, "levels", 3)
    if workers < 1 or levels < 1:
        msg = "workers and levels must be at least 1"
        raise ConfigError(msg)

    return RunConfig(
        command=command,
        case=case,
        quantum=_parse_bool(data, "quantum", True),
        a=a,
        m=m,
        alpha=alpha,
        coupling_scale=scale,
        source=source,
        grid=_parse_grid(data),
        t_start=t_start,
        t_end=t_end,
        frames=frames,
        dt=dt,
        output_dir=Path(data.get("output_dir", "out")),
        workers=workers,
        refine=_parse_bool(data, "refine", False),
        mutate=None if mutation is None else str(mutation),
        dump_dir=Path(data["dump_dir"]) if data.get("dump_dir") else None,
        camera=camera,
        overlay=_parse_bool(data, "overlay", False),
        inputs=tuple(Path(p) for p in data.get("inputs", ())),
        levels=levels,
        log_file=Path(data["log_file"]) if data.get("log_file") else None,
        first_order_square=_parse_bool(data, "first_order_square", False),
    )


def load_config_file(path: Path) -> dict[str, Any]:
    """Read a JSON config file into a plain mapping."""
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError as exc:
        msg = f"config file not found: {path}"
        raise ConfigError(msg) from exc
    except json.JSONDecodeError as exc:
        msg = f"config file {path} is not valid JSON: {exc}"
        raise ConfigError(msg) from exc
    if not isinstance(raw, dict):
        msg = f"config file {path} must hold a JSON object"
        raise ConfigError(msg)
    _log.debug("loaded %d config keys from %s", len(raw), path)
    return raw
