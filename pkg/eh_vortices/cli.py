"""Command-line entry point."""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path
from typing import Any

from dotenv import load_dotenv

from eh_vortices.config import CAMERAS, load_config_file, load_run_config
from eh_vortices.core.models import RunConfig
from eh_vortices.core.writer import format_key_values
from eh_vortices.exceptions import ConfigError
from eh_vortices.logging import get_logger, setup_logging
from eh_vortices.pipeline import run_integrate, run_render, run_track, run_verify

_log = get_logger(__name__)

# argparse dest -> RunConfig mapping key
_FLAG_KEYS = {
    "case": "case",
    "quantum": "quantum",
    "a": "a",
    "m": "m",
    "alpha": "alpha",
    "coupling_scale": "coupling_scale",
    "source": "source",
    "box": "box",
    "y_bounds": "y_bounds",
    "resolution": "resolution",
    "t": "t",
    "dt": "dt",
    "out": "output_dir",
    "workers": "workers",
    "refine": "refine",
    "first_order_square": "first_order_square",
    "mutate": "mutate",
    "dump_dir": "dump_dir",
    "camera": "camera",
    "overlay": "overlay",
    "levels": "levels",
    "log_file": "log_file",
    "inputs": "inputs",
}

# flags whose values may start with a minus sign
_RANGE_FLAGS = ("--t", "--y-bounds")


def _add_physics(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--case", choices=("a", "b"), help="a = swinging ring, b = vortex pair")
    toggle = parser.add_mutually_exclusive_group()
    toggle.add_argument("--classical", dest="quantum", action="store_false", default=None)
    toggle.add_argument("--quantum", dest="quantum", action="store_true", default=None)
    parser.add_argument("--a", help="solution scale parameter (rational, > 0)")
    parser.add_argument("--m", type=float, help="electron mass in natural units")
    parser.add_argument("--alpha", type=float, help="fine-structure constant")
    parser.add_argument("--coupling-scale", type=float, help="multiplies lambda (echoed)")
    parser.add_argument("--source", choices=("series", "tabulated"))


def _add_grid(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--box", type=float, help="half-width L of the cube [-L, L]^3")
    parser.add_argument("--y-bounds", help="override the y interval, lo:hi")
    parser.add_argument("--resolution", type=int, help="cells per axis (>= 8)")
    parser.add_argument("--t", help="time range start:end:frames")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eh-vortices",
        description="Vortex lines of Euler-Heisenberg corrected electromagnetic fields.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="JSON file; flags override its keys")
    common.add_argument("--out", type=Path, help="output directory (default: out)")
    common.add_argument("--log-file", type=Path)
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser(
        "verify", parents=[common], help="exact residual check of one solution"
    )
    _add_physics(verify)
    verify.add_argument("--mutate", help="perturb a coefficient, e.g. beta.x:1/1000")
    verify.add_argument("--dump-dir", type=Path, help="write polynomial text files here")

    track = sub.add_parser(
        "track", parents=[common], help="extract and track vortex lines over time"
    )
    _add_physics(track)
    _add_grid(track)
    track.add_argument("--workers", type=int)
    track.add_argument("--refine", action="store_true", default=None)
    track.add_argument(
        "--first-order-square",
        action="store_true",
        default=None,
        help="track zeros of F+ . F+ truncated at order lambda",
    )

    render = sub.add_parser("render", parents=[common], help="draw curve JSON files as SVG")
    render.add_argument("inputs", nargs="+", type=Path)
    render.add_argument("--camera", choices=CAMERAS)
    render.add_argument("--overlay", action="store_true", default=None)
    render.add_argument("--a", help="ring parameter for the analytic overlay")

    integrate = sub.add_parser(
        "integrate", parents=[common], help="finite-difference convergence study"
    )
    _add_physics(integrate)
    _add_grid(integrate)
    integrate.add_argument("--dt", type=float)
    integrate.add_argument("--levels", type=int, help="number of refinement levels")

    return parser


def _collect(args: argparse.Namespace) -> dict[str, Any]:
    """Merge flags over the optional config file; unset flags keep file values."""
    data: dict[str, Any] = load_config_file(args.config) if args.config else {}
    data["command"] = args.command
    for dest, key in _FLAG_KEYS.items():
        value = getattr(args, dest, None)
        if value is not None:
            data[key] = [str(v) for v in value] if dest == "inputs" else value
    for key in ("output_dir", "dump_dir", "log_file"):
        if isinstance(data.get(key), Path):
            data[key] = str(data[key])
    return data


def _dispatch(config: RunConfig) -> int:
    if config.command == "verify":
        result = run_verify(config)
        print(format_key_values(result.report.to_pairs()))
        return 0 if result.report.passed else 1
    if config.command == "track":
        track = run_track(config)
        _log.info(
            "Component counts per frame: %s", " ".join(str(c) for c in track.summary["counts"])
        )
        return 0
    if config.command == "render":
        missing = [p for p in config.inputs if not p.is_file()]
        if missing:
            _log.error("Missing input file(s): %s", ", ".join(str(p) for p in missing))
            return 2
        run_render(config)
        return 0
    result_table = run_integrate(config)
    _log.info("Wrote convergence table %s", result_table.table_path)
    return 0


def _attach_values(argv: list[str]) -> list[str]:
    """Glue value-taking flags to their value so a range like -1.8:1.5:12 is not read as a flag."""
    joined: list[str] = []
    pending = iter(argv)
    for arg in pending:
        if arg in _RANGE_FLAGS:
            value = next(pending, None)
            joined.append(arg if value is None else f"{arg}={value}")
        else:
            joined.append(arg)
    return joined


def main(argv: list[str] | None = None) -> int:
    """Run one eh-vortices subcommand; returns the process exit status."""
    load_dotenv()
    level = os.environ.get("LOG_LEVEL", "INFO")
    setup_logging(level)

    args = _build_parser().parse_args(_attach_values(sys.argv[1:] if argv is None else argv))
    try:
        config = load_run_config(_collect(args))
    except ConfigError as exc:
        _log.error("Invalid configuration: %s", exc)
        return 2

    log_file = config.log_file
    if log_file is None and config.command == "track":
        log_file = config.output_dir / "track.log"
    if log_file is not None:
        setup_logging(level, log_file)

    try:
        return _dispatch(config)
    except ConfigError as exc:
        _log.error("Invalid configuration: %s", exc)
        return 2
    except Exception as exc:
        _log.error("Fatal error: %s", exc)
        return 1
