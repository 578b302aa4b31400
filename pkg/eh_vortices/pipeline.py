"""Run orchestration: one function per command, each writing its output files."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from eh_vortices.core.models import RunConfig
from eh_vortices.core.writer import (
    atomic_write_text,
    curve_document,
    topology_table,
    write_csv,
    write_json,
    write_key_values,
)
from eh_vortices.logging import get_logger
from eh_vortices.oracle import convergence_study, convergence_table, refinement_ladder
from eh_vortices.render import render_file
from eh_vortices.solutions import (
    VerificationReport,
    build_solution,
    classical_seed,
    quantum_correction,
    verify_solution,
)
from eh_vortices.vortex import Frame, track_frames

_log = get_logger(__name__)


@dataclass
class VerifyResult:
    report: VerificationReport
    report_path: Path | None = None
    dumped: list[Path] = field(default_factory=list)


@dataclass
class TrackResult:
    frames: list[Frame]
    frame_paths: list[Path] = field(default_factory=list)
    topology_path: Path | None = None
    summary_path: Path | None = None
    summary: dict[str, Any] = field(default_factory=dict)


@dataclass
class IntegrateResult:
    rows: list[dict[str, float]]
    table_path: Path


def run_verify(config: RunConfig) -> VerifyResult:
    """Exact residual check for one case, with optional polynomial dumps."""
    params = config.solution_params()
    report = verify_solution(params, mutation=config.mutate)
    result = VerifyResult(report=report)
    config.output_dir.mkdir(parents=True, exist_ok=True)
    result.report_path = write_key_values(
        config.output_dir / f"verify_{params.case.value}.txt", report.to_pairs(), config.to_dict()
    )
    if config.dump_dir is not None:
        stem = f"case_{params.case.value}"
        solution = build_solution(params, mutation=config.mutate)
        for name, poly in (
            ("seed", classical_seed(params)),
            (f"correction_{params.source.value}", quantum_correction(params)),
            ("fplus", solution.fplus),
        ):
            path = config.dump_dir / f"{stem}_{name}.poly"
            result.dumped.append(atomic_write_text(path, poly.to_text()))
        _log.info("Wrote %d polynomial files into %s.", len(result.dumped), config.dump_dir)
    return result


def _summarise(frames: list[Frame]) -> dict[str, Any]:
    reports = [f.report for f in frames]
    events = [
        {
            "index": k,
            "time": reports[k].time,
            "from": reports[k - 1].component_count,
            "to": reports[k].component_count,
        }
        for k in range(1, len(reports))
        if reports[k].topology_event
    ]
    hairpin = next(
        (r.time for r in reports if r.component_count == 1 and r.open_count == 1), None
    )
    largest = [r.largest() for r in reports]
    radii = [c.ring_radius if c is not None else 0.0 for c in largest]
    peak = int(np.argmax(radii)) if radii else 0
    return {
        "frames": len(reports),
        "events": events,
        "counts": [r.component_count for r in reports],
        "first_single_open_frame_time": hairpin,
        "max_radius": radii[peak] if radii else 0.0,
        "max_radius_time": reports[peak].time if reports else None,
        "max_radius_interior": 0 < peak < len(reports) - 1,
        "final_component_count": reports[-1].component_count if reports else 0,
        "degenerate_cells": sum(r.degenerate_cells for r in reports),
    }


def run_track(config: RunConfig) -> TrackResult:
    """Extract every frame, then write frame JSON, the topology CSV and an event summary."""
    params = config.solution_params()
    solution = build_solution(
        params, quantum=config.quantum, first_order_square=config.first_order_square
    )
    frames = track_frames(
        solution, config.grid, config.times(), refine=config.refine, workers=config.workers
    )
    echo = config.to_dict()
    result = TrackResult(frames=frames)
    out = config.output_dir
    for index, frame in enumerate(frames):
        document = curve_document(
            frame.time,
            frame.curves,
            echo,
            {
                "grid": frame.grid.to_dict(),
                "component_count": frame.report.component_count,
                "degenerate_cells": [list(c) for c in frame.degenerate_cells],
            },
        )
        result.frame_paths.append(write_json(out / f"frame_{index:04d}.json", document))
    result.topology_path = write_csv(
        out / "topology.csv", topology_table([f.report for f in frames]), echo
    )
    result.summary = _summarise(frames)
    result.summary_path = write_json(out / "events.json", {"config": echo, **result.summary})
    _log.info(
        "Tracked %d frames (%d topology events) into %s.",
        len(frames),
        len(result.summary["events"]),
        out,
    )
    return result


def run_integrate(config: RunConfig) -> IntegrateResult:
    """Oracle convergence study starting from the analytic field at t_start."""
    params = config.solution_params()
    solution = build_solution(params, quantum=config.quantum)
    half_width = max(abs(v) for b in config.grid.bounds for v in b)
    runs = refinement_ladder(config.grid.resolution[0], config.dt, config.levels)
    rows = convergence_study(solution, half_width, runs, config.t_start, config.t_end)
    table = convergence_table(rows)
    path = write_csv(config.output_dir / "convergence.csv", table, config.to_dict())
    return IntegrateResult(rows=table.to_dict("records"), table_path=path)


def run_render(config: RunConfig) -> list[Path]:
    """One SVG per input curve file, written next to each other in output_dir."""
    written = [
        render_file(
            path,
            config.output_dir,
            camera=config.camera,
            overlay=config.overlay,
            a=float(config.a),
        )
        for path in config.inputs
    ]
    _log.info("Rendered %d frame(s) into %s.", len(written), config.output_dir)
    return written
