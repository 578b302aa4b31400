"""Per-frame extraction and time sweeps."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from eh_vortices.core.models import GridSpec, TopologyReport, VortexCurve
from eh_vortices.exceptions import ParameterError
from eh_vortices.logging import get_logger
from eh_vortices.solutions import AnalyticSolution
from eh_vortices.vortex.extract import extract_with_shift
from eh_vortices.vortex.refine import refine_crossing
from eh_vortices.vortex.topology import mark_topology_events, topology_report

_log = get_logger(__name__)


@dataclass
class Frame:
    """Curves and their report at one time."""

    time: float
    curves: list[VortexCurve]
    report: TopologyReport
    grid: GridSpec
    degenerate_cells: list[tuple[int, int, int]] = field(default_factory=list)


def _refine_curves(
    solution: AnalyticSolution, curves: list[VortexCurve], t: float, grid: GridSpec
) -> None:
    limit = grid.cell_diagonal
    for curve in curves:
        refined = [refine_crossing(solution, t, p, max_shift=limit) for p in curve.points]
        curve.points = np.array([r.point for r in refined])
        curve.low_confidence = sum(1 for r in refined if not r.converged)
        if curve.low_confidence:
            _log.warning(
                "t=%.6g curve %d: %d of %d points kept unrefined (low confidence)",
                t,
                curve.component_id,
                curve.low_confidence,
                len(curve),
            )


def extract_frame(
    solution: AnalyticSolution, grid: GridSpec, t: float, *, refine: bool = False
) -> Frame:
    result = extract_with_shift(solution, grid, t)
    if refine:
        _refine_curves(solution, result.curves, t, result.grid)
    report = topology_report(result.curves, t, len(result.degenerate_cells))
    _log.info(
        "t=%.6g: %d component(s), %d crossings", t, report.component_count, result.crossings
    )
    return Frame(
        time=float(t),
        curves=result.curves,
        report=report,
        grid=result.grid,
        degenerate_cells=result.degenerate_cells,
    )


def track_frames(
    solution: AnalyticSolution,
    grid: GridSpec,
    times: np.ndarray,
    *,
    refine: bool = False,
    workers: int = 1,
) -> list[Frame]:
    """Extract every frame; results keep the order of ``times`` for any worker count."""
    if len(times) < 2:
        msg = f"tracking needs at least 2 frames, got {len(times)}"
        raise ParameterError(msg)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            frames = list(
                pool.map(lambda t: extract_frame(solution, grid, float(t), refine=refine), times)
            )
    else:
        frames = [extract_frame(solution, grid, float(t), refine=refine) for t in times]
    for index in mark_topology_events([f.report for f in frames]):
        _log.info(
            "topology event at t=%.6g: %d -> %d components",
            frames[index].time,
            frames[index - 1].report.component_count,
            frames[index].report.component_count,
        )
    return frames


def track(
    solution: AnalyticSolution,
    grid: GridSpec,
    t_start: float,
    t_end: float,
    steps: int,
    *,
    refine: bool = False,
    workers: int = 1,
) -> list[TopologyReport]:
    """Uniformly sampled reports over the closed interval [t_start, t_end]."""
    if steps < 2:
        msg = f"tracking needs at least 2 steps, got {steps}"
        raise ParameterError(msg)
    times = np.linspace(t_start, t_end, steps)
    return [f.report for f in track_frames(solution, grid, times, refine=refine, workers=workers)]
