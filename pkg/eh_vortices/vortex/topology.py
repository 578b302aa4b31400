"""Shape and topology metrics of extracted vortex curves."""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from eh_vortices.core.models import ComponentMetrics, TopologyReport, VortexCurve


def arc_length(curve: VortexCurve) -> float:
    """Polyline length, including the closing segment of a closed curve."""
    pts = np.asarray(curve.points, dtype=np.float64)
    if len(pts) < 2:
        return 0.0
    if curve.closed:
        pts = np.vstack([pts, pts[:1]])
    return float(np.sum(np.linalg.norm(np.diff(pts, axis=0), axis=1)))


def planarity_deviation(points: np.ndarray) -> float:
    """RMS distance to the best-fit plane (smallest principal axis)."""
    pts = np.asarray(points, dtype=np.float64)
    if len(pts) < 3:
        return 0.0
    centred = pts - pts.mean(axis=0)
    singular = np.linalg.svd(centred, compute_uv=False)
    return float(singular[-1] / np.sqrt(len(pts)))


def component_metrics(curve: VortexCurve) -> ComponentMetrics:
    pts = np.asarray(curve.points, dtype=np.float64)
    radius = float(np.mean(np.linalg.norm(pts - pts.mean(axis=0), axis=1))) if len(pts) else 0.0
    return ComponentMetrics(
        closed=curve.closed,
        ring_radius=radius,
        planarity_deviation=planarity_deviation(pts),
        arc_length=arc_length(curve),
        point_count=len(pts),
    )


def topology_report(
    curves: Sequence[VortexCurve], t: float, degenerate_cells: int = 0
) -> TopologyReport:
    return TopologyReport(
        time=float(t),
        components=[component_metrics(c) for c in curves],
        degenerate_cells=degenerate_cells,
    )


def mark_topology_events(reports: Sequence[TopologyReport]) -> list[int]:
    """Flag frames whose component count differs from the previous frame."""
    events = []
    for index in range(1, len(reports)):
        if reports[index].component_count != reports[index - 1].component_count:
            reports[index].topology_event = True
            events.append(index)
    return events
