"""Orthographic SVG frames of extracted vortex curves."""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from pathlib import Path

import drawsvg as draw
import numpy as np
from numpy.typing import NDArray

from eh_vortices.core.parser import CurveDocument, read_curve_document
from eh_vortices.exceptions import ConfigError
from eh_vortices.logging import get_logger
from eh_vortices.solutions import RingLocus, classical_ring_locus

_log = get_logger(__name__)

SIZE = 480
MARGIN = 40
PALETTE = ("#1f4e9c", "#c0392b", "#27864a", "#8e44ad", "#d35400", "#2c3e50")


@dataclass(frozen=True)
class Camera:
    """Fixed viewing direction: azimuth about z, then elevation, in degrees."""

    name: str
    azimuth: float
    elevation: float

    def project(self, points: NDArray[np.float64]) -> NDArray[np.float64]:
        """Screen (u, v) of normalised 3D points; v grows upwards."""
        az = math.radians(self.azimuth)
        el = math.radians(self.elevation)
        x, y, z = points[:, 0], points[:, 1], points[:, 2]
        u = x * math.cos(az) - y * math.sin(az)
        depth = x * math.sin(az) + y * math.cos(az)
        v = z * math.cos(el) - depth * math.sin(el)
        return np.stack([u, v], axis=1)


CAMERAS = {
    "ring": Camera("ring", azimuth=35.0, elevation=25.0),
    "pair": Camera("pair", azimuth=0.0, elevation=10.0),
    "pair-side": Camera("pair-side", azimuth=90.0, elevation=10.0),
}


def _bounds(document: CurveDocument) -> NDArray[np.float64]:
    raw = document.grid.get("bounds") or document.config.get("grid", {}).get("bounds")
    if raw is None:
        pts = [c.points for c in document.curves if len(c.points)]
        if not pts:
            return np.array([[-1.0, 1.0]] * 3)
        stacked = np.vstack(pts)
        return np.stack([stacked.min(axis=0), stacked.max(axis=0)], axis=1)
    return np.asarray(raw, dtype=np.float64)


def _normalise(points: NDArray[np.float64], bounds: NDArray[np.float64]) -> NDArray[np.float64]:
    """Map every axis interval onto [-1, 1] independently."""
    lo = bounds[:, 0]
    hi = bounds[:, 1]
    return 2.0 * (points - lo) / (hi - lo) - 1.0  # type: ignore[no-any-return]


def circle_points(locus: RingLocus, count: int = 128) -> NDArray[np.float64]:
    n = np.asarray(locus.plane_normal, dtype=np.float64)
    n = n / np.linalg.norm(n)
    helper = np.array([1.0, 0.0, 0.0]) if abs(n[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    e1 = np.cross(n, helper)
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(n, e1)
    angles = np.linspace(0.0, 2.0 * np.pi, count, endpoint=False)
    return (  # type: ignore[no-any-return]
        np.asarray(locus.sphere_center)
        + locus.circle_radius * (np.outer(np.cos(angles), e1) + np.outer(np.sin(angles), e2))
    )


class FrameRenderer:
    """Draws one curve document per SVG."""

    def __init__(self, camera: str = "ring", size: int = SIZE) -> None:
        if camera not in CAMERAS:
            msg = f"unknown camera {camera!r}; choose from {', '.join(CAMERAS)}"
            raise ConfigError(msg)
        self.camera = CAMERAS[camera]
        self.size = size
        self.scale = (size - 2 * MARGIN) / (2.0 * math.sqrt(3.0))

    def _screen(self, points: NDArray[np.float64], bounds: NDArray[np.float64]) -> list[float]:
        uv = self.camera.project(_normalise(points, bounds))
        centre = self.size / 2.0
        xs = centre + self.scale * uv[:, 0]
        ys = centre - self.scale * uv[:, 1]
        return [float(c) for pair in zip(xs, ys) for c in pair]

    def _frame_box(self, d: draw.Drawing, bounds: NDArray[np.float64]) -> None:
        corners = np.array(list(product(*bounds)))
        for a, b in product(range(8), repeat=2):
            if a < b and np.count_nonzero(corners[a] != corners[b]) == 1:
                x1, y1, x2, y2 = self._screen(np.vstack([corners[a], corners[b]]), bounds)
                d.append(draw.Line(x1, y1, x2, y2, stroke="#b0b0b0", stroke_width=0.8))
        origin = np.array([[b[0] for b in bounds]])
        for axis, label in enumerate("xyz"):
            tip = origin.copy()
            tip[0, axis] = bounds[axis][1]
            x, y = self._screen(tip, bounds)
            d.append(draw.Text(label, 12, x + 4, y, fill="#606060"))

    def render(self, document: CurveDocument, overlay: RingLocus | None = None) -> draw.Drawing:
        bounds = _bounds(document)
        d = draw.Drawing(self.size, self.size)
        d.append(draw.Rectangle(0, 0, self.size, self.size, fill="white"))
        self._frame_box(d, bounds)
        if overlay is not None:
            d.append(
                draw.Lines(
                    *self._screen(circle_points(overlay), bounds),
                    close=True,
                    fill="none",
                    stroke="#999999",
                    stroke_width=1.0,
                    stroke_dasharray="4,3",
                )
            )
        for curve in document.curves:
            if len(curve.points) < 2:
                continue
            d.append(
                draw.Lines(
                    *self._screen(curve.points, bounds),
                    close=curve.closed,
                    fill="none",
                    stroke=PALETTE[curve.component_id % len(PALETTE)],
                    stroke_width=2.0,
                )
            )
        d.append(
            draw.Text(
                f"t = {document.time:.4g}   components: {len(document.curves)}",
                13,
                MARGIN / 2,
                MARGIN / 2,
                fill="#202020",
            )
        )
        return d


def render_file(
    path: Path,
    output_dir: Path,
    camera: str = "ring",
    overlay: bool = False,
    a: float = 1.0,
) -> Path:
    """Render one curve JSON file to ``<output_dir>/<stem>.svg``."""
    document = read_curve_document(path)
    locus = classical_ring_locus(a, document.time) if overlay else None
    drawing = FrameRenderer(camera).render(document, locus)
    output_dir.mkdir(parents=True, exist_ok=True)
    target = output_dir / f"{path.stem}.svg"
    drawing.save_svg(str(target))
    _log.debug("rendered %s -> %s", path.name, target.name)
    return target
