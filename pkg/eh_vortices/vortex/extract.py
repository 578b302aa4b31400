"""Vortex-line extraction: face crossings stitched cell to cell into polylines."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Protocol

import numpy as np
from numpy.typing import NDArray

from eh_vortices.core.models import GridSpec, VortexCurve
from eh_vortices.exceptions import OnNodeError
from eh_vortices.logging import format_point, get_logger
from eh_vortices.vortex.winding import ComplexArray, FaceWindings, face_windings

_log = get_logger(__name__)

_NEWTON_STEPS = 20
_INSIDE_SLACK = 1e-9
# Face-local (u, v) axes: x-faces span (y, z), y-faces (z, x), z-faces (x, y).
_FACE_AXES = {0: (1, 2), 1: (2, 0), 2: (0, 1)}

Cell = tuple[int, int, int]
Node = tuple[int, int, int, int, int]  # axis, i, j, k, copy


class ScalarField(Protocol):
    def squared(self, x: object, y: object, z: object, t: object) -> ComplexArray: ...


def sample_scalar(solution: ScalarField, grid: GridSpec, t: float) -> ComplexArray:
    """F+ . F+ at every lattice vertex at time ``t``."""
    x, y, z = grid.mesh()
    values = solution.squared(x, y, z, t)
    return np.broadcast_to(values, x.shape).astype(np.complex128)


@dataclass
class ExtractionResult:
    """Curves found on one lattice plus the bookkeeping behind them."""

    curves: list[VortexCurve]
    grid: GridSpec
    windings: FaceWindings
    degenerate_cells: list[Cell] = field(default_factory=list)
    crossings: int = 0


def _corners(lattice: ComplexArray, axis: int, idx: NDArray[np.int64]) -> list[ComplexArray]:
    """Corner values (w00, w10, w11, w01) of faces in their local (u, v) frame."""
    u_axis, v_axis = _FACE_AXES[axis]
    du = np.zeros(3, dtype=np.int64)
    dv = np.zeros(3, dtype=np.int64)
    du[u_axis] = 1
    dv[v_axis] = 1

    def at(offset: NDArray[np.int64]) -> ComplexArray:
        shifted = idx + offset
        return lattice[shifted[:, 0], shifted[:, 1], shifted[:, 2]]

    return [at(0 * du), at(du), at(du + dv), at(dv)]


def bilinear_zero(
    w00: ComplexArray, w10: ComplexArray, w11: ComplexArray, w01: ComplexArray
) -> NDArray[np.float64]:
    """Zero of the bilinear interpolant on the unit square; face centre if none is found."""
    u = np.full(w00.shape, 0.5)
    v = np.full(w00.shape, 0.5)
    with np.errstate(divide="ignore", invalid="ignore"):
        for _ in range(_NEWTON_STEPS):
            f = (1 - u) * (1 - v) * w00 + u * (1 - v) * w10 + u * v * w11 + (1 - u) * v * w01
            fu = (1 - v) * (w10 - w00) + v * (w11 - w01)
            fv = (1 - u) * (w01 - w00) + u * (w11 - w10)
            det = fu.real * fv.imag - fv.real * fu.imag
            step_u = -(f.real * fv.imag - fv.real * f.imag) / det
            step_v = -(fu.real * f.imag - f.real * fu.imag) / det
            u = u + np.where(np.isfinite(step_u), np.clip(step_u, -1.0, 1.0), 0.0)
            v = v + np.where(np.isfinite(step_v), np.clip(step_v, -1.0, 1.0), 0.0)
    f = (1 - u) * (1 - v) * w00 + u * (1 - v) * w10 + u * v * w11 + (1 - u) * v * w01
    scale = np.max(np.abs(np.stack([w00, w10, w11, w01])), axis=0)
    good = (
        np.isfinite(u)
        & np.isfinite(v)
        & (u >= -_INSIDE_SLACK)
        & (u <= 1 + _INSIDE_SLACK)
        & (v >= -_INSIDE_SLACK)
        & (v <= 1 + _INSIDE_SLACK)
        & (np.abs(f) <= 1e-8 * scale)
    )
    u = np.where(good, np.clip(u, 0.0, 1.0), 0.5)
    v = np.where(good, np.clip(v, 0.0, 1.0), 0.5)
    return np.stack([u, v], axis=-1)  # type: ignore[no-any-return]


def _crossing_points(
    lattice: ComplexArray, grid: GridSpec, axis: int, idx: NDArray[np.int64]
) -> NDArray[np.float64]:
    uv = bilinear_zero(*_corners(lattice, axis, idx))
    axes = grid.axes()
    spacing = grid.spacing
    points = np.stack([axes[k][idx[:, k]] for k in range(3)], axis=-1)
    u_axis, v_axis = _FACE_AXES[axis]
    points[:, u_axis] += uv[:, 0] * spacing[u_axis]
    points[:, v_axis] += uv[:, 1] * spacing[v_axis]
    return points  # type: ignore[no-any-return]


def _collect_nodes(
    lattice: ComplexArray, grid: GridSpec, windings: FaceWindings
) -> tuple[dict[Node, NDArray[np.float64]], dict[Node, int], dict[Cell, list[tuple[Node, int]]]]:
    """Crossing nodes, their winding signs and, per cell, (node, outward winding)."""
    points: dict[Node, NDArray[np.float64]] = {}
    signs: dict[Node, int] = {}
    cells: dict[Cell, list[tuple[Node, int]]] = defaultdict(list)
    n_cells = grid.resolution
    for axis, w in enumerate(windings.by_axis()):
        idx = np.argwhere(w != 0)
        if not len(idx):
            continue
        coords = _crossing_points(lattice, grid, axis, idx)
        for face, point in zip(idx, coords):
            i, j, k = (int(c) for c in face)
            value = int(w[i, j, k])
            for copy in range(abs(value)):
                node: Node = (axis, i, j, k, copy)
                points[node] = point
                signs[node] = 1 if value > 0 else -1
                unit = signs[node]
                lower = [i, j, k]
                lower[axis] -= 1
                if lower[axis] >= 0:
                    cells[(lower[0], lower[1], lower[2])].append((node, unit))
                if face[axis] < n_cells[axis]:
                    cells[(i, j, k)].append((node, -unit))
    return points, signs, cells


def _pair_cell(
    entries: list[Node], exits: list[Node], points: dict[Node, NDArray[np.float64]]
) -> list[tuple[Node, Node]]:
    """Greedy nearest pairing of entry and exit crossings inside one cell."""
    candidates = sorted(
        (float(np.linalg.norm(points[a] - points[b])), a, b) for a in entries for b in exits
    )
    used: set[Node] = set()
    pairs: list[tuple[Node, Node]] = []
    for _, a, b in candidates:
        if a in used or b in used:
            continue
        used.update((a, b))
        pairs.append((a, b))
    return pairs


def extract_vortex_curves(lattice: ComplexArray, grid: GridSpec) -> ExtractionResult:
    """Trace the vortex lines of a sampled lattice.

    Raises :class:`OnNodeError` when a vertex sits on a zero; callers retry
    on a shifted lattice (see :func:`extract_with_shift`).
    """
    windings = face_windings(lattice)
    points, signs, cells = _collect_nodes(lattice, grid, windings)

    successor: dict[Node, Node] = {}
    predecessor: dict[Node, Node] = {}
    degenerate: list[Cell] = []
    for cell in sorted(cells):
        members = cells[cell]
        entries = sorted(n for n, out in members if out < 0)
        exits = sorted(n for n, out in members if out > 0)
        if len(entries) != len(exits):
            degenerate.append(cell)
        for entry, exit_ in _pair_cell(entries, exits, points):
            successor[entry] = exit_
            predecessor[exit_] = entry

    if degenerate:
        _log.warning(
            "%d degenerate cells (unbalanced winding), first at cell %s; "
            "increase the resolution",
            len(degenerate),
            degenerate[0],
        )

    curves: list[VortexCurve] = []
    visited: set[Node] = set()

    def walk(start: Node) -> tuple[list[Node], bool]:
        path = [start]
        visited.add(start)
        node = start
        while node in successor:
            node = successor[node]
            if node == start:
                return path, True
            if node in visited:
                break
            path.append(node)
            visited.add(node)
        return path, False

    starts = sorted(n for n in points if n not in predecessor)
    for node in starts + sorted(points):
        if node in visited:
            continue
        path, closed = walk(node)
        curves.append(
            VortexCurve(
                points=np.array([points[n] for n in path]),
                closed=closed,
                component_id=len(curves),
                orientation=tuple(signs[n] for n in path),
            )
        )
    for curve in curves:
        _log.debug(
            "curve %d: %d points, %s, starts at %s",
            curve.component_id,
            len(curve),
            "closed" if curve.closed else "open",
            format_point(curve.points[0]),
        )
    return ExtractionResult(
        curves=curves,
        grid=grid,
        windings=windings,
        degenerate_cells=degenerate,
        crossings=len(points),
    )


def extract_with_shift(
    solution: ScalarField, grid: GridSpec, t: float, max_shifts: int = 2
) -> ExtractionResult:
    """Sample and extract, moving the lattice by half a cell when a vertex is on a zero."""
    current = grid
    for attempt in range(max_shifts + 1):
        lattice = sample_scalar(solution, current, t)
        try:
            return extract_vortex_curves(lattice, current)
        except OnNodeError:
            if attempt == max_shifts:
                raise
            _log.info("t=%.6g: lattice vertex on a zero; shifting grid by half a cell", t)
            current = current.shifted()
    msg = "unreachable"
    raise AssertionError(msg)
