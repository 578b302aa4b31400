"""Finite-difference time integration of the canonical (D, B) equations.

Lattices have shape ``(3, nx+1, ny+1, nz+1)``: vector components first, then
the grid vertices. Spatial derivatives are fourth-order centred differences;
time stepping is classical RK4 with a Dirichlet layer clamped to an analytic
solution after every stage.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass, replace

import numpy as np
import pandas as pd
from numpy.typing import NDArray

from eh_vortices.core.fields import dH_dB, dH_dD
from eh_vortices.core.models import Coupling, GridSpec
from eh_vortices.core.poly import IMAG, VecPoly, curl, variables
from eh_vortices.exceptions import IntegrationError, ParameterError
from eh_vortices.logging import get_logger
from eh_vortices.solutions import AnalyticSolution

_log = get_logger(__name__)

BOUNDARY_WIDTH = 3
COMPARISON_MARGIN = 6
CFL_LIMIT = 0.5

Lattice = NDArray[np.float64]


@dataclass(frozen=True)
class GridField:
    """Real D and B sampled on a grid at one time."""

    D: Lattice
    B: Lattice
    grid: GridSpec
    time: float
    boundary_width: int = BOUNDARY_WIDTH

    def __post_init__(self) -> None:
        expected = (3, *(n + 1 for n in self.grid.resolution))
        for name in ("D", "B"):
            shape = getattr(self, name).shape
            if shape != expected:
                msg = f"{name} lattice has shape {shape}, grid needs {expected}"
                raise ParameterError(msg)

    def boundary_mask(self) -> NDArray[np.bool_]:
        """Vertices inside the clamped boundary layer."""
        return _layer_mask(self.grid, self.boundary_width)


def _layer_mask(grid: GridSpec, width: int) -> NDArray[np.bool_]:
    shape = tuple(n + 1 for n in grid.resolution)
    mask = np.zeros(shape, dtype=bool)
    for axis, n in enumerate(shape):
        lead = [slice(None)] * 3
        lead[axis] = slice(0, width)
        mask[tuple(lead)] = True
        lead[axis] = slice(n - width, n)
        mask[tuple(lead)] = True
    return mask


def sample_grid_field(
    solution: AnalyticSolution, grid: GridSpec, t: float, boundary_width: int = BOUNDARY_WIDTH
) -> GridField:
    x, y, z = grid.mesh()
    d, b = solution.fields(x, y, z, t)
    shape = (3, *x.shape)
    return GridField(
        D=np.broadcast_to(d, shape).copy(),
        B=np.broadcast_to(b, shape).copy(),
        grid=grid,
        time=float(t),
        boundary_width=boundary_width,
    )


def _diff4(f: Lattice, axis: int, h: float) -> Lattice:
    """Fourth-order centred derivative; the two outermost layers stay zero."""
    out = np.zeros_like(f)
    n = f.shape[axis]

    def part(start: int, stop: int) -> tuple[slice, ...]:
        index = [slice(None)] * f.ndim
        index[axis] = slice(start, n + stop)
        return tuple(index)

    out[part(2, -2)] = (
        -f[part(4, 0)] + 8.0 * f[part(3, -1)] - 8.0 * f[part(1, -3)] + f[part(0, -4)]
    ) / (12.0 * h)
    return out


def lattice_curl(v: Lattice, spacing: Sequence[float]) -> Lattice:
    hx, hy, hz = spacing
    return np.stack(
        [
            _diff4(v[2], 1, hy) - _diff4(v[1], 2, hz),
            _diff4(v[0], 2, hz) - _diff4(v[2], 0, hx),
            _diff4(v[1], 0, hx) - _diff4(v[0], 1, hy),
        ]
    )


def discrete_divergence(state: GridField) -> tuple[Lattice, Lattice]:
    """Fourth-order divergence of D and B (zero on the two outer layers)."""
    hx, hy, hz = state.grid.spacing

    def div(v: Lattice) -> Lattice:
        return _diff4(v[0], 0, hx) + _diff4(v[1], 1, hy) + _diff4(v[2], 2, hz)

    return div(state.D), div(state.B)


def _vector_last(v: Lattice) -> Lattice:
    return np.moveaxis(v, 0, -1)


def rhs(state: GridField, c: Coupling) -> GridField:
    """Time derivative: dD/dt = curl dH/dB, dB/dt = -curl dH/dD."""
    d = _vector_last(state.D)
    b = _vector_last(state.B)
    spacing = state.grid.spacing
    d_dot = lattice_curl(np.moveaxis(dH_dB(d, b, c), -1, 0), spacing)
    b_dot = -lattice_curl(np.moveaxis(dH_dD(d, b, c), -1, 0), spacing)
    return replace(state, D=d_dot, B=b_dot)


class _BoundaryClamp:
    """Writes the analytic fields (or zeros) into the boundary layer."""

    def __init__(self, grid: GridSpec, width: int, solution: AnalyticSolution | None) -> None:
        self.mask = _layer_mask(grid, width)
        self.solution = solution
        x, y, z = grid.mesh()
        self.points = (x[self.mask], y[self.mask], z[self.mask])

    def apply(self, d: Lattice, b: Lattice, t: float) -> None:
        if self.solution is None:
            d[:, self.mask] = 0.0
            b[:, self.mask] = 0.0
            return
        d_edge, b_edge = self.solution.fields(*self.points, t)
        count = self.points[0].shape
        d[:, self.mask] = np.broadcast_to(d_edge, (3, *count))
        b[:, self.mask] = np.broadcast_to(b_edge, (3, *count))


def integrate(
    state0: GridField,
    c: Coupling,
    t0: float,
    t1: float,
    dt: float,
    boundary: AnalyticSolution | None = None,
) -> GridField:
    """RK4 from ``t0`` to ``t1``; the step is shrunk so the interval divides evenly."""
    if dt <= 0:
        msg = f"time step must be positive, got {dt}"
        raise ParameterError(msg)
    limit = CFL_LIMIT * state0.grid.min_spacing
    if dt > limit:
        msg = f"time step {dt} breaks the stability bound dt <= {limit:.6g} (0.5 dx)"
        raise ParameterError(msg)
    steps = max(1, math.ceil((t1 - t0) / dt - 1e-9))
    h = (t1 - t0) / steps
    clamp = _BoundaryClamp(state0.grid, state0.boundary_width, boundary)

    def stage(d: Lattice, b: Lattice, t: float) -> tuple[Lattice, Lattice]:
        clamp.apply(d, b, t)
        k = rhs(replace(state0, D=d, B=b, time=t), c)
        return k.D, k.B

    d = state0.D.copy()
    b = state0.B.copy()
    t = t0
    _log.debug("RK4: %d steps of %.4g on %s cells", steps, h, state0.grid.resolution)
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(steps):
            k1d, k1b = stage(d.copy(), b.copy(), t)
            k2d, k2b = stage(d + 0.5 * h * k1d, b + 0.5 * h * k1b, t + 0.5 * h)
            k3d, k3b = stage(d + 0.5 * h * k2d, b + 0.5 * h * k2b, t + 0.5 * h)
            k4d, k4b = stage(d + h * k3d, b + h * k3b, t + h)
            d = d + h / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d)
            b = b + h / 6.0 * (k1b + 2.0 * k2b + 2.0 * k3b + k4b)
            t += h
            clamp.apply(d, b, t)
            if not (np.all(np.isfinite(d)) and np.all(np.isfinite(b))):
                raise IntegrationError(t)
    return replace(state0, D=d, B=b, time=t1)


def _interior(grid: GridSpec, margin: int) -> tuple[slice, ...]:
    return tuple(slice(margin, n + 1 - margin) for n in grid.resolution)


def max_interior_error(
    state: GridField, solution: AnalyticSolution, margin: int = COMPARISON_MARGIN
) -> float:
    """Largest deviation from the analytic fields, ignoring ``margin`` outer cells."""
    reference = sample_grid_field(solution, state.grid, state.time)
    inner = (slice(None), *_interior(state.grid, margin))
    return float(
        max(
            np.max(np.abs(state.D[inner] - reference.D[inner])),
            np.max(np.abs(state.B[inner] - reference.B[inner])),
        )
    )


def max_divergence(state: GridField, margin: int = COMPARISON_MARGIN) -> float:
    div_d, div_b = discrete_divergence(state)
    inner = _interior(state.grid, margin)
    return float(max(np.max(np.abs(div_d[inner])), np.max(np.abs(div_b[inner]))))


def canonical_rates(fplus: VecPoly) -> tuple[VecPoly, VecPoly]:
    """Exact sqrt(2) dD/dt and sqrt(2) dB/dt of the canonical equations.

    With D' = F+ + F-, B' = -i(F+ - F-), Q = D'.D' - B'.B' and P = D'.B':
    dD'/dt = curl[B' + 2 lam Q B' - 7 lam P D'] and
    dB'/dt = -curl[D' - 2 lam Q D' - 7 lam P B'].
    """
    _, _, _, _, lam = variables()
    fminus = fplus.real_field_conjugate()
    d = fplus + fminus
    b = (fplus - fminus) * (-IMAG)
    q = d.dot(d) - b.dot(b)
    p = d.dot(b)
    d_rate = curl(b + b * (2 * lam * q) - d * (7 * lam * p))
    b_rate = -curl(d - d * (2 * lam * q) - b * (7 * lam * p))
    return d_rate, b_rate


@dataclass(frozen=True)
class ConvergenceRow:
    resolution: int
    dt: float
    max_interior_error: float


def refinement_ladder(resolution: int, dt: float, levels: int) -> list[tuple[int, float]]:
    """Resolution doubled and dt halved at every level."""
    return [(resolution * 2**k, dt / 2**k) for k in range(levels)]


def convergence_study(
    solution: AnalyticSolution,
    half_width: float,
    runs: Sequence[tuple[int, float]],
    t0: float,
    t1: float,
) -> list[ConvergenceRow]:
    """Integrate from the analytic state at ``t0`` for every (resolution, dt) run."""
    c = solution.params.coupling if solution.lam else Coupling.classical()
    rows = []
    for resolution, dt in runs:
        grid = GridSpec.cube(half_width, resolution)
        state = integrate(sample_grid_field(solution, grid, t0), c, t0, t1, dt, boundary=solution)
        error = max_interior_error(state, solution)
        _log.info("resolution %d, dt %.4g: max interior error %.3e", resolution, dt, error)
        rows.append(ConvergenceRow(resolution, dt, error))
    return rows


def convergence_table(rows: Sequence[ConvergenceRow]) -> pd.DataFrame:
    """Rows as a table with the observed order between successive runs."""
    table = pd.DataFrame(
        {
            "resolution": [r.resolution for r in rows],
            "dt": [r.dt for r in rows],
            "max_interior_error": [r.max_interior_error for r in rows],
        }
    )
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = table["max_interior_error"].shift(1) / table["max_interior_error"]
        table["observed_order"] = np.log2(ratio)
    return table
