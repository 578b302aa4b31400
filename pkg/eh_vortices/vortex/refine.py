"""Gauss-Newton refinement of crossing points onto S = 0, P = 0."""

from __future__ import annotations

from typing import Protocol

import numpy as np
from numpy.typing import ArrayLike, NDArray

from eh_vortices.core.models import RefinedPoint
from eh_vortices.logging import format_point, get_logger

_log = get_logger(__name__)

MAX_ITERATIONS = 25
RELATIVE_TOLERANCE = 1e-9


class FieldFunction(Protocol):
    def evaluate(self, x: object, y: object, z: object, t: object) -> NDArray[np.complex128]: ...

    def squared(self, x: object, y: object, z: object, t: object) -> NDArray[np.complex128]: ...


def _residual(
    solution: FieldFunction, point: NDArray[np.float64], t: float
) -> tuple[NDArray[np.float64], float]:
    """(Re F+^2, Im F+^2) and the local field scale sum |F_i|^2."""
    f = np.asarray(solution.evaluate(point[0], point[1], point[2], t), dtype=np.complex128)
    square = complex(solution.squared(point[0], point[1], point[2], t))
    return np.array([square.real, square.imag]), float(np.sum(np.abs(f) ** 2))


def _jacobian(solution: FieldFunction, point: NDArray[np.float64], t: float) -> NDArray[np.float64]:
    h = 1e-6 * max(1.0, float(np.max(np.abs(point))))
    columns = []
    for axis in range(3):
        step = np.zeros(3)
        step[axis] = h
        forward, _ = _residual(solution, point + step, t)
        backward, _ = _residual(solution, point - step, t)
        columns.append((forward - backward) / (2 * h))
    return np.stack(columns, axis=1)


def refine_crossing(
    solution: FieldFunction,
    t: float,
    seed_point: ArrayLike,
    *,
    max_iterations: int = MAX_ITERATIONS,
    max_shift: float | None = None,
) -> RefinedPoint:
    """Pull a seed onto the vortex line with minimum-norm Gauss-Newton steps.

    Converged when both |Re F+^2| and |Im F+^2| fall below 1e-9 times the local
    sum |F_i|^2. If that does not happen within ``max_iterations``, or the
    point wanders more than ``max_shift`` from the seed, the seed is returned
    unrefined with ``converged=False``.
    """
    seed = np.asarray(seed_point, dtype=np.float64)
    point = seed.copy()
    for iteration in range(max_iterations + 1):
        residual, scale = _residual(solution, point, t)
        if np.all(np.abs(residual) <= RELATIVE_TOLERANCE * scale):
            return RefinedPoint(point, True, iteration, float(np.max(np.abs(residual))))
        if iteration == max_iterations:
            break
        step, *_ = np.linalg.lstsq(_jacobian(solution, point, t), -residual, rcond=None)
        point = point + step
        if not np.all(np.isfinite(point)):
            break
        if max_shift is not None and np.linalg.norm(point - seed) > max_shift:
            break
    final, _ = _residual(solution, seed, t)
    _log.debug("refinement did not converge from %s at t=%.6g", format_point(seed), t)
    return RefinedPoint(seed, False, max_iterations, float(np.max(np.abs(final))))
