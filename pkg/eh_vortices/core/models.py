"""Core data models for eh-vortices."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Any

import numpy as np
from numpy.typing import NDArray

from eh_vortices.exceptions import ParameterError

DEFAULT_ALPHA = 1 / 137.035999
MIN_RESOLUTION = 8

FloatArray = NDArray[np.float64]


class CaseTag(Enum):
    """The two seed configurations."""

    RING_A = "a"
    PAIR_B = "b"


class CorrectionSource(Enum):
    """Where the order-lambda correction coefficients come from."""

    SERIES = "series"
    TABULATED = "tabulated"


@dataclass(frozen=True)
class Coupling:
    """Euler-Heisenberg coupling; ``lam`` is 2 alpha^2 / (45 m^4) times ``scale``."""

    alpha: float = DEFAULT_ALPHA
    m: float = 1.0
    scale: float = 1.0

    def __post_init__(self) -> None:
        if not self.m > 0:
            msg = f"electron mass must be positive, got {self.m}"
            raise ParameterError(msg)
        if self.alpha < 0:
            msg = f"alpha must be non-negative, got {self.alpha}"
            raise ParameterError(msg)
        if self.scale < 0:
            msg = f"coupling scale must be non-negative, got {self.scale}"
            raise ParameterError(msg)

    @property
    def lam(self) -> float:
        return self.scale * 2.0 * self.alpha**2 / (45.0 * self.m**4)

    @classmethod
    def classical(cls) -> Coupling:
        return cls(alpha=0.0)


@dataclass(frozen=True)
class Invariants:
    """The two Poincare invariants; arrays when evaluated on lattices."""

    S: Any
    P: Any


@dataclass(frozen=True)
class FieldSample:
    """Real fields at one point (or a lattice of points, vector axis last)."""

    D: FloatArray
    B: FloatArray
    E: FloatArray | None = None

    def __post_init__(self) -> None:
        for name in ("D", "B"):
            if not np.all(np.isfinite(getattr(self, name))):
                msg = f"field sample {name} has non-finite components"
                raise ParameterError(msg)

    @property
    def fplus(self) -> NDArray[np.complex128]:
        return (np.asarray(self.D) + 1j * np.asarray(self.B)) / np.sqrt(2.0)

    @property
    def fminus(self) -> NDArray[np.complex128]:
        return np.conj(self.fplus)

    def invariants(self) -> Invariants:
        """S and P built from D in place of E."""
        d = np.asarray(self.D)
        b = np.asarray(self.B)
        return Invariants(
            S=0.5 * (np.sum(d * d, axis=-1) - np.sum(b * b, axis=-1)),
            P=np.sum(d * b, axis=-1),
        )


@dataclass(frozen=True)
class SolutionParams:
    """Parameters of one analytic solution."""

    case: CaseTag = CaseTag.RING_A
    a: Fraction = Fraction(1)
    m: float = 1.0
    alpha: float = DEFAULT_ALPHA
    coupling_scale: float = 1.0
    source: CorrectionSource = CorrectionSource.SERIES

    def __post_init__(self) -> None:
        if not self.a > 0:
            msg = f"geometry scale a must be positive, got {self.a}"
            raise ParameterError(msg)
        Coupling(alpha=self.alpha, m=self.m, scale=self.coupling_scale)

    @property
    def coupling(self) -> Coupling:
        return Coupling(alpha=self.alpha, m=self.m, scale=self.coupling_scale)

    @property
    def lam(self) -> float:
        return self.coupling.lam


@dataclass(frozen=True)
class GridSpec:
    """Axis-aligned vertex lattice: ``resolution`` cells per axis inside ``bounds``.

    ``offset`` shifts every vertex by that fraction of a cell width; it is
    how on-node zeros are broken reproducibly.
    """

    bounds: tuple[tuple[float, float], tuple[float, float], tuple[float, float]] = (
        (-4.0, 4.0),
        (-4.0, 4.0),
        (-4.0, 4.0),
    )
    resolution: tuple[int, int, int] = (48, 48, 48)
    offset: tuple[float, float, float] = (0.0, 0.0, 0.0)

    def __post_init__(self) -> None:
        for axis, ((lo, hi), n) in enumerate(zip(self.bounds, self.resolution)):
            if not lo < hi:
                msg = f"axis {'xyz'[axis]}: lower bound {lo} must be below upper bound {hi}"
                raise ParameterError(msg)
            if n < MIN_RESOLUTION:
                msg = f"axis {'xyz'[axis]}: resolution {n} is below the minimum {MIN_RESOLUTION}"
                raise ParameterError(msg)

    @classmethod
    def cube(cls, half_width: float, cells: int) -> GridSpec:
        span = (-float(half_width), float(half_width))
        return cls(bounds=(span, span, span), resolution=(cells, cells, cells))

    @property
    def spacing(self) -> tuple[float, float, float]:
        return tuple(  # type: ignore[return-value]
            (hi - lo) / n for (lo, hi), n in zip(self.bounds, self.resolution)
        )

    @property
    def cell_diagonal(self) -> float:
        return float(np.linalg.norm(self.spacing))

    @property
    def min_spacing(self) -> float:
        return min(self.spacing)

    def axes(self) -> tuple[FloatArray, FloatArray, FloatArray]:
        """Vertex coordinates along each axis (``resolution + 1`` points)."""
        return tuple(  # type: ignore[return-value]
            np.linspace(lo, hi, n + 1) + shift * h
            for (lo, hi), n, shift, h in zip(
                self.bounds, self.resolution, self.offset, self.spacing
            )
        )

    def mesh(self) -> tuple[FloatArray, FloatArray, FloatArray]:
        x, y, z = self.axes()
        return np.meshgrid(x, y, z, indexing="ij")  # type: ignore[return-value]

    def shifted(self) -> GridSpec:
        """The same lattice moved by half a cell along every axis."""
        return GridSpec(
            bounds=self.bounds,
            resolution=self.resolution,
            offset=tuple(o + 0.5 for o in self.offset),  # type: ignore[arg-type]
        )

    def refined(self, factor: int = 2) -> GridSpec:
        return GridSpec(
            bounds=self.bounds,
            resolution=tuple(n * factor for n in self.resolution),  # type: ignore[arg-type]
            offset=self.offset,
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "bounds": [list(b) for b in self.bounds],
            "resolution": list(self.resolution),
            "offset": list(self.offset),
        }


@dataclass
class VortexCurve:
    """Oriented polyline along a vortex line."""

    points: FloatArray
    closed: bool
    component_id: int = 0
    orientation: tuple[int, ...] = ()
    low_confidence: int = 0

    def __len__(self) -> int:
        return int(len(self.points))

    def to_dict(self) -> dict[str, Any]:
        return {
            "closed": self.closed,
            "component_id": self.component_id,
            "points": [[float(c) for c in p] for p in self.points],
        }


@dataclass(frozen=True)
class RefinedPoint:
    """Outcome of a crossing refinement."""

    point: FloatArray
    converged: bool
    iterations: int
    residual: float


@dataclass(frozen=True)
class ComponentMetrics:
    """Shape metrics of one extracted curve."""

    closed: bool
    ring_radius: float
    planarity_deviation: float
    arc_length: float
    point_count: int


@dataclass
class TopologyReport:
    """Per-time-slice summary of the extracted vortex lines."""

    time: float
    components: list[ComponentMetrics] = field(default_factory=list)
    degenerate_cells: int = 0
    topology_event: bool = False

    @property
    def component_count(self) -> int:
        return len(self.components)

    @property
    def open_count(self) -> int:
        return sum(1 for c in self.components if not c.closed)

    def largest(self) -> ComponentMetrics | None:
        """The component with the longest arc length."""
        return max(self.components, key=lambda c: c.arc_length, default=None)


@dataclass
class RunConfig:
    """Resolved configuration of one CLI run; embedded in every output file."""

    command: str = "verify"
    case: CaseTag = CaseTag.RING_A
    quantum: bool = True
    a: Fraction = Fraction(1)
    m: float = 1.0
    alpha: float = DEFAULT_ALPHA
    coupling_scale: float = 1.0
    source: CorrectionSource = CorrectionSource.SERIES
    grid: GridSpec = field(default_factory=GridSpec)
    t_start: float = 0.0
    t_end: float = 0.0
    frames: int = 1
    dt: float = 0.01
    output_dir: Path = Path("out")
    workers: int = 1
    refine: bool = False
    mutate: str | None = None
    dump_dir: Path | None = None
    camera: str = "ring"
    overlay: bool = False
    inputs: tuple[Path, ...] = ()
    levels: int = 3
    log_file: Path | None = None
    first_order_square: bool = False

    @property
    def effective_alpha(self) -> float:
        return self.alpha if self.quantum else 0.0

    def solution_params(self) -> SolutionParams:
        return SolutionParams(
            case=self.case,
            a=self.a,
            m=self.m,
            alpha=self.effective_alpha,
            coupling_scale=self.coupling_scale,
            source=self.source,
        )

    def times(self) -> FloatArray:
        """Closed, uniformly spaced frame times."""
        return np.linspace(self.t_start, self.t_end, self.frames)

    def to_dict(self) -> dict[str, Any]:
        """Every field in JSON form; ``load_run_config`` reads it back unchanged."""
        return {
            "command": self.command,
            "case": self.case.value,
            "quantum": self.quantum,
            "a": str(self.a),
            "m": self.m,
            "alpha": self.alpha,
            "effective_alpha": self.effective_alpha,
            "coupling_scale": self.coupling_scale,
            "lambda": self.solution_params().lam,
            "source": self.source.value,
            "grid": self.grid.to_dict(),
            "t_start": self.t_start,
            "t_end": self.t_end,
            "frames": self.frames,
            "dt": self.dt,
            "output_dir": str(self.output_dir),
            "workers": self.workers,
            "refine": self.refine,
            "first_order_square": self.first_order_square,
            "mutate": self.mutate,
            "dump_dir": None if self.dump_dir is None else str(self.dump_dir),
            "camera": self.camera,
            "overlay": self.overlay,
            "inputs": [str(p) for p in self.inputs],
            "levels": self.levels,
            "log_file": None if self.log_file is None else str(self.log_file),
        }
