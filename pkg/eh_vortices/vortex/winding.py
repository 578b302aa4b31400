"""Phase circulation of a complex lattice around cell faces."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from eh_vortices.exceptions import OnNodeError

TWO_PI = 2.0 * np.pi
ON_NODE_RELATIVE = 1e-14

IntArray = NDArray[np.int64]
ComplexArray = NDArray[np.complex128]


def plaquette_winding(w1: complex, w2: complex, w3: complex, w4: complex) -> int:
    """Winding of the phase around four corners given in cyclic order."""
    corners = np.array([w1, w2, w3, w4, w1], dtype=np.complex128)
    if np.any(corners == 0):
        msg = "plaquette corner value is exactly zero"
        raise OnNodeError(msg)
    total = np.sum(np.angle(corners[1:] / corners[:-1]))
    return int(np.rint(total / TWO_PI))


def on_node_mask(lattice: ComplexArray) -> NDArray[np.bool_]:
    """Vertices whose value is zero relative to the lattice scale."""
    scale = float(np.max(np.abs(lattice), initial=0.0))
    return np.abs(lattice) <= ON_NODE_RELATIVE * scale  # type: ignore[no-any-return]


@dataclass(frozen=True)
class FaceWindings:
    """Integer windings of every cell face.

    ``wx[i, j, l]`` belongs to the face at x-index ``i`` spanning cells
    ``(j, l)`` in (y, z) and is positive for circulation counter-clockwise
    about +x; likewise ``wy`` about +y (cyclic z, x) and ``wz`` about +z.
    """

    wx: IntArray
    wy: IntArray
    wz: IntArray

    def by_axis(self) -> tuple[IntArray, IntArray, IntArray]:
        return (self.wx, self.wy, self.wz)

    def net_cell_flux(self) -> IntArray:
        """Outward winding summed over the six faces of every cell."""
        return (  # type: ignore[no-any-return]
            self.wx[1:, :, :]
            - self.wx[:-1, :, :]
            + self.wy[:, 1:, :]
            - self.wy[:, :-1, :]
            + self.wz[:, :, 1:]
            - self.wz[:, :, :-1]
        )

    def through_plane(self, axis: int, index: int) -> int:
        """Total signed winding through the full lattice plane at ``index``."""
        w = self.by_axis()[axis]
        return int(np.take(w, index, axis=axis).sum())


def face_windings(lattice: ComplexArray) -> FaceWindings:
    """Face windings built from one shared set of edge phase differences.

    Each edge difference enters its neighbouring faces with opposite signs,
    so the outward sum over a cell cancels unless rounding goes astray.
    """
    if np.any(on_node_mask(lattice)):
        msg = "lattice has vertices on a zero of the field"
        raise OnNodeError(msg)
    ex = np.angle(lattice[1:, :, :] / lattice[:-1, :, :])
    ey = np.angle(lattice[:, 1:, :] / lattice[:, :-1, :])
    ez = np.angle(lattice[:, :, 1:] / lattice[:, :, :-1])

    wz = ex[:, :-1, :] + ey[1:, :, :] - ex[:, 1:, :] - ey[:-1, :, :]
    wx = ey[:, :, :-1] + ez[:, 1:, :] - ey[:, :, 1:] - ez[:, :-1, :]
    wy = ez[:-1, :, :] + ex[:, :, 1:] - ez[1:, :, :] - ex[:, :, :-1]
    return FaceWindings(
        wx=np.rint(wx / TWO_PI).astype(np.int64),
        wy=np.rint(wy / TWO_PI).astype(np.int64),
        wz=np.rint(wz / TWO_PI).astype(np.int64),
    )
