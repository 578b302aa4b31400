"""Pointwise Euler-Heisenberg field relations.

Every function takes real 3-vectors (or stacks of them, vector axis last) and
returns numpy values; nothing here holds state.
"""

from __future__ import annotations

import numpy as np
from numpy.typing import ArrayLike, NDArray

from eh_vortices.core.models import Coupling, Invariants

_SQRT2 = np.sqrt(2.0)


def _dot(u: NDArray[np.float64], v: NDArray[np.float64]) -> NDArray[np.float64]:
    return np.sum(u * v, axis=-1)


def _vectors(*values: ArrayLike) -> list[NDArray[np.float64]]:
    return [np.asarray(v, dtype=np.float64) for v in values]


def invariants(E: ArrayLike, B: ArrayLike) -> Invariants:
    """S = (E.E - B.B)/2 and P = E.B."""
    e, b = _vectors(E, B)
    return Invariants(S=0.5 * (_dot(e, e) - _dot(b, b)), P=_dot(e, b))


def lagrangian_density(E: ArrayLike, B: ArrayLike, c: Coupling) -> NDArray[np.float64]:
    inv = invariants(E, B)
    return inv.S + c.lam * (4.0 * inv.S**2 + 7.0 * inv.P**2)  # type: ignore[no-any-return]


def constitutive_D(E: ArrayLike, B: ArrayLike, c: Coupling) -> NDArray[np.float64]:
    """D = dL/dE = (1 + 8 lam S) E + 14 lam P B."""
    e, b = _vectors(E, B)
    inv = invariants(e, b)
    s = np.asarray(inv.S)[..., None]
    p = np.asarray(inv.P)[..., None]
    return (1.0 + 8.0 * c.lam * s) * e + 14.0 * c.lam * p * b  # type: ignore[no-any-return]


def inverse_constitutive_E(
    D: ArrayLike, B: ArrayLike, c: Coupling, *, printed: bool = False
) -> NDArray[np.float64]:
    """E as a function of (D, B), first order in the coupling.

    The default coefficient of D is the first-order inverse of
    :func:`constitutive_D`, identical to ``dH_dD``. ``printed=True`` uses the
    doubled coefficient ``K = -(16/45 m^4)(D^2 - B^2)`` as it was published.
    """
    d, b = _vectors(D, B)
    q = (_dot(d, d) - _dot(b, b))[..., None]
    pdb = _dot(d, b)[..., None]
    k = 8.0 if printed else 4.0
    return (1.0 - k * c.lam * q) * d - 14.0 * c.lam * pdb * b  # type: ignore[no-any-return]


def hamiltonian_density(D: ArrayLike, B: ArrayLike, c: Coupling) -> NDArray[np.float64]:
    d, b = _vectors(D, B)
    q = _dot(d, d) - _dot(b, b)
    return (  # type: ignore[no-any-return]
        0.5 * (_dot(d, d) + _dot(b, b)) - c.lam * q**2 - 7.0 * c.lam * _dot(d, b) ** 2
    )


def dH_dD(D: ArrayLike, B: ArrayLike, c: Coupling) -> NDArray[np.float64]:  # noqa: N802
    d, b = _vectors(D, B)
    q = (_dot(d, d) - _dot(b, b))[..., None]
    pdb = _dot(d, b)[..., None]
    return d * (1.0 - 4.0 * c.lam * q) - 14.0 * c.lam * pdb * b  # type: ignore[no-any-return]


def dH_dB(D: ArrayLike, B: ArrayLike, c: Coupling) -> NDArray[np.float64]:  # noqa: N802
    d, b = _vectors(D, B)
    q = (_dot(d, d) - _dot(b, b))[..., None]
    pdb = _dot(d, b)[..., None]
    return b * (1.0 + 4.0 * c.lam * q) - 14.0 * c.lam * pdb * d  # type: ignore[no-any-return]


def to_riemann_silberstein(
    D: ArrayLike, B: ArrayLike
) -> tuple[NDArray[np.complex128], NDArray[np.complex128]]:
    """F+- = (D +- iB)/sqrt(2)."""
    d, b = _vectors(D, B)
    fplus = (d + 1j * b) / _SQRT2
    return fplus, np.conj(fplus)


def from_riemann_silberstein(
    fplus: ArrayLike,
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Recover real (D, B) from F+."""
    f = np.asarray(fplus, dtype=np.complex128) * _SQRT2
    return f.real.copy(), f.imag.copy()


def rs_squared(fplus: ArrayLike) -> NDArray[np.complex128]:
    """Unconjugated square F+ . F+, equal to S + iP for real fields."""
    f = np.asarray(fplus, dtype=np.complex128)
    return np.sum(f * f, axis=-1)  # type: ignore[no-any-return]
