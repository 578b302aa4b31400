"""Exact polynomial algebra over (x, y, z, t) with a formal coupling grade.

Coefficients are Gaussian rationals (``QQ_I``); the fifth generator ``lam`` is
the bookkeeping power of the nonlinear coupling. Floating point appears only
in :meth:`MPoly.evaluate`.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Union

import numpy as np
from numpy.typing import NDArray
from sympy import QQ, QQ_I
from sympy.polys.rings import PolyElement, ring

from eh_vortices.exceptions import DegreeCapError, ParseError

VARIABLES = ("x", "y", "z", "t")
GRADE = "lam"
DEFAULT_DEGREE_CAP = 12

_RING, _X, _Y, _Z, _T, _LAM = ring("x,y,z,t,lam", QQ_I)
_GENERATORS = {"x": _X, "y": _Y, "z": _Z, "t": _T, GRADE: _LAM}
_INDEX = {"x": 0, "y": 1, "z": 2, "t": 3, GRADE: 4}

Monomial = tuple[int, int, int, int, int]
Rational = Union[int, Fraction, str]
Scalar = Union[int, Fraction, str, complex, Any]
Numeric = Union[complex, NDArray[np.complex128]]


def gaussian(re: Rational = 0, im: Rational = 0) -> Any:
    """Build an exact complex-rational coefficient from rational parts."""
    real = Fraction(re)
    imag = Fraction(im)
    return QQ_I(QQ(real.numerator, real.denominator), QQ(imag.numerator, imag.denominator))


IMAG = gaussian(0, 1)


def _coefficient(value: Scalar) -> Any:
    if QQ_I.of_type(value):
        return value
    if isinstance(value, complex):
        return gaussian(Fraction(value.real), Fraction(value.imag))
    if isinstance(value, (int, Fraction, str)):
        return gaussian(value)
    if isinstance(value, float):
        return gaussian(Fraction(value))
    msg = f"cannot use {value!r} as an exact coefficient"
    raise TypeError(msg)


def _parts(coeff: Any) -> tuple[Fraction, Fraction]:
    return (
        Fraction(int(coeff.x.numerator), int(coeff.x.denominator)),
        Fraction(int(coeff.y.numerator), int(coeff.y.denominator)),
    )


def _variable_index(var: str, *, allow_grade: bool = False) -> int:
    if var in VARIABLES or (allow_grade and var == GRADE):
        return _INDEX[var]
    msg = f"unknown variable {var!r}; expected one of {', '.join(VARIABLES)}"
    raise ValueError(msg)


class MPoly:
    """Immutable sparse polynomial in x, y, z, t (and the grade ``lam``)."""

    __slots__ = ("_numeric", "_poly", "cap")

    def __init__(self, poly: PolyElement | None = None, cap: int = DEFAULT_DEGREE_CAP) -> None:
        self._poly: PolyElement = _RING.zero if poly is None else poly
        self.cap = cap
        self._numeric: list[tuple[Monomial, complex]] | None = None

    # -- construction ---------------------------------------------------

    @classmethod
    def zero(cls, cap: int = DEFAULT_DEGREE_CAP) -> MPoly:
        return cls(_RING.zero, cap)

    @classmethod
    def constant(cls, value: Scalar, cap: int = DEFAULT_DEGREE_CAP) -> MPoly:
        return cls(_RING.ground_new(_coefficient(value)), cap)

    @classmethod
    def variable(cls, name: str, cap: int = DEFAULT_DEGREE_CAP) -> MPoly:
        _variable_index(name, allow_grade=True)
        return cls(_GENERATORS[name], cap)

    @classmethod
    def from_terms(
        cls, terms: Mapping[Monomial, Scalar], cap: int = DEFAULT_DEGREE_CAP
    ) -> MPoly:
        """Build a polynomial from ``{(ex, ey, ez, et, el): coefficient}``."""
        data: dict[Monomial, Any] = {}
        for monom, value in terms.items():
            if len(monom) != len(_INDEX) or any(e < 0 for e in monom):
                msg = f"invalid exponent tuple {monom!r}"
                raise ValueError(msg)
            data[tuple(int(e) for e in monom)] = _coefficient(value)  # type: ignore[assignment]
        return cls._checked("from_terms", _RING.from_dict(data), cap)

    @classmethod
    def _checked(cls, operation: str, poly: PolyElement, cap: int) -> MPoly:
        result = cls(poly, cap)
        if result.degree > cap:
            raise DegreeCapError(operation, result.degree, cap)
        return result

    def _coerce(self, other: MPoly | Scalar) -> PolyElement:
        if isinstance(other, MPoly):
            return other._poly
        return _RING.ground_new(_coefficient(other))

    # -- inspection -----------------------------------------------------

    def terms(self) -> list[tuple[Monomial, Fraction, Fraction]]:
        """Terms in canonical (ascending exponent tuple) order."""
        return [(monom, *_parts(coeff)) for monom, coeff in sorted(self._poly.items())]

    @property
    def degree(self) -> int:
        """Total degree in x, y, z, t (the grade is not counted)."""
        return max((sum(monom[:4]) for monom in self._poly), default=0)

    @property
    def grade_degree(self) -> int:
        return max((monom[4] for monom in self._poly), default=0)

    def is_zero(self) -> bool:
        return not self._poly

    def __len__(self) -> int:
        return len(self._poly)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, MPoly):
            return bool(self._poly == other._poly)
        if isinstance(other, (int, Fraction, complex)):
            return bool(self._poly == _RING.ground_new(_coefficient(other)))
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._poly)

    def __repr__(self) -> str:
        return f"MPoly({self._poly})"

    # -- ring arithmetic ------------------------------------------------

    def __add__(self, other: MPoly | Scalar) -> MPoly:
        return MPoly._checked("add", self._poly + self._coerce(other), self.cap)

    __radd__ = __add__

    def __sub__(self, other: MPoly | Scalar) -> MPoly:
        return MPoly._checked("sub", self._poly - self._coerce(other), self.cap)

    def __rsub__(self, other: MPoly | Scalar) -> MPoly:
        return MPoly._checked("sub", self._coerce(other) - self._poly, self.cap)

    def __neg__(self) -> MPoly:
        return MPoly(-self._poly, self.cap)

    def __mul__(self, other: MPoly | Scalar) -> MPoly:
        return MPoly._checked("mul", self._poly * self._coerce(other), self.cap)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> MPoly:
        if exponent < 0:
            msg = "negative powers are not polynomials"
            raise ValueError(msg)
        if exponent == 0:
            return MPoly.constant(1, self.cap)
        if self.degree * exponent > self.cap:
            raise DegreeCapError("pow", self.degree * exponent, self.cap)
        return MPoly._checked("pow", self._poly**exponent, self.cap)

    def scale(self, value: Scalar) -> MPoly:
        return MPoly._checked("scale", self._poly * _coefficient(value), self.cap)

    # -- calculus and structure -----------------------------------------

    def differentiate(self, var: str) -> MPoly:
        _variable_index(var)
        return MPoly(self._poly.diff(_GENERATORS[var]), self.cap)

    def real_field_conjugate(self) -> MPoly:
        """Conjugate coefficients only; x, y, z, t (and the grade) stay real."""
        data = {monom: QQ_I(coeff.x, -coeff.y) for monom, coeff in self._poly.items()}
        return MPoly(_RING.from_dict(data), self.cap)

    def substitute(self, var: str, value: Rational) -> MPoly:
        """Exact substitution of a rational value for one variable."""
        index = _variable_index(var, allow_grade=True)
        exact = gaussian(value)
        data: dict[Monomial, Any] = {}
        for monom, coeff in self._poly.items():
            reduced = monom[:index] + (0,) + monom[index + 1 :]
            term = coeff * exact ** monom[index] if monom[index] else coeff
            data[reduced] = data.get(reduced, QQ_I.zero) + term  # type: ignore[index]
        return MPoly(_RING.from_dict(data), self.cap)

    def coupling_grade(self) -> dict[int, MPoly]:
        """Split into grades: ``{k: coefficient of lam**k}`` with lam factored out."""
        buckets: dict[int, dict[Monomial, Any]] = {}
        for monom, coeff in self._poly.items():
            buckets.setdefault(monom[4], {})[monom[:4] + (0,)] = coeff  # type: ignore[index]
        return {
            grade: MPoly(_RING.from_dict(data), self.cap) for grade, data in sorted(buckets.items())
        }

    def truncate_grade(self, max_grade: int) -> MPoly:
        data = {m: c for m, c in self._poly.items() if m[4] <= max_grade}
        return MPoly(_RING.from_dict(data), self.cap)

    def split_by(self, var: str) -> dict[int, MPoly]:
        """Coefficients of the powers of one variable, with that variable removed."""
        index = _variable_index(var)
        buckets: dict[int, dict[Monomial, Any]] = {}
        for monom, coeff in self._poly.items():
            reduced = monom[:index] + (0,) + monom[index + 1 :]
            buckets.setdefault(monom[index], {})[reduced] = coeff  # type: ignore[index]
        return {
            power: MPoly(_RING.from_dict(data), self.cap)
            for power, data in sorted(buckets.items())
        }

    # -- numerics ---------------------------------------------------------

    def _numeric_terms(self) -> list[tuple[Monomial, complex]]:
        if self._numeric is None:
            self._numeric = [
                (monom, complex(float(re), float(im))) for monom, re, im in self.terms()
            ]
        return self._numeric

    def evaluate(
        self,
        x: float | NDArray[np.float64],
        y: float | NDArray[np.float64],
        z: float | NDArray[np.float64],
        t: float | NDArray[np.float64],
        lam: float = 0.0,
    ) -> Numeric:
        """Term-sum evaluation; array arguments broadcast against each other."""
        point = (x, y, z, t, lam)
        cache: dict[tuple[int, int], Any] = {}
        total: Any = 0j
        for monom, coeff in self._numeric_terms():
            value: Any = coeff
            for axis, exponent in enumerate(monom):
                if not exponent:
                    continue
                key = (axis, exponent)
                if key not in cache:
                    cache[key] = point[axis] ** exponent
                value = value * cache[key]
            total = total + value
        return total  # type: ignore[no-any-return]

    # -- text form --------------------------------------------------------

    def to_text(self) -> str:
        """One term per line: ``ex ey ez et el : re im`` in canonical order."""
        lines = [f"# MPoly {' '.join((*VARIABLES, GRADE))}"]
        lines.extend(
            f"{' '.join(str(e) for e in monom)} : {re} {im}" for monom, re, im in self.terms()
        )
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, cap: int = DEFAULT_DEGREE_CAP) -> MPoly:
        terms: dict[Monomial, Scalar] = {}
        for number, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            try:
                exps, coeffs = line.split(":")
                monom = tuple(int(e) for e in exps.split())
                re, im = (Fraction(c) for c in coeffs.split())
            except ValueError as exc:
                msg = f"line {number}: cannot parse polynomial term {line!r}"
                raise ParseError(msg) from exc
            if len(monom) != len(_INDEX):
                msg = f"line {number}: expected {len(_INDEX)} exponents, got {len(monom)}"
                raise ParseError(msg)
            terms[monom] = gaussian(re, im)  # type: ignore[index]
        return cls.from_terms(terms, cap)


@dataclass(frozen=True)
class VecPoly:
    """Three polynomial components (Fx, Fy, Fz)."""

    x: MPoly
    y: MPoly
    z: MPoly

    @classmethod
    def zero(cls) -> VecPoly:
        return cls(MPoly.zero(), MPoly.zero(), MPoly.zero())

    @classmethod
    def constant(cls, vx: Scalar, vy: Scalar, vz: Scalar) -> VecPoly:
        return cls(MPoly.constant(vx), MPoly.constant(vy), MPoly.constant(vz))

    def components(self) -> tuple[MPoly, MPoly, MPoly]:
        return (self.x, self.y, self.z)

    def map(self, fn: Any) -> VecPoly:
        return VecPoly(fn(self.x), fn(self.y), fn(self.z))

    @property
    def degree(self) -> int:
        return max(c.degree for c in self.components())

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components())

    def __add__(self, other: VecPoly) -> VecPoly:
        return VecPoly(self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other: VecPoly) -> VecPoly:
        return VecPoly(self.x - other.x, self.y - other.y, self.z - other.z)

    def __neg__(self) -> VecPoly:
        return self.map(lambda c: -c)

    def __mul__(self, factor: MPoly | Scalar) -> VecPoly:
        return self.map(lambda c: c * factor)

    __rmul__ = __mul__

    def dot(self, other: VecPoly) -> MPoly:
        """Unconjugated dot product."""
        return self.x * other.x + self.y * other.y + self.z * other.z

    def differentiate(self, var: str) -> VecPoly:
        return self.map(lambda c: c.differentiate(var))

    def real_field_conjugate(self) -> VecPoly:
        return self.map(MPoly.real_field_conjugate)

    def substitute(self, var: str, value: Rational) -> VecPoly:
        return self.map(lambda c: c.substitute(var, value))

    def truncate_grade(self, max_grade: int) -> VecPoly:
        return self.map(lambda c: c.truncate_grade(max_grade))

    def split_by(self, var: str) -> dict[int, VecPoly]:
        split = [c.split_by(var) for c in self.components()]
        powers = sorted(set().union(*split))
        return {
            p: VecPoly(*(parts.get(p, MPoly.zero()) for parts in split)) for p in powers
        }

    def coupling_grade(self) -> dict[int, VecPoly]:
        split = [c.coupling_grade() for c in self.components()]
        grades = sorted(set().union(*split))
        return {
            g: VecPoly(*(parts.get(g, MPoly.zero()) for parts in split)) for g in grades
        }

    def evaluate(
        self,
        x: float | NDArray[np.float64],
        y: float | NDArray[np.float64],
        z: float | NDArray[np.float64],
        t: float | NDArray[np.float64],
        lam: float = 0.0,
    ) -> NDArray[np.complex128]:
        """Evaluate all components; the result has a leading axis of length 3."""
        values = [c.evaluate(x, y, z, t, lam) for c in self.components()]
        return np.stack(np.broadcast_arrays(*values)).astype(np.complex128)

    def to_text(self) -> str:
        blocks = [f"[{name}]\n{comp.to_text()}" for name, comp in zip("xyz", self.components())]
        return "".join(blocks)

    @classmethod
    def from_text(cls, text: str) -> VecPoly:
        sections: dict[str, list[str]] = {}
        current: str | None = None
        for raw in text.splitlines():
            line = raw.strip()
            if line in ("[x]", "[y]", "[z]"):
                current = line[1]
                sections[current] = []
            elif current is not None:
                sections[current].append(line)
        if set(sections) != {"x", "y", "z"}:
            msg = f"vector polynomial text needs [x], [y], [z] sections, got {sorted(sections)}"
            raise ParseError(msg)
        return cls(*(MPoly.from_text("\n".join(sections[k])) for k in "xyz"))


def grad(p: MPoly) -> VecPoly:
    return VecPoly(p.differentiate("x"), p.differentiate("y"), p.differentiate("z"))


def curl(v: VecPoly) -> VecPoly:
    """Exact curl (dy Vz - dz Vy, dz Vx - dx Vz, dx Vy - dy Vx)."""
    return VecPoly(
        v.z.differentiate("y") - v.y.differentiate("z"),
        v.x.differentiate("z") - v.z.differentiate("x"),
        v.y.differentiate("x") - v.x.differentiate("y"),
    )


def divergence(v: VecPoly) -> MPoly:
    return v.x.differentiate("x") + v.y.differentiate("y") + v.z.differentiate("z")


def variables() -> tuple[MPoly, MPoly, MPoly, MPoly, MPoly]:
    """Return the generators ``(x, y, z, t, lam)`` as polynomials."""
    return (
        MPoly.variable("x"),
        MPoly.variable("y"),
        MPoly.variable("z"),
        MPoly.variable("t"),
        MPoly.variable(GRADE),
    )


def as_terms(pairs: Iterable[tuple[Monomial, Scalar]]) -> dict[Monomial, Scalar]:
    """Accumulate (monomial, coefficient) pairs, summing repeated monomials."""
    acc: dict[Monomial, Any] = {}
    for monom, value in pairs:
        acc[monom] = acc.get(monom, QQ_I.zero) + _coefficient(value)
    return acc
