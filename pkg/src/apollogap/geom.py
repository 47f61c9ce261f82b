"""Planar inversive geometry: oriented circles, inversions and Mobius maps.

Circles and lines share one representation, the inversive coordinates
``(cocurv, curv, cx, cy)``:

* ``curv`` is the signed curvature ``1/r``; a negative value orients the
  circle by its exterior (the bounding circle of a packing).
* ``(cx, cy)`` is curvature times center.  For a line (``curv == 0``) it is
  the unit normal.
* ``cocurv`` is the curvature of the image under inversion in the unit
  circle, ``(cx**2 + cy**2 - 1) / curv``; for the line ``n . z = d`` it is
  ``2 d``.

Every circle has unit norm under the form ``cx**2 + cy**2 - curv * cocurv``.

Tangency convention: circles are oriented by their interior.  Two circles
with disjoint interiors touching at a point have product ``-1``; a circle
touching the inside of a larger, same-oriented circle has product ``+1``.
With the bounding circle carrying negative curvature every tangency inside a
packing evaluates to ``-1``.  Callers should use :func:`is_tangent` rather
than comparing raw signs.

Coordinates that are all ``int`` or :class:`fractions.Fraction` are kept
exact through every operation; anything else is evaluated in floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Integral, Rational
from typing import Union

import numpy as np

Number = Union[int, float, Fraction]


class SingularInputError(ValueError):
    """Raised when an operation is evaluated at one of its poles."""


def _is_exact(*values) -> bool:
    return all(isinstance(v, (Integral, Rational)) and not isinstance(v, bool) for v in values)


def _tidy(v):
    """Collapse integral fractions and numpy integers to plain ``int``."""
    if isinstance(v, Fraction) and v.denominator == 1:
        return int(v.numerator)
    if isinstance(v, np.integer):
        return int(v)
    return v


@dataclass(frozen=True)
class InversiveCircle:
    cocurv: Number
    curv: Number
    cx: Number
    cy: Number

    @classmethod
    def from_center(cls, x: Number, y: Number, r: Number, *, outward: bool = False) -> "InversiveCircle":
        """Circle with center ``(x, y)`` and radius ``r``.

        ``outward=True`` orients the circle by its exterior, giving it
        negative curvature.
        """
        if r <= 0:
            raise ValueError("radius must be positive")
        if _is_exact(x, y, r):
            k = Fraction(1) / Fraction(r)
        else:
            k = 1.0 / r
        if outward:
            k = -k
        cx, cy = k * x, k * y
        cocurv = (cx * cx + cy * cy - 1) / k
        return cls(_tidy(cocurv), _tidy(k), _tidy(cx), _tidy(cy))

    @classmethod
    def line(cls, nx: Number, ny: Number, d: Number) -> "InversiveCircle":
        """The line ``nx*x + ny*y = d``; its interior is the side ``n . z > d``.

        ``(nx, ny)`` must be a unit vector.  This is the limit of circles
        tangent to the line whose centers run off along ``n``.
        """
        return cls(_tidy(2 * d), 0, _tidy(nx), _tidy(ny))

    @property
    def is_line(self) -> bool:
        return self.curv == 0

    @property
    def center(self) -> tuple:
        if self.is_line:
            raise ValueError("a line has no center")
        return (self.cx / self.curv, self.cy / self.curv)

    @property
    def radius(self) -> float:
        if self.is_line:
            return math.inf
        return abs(1 / self.curv)

    def norm(self) -> Number:
        return self.cx * self.cx + self.cy * self.cy - self.curv * self.cocurv

    def as_tuple(self) -> tuple:
        return (self.cocurv, self.curv, self.cx, self.cy)

    def as_array(self) -> np.ndarray:
        return np.array([float(v) for v in self.as_tuple()])

    def flipped(self) -> "InversiveCircle":
        return InversiveCircle(-self.cocurv, -self.curv, -self.cx, -self.cy)

    def __neg__(self) -> "InversiveCircle":
        return self.flipped()


def inversive_product(c1: InversiveCircle, c2: InversiveCircle) -> Number:
    """Symmetric bilinear pairing; equals ``1`` on the diagonal.

    For two circles it is ``(r1**2 + r2**2 - d**2) / (2 r1 r2)`` with signed
    radii, so ``|p| < 1`` means the circles cross at angle ``arccos(-p)``,
    ``|p| = 1`` tangency and ``|p| > 1`` disjoint or nested.
    """
    two_p = 2 * (c1.cx * c2.cx + c1.cy * c2.cy) - (c1.curv * c2.cocurv + c1.cocurv * c2.curv)
    if _is_exact(two_p):
        return _tidy(Fraction(two_p) / 2)
    return two_p / 2


def is_tangent(c1: InversiveCircle, c2: InversiveCircle, *, oriented: bool = True, tol: float = 1e-9) -> bool:
    """Tangency predicate under the module's orientation convention.

    With ``oriented=True`` only tangencies with disjoint interiors count
    (product ``-1``), which is the packing relation.  Otherwise either sign
    is accepted.
    """
    p = inversive_product(c1, c2)
    if oriented:
        return abs(p + 1) <= tol
    return abs(abs(p) - 1) <= tol


def reflect_circle(mirror: InversiveCircle, c: InversiveCircle) -> InversiveCircle:
    """Image of ``c`` under inversion in ``mirror`` (``c - 2<c, m> m``).

    Reflecting a circle in itself reverses its orientation.
    """
    p2 = 2 * inversive_product(c, mirror)
    out = tuple(_tidy(a - p2 * b) for a, b in zip(c.as_tuple(), mirror.as_tuple()))
    return InversiveCircle(*out)


def reflect_circles(mirrors: np.ndarray, circles: np.ndarray) -> np.ndarray:
    """Vectorised :func:`reflect_circle` on ``(..., 4)`` coordinate arrays.

    Mirrors need not be normalised; the reflection is divided by the mirror
    norm.  Integer input stays integer and the division is checked to be
    exact.
    """
    m = np.asarray(mirrors)
    c = np.asarray(circles)
    two_cm = 2 * (c[..., 2] * m[..., 2] + c[..., 3] * m[..., 3]) - (c[..., 1] * m[..., 0] + c[..., 0] * m[..., 1])
    two_mm = 2 * (m[..., 2] ** 2 + m[..., 3] ** 2) - 2 * m[..., 1] * m[..., 0]
    num = 2 * two_cm[..., None] * m
    if np.issubdtype(num.dtype, np.integer):
        q, rem = np.divmod(num, two_mm[..., None])
        if np.any(rem):
            raise ArithmeticError("reflection leaves the integer lattice")
        return c - q
    return c - num / two_mm[..., None]


@dataclass(frozen=True)
class Point:
    x: float
    y: float

    @classmethod
    def at_infinity(cls) -> "Point":
        return cls(math.inf, math.inf)

    @property
    def is_infinite(self) -> bool:
        return math.isinf(self.x) or math.isinf(self.y)

    @property
    def is_interior(self) -> bool:
        """True for points of the upper half-plane (``y > 0``)."""
        return not self.is_infinite and self.y > 0


def reflect_point(mirror: InversiveCircle, p: Point) -> Point:
    if p.is_infinite:
        if mirror.is_line:
            return p
        cx, cy = mirror.center
        return Point(float(cx), float(cy))
    if mirror.is_line:
        nx, ny = float(mirror.cx), float(mirror.cy)
        t = 2 * (nx * p.x + ny * p.y) - float(mirror.cocurv)
        return Point(p.x - t * nx, p.y - t * ny)
    cx, cy = (float(v) for v in mirror.center)
    dx, dy = p.x - cx, p.y - cy
    d2 = dx * dx + dy * dy
    if d2 == 0:
        raise SingularInputError("cannot invert the center of the mirror circle")
    r2 = float(mirror.radius) ** 2
    return Point(cx + r2 * dx / d2, cy + r2 * dy / d2)


@dataclass(frozen=True)
class Mobius:
    """Real 2x2 matrix acting on the upper half-plane.

    Determinant ``+1`` acts by ``z -> (az+b)/(cz+d)``; determinant ``-1``
    acts anti-holomorphically by ``z -> (a zbar + b)/(c zbar + d)``, which
    covers the reflections.  Construction rescales to ``|ad - bc| = 1``.
    """

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        det = self.a * self.d - self.b * self.c
        if det == 0:
            raise SingularInputError("singular matrix")
        s = math.sqrt(abs(det))
        if abs(s - 1.0) > 1e-15:
            for name in "abcd":
                object.__setattr__(self, name, getattr(self, name) / s)

    @property
    def det(self) -> float:
        return self.a * self.d - self.b * self.c

    @classmethod
    def identity(cls) -> "Mobius":
        return cls(1.0, 0.0, 0.0, 1.0)

    @classmethod
    def translation(cls, t: float) -> "Mobius":
        return cls(1.0, t, 0.0, 1.0)

    @classmethod
    def inversion(cls) -> "Mobius":
        """``z -> -1/z``, the order-two Hecke generator."""
        return cls(0.0, -1.0, 1.0, 0.0)

    def __matmul__(self, other: "Mobius") -> "Mobius":
        return Mobius(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def as_array(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]])


def apply_mobius(m: Mobius, p: Point) -> Point:
    if p.is_infinite:
        if m.c == 0:
            return Point.at_infinity()
        return Point(m.a / m.c, 0.0)
    z = complex(p.x, p.y if m.det > 0 else -p.y)
    den = m.c * z + m.d
    if den == 0:
        return Point.at_infinity()
    w = (m.a * z + m.b) / den
    return Point(w.real, w.imag)


def cosh_distance(p: Point, q: Point) -> float:
    """``cosh`` of the hyperbolic distance between two upper half-plane points."""
    return 1.0 + ((p.x - q.x) ** 2 + (p.y - q.y) ** 2) / (2.0 * p.y * q.y)


# Walls of the Coxeter polyhedron of the Picard group's reflective extension,
# drawn on the boundary plane.  W0 is the line y = 0; removing its reflection
# leaves the Apollonian symmetry group, and the orbit of W0 under the other
# four reflections is the strip packing bounded by y = 0 and y = 1.
PICARD_WALLS = (
    InversiveCircle.line(0, -1, 0),  # W0: y = 0, interior y < 0
    InversiveCircle.line(1, 0, 0),  # W1: x = 0
    InversiveCircle.line(1, 0, Fraction(1, 2)),  # W2: x = 1/2
    InversiveCircle.line(0, 1, Fraction(1, 2)),  # W3: y = 1/2
    InversiveCircle(-1, 1, 0, 0),  # W4: unit circle
)
