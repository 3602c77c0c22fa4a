"""3D vector and path arithmetic.

Coordinates follow one fixed convention throughout the package:
x points along RT (right), y along FT (front), z along UP.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DegeneratePath, InvalidArgument

__all__ = [
    "Vec3",
    "Point3",
    "ZERO",
    "PathKind",
    "Path3",
    "OrientingLevel",
    "RotationAxis",
    "Closure",
    "rotation_matrix",
    "rotate",
    "scale",
    "project",
    "closure_of",
    "angle_between",
    "ARC_SAMPLES_PER_QUARTER",
    "DEFAULT_CLOSURE_EPS",
]

ARC_SAMPLES_PER_QUARTER = 16
DEFAULT_CLOSURE_EPS = 0.05


@dataclass(frozen=True, slots=True)
class Vec3:
    x: float
    y: float
    z: float

    def __post_init__(self):
        for c in (self.x, self.y, self.z):
            if not math.isfinite(c):
                raise InvalidArgument(f"non-finite vector component in {self!r}")

    @classmethod
    def of(cls, seq: Sequence[float]) -> "Vec3":
        if len(seq) != 3:
            raise InvalidArgument(f"expected 3 components, got {len(seq)}")
        return cls(float(seq[0]), float(seq[1]), float(seq[2]))

    def __iter__(self):
        yield self.x
        yield self.y
        yield self.z

    def __add__(self, other: "Vec3") -> "Vec3":
        return Vec3(self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other: "Vec3") -> "Vec3":
        return Vec3(self.x - other.x, self.y - other.y, self.z - other.z)

    def __neg__(self) -> "Vec3":
        return Vec3(-self.x, -self.y, -self.z)

    def __mul__(self, k: float) -> "Vec3":
        return Vec3(self.x * k, self.y * k, self.z * k)

    __rmul__ = __mul__

    def dot(self, other: "Vec3") -> float:
        return self.x * other.x + self.y * other.y + self.z * other.z

    def cross(self, other: "Vec3") -> "Vec3":
        return Vec3(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )

    def norm(self) -> float:
        return math.sqrt(self.dot(self))

    def unit(self) -> "Vec3":
        n = self.norm()
        if n == 0.0:
            raise InvalidArgument("cannot normalize the zero vector")
        return Vec3(self.x / n, self.y / n, self.z / n)

    def is_close(self, other: "Vec3", tol: float = 1e-9) -> bool:
        return (self - other).norm() <= tol

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.x, self.y, self.z)


# Points are vector endpoints; they share the representation.
Point3 = Vec3
ZERO = Vec3(0.0, 0.0, 0.0)


class PathKind(enum.Enum):
    LINE = "line"
    ARC = "arc"


class Closure(enum.Enum):
    OPEN = "open"
    CLOSED = "closed"


class OrientingLevel(enum.Enum):
    UP = "UP"
    NEG_UP = "-UP"
    RT = "RT"
    NEG_RT = "-RT"
    FT = "FT"
    NEG_FT = "-FT"

    @property
    def unit(self) -> Vec3:
        return _LEVEL_UNITS[self]

    @property
    def inverse(self) -> "OrientingLevel":
        return _LEVEL_INVERSE[self]

    @classmethod
    def parse(cls, text: str) -> "OrientingLevel":
        t = text.strip().replace("−", "-")
        try:
            return cls(t)
        except ValueError:
            raise InvalidArgument(f"unknown orienting level {text!r}") from None

    @classmethod
    def from_vector(cls, v: Vec3, tol: float = 1e-9) -> "OrientingLevel | None":
        """The level whose unit vector equals *v*, if any."""
        for level, u in _LEVEL_UNITS.items():
            if v.is_close(u, tol):
                return level
        return None

    def __str__(self) -> str:
        return self.value


_LEVEL_UNITS = {
    OrientingLevel.RT: Vec3(1.0, 0.0, 0.0),
    OrientingLevel.NEG_RT: Vec3(-1.0, 0.0, 0.0),
    OrientingLevel.FT: Vec3(0.0, 1.0, 0.0),
    OrientingLevel.NEG_FT: Vec3(0.0, -1.0, 0.0),
    OrientingLevel.UP: Vec3(0.0, 0.0, 1.0),
    OrientingLevel.NEG_UP: Vec3(0.0, 0.0, -1.0),
}
_LEVEL_INVERSE = {
    OrientingLevel.RT: OrientingLevel.NEG_RT,
    OrientingLevel.NEG_RT: OrientingLevel.RT,
    OrientingLevel.FT: OrientingLevel.NEG_FT,
    OrientingLevel.NEG_FT: OrientingLevel.FT,
    OrientingLevel.UP: OrientingLevel.NEG_UP,
    OrientingLevel.NEG_UP: OrientingLevel.UP,
}


class RotationAxis(enum.Enum):
    X = "X"  # RT
    Y = "Y"  # FT
    Z = "Z"  # UP

    @property
    def unit(self) -> Vec3:
        return {RotationAxis.X: Vec3(1.0, 0.0, 0.0),
                RotationAxis.Y: Vec3(0.0, 1.0, 0.0),
                RotationAxis.Z: Vec3(0.0, 0.0, 1.0)}[self]

    @classmethod
    def parse(cls, text: str) -> "RotationAxis":
        try:
            return cls(text.strip().upper())
        except ValueError:
            raise InvalidArgument(f"unknown rotation axis {text!r}") from None


Matrix3 = tuple[tuple[float, float, float], tuple[float, float, float], tuple[float, float, float]]


def rotation_matrix(axis: RotationAxis, theta: float) -> Matrix3:
    if not math.isfinite(theta):
        raise InvalidArgument(f"rotation angle must be finite, got {theta!r}")
    c, s = math.cos(theta), math.sin(theta)
    if axis is RotationAxis.X:
        return ((1.0, 0.0, 0.0),
                (0.0, c, -s),
                (0.0, s, c))
    if axis is RotationAxis.Y:
        return ((c, 0.0, s),
                (0.0, 1.0, 0.0),
                (-s, 0.0, c))
    return ((c, -s, 0.0),
            (s, c, 0.0),
            (0.0, 0.0, 1.0))


def rotate(v: Vec3, axis: RotationAxis, theta: float) -> Vec3:
    """R_axis(theta) . v"""
    m = rotation_matrix(axis, theta)
    return Vec3(
        m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
        m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
        m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z,
    )


def scale(v: Vec3, k: float) -> Vec3:
    if not (math.isfinite(k) and k > 0):
        raise InvalidArgument(f"scale factor must be a positive real, got {k!r}")
    return Vec3(v.x * k, v.y * k, v.z * k)


def project(v: Vec3, level: OrientingLevel) -> Vec3:
    """Orthogonal component of *v* along the line of *level*.

    The result is the same for a level and its inverse; the sign of the
    component tells which half-axis the vector leans towards.
    """
    u = level.unit
    return u * v.dot(u)


def angle_between(a: Vec3, b: Vec3) -> float:
    na, nb = a.norm(), b.norm()
    if na == 0.0 or nb == 0.0:
        raise InvalidArgument("angle with a zero vector is undefined")
    c = a.dot(b) / (na * nb)
    return math.acos(max(-1.0, min(1.0, c)))


@dataclass(frozen=True, slots=True)
class Path3:
    """An n-tuple of points with a line/arc connector between consecutive segments."""

    points: tuple[Vec3, ...]
    connectors: tuple[PathKind, ...] = ()

    def __post_init__(self):
        if len(self.points) < 2:
            raise InvalidArgument("a path needs at least two points")
        nseg = len(self.points) - 1
        if not self.connectors and nseg > 1:
            object.__setattr__(self, "connectors", (PathKind.LINE,) * (nseg - 1))
        if len(self.connectors) != max(nseg - 1, 0):
            raise InvalidArgument(
                f"path with {nseg} segments needs {max(nseg - 1, 0)} connectors, "
                f"got {len(self.connectors)}")

    @classmethod
    def polyline(cls, points: Iterable[Sequence[float] | Vec3],
                 connector: PathKind = PathKind.LINE) -> "Path3":
        pts = tuple(p if isinstance(p, Vec3) else Vec3.of(p) for p in points)
        return cls(pts, (connector,) * max(len(pts) - 2, 0))

    @property
    def first(self) -> Vec3:
        return self.points[0]

    @property
    def last(self) -> Vec3:
        return self.points[-1]

    def segments(self) -> list[Vec3]:
        return [b - a for a, b in zip(self.points, self.points[1:])]

    def length(self) -> float:
        return sum(s.norm() for s in self.segments())

    def map_points(self, fn) -> "Path3":
        return Path3(tuple(fn(p) for p in self.points), self.connectors)

    def rotated(self, axis: RotationAxis, theta: float) -> "Path3":
        return self.map_points(lambda p: rotate(p, axis, theta))

    def scaled(self, k: float) -> "Path3":
        return self.map_points(lambda p: scale(p, k))

    def reversed(self) -> "Path3":
        return Path3(tuple(reversed(self.points)), tuple(reversed(self.connectors)))


def closure_of(p: Path3, eps: float = DEFAULT_CLOSURE_EPS) -> Closure:
    total = p.length()
    if total == 0.0:
        raise DegeneratePath("path has zero total length")
    gap = (p.first - p.last).norm()
    return Closure.CLOSED if gap <= eps * total else Closure.OPEN
