"""Iconic models: vectorized gesture trajectories and their transformations."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from typing import Callable, Union

from .annotation import KinematicAnnotation, SyncConfig
from .errors import (AnisotropyViolation, EmptyTrajectory, InvalidArgument, ModeError,
                     ParseError)
from .geometry import (ARC_SAMPLES_PER_QUARTER, ZERO, Closure, OrientingLevel, Path3,
                       PathKind, RotationAxis, Vec3, angle_between, rotate, scale)

__all__ = [
    "Atom",
    "Connector",
    "Mode",
    "IconicModel",
    "Transform",
    "vectorize",
    "posture_model",
    "allowed_rotation_axes",
    "transform",
    "realize",
    "hsq_constraint",
    "atom_vector",
    "format_traj",
    "parse_traj",
    "serialize_models",
    "parse_models",
    "svg_planes",
]

Atom = Union[OrientingLevel, Vec3]


class Connector(enum.Enum):
    PERP = "⊥"   # from a `line` join
    ROUND = "∘"  # from an `arc` join


class Mode(enum.Enum):
    ACTING = "acting"
    DRAWING = "drawing"
    MOLDING = "molding"


_JOIN = {PathKind.LINE: Connector.PERP, PathKind.ARC: Connector.ROUND}


@dataclass(frozen=True)
class IconicModel:
    hs: str
    traj: tuple[Atom, ...]
    connectors: tuple[Connector, ...]
    closure: Closure
    perspectival: bool = False
    quoted_handshape: bool = False
    between_hands: bool = False

    def __post_init__(self):
        if len(self.connectors) != max(len(self.traj) - 1, 0):
            raise InvalidArgument(
                f"{len(self.traj)} trajectory atoms need {max(len(self.traj) - 1, 0)} "
                f"connectors, got {len(self.connectors)}")

    def vectors(self) -> list[Vec3]:
        return [atom_vector(a) for a in self.traj]

    def __str__(self) -> str:
        flags = []
        if self.perspectival:
            flags.append("perspectival")
        if self.quoted_handshape:
            flags.append("HSQ")
        extra = f" ({', '.join(flags)})" if flags else ""
        return f"[hs: {self.hs}, traj: {format_traj(self)}, {self.closure.value}]{extra}"


@dataclass(frozen=True)
class Transform:
    scale_k: float = 1.0
    axis: RotationAxis = RotationAxis.Z
    theta: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.scale_k) and self.scale_k > 0):
            raise InvalidArgument(f"scale factor must be positive, got {self.scale_k!r}")
        if not math.isfinite(self.theta):
            raise InvalidArgument(f"rotation angle must be finite, got {self.theta!r}")


def atom_vector(a: Atom) -> Vec3:
    return a.unit if isinstance(a, OrientingLevel) else a


def vectorize(ann: KinematicAnnotation, mode: Mode | None = None,
              perspectival: bool = False) -> IconicModel:
    """Map a kinematic annotation to its iconic model.

    The handshape is copied, every wrist direction becomes one orienting-level
    atom, a ``line`` join yields ⊥ and an ``arc`` join yields ∘, and the path is
    closed iff the start and end locations coincide. Acting gestures quote
    their handshape and are perspectival.
    """
    if not ann.wrist_dirs:
        raise EmptyTrajectory("annotation has no wrist movement; static gestures "
                              "have no trajectory to vectorize")
    traj = tuple(d.level for d in ann.wrist_dirs)
    # the path label of a segment decides how it joins the next one
    connectors = tuple(_JOIN[p] for p in ann.wrist_paths[:-1])
    acting = mode is Mode.ACTING
    return IconicModel(
        hs=ann.handshape,
        traj=traj,
        connectors=connectors,
        closure=Closure.CLOSED if ann.s_loc == ann.e_loc else Closure.OPEN,
        perspectival=perspectival or acting,
        quoted_handshape=acting,
        between_hands=ann.sync_config is SyncConfig.BHA,
    )


def posture_model(ann: KinematicAnnotation) -> IconicModel:
    """Trajectory-free model of a static acting posture (e.g. holding something).

    Only handshape quotation and the hand configuration carry information.
    """
    if not ann.is_static:
        raise ModeError("posture models are for static gestures; use vectorize()")
    return IconicModel(hs=ann.handshape, traj=(), connectors=(), closure=Closure.CLOSED,
                       perspectival=True, quoted_handshape=True,
                       between_hands=ann.sync_config is SyncConfig.BHA)


def _used_dims(vectors, tol=1e-9) -> set[int]:
    dims = set()
    for v in vectors:
        n = v.norm()
        for i, c in enumerate(v):
            if abs(c) > tol * n:
                dims.add(i)
    return dims


def allowed_rotation_axes(m: IconicModel) -> frozenset[RotationAxis]:
    if m.perspectival:
        return frozenset()
    dims = _used_dims(m.vectors())
    if len(dims) == 2:
        unused = ({0, 1, 2} - dims).pop()
        return frozenset({(RotationAxis.X, RotationAxis.Y, RotationAxis.Z)[unused]})
    return frozenset({RotationAxis.Z})


def _snap(v: Vec3) -> Atom:
    level = OrientingLevel.from_vector(v, 1e-12)
    return level if level is not None else v


def transform(m: IconicModel, t: Transform) -> IconicModel:
    if t.theta != 0.0 and t.axis not in allowed_rotation_axes(m):
        if m.perspectival:
            raise AnisotropyViolation("perspectival models admit zero rotation only")
        allowed = ", ".join(a.value for a in sorted(allowed_rotation_axes(m), key=lambda a: a.value))
        raise AnisotropyViolation(f"rotation about {t.axis.value} not allowed (allowed: {allowed})")
    traj = tuple(_snap(rotate(scale(atom_vector(a), t.scale_k), t.axis, t.theta)) for a in m.traj)
    return replace(m, traj=traj)


def _fillet(corner: Vec3, d_in: Vec3, d_out: Vec3, phi: float, radius: float) -> list[Vec3]:
    """Sample a circular blend from direction d_in to d_out around *corner*."""
    trim = radius * math.tan(phi / 2)
    start = corner - d_in * trim
    # center lies on the inward normal of d_in inside the turn
    normal = (d_out - d_in * d_in.dot(d_out)).unit()
    center = start + normal * radius
    steps = max(1, math.ceil(ARC_SAMPLES_PER_QUARTER * phi / (math.pi / 2)))
    out = []
    for i in range(steps + 1):
        a = phi * i / steps
        out.append(center - normal * (radius * math.cos(a)) + d_in * (radius * math.sin(a)))
    return out


def realize(m: IconicModel, origin: Vec3 = ZERO, unit: float = 1.0) -> Path3:
    """Concrete path for a model: atoms head to tail, ⊥ joints sharp, ∘ joints blended.

    Each ∘ joint is replaced by a circular arc tangent to both neighbouring
    segments, sampled at 16 points per quarter turn.
    """
    if not m.traj:
        raise EmptyTrajectory("cannot realize an empty trajectory")
    if not (math.isfinite(unit) and unit > 0):
        raise InvalidArgument("realization unit must be positive")
    vecs = [atom_vector(a) * unit for a in m.traj]
    corners = [origin]
    for v in vecs:
        corners.append(corners[-1] + v)

    trims = [[0.0, 0.0] for _ in vecs]  # length cut at the start/end of each segment
    blends: dict[int, tuple[float, float]] = {}
    for j, conn in enumerate(m.connectors):
        if conn is not Connector.ROUND:
            continue
        a, b = vecs[j], vecs[j + 1]
        phi = angle_between(a, b)
        if phi < 1e-9 or phi > math.pi - 1e-6:
            continue  # collinear or reversal: nothing to blend
        radius = min(a.norm(), b.norm()) * 0.5 / math.tan(phi / 2)
        trim = radius * math.tan(phi / 2)
        trims[j][1] = trim
        trims[j + 1][0] = trim
        blends[j] = (phi, radius)

    points: list[Vec3] = [corners[0]]
    kinds: list[PathKind] = []

    def add(p: Vec3, kind: PathKind):
        if (p - points[-1]).norm() <= 1e-12:
            return
        if len(points) >= 2:
            kinds.append(kind)
        points.append(p)

    pending = PathKind.LINE
    for j, v in enumerate(vecs):
        d = v.unit()
        end = corners[j + 1] - d * trims[j][1]
        add(end, pending)
        pending = PathKind.LINE
        if j in blends:
            phi, radius = blends[j]
            arc = _fillet(corners[j + 1], d, vecs[j + 1].unit(), phi, radius)
            for p in arc[1:]:
                add(p, PathKind.ARC)
            pending = PathKind.ARC
    if len(points) < 2:
        raise EmptyTrajectory("trajectory realizes to a single point")
    return Path3(tuple(points), tuple(kinds))


def hsq_constraint(m: IconicModel) -> Callable[[object], bool]:
    """Handshape quotation: λe.demonstration(hs, e).

    The returned predicate holds of an event whose recorded manner handshape
    is the quoted one.
    """
    if not m.quoted_handshape:
        raise ModeError("handshape quotation applies to acting gestures only")
    hs = m.hs

    def demonstration(event) -> bool:
        return getattr(event, "manner_handshape", None) == hs

    demonstration.handshape = hs  # type: ignore[attr-defined]
    return demonstration


# -- text form ---------------------------------------------------------------

def _fmt_num(x: float) -> str:
    r = round(x, 12)
    if r == 0:
        r = 0.0
    return repr(r)


def _fmt_atom(a: Atom) -> str:
    if isinstance(a, OrientingLevel):
        return a.value
    return "(" + ",".join(_fmt_num(c) for c in a) + ")"


def format_traj(m: IconicModel) -> str:
    if not m.traj:
        return "none"
    out = _fmt_atom(m.traj[0])
    for c, a in zip(m.connectors, m.traj[1:]):
        out += c.value + _fmt_atom(a)
    return out


def parse_traj(text: str) -> tuple[tuple[Atom, ...], tuple[Connector, ...]]:
    text = text.strip()
    if text in ("", "none"):
        return (), ()
    atoms: list[Atom] = []
    conns: list[Connector] = []
    i = 0
    while True:
        if text.startswith("(", i):
            j = text.index(")", i)
            parts = text[i + 1:j].split(",")
            try:
                atoms.append(_snap(Vec3.of([float(p) for p in parts])))
            except ValueError as exc:
                raise ParseError(f"bad vector atom {text[i:j + 1]!r}: {exc}") from None
            i = j + 1
        else:
            j = i
            while j < len(text) and text[j] not in "⊥∘":
                j += 1
            try:
                atoms.append(OrientingLevel.parse(text[i:j]))
            except InvalidArgument:
                raise ParseError(f"unknown trajectory atom {text[i:j]!r}") from None
            i = j
        if i >= len(text):
            break
        try:
            conns.append(Connector(text[i]))
        except ValueError:
            raise ParseError(f"expected ⊥ or ∘ at {text[i:]!r}") from None
        i += 1
    return tuple(atoms), tuple(conns)


def serialize_models(models) -> str:
    chunks = []
    for m in models:
        chunks.append("\n".join([
            "model:",
            f"hs: {m.hs}",
            f"traj: {format_traj(m)}",
            f"closure: {m.closure.value}",
            f"perspectival: {str(m.perspectival).lower()}",
            f"quoted-handshape: {str(m.quoted_handshape).lower()}",
            f"between-hands: {str(m.between_hands).lower()}",
        ]) + "\n")
    return "\n".join(chunks)


def _bool(text: str) -> bool:
    if text not in ("true", "false"):
        raise ParseError(f"expected true/false, got {text!r}")
    return text == "true"


def parse_models(text: str) -> list[IconicModel]:
    models = []
    cur: dict[str, str] | None = None

    def flush():
        if cur is None:
            return
        traj, conns = parse_traj(cur.get("traj", "none"))
        models.append(IconicModel(
            hs=cur["hs"], traj=traj, connectors=conns,
            closure=Closure(cur.get("closure", "open")),
            perspectival=_bool(cur.get("perspectival", "false")),
            quoted_handshape=_bool(cur.get("quoted-handshape", "false")),
            between_hands=_bool(cur.get("between-hands", "false")),
        ))

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, value = line.partition(":")
        key, value = key.strip(), value.strip()
        if key == "model":
            flush()
            cur = {}
        elif cur is None:
            raise ParseError(f"field {key!r} outside a model block", lineno, 1)
        else:
            cur[key] = value
    flush()
    return models


# -- diagnostics ---------------------------------------------------------------

_PLANES = (
    ("sagittal", 1, 2, "FT", "UP"),
    ("transverse", 0, 1, "RT", "FT"),
    ("coronal", 0, 2, "RT", "UP"),
)


def svg_planes(path: Path3, size: int = 200) -> str:
    """Orthographic projections of *path* onto the three anatomical planes."""
    pts = [p.as_tuple() for p in path.points]
    span = max(max(abs(c) for p in pts for c in p), 1e-9)
    half = size / 2
    k = (half - 12) / span
    panels = []
    for n, (name, i, j, hx, hy) in enumerate(_PLANES):
        ox = n * (size + 10) + half
        coords = " ".join(f"{ox + p[i] * k:.2f},{half - p[j] * k:.2f}" for p in pts)
        panels.append(
            f'<g><rect x="{ox - half:.0f}" y="0" width="{size}" height="{size}" '
            f'fill="none" stroke="#999"/>'
            f'<text x="{ox - half + 4:.0f}" y="14" font-size="11">{name} ({hx}/{hy})</text>'
            f'<polyline points="{coords}" fill="none" stroke="black" stroke-width="2"/>'
            f'<circle cx="{ox + pts[0][i] * k:.2f}" cy="{half - pts[0][j] * k:.2f}" r="3"/></g>'
        )
    width = 3 * size + 20
    return (f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{size}">'
            + "".join(panels) + "</svg>\n")
