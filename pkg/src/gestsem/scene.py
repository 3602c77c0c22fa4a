"""Spatial models of evaluation.

A scene is a JSON document::

    {
      "speaker": "spk",
      "near_threshold": 2.0,
      "entities": [
        {"id": "house", "sort": "house", "position": [0, 5, 0],
         "frame": {"up": [0, 0, 1], "ft": [0, 1, 0], "rt": [1, 0, 0]},
         "axes": [{"label": "main", "points": [[...], ...], "connectors": ["line"]}]}
      ],
      "events": [
        {"id": "e1", "pred": "throw", "roles": {"agent": "he", "theme": "dagger"},
         "place_path": {"points": [[0, 0, 1], [0, 3, 1]]}, "manner_hs": "P", "cvm_tags": []}
      ]
    }

``axis_path`` (a bare point list) is accepted as shorthand for a single
``main`` axis. All coordinates are world coordinates.
"""

from __future__ import annotations

import enum
import json
import math
import re
from dataclasses import dataclass, field
from typing import Callable

from .errors import FrameError, NoSpatialExtension, ParseError, SceneReferenceError
from .geometry import Path3, PathKind, Vec3

__all__ = [
    "Frame",
    "Entity",
    "Event",
    "Scene",
    "VecSpace",
    "AboveReading",
    "load_scene",
    "parse_scene",
    "serialize_scene",
    "region_above",
    "near",
    "vecspace_of",
]

FRAME_TOL = 1e-9


@dataclass(frozen=True)
class Frame:
    """Orthonormal orienting frame (three unit vectors in world coordinates)."""

    up: Vec3
    ft: Vec3
    rt: Vec3

    def __post_init__(self):
        vs = {"up": self.up, "ft": self.ft, "rt": self.rt}
        for name, v in vs.items():
            if abs(v.norm() - 1.0) > FRAME_TOL:
                raise FrameError(f"frame vector {name} is not unit length")
        for a, b in (("up", "ft"), ("up", "rt"), ("ft", "rt")):
            if abs(vs[a].dot(vs[b])) > FRAME_TOL:
                raise FrameError(f"frame vectors {a} and {b} are not orthogonal")

    def components(self, v: Vec3) -> Vec3:
        """World vector -> (RT, FT, UP) components in this frame."""
        return Vec3(v.dot(self.rt), v.dot(self.ft), v.dot(self.up))

    def localize(self, p: Path3) -> Path3:
        origin = p.first
        return p.map_points(lambda q: self.components(q - origin))


IDENTITY_FRAME = Frame(Vec3(0.0, 0.0, 1.0), Vec3(0.0, 1.0, 0.0), Vec3(1.0, 0.0, 0.0))


@dataclass(frozen=True)
class Entity:
    id: str
    sort: str
    position: Vec3
    frame: Frame = IDENTITY_FRAME
    axes: tuple[tuple[str, Path3], ...] = ()

    @property
    def main_axis(self) -> Path3 | None:
        return self.axes[0][1] if self.axes else None


@dataclass(frozen=True)
class Event:
    id: str
    pred: str
    roles: tuple[tuple[str, str], ...] = ()
    place_path: Path3 | None = None
    manner_handshape: str | None = None
    cvm_tags: frozenset[str] = frozenset()

    def role(self, name: str) -> str | None:
        return dict(self.roles).get(name)


@dataclass(frozen=True)
class VecSpace:
    """A located, oriented vector space with the paths living in it."""

    ref: str
    origin: Vec3
    frame: Frame
    paths: tuple[tuple[str, Path3], ...]

    @property
    def path(self) -> Path3:
        if not self.paths:
            raise NoSpatialExtension(f"{self.ref!r} has no axis or place path")
        return self.paths[0][1]


@dataclass(frozen=True)
class Scene:
    entities: tuple[Entity, ...]
    events: tuple[Event, ...]
    speaker: str
    near_threshold: float = 1.0
    _index: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        idx = {}
        for item in self.entities + self.events:
            if item.id in idx:
                raise SceneReferenceError(f"duplicate id {item.id!r}")
            idx[item.id] = item
        if self.speaker not in idx or not isinstance(idx[self.speaker], Entity):
            raise SceneReferenceError(f"speaker {self.speaker!r} is not a declared entity")
        for ev in self.events:
            for role, ref in ev.roles:
                if not isinstance(idx.get(ref), Entity):
                    raise SceneReferenceError(
                        f"event {ev.id!r} role {role!r} references unknown entity {ref!r}")
        object.__setattr__(self, "_index", idx)

    def get(self, ref: str):
        try:
            return self._index[ref]
        except KeyError:
            raise SceneReferenceError(f"unknown id {ref!r}") from None

    def entity(self, ref: str) -> Entity:
        item = self.get(ref)
        if not isinstance(item, Entity):
            raise SceneReferenceError(f"{ref!r} is an event, not an entity")
        return item

    @property
    def speaker_frame(self) -> Frame:
        return self.entity(self.speaker).frame

    def to_speaker(self, p: Path3) -> Path3:
        """Express a world path in the speaker's gesture-space coordinates."""
        return self.speaker_frame.localize(p)


class AboveReading(enum.Enum):
    VERTICAL_ONLY = "vertical-only"
    DOMINANT = "dominant"
    ANY_POSITIVE = "any-positive"


def region_above(s: Scene, x: str | Entity, reading=AboveReading.DOMINANT) -> Callable[[Vec3], bool]:
    ent = x if isinstance(x, Entity) else s.entity(x)
    reading = AboveReading(reading)
    fr = ent.frame

    def pred(v: Vec3) -> bool:
        up = max(v.dot(fr.up), 0.0)
        if up <= 0.0:
            return False
        if reading is AboveReading.ANY_POSITIVE:
            return True
        if reading is AboveReading.DOMINANT:
            return up > abs(v.dot(fr.rt))
        return math.isclose(up, v.norm(), rel_tol=1e-9)

    return pred


def near(s: Scene, a: str, b: str, tau: float | None = None) -> bool:
    tau = s.near_threshold if tau is None else tau
    pa, pb = s.entity(a).position, s.entity(b).position
    return (pa - pb).norm() <= tau


def vecspace_of(s: Scene, ref: str) -> VecSpace:
    item = s.get(ref)
    if isinstance(item, Entity):
        return VecSpace(ref, item.position, item.frame, item.axes)
    if item.place_path is None:
        raise NoSpatialExtension(f"event {ref!r} has no place path")
    speaker = s.entity(s.speaker)
    return VecSpace(ref, speaker.position, speaker.frame, (("place", item.place_path),))


# -- file format ---------------------------------------------------------------

def _vec(value, what: str) -> Vec3:
    if not (isinstance(value, list) and len(value) == 3
            and all(isinstance(c, (int, float)) and not isinstance(c, bool) for c in value)):
        raise ParseError(f"{what}: expected [x, y, z], got {value!r}")
    return Vec3.of(value)


def _path(obj, what: str) -> Path3:
    if isinstance(obj, list):
        obj = {"points": obj}
    if not isinstance(obj, dict) or "points" not in obj:
        raise ParseError(f"{what}: expected a path with 'points'")
    pts = tuple(_vec(p, what) for p in obj["points"])
    try:
        conns = tuple(PathKind(c) for c in obj.get("connectors", []))
    except ValueError as exc:
        raise ParseError(f"{what}: {exc}") from None
    try:
        return Path3(pts, conns)
    except ValueError as exc:
        raise ParseError(f"{what}: {exc}") from None


def _require(obj: dict, key: str, what: str):
    if key not in obj:
        raise ParseError(f"{what}: missing {key!r}")
    return obj[key]


def _entity(obj) -> Entity:
    eid = _require(obj, "id", "entity")
    what = f"entity {eid!r}"
    fr = obj.get("frame")
    frame = IDENTITY_FRAME
    if fr is not None:
        frame = Frame(_vec(fr["up"], what), _vec(fr["ft"], what), _vec(fr["rt"], what))
    axes = []
    if "axis_path" in obj:
        axes.append(("main", _path(obj["axis_path"], what)))
    for ax in obj.get("axes", []):
        axes.append((_require(ax, "label", what), _path(ax, what)))
    return Entity(eid, _require(obj, "sort", what), _vec(_require(obj, "position", what), what),
                  frame, tuple(axes))


def _event(obj) -> Event:
    eid = _require(obj, "id", "event")
    what = f"event {eid!r}"
    roles = obj.get("roles", {})
    pp = obj.get("place_path")
    return Event(
        id=eid,
        pred=_require(obj, "pred", what),
        roles=tuple(sorted(roles.items())),
        place_path=_path(pp, what) if pp is not None else None,
        manner_handshape=obj.get("manner_hs"),
        cvm_tags=frozenset(obj.get("cvm_tags", [])),
    )


def parse_scene(text: str, source: str | None = None) -> Scene:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno, source) from None
    if not isinstance(doc, dict):
        raise ParseError("scene document must be a JSON object", source=source)
    return Scene(
        entities=tuple(_entity(e) for e in doc.get("entities", [])),
        events=tuple(_event(e) for e in doc.get("events", [])),
        speaker=_require(doc, "speaker", "scene"),
        near_threshold=float(doc.get("near_threshold", 1.0)),
    )


def load_scene(path) -> Scene:
    with open(path, encoding="utf-8") as fh:
        return parse_scene(fh.read(), source=str(path))


_NUM_ARRAY = re.compile(r"\[\s*(-?[\d.eE+-]+(?:,\s*-?[\d.eE+-]+)*)\s*\]")


def _num(x: float):
    return int(x) if float(x).is_integer() else x


def _dump_path(p: Path3) -> dict:
    out = {"points": [[_num(c) for c in q] for q in p.points]}
    if p.connectors:
        out["connectors"] = [c.value for c in p.connectors]
    return out


def serialize_scene(s: Scene) -> str:
    def frame(f: Frame):
        return {k: [_num(c) for c in getattr(f, k)] for k in ("up", "ft", "rt")}

    doc = {
        "speaker": s.speaker,
        "near_threshold": _num(s.near_threshold),
        "entities": [
            {"id": e.id, "sort": e.sort, "position": [_num(c) for c in e.position],
             "frame": frame(e.frame),
             "axes": [dict(label=label, **_dump_path(p)) for label, p in e.axes]}
            for e in s.entities
        ],
        "events": [],
    }
    for ev in s.events:
        d = {"id": ev.id, "pred": ev.pred, "roles": dict(ev.roles),
             "cvm_tags": sorted(ev.cvm_tags)}
        if ev.place_path is not None:
            d["place_path"] = _dump_path(ev.place_path)
        if ev.manner_handshape is not None:
            d["manner_hs"] = ev.manner_handshape
        doc["events"].append(d)
    text = json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False)
    return _NUM_ARRAY.sub(lambda m: "[" + ", ".join(m.group(1).split()).replace(",,", ",") + "]",
                          text) + "\n"
