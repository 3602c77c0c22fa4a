"""Kinematic gesture annotations: one record per hand.

The on-disk format is line oriented::

    # roof gesture
    hand: right
    id: roof
    handshape: D
    palm.orient: PDN
    boh.orient: BUP
    wrist.path: line
    wrist.dir: MR
    wrist.extent: small
    sync.config: RHA
    sync.rel-mov: none
    sync.s-loc: CC-M
    sync.e-loc: CR-M

Every ``hand:`` line opens a new record. Concatenated movements are joined
with ``>`` (``line>line>line`` / ``MR>MB>ML``).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .errors import ArityError, ParseError
from .geometry import OrientingLevel, PathKind

__all__ = [
    "DEFAULT_HANDSHAPES",
    "Hand",
    "DirectionCode",
    "Extent",
    "SyncConfig",
    "GridLocation",
    "KinematicAnnotation",
    "parse_annotation",
    "serialize_annotation",
    "load_annotation",
]

# M3D subset used by the bundled fixtures; callers may pass their own set.
DEFAULT_HANDSHAPES = frozenset({"B", "C", "D", "F", "G", "K", "L", "O", "P", "V", "Y", "5"})

SECTORS = ("CC", "CL", "CR", "CU", "CB", "CUL", "CUR", "CBL", "CBR")
DEPTHS = ("N", "M", "F")


class Hand(enum.Enum):
    RIGHT = "right"
    LEFT = "left"


class DirectionCode(enum.Enum):
    ML = "ML"
    MR = "MR"
    MU = "MU"
    MD = "MD"
    MF = "MF"
    MB = "MB"

    @property
    def level(self) -> OrientingLevel:
        return _DIR_TO_LEVEL[self]

    @classmethod
    def from_level(cls, level: OrientingLevel) -> "DirectionCode":
        return _LEVEL_TO_DIR[level]


_DIR_TO_LEVEL = {
    DirectionCode.ML: OrientingLevel.NEG_RT,
    DirectionCode.MR: OrientingLevel.RT,
    DirectionCode.MU: OrientingLevel.UP,
    DirectionCode.MD: OrientingLevel.NEG_UP,
    DirectionCode.MF: OrientingLevel.FT,
    DirectionCode.MB: OrientingLevel.NEG_FT,
}
_LEVEL_TO_DIR = {v: k for k, v in _DIR_TO_LEVEL.items()}


class Extent(enum.Enum):
    SMALL = "small"
    MEDIUM = "medium"
    LARGE = "large"

    @property
    def unit(self) -> float:
        # diagnostic realization length only; embedding scales freely
        return {"small": 0.5, "medium": 1.0, "large": 2.0}[self.value]


class SyncConfig(enum.Enum):
    RHA = "RHA"
    LHA = "LHA"
    BHA = "BHA"


@dataclass(frozen=True)
class GridLocation:
    sector: str
    depth: str

    def __post_init__(self):
        if self.sector not in SECTORS:
            raise ValueError(f"unknown gesture-space sector {self.sector!r}")
        if self.depth not in DEPTHS:
            raise ValueError(f"unknown gesture-space depth {self.depth!r}")

    @classmethod
    def parse(cls, text: str) -> "GridLocation":
        sector, sep, depth = text.partition("-")
        if not sep:
            raise ValueError(f"grid location {text!r} is not SECTOR-DEPTH")
        return cls(sector, depth)

    def __str__(self) -> str:
        return f"{self.sector}-{self.depth}"


@dataclass(frozen=True)
class KinematicAnnotation:
    hand: Hand
    handshape: str
    s_loc: GridLocation
    e_loc: GridLocation
    wrist_paths: tuple[PathKind, ...] = ()
    wrist_dirs: tuple[DirectionCode, ...] = ()
    extent: Extent = Extent.MEDIUM
    sync_config: SyncConfig = SyncConfig.RHA
    rel_mov: str | None = None
    palm_orient: str | None = None
    boh_orient: str | None = None
    id: str | None = None

    def __post_init__(self):
        if len(self.wrist_paths) != len(self.wrist_dirs):
            raise ArityError(
                f"{len(self.wrist_paths)} wrist paths but {len(self.wrist_dirs)} directions")
        if not self.wrist_paths and self.s_loc != self.e_loc:
            raise ParseError("static gesture must start and end at the same location")

    @property
    def is_static(self) -> bool:
        return not self.wrist_dirs


_FIELDS = (
    "hand", "id", "handshape", "palm.orient", "boh.orient", "wrist.path", "wrist.dir",
    "wrist.extent", "sync.config", "sync.rel-mov", "sync.s-loc", "sync.e-loc",
)
_REQUIRED = ("handshape", "sync.s-loc", "sync.e-loc")


@dataclass
class _Block:
    line: int
    values: dict[str, tuple[str, int, int]] = field(default_factory=dict)  # key -> (value, line, col)


def _split_blocks(text: str, source: str | None) -> list[_Block]:
    blocks: list[_Block] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        key, sep, value = line.partition(":")
        if not sep:
            raise ParseError(f"expected 'key: value', got {line.strip()!r}", lineno,
                             len(raw) - len(raw.lstrip()) + 1, source)
        key = key.strip()
        if key not in _FIELDS:
            raise ParseError(f"unknown field {key!r}", lineno, raw.index(key) + 1, source)
        col = len(key) + 1 + raw.index(key)
        stripped = value.lstrip()
        col += len(value) - len(stripped) + 1
        value = stripped.strip()
        if key == "hand":
            blocks.append(_Block(lineno))
        elif not blocks:
            raise ParseError(f"field {key!r} before any 'hand:' line", lineno, 1, source)
        block = blocks[-1]
        if key in block.values:
            raise ParseError(f"duplicate field {key!r}", lineno, 1, source)
        block.values[key] = (value, lineno, col)
    return blocks


def _enum_value(enum_cls, key: str, entry, source):
    value, line, col = entry
    try:
        return enum_cls(value)
    except ValueError:
        allowed = ", ".join(m.value for m in enum_cls)
        raise ParseError(f"invalid {key} {value!r} (expected one of {allowed})",
                         line, col, source) from None


def _joined(entry) -> list[tuple[str, int]]:
    value, _line, col = entry
    if value in ("", "0", "none"):
        return []
    out = []
    offset = 0
    for tok in value.split(">"):
        lead = len(tok) - len(tok.lstrip())
        out.append((tok.strip(), col + offset + lead))
        offset += len(tok) + 1
    return out


def _build(block: _Block, handshapes, source) -> KinematicAnnotation:
    v = block.values
    for key in _REQUIRED:
        if key not in v:
            raise ParseError(f"missing field {key!r}", block.line, 1, source)
    hand = _enum_value(Hand, "hand", v["hand"], source)

    hs, line, col = v["handshape"]
    if hs not in handshapes:
        raise ParseError(f"unknown handshape {hs!r}", line, col, source)

    paths: list[PathKind] = []
    if "wrist.path" in v:
        line = v["wrist.path"][1]
        for tok, col in _joined(v["wrist.path"]):
            try:
                paths.append(PathKind(tok))
            except ValueError:
                raise ParseError(f"unknown wrist path {tok!r}", line, col, source) from None
    dirs: list[DirectionCode] = []
    if "wrist.dir" in v:
        line = v["wrist.dir"][1]
        for tok, col in _joined(v["wrist.dir"]):
            try:
                dirs.append(DirectionCode(tok))
            except ValueError:
                raise ParseError(f"unknown direction {tok!r}", line, col, source) from None
    if len(paths) != len(dirs):
        where = v.get("wrist.dir", v.get("wrist.path"))
        raise ArityError(f"{len(paths)} wrist paths but {len(dirs)} directions",
                         where[1], where[2], source)

    locs = {}
    for key in ("sync.s-loc", "sync.e-loc"):
        text, line, col = v[key]
        try:
            locs[key] = GridLocation.parse(text)
        except ValueError as exc:
            raise ParseError(str(exc), line, col, source) from None
    if not dirs and locs["sync.s-loc"] != locs["sync.e-loc"]:
        line = v["sync.e-loc"][1]
        raise ParseError("static gesture must start and end at the same location",
                         line, v["sync.e-loc"][2], source)

    def opt(key):
        if key not in v:
            return None
        value = v[key][0]
        return None if value in ("", "none") else value

    return KinematicAnnotation(
        hand=hand,
        handshape=hs,
        s_loc=locs["sync.s-loc"],
        e_loc=locs["sync.e-loc"],
        wrist_paths=tuple(paths),
        wrist_dirs=tuple(dirs),
        extent=_enum_value(Extent, "wrist.extent", v["wrist.extent"], source)
        if "wrist.extent" in v else Extent.MEDIUM,
        sync_config=_enum_value(SyncConfig, "sync.config", v["sync.config"], source)
        if "sync.config" in v else SyncConfig.RHA,
        rel_mov=opt("sync.rel-mov"),
        palm_orient=opt("palm.orient"),
        boh_orient=opt("boh.orient"),
        id=opt("id"),
    )


def parse_annotation(text: str, handshapes=DEFAULT_HANDSHAPES,
                     source: str | None = None) -> list[KinematicAnnotation]:
    """Parse an annotation document into one record per ``hand:`` block."""
    return [_build(b, handshapes, source) for b in _split_blocks(text, source)]


def load_annotation(path, handshapes=DEFAULT_HANDSHAPES) -> list[KinematicAnnotation]:
    with open(path, encoding="utf-8") as fh:
        return parse_annotation(fh.read(), handshapes, source=str(path))


def serialize_annotation(records) -> str:
    chunks = []
    for r in records:
        lines = [f"hand: {r.hand.value}"]
        if r.id is not None:
            lines.append(f"id: {r.id}")
        lines.append(f"handshape: {r.handshape}")
        if r.palm_orient is not None:
            lines.append(f"palm.orient: {r.palm_orient}")
        if r.boh_orient is not None:
            lines.append(f"boh.orient: {r.boh_orient}")
        lines.append("wrist.path: " + (">".join(p.value for p in r.wrist_paths) or "none"))
        lines.append("wrist.dir: " + (">".join(d.value for d in r.wrist_dirs) or "none"))
        lines.append(f"wrist.extent: {r.extent.value}")
        lines.append(f"sync.config: {r.sync_config.value}")
        lines.append(f"sync.rel-mov: {r.rel_mov or 'none'}")
        lines.append(f"sync.s-loc: {r.s_loc}")
        lines.append(f"sync.e-loc: {r.e_loc}")
        chunks.append("\n".join(lines) + "\n")
    return "\n".join(chunks)
